#include "bpinterp/datagen.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bpinterp {

namespace {

// Exact standardization constants for exp(Z), Z ~ N(0,1):
// E[exp(Z)] = e^{1/2}, Var[exp(Z)] = (e-1) e.
const double kLogNormalMean = std::exp(0.5);
const double kLogNormalStd = std::sqrt((std::exp(1.0) - 1.0) * std::exp(1.0));

static_assert(std::endian::native == std::endian::little,
              "instance dump format is little-endian");

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_u64(std::ofstream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

std::string to_string(FeatureDistribution dist) {
    switch (dist) {
        case FeatureDistribution::Normal: return "normal";
        case FeatureDistribution::LogNormal: return "lognormal";
        case FeatureDistribution::Rademacher: return "rademacher";
    }
    return "unknown";
}

std::optional<FeatureDistribution> parse_distribution(const std::string& name) {
    if (name == "normal" || name == "gaussian") return FeatureDistribution::Normal;
    if (name == "lognormal") return FeatureDistribution::LogNormal;
    if (name == "rademacher") return FeatureDistribution::Rademacher;
    return std::nullopt;
}

Matrix gen_features(std::size_t n, std::size_t d, FeatureDistribution dist, CounterRng& stream) {
    Matrix x(n, d);
    double* out = x.data();
    const std::size_t count = n * d;
    switch (dist) {
        case FeatureDistribution::Normal:
            for (std::size_t i = 0; i < count; ++i) out[i] = stream.next_normal();
            break;
        case FeatureDistribution::LogNormal:
            for (std::size_t i = 0; i < count; ++i)
                out[i] = (std::exp(stream.next_normal()) - kLogNormalMean) / kLogNormalStd;
            break;
        case FeatureDistribution::Rademacher:
            for (std::size_t i = 0; i < count; ++i) out[i] = stream.next_sign();
            break;
    }
    return x;
}

RegressionInstance gen_instance(const InstanceConfig& cfg) {
    if (cfg.n == 0 || cfg.d == 0) throw std::invalid_argument("gen_instance: n and d must be positive");
    if (cfg.sigma2 < 0.0) throw std::invalid_argument("gen_instance: sigma2 must be nonnegative");
    if (cfg.w_star && cfg.w_star->size() != cfg.d)
        throw std::invalid_argument("gen_instance: explicit w_star length does not match d");

    RegressionInstance inst;
    inst.config = cfg;

    CounterRng feature_stream(derive_stream_key(cfg.seed, cfg.run_index, StreamPurpose::Features));
    inst.x = gen_features(cfg.n, cfg.d, cfg.dist, feature_stream);

    if (cfg.w_star) {
        inst.w_star = *cfg.w_star;
    } else {
        inst.w_star.assign(cfg.d, 0.0);
        inst.w_star[0] = 1.0;
    }

    CounterRng noise_stream(derive_stream_key(cfg.seed, cfg.run_index, StreamPurpose::Noise));
    inst.xi.resize(cfg.n);
    const double sigma = std::sqrt(cfg.sigma2);
    for (std::size_t i = 0; i < cfg.n; ++i) inst.xi[i] = sigma * noise_stream.next_normal();

    inst.y = matvec(inst.x, inst.w_star);
    for (std::size_t i = 0; i < cfg.n; ++i) inst.y[i] += inst.xi[i];
    return inst;
}

void dump_instance(const RegressionInstance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_instance: cannot open " + path);
    out.write("BPI1", 4);
    write_u32(out, static_cast<std::uint32_t>(inst.config.n));
    write_u32(out, static_cast<std::uint32_t>(inst.config.d));
    write_u32(out, static_cast<std::uint32_t>(inst.config.dist));
    write_u64(out, inst.config.seed);
    write_u64(out, inst.config.run_index);
    auto write_doubles = [&out](const double* p, std::size_t count) {
        out.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(count * sizeof(double)));
    };
    write_doubles(inst.x.data(), inst.config.n * inst.config.d);
    write_doubles(inst.w_star.data(), inst.w_star.size());
    write_doubles(inst.xi.data(), inst.xi.size());
    write_doubles(inst.y.data(), inst.y.size());
    if (!out) throw std::runtime_error("dump_instance: write failed for " + path);
}

RegressionInstance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_instance: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "BPI1", 4) != 0)
        throw std::runtime_error("load_instance: bad magic in " + path);

    RegressionInstance inst;
    inst.config.n = read_u32(in);
    inst.config.d = read_u32(in);
    inst.config.dist = static_cast<FeatureDistribution>(read_u32(in));
    inst.config.seed = read_u64(in);
    inst.config.run_index = read_u64(in);

    auto read_doubles = [&in](double* p, std::size_t count) {
        in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(count * sizeof(double)));
    };
    inst.x = Matrix(inst.config.n, inst.config.d);
    read_doubles(inst.x.data(), inst.config.n * inst.config.d);
    inst.w_star.resize(inst.config.d);
    read_doubles(inst.w_star.data(), inst.config.d);
    inst.xi.resize(inst.config.n);
    read_doubles(inst.xi.data(), inst.config.n);
    inst.y.resize(inst.config.n);
    read_doubles(inst.y.data(), inst.config.n);
    if (!in) throw std::runtime_error("load_instance: truncated file " + path);
    inst.config.w_star = inst.w_star;
    return inst;
}

} // namespace bpinterp
