#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bpinterp/linalg.hpp"
#include "bpinterp/rng.hpp"

namespace bpinterp {

enum class FeatureDistribution { Normal, LogNormal, Rademacher };

std::string to_string(FeatureDistribution dist);
std::optional<FeatureDistribution> parse_distribution(const std::string& name);

// One synthetic-regression configuration. The ground truth defaults to
// (1, 0, ..., 0); an explicit vector is accepted so sparsity assumptions
// can be stress-tested.
struct InstanceConfig {
    std::size_t n = 0;
    std::size_t d = 0;
    double sigma2 = 1.0;
    FeatureDistribution dist = FeatureDistribution::Normal;
    std::optional<Vector> w_star;  // empty means unit-first
    std::uint64_t seed = 0;
    std::uint64_t run_index = 0;
};

struct RegressionInstance {
    Matrix x;        // n x d features
    Vector w_star;   // length d
    Vector xi;       // length n, N(0, sigma2 I)
    Vector y;        // length n, y = X w_star + xi
    InstanceConfig config;
};

// Entries are i.i.d. with mean 0 and variance 1:
//   Normal      Z
//   LogNormal   (exp(Z) - e^{1/2}) / sqrt((e-1) e)
//   Rademacher  +-1 equiprobable
Matrix gen_features(std::size_t n, std::size_t d, FeatureDistribution dist, CounterRng& stream);

// Features and noise come from independent substreams of (seed, run_index),
// so the noise vector does not change when only `dist` changes.
// Throws std::invalid_argument when an explicit w_star has length != d.
RegressionInstance gen_instance(const InstanceConfig& cfg);

// Debug dump: 32-byte header (magic "BPI1", n, d, dist tag, seed, run_index)
// followed by X, w_star, xi, y as little-endian 64-bit floats.
void dump_instance(const RegressionInstance& inst, const std::string& path);
RegressionInstance load_instance(const std::string& path);

} // namespace bpinterp
