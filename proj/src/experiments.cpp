#include "bpinterp/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bpinterp {

std::string to_string(Estimator estimator) {
    return estimator == Estimator::BasisPursuit ? "bp" : "minl2";
}

double theory_rate(std::size_t n, std::size_t d, double sigma2) {
    return sigma2 / std::log(static_cast<double>(d) / static_cast<double>(n));
}

ExperimentConfig ExperimentConfig::fig1a_paper() {
    ExperimentConfig cfg;
    cfg.mode = Mode::Fig1a;
    cfg.n = 400;
    cfg.sigma2 = 1.0;
    cfg.d_grid = {1000, 2000, 5000, 10000, 20000};
    cfg.dists = {FeatureDistribution::Normal, FeatureDistribution::LogNormal,
                 FeatureDistribution::Rademacher};
    cfg.runs = 20;
    return cfg;
}

ExperimentConfig ExperimentConfig::fig1a_small() {
    ExperimentConfig cfg = fig1a_paper();
    cfg.n = 100;
    cfg.d_grid = {1000, 3000, 8000};
    cfg.runs = 10;
    return cfg;
}

ExperimentConfig ExperimentConfig::fig1b_paper() {
    ExperimentConfig cfg;
    cfg.mode = Mode::Fig1b;
    cfg.n = 400;
    cfg.d = 20000;
    cfg.sigma2_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    cfg.dists = {FeatureDistribution::Normal};
    cfg.runs = 20;
    return cfg;
}

ExperimentConfig ExperimentConfig::fig1b_small() {
    ExperimentConfig cfg = fig1b_paper();
    cfg.n = 100;
    cfg.d = 5000;
    cfg.sigma2_grid = {0.25, 1.0, 4.0};
    cfg.runs = 10;
    return cfg;
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t nthreads = std::min(threads, count);
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

namespace {

ExperimentRecord fit_one(const RegressionInstance& inst, Estimator estimator) {
    ExperimentRecord rec;
    rec.seed = inst.config.seed;
    rec.run_index = inst.config.run_index;
    rec.n = inst.config.n;
    rec.d = inst.config.d;
    rec.sigma2 = inst.config.sigma2;
    rec.dist = inst.config.dist;
    rec.estimator = estimator;
    rec.theory_rate = theory_rate(rec.n, rec.d, rec.sigma2);

    const auto t0 = std::chrono::steady_clock::now();
    const InterpolatorResult fit = estimator == Estimator::BasisPursuit
                                       ? basis_pursuit(inst.x, inst.y)
                                       : min_l2_interpolator(inst.x, inst.y);
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.status = fit.solver_status;
    if (fit.solver_status == LpStatus::Optimal) {
        rec.err_l2sq = prediction_error(fit.w_hat, inst.w_star);
        rec.l1_norm = fit.l1_norm;
        rec.support_size = fit.support_size;
    }
    return rec;
}

} // namespace

std::vector<ExperimentRecord> run_fig1a(const ExperimentConfig& cfg) {
    struct Task {
        FeatureDistribution dist;
        std::size_t d;
        std::uint64_t run;
    };
    std::vector<Task> tasks;
    for (FeatureDistribution dist : cfg.dists)
        for (std::size_t d : cfg.d_grid)
            for (std::uint64_t run = 0; run < cfg.runs; ++run) tasks.push_back({dist, d, run});

    std::vector<ExperimentRecord> records(tasks.size());
    parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
        const Task& task = tasks[i];
        InstanceConfig ic;
        ic.n = cfg.n;
        ic.d = task.d;
        ic.sigma2 = cfg.sigma2;
        ic.dist = task.dist;
        ic.seed = cfg.seed;
        ic.run_index = task.run;
        records[i] = fit_one(gen_instance(ic), Estimator::BasisPursuit);
    });
    return records;
}

std::vector<ExperimentRecord> run_fig1b(const ExperimentConfig& cfg) {
    struct Task {
        double sigma2;
        std::uint64_t run;
    };
    std::vector<Task> tasks;
    for (double s2 : cfg.sigma2_grid)
        for (std::uint64_t run = 0; run < cfg.runs; ++run) tasks.push_back({s2, run});

    const FeatureDistribution dist =
        cfg.dists.empty() ? FeatureDistribution::Normal : cfg.dists.front();
    std::vector<ExperimentRecord> records(2 * tasks.size());
    parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
        const Task& task = tasks[i];
        InstanceConfig ic;
        ic.n = cfg.n;
        ic.d = cfg.d;
        ic.sigma2 = task.sigma2;
        ic.dist = dist;
        ic.seed = cfg.seed;
        ic.run_index = task.run;
        const RegressionInstance inst = gen_instance(ic);
        records[2 * i] = fit_one(inst, Estimator::BasisPursuit);
        records[2 * i + 1] = fit_one(inst, Estimator::MinL2);
    });
    return records;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "seed,run_index,n,d,sigma2,dist,estimator,err_l2sq,l1_norm,support_size,"
           "theory_rate,status,wall_time_ms\n";
    for (const auto& r : records) {
        out << r.seed << ',' << r.run_index << ',' << r.n << ',' << r.d << ','
            << format_double(r.sigma2) << ',' << to_string(r.dist) << ','
            << to_string(r.estimator) << ',' << format_double(r.err_l2sq) << ','
            << format_double(r.l1_norm) << ',' << r.support_size << ','
            << format_double(r.theory_rate) << ',' << to_string(r.status) << ','
            << format_double(r.wall_time_ms) << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

std::vector<ExperimentRecord> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("parse_csv: empty file " + path);

    std::vector<ExperimentRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 13) throw std::runtime_error("parse_csv: malformed row: " + line);

        ExperimentRecord r;
        r.seed = std::stoull(fields[0]);
        r.run_index = std::stoull(fields[1]);
        r.n = std::stoul(fields[2]);
        r.d = std::stoul(fields[3]);
        r.sigma2 = std::stod(fields[4]);
        auto dist = parse_distribution(fields[5]);
        if (!dist) throw std::runtime_error("parse_csv: unknown distribution " + fields[5]);
        r.dist = *dist;
        r.estimator = fields[6] == "bp" ? Estimator::BasisPursuit : Estimator::MinL2;
        r.err_l2sq = std::stod(fields[7]);
        r.l1_norm = std::stod(fields[8]);
        r.support_size = std::stoul(fields[9]);
        r.theory_rate = std::stod(fields[10]);
        if (fields[11] == "optimal") r.status = LpStatus::Optimal;
        else if (fields[11] == "infeasible") r.status = LpStatus::Infeasible;
        else if (fields[11] == "unbounded") r.status = LpStatus::Unbounded;
        else r.status = LpStatus::IterationLimit;
        r.wall_time_ms = std::stod(fields[12]);
        records.push_back(r);
    }
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records) {
    std::vector<SummaryRow> rows;
    auto find = [&rows](const ExperimentRecord& r) -> SummaryRow& {
        for (auto& row : rows) {
            if (row.dist == r.dist && row.estimator == r.estimator && row.n == r.n &&
                row.d == r.d && row.sigma2 == r.sigma2)
                return row;
        }
        SummaryRow row;
        row.dist = r.dist;
        row.estimator = r.estimator;
        row.n = r.n;
        row.d = r.d;
        row.sigma2 = r.sigma2;
        row.theory_rate = r.theory_rate;
        rows.push_back(row);
        return rows.back();
    };
    // Two passes: mean, then standard deviation over runs.
    for (const auto& r : records) {
        SummaryRow& row = find(r);
        ++row.runs;
        row.mean_err += r.err_l2sq;
    }
    for (auto& row : rows) row.mean_err /= static_cast<double>(row.runs);
    for (const auto& r : records) {
        SummaryRow& row = find(r);
        const double dmean = r.err_l2sq - row.mean_err;
        row.std_err += dmean * dmean;
    }
    for (auto& row : rows)
        row.std_err = row.runs > 1 ? std::sqrt(row.std_err / static_cast<double>(row.runs - 1)) : 0.0;
    return rows;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_summary_csv: cannot open " + path);
    out << "dist,estimator,n,d,sigma2,runs,mean_err,std_err,theory_rate\n";
    for (const auto& row : rows) {
        out << to_string(row.dist) << ',' << to_string(row.estimator) << ',' << row.n << ','
            << row.d << ',' << format_double(row.sigma2) << ',' << row.runs << ','
            << format_double(row.mean_err) << ',' << format_double(row.std_err) << ','
            << format_double(row.theory_rate) << '\n';
    }
    if (!out) throw std::runtime_error("write_summary_csv: write failed for " + path);
}

} // namespace bpinterp
