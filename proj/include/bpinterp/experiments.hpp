#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bpinterp/datagen.hpp"
#include "bpinterp/interpolators.hpp"

namespace bpinterp {

enum class Estimator { BasisPursuit, MinL2 };

std::string to_string(Estimator estimator);

// One Monte-Carlo trial row. wall_time_ms is the only field that is not a
// deterministic function of the configuration; it is kept last so
// reproducibility checks can mask it.
struct ExperimentRecord {
    std::uint64_t seed = 0;
    std::uint64_t run_index = 0;
    std::size_t n = 0;
    std::size_t d = 0;
    double sigma2 = 0.0;
    FeatureDistribution dist = FeatureDistribution::Normal;
    Estimator estimator = Estimator::BasisPursuit;
    double err_l2sq = 0.0;
    double l1_norm = 0.0;
    std::size_t support_size = 0;
    double theory_rate = 0.0;  // sigma2 / log(d/n)
    LpStatus status = LpStatus::Optimal;
    double wall_time_ms = 0.0;
};

struct ExperimentConfig {
    enum class Mode { Fig1a, Fig1b, Custom };
    Mode mode = Mode::Fig1a;
    std::size_t n = 400;
    double sigma2 = 1.0;                  // fig1a noise level
    std::vector<std::size_t> d_grid;      // fig1a dimensions
    std::size_t d = 20000;                // fig1b dimension
    std::vector<double> sigma2_grid;      // fig1b noise levels
    std::vector<FeatureDistribution> dists;
    std::size_t runs = 20;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::size_t threads = 1;

    static ExperimentConfig fig1a_paper();
    static ExperimentConfig fig1a_small();
    static ExperimentConfig fig1b_paper();
    static ExperimentConfig fig1b_small();
};

double theory_rate(std::size_t n, std::size_t d, double sigma2);

// Error-vs-dimension sweep (one estimator, a grid of d). Trials execute in
// a work pool; records land in a deterministic key order regardless of the
// thread count.
std::vector<ExperimentRecord> run_fig1a(const ExperimentConfig& cfg);

// Error-vs-noise sweep; both estimators are fit on the same instances.
std::vector<ExperimentRecord> run_fig1b(const ExperimentConfig& cfg);

void write_csv(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> parse_csv(const std::string& path);

struct SummaryRow {
    FeatureDistribution dist = FeatureDistribution::Normal;
    Estimator estimator = Estimator::BasisPursuit;
    std::size_t n = 0;
    std::size_t d = 0;
    double sigma2 = 0.0;
    std::size_t runs = 0;
    double mean_err = 0.0;
    double std_err = 0.0;
    double theory_rate = 0.0;
};

// Group records by (dist, estimator, n, d, sigma2) in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

// Runs fn(0..count-1) on `threads` workers.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace bpinterp
