// bpinterp: reproduce the minimum-norm-interpolation experiments and run
// the verification suites from the command line.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpinterp/auxiliary.hpp"
#include "bpinterp/datagen.hpp"
#include "bpinterp/experiments.hpp"
#include "bpinterp/interpolators.hpp"
#include "bpinterp/normal_tail.hpp"
#include "bpinterp/path.hpp"
#include "bpinterp/qp.hpp"
#include "bpinterp/rng.hpp"
#include "bpinterp/svg.hpp"

namespace {

using namespace bpinterp;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitCheckFailed = 2;

std::vector<FeatureDistribution> parse_dists(const std::vector<std::string>& names) {
    std::vector<FeatureDistribution> dists;
    for (const auto& name : names) {
        auto d = parse_distribution(name);
        if (!d) throw CLI::ValidationError("--dist", "unknown distribution: " + name);
        dists.push_back(*d);
    }
    return dists;
}

std::string marker_for(FeatureDistribution dist) {
    switch (dist) {
        case FeatureDistribution::Normal: return "square";
        case FeatureDistribution::LogNormal: return "circle";
        case FeatureDistribution::Rademacher: return "triangle";
    }
    return "circle";
}

std::string color_for(FeatureDistribution dist) {
    switch (dist) {
        case FeatureDistribution::Normal: return "#ff7f0e";
        case FeatureDistribution::LogNormal: return "#1f77b4";
        case FeatureDistribution::Rademacher: return "#2ca02c";
    }
    return "#1f77b4";
}

void render_fig1a_svg(const std::vector<SummaryRow>& rows, const ExperimentConfig& cfg,
                      const std::string& path) {
    std::vector<PlotSeries> series;
    for (FeatureDistribution dist : cfg.dists) {
        PlotSeries s;
        s.label = to_string(dist);
        s.marker = marker_for(dist);
        s.color = color_for(dist);
        for (const auto& row : rows) {
            if (row.dist != dist || row.estimator != Estimator::BasisPursuit) continue;
            s.x.push_back(std::log(static_cast<double>(row.d) / static_cast<double>(row.n)));
            s.y.push_back(row.mean_err);
        }
        if (!s.x.empty()) series.push_back(std::move(s));
    }
    PlotOptions opt;
    opt.title = "BP prediction error vs log(d/n)";
    opt.x_label = "log(d/n)";
    opt.y_label = "prediction error";
    opt.trend_label = "sigma^2/log(d/n)";
    if (!series.empty()) {
        const double lo = *std::min_element(series[0].x.begin(), series[0].x.end());
        const double hi = *std::max_element(series[0].x.begin(), series[0].x.end());
        for (int i = 0; i <= 100; ++i) {
            const double l = lo + (hi - lo) * i / 100.0;
            opt.trend_x.push_back(l);
            opt.trend_y.push_back(cfg.sigma2 / l);
        }
    }
    render_svg(series, opt, path);
}

void render_fig1b_svg(const std::vector<SummaryRow>& rows, const ExperimentConfig& cfg,
                      const std::string& path) {
    std::vector<PlotSeries> series;
    for (Estimator est : {Estimator::BasisPursuit, Estimator::MinL2}) {
        PlotSeries s;
        s.label = est == Estimator::BasisPursuit ? "min-l1 (BP)" : "min-l2";
        s.marker = est == Estimator::BasisPursuit ? "square" : "circle";
        s.color = est == Estimator::BasisPursuit ? "#ff7f0e" : "#1f77b4";
        for (const auto& row : rows) {
            if (row.estimator != est) continue;
            s.x.push_back(row.sigma2);
            s.y.push_back(row.mean_err);
            s.band_lo.push_back(row.mean_err - row.std_err);
            s.band_hi.push_back(row.mean_err + row.std_err);
        }
        if (!s.x.empty()) series.push_back(std::move(s));
    }
    PlotOptions opt;
    opt.title = "Prediction error vs sigma^2";
    opt.x_label = "sigma^2";
    opt.y_label = "prediction error";
    opt.trend_label = "sigma^2/log(d/n)";
    const double rate = 1.0 / std::log(static_cast<double>(cfg.d) / static_cast<double>(cfg.n));
    for (double s2 : cfg.sigma2_grid) {
        opt.trend_x.push_back(s2);
        opt.trend_y.push_back(s2 * rate);
    }
    render_svg(series, opt, path);
}


// Flat key=value config support: `--config FILE` anywhere after the
// subcommand expands into --key value arguments for keys the command line
// does not already carry, so explicit flags always win. Comma-separated
// values expand into repeated flags (grids).
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), 
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + config_path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        std::stringstream values(value);
        std::string token;
        while (std::getline(values, token, ',')) {
            args.push_back(flag);
            args.push_back(token);
        }
    }
    return args;
}

int run_experiment(const ExperimentConfig& cfg, const std::string& prefix) {
    std::filesystem::create_directories(cfg.out_dir);
    const auto records = cfg.mode == ExperimentConfig::Mode::Fig1a ? run_fig1a(cfg) : run_fig1b(cfg);
    const auto rows = summarize(records);

    const std::string records_path = cfg.out_dir + "/" + prefix + "_records.csv";
    const std::string summary_path = cfg.out_dir + "/" + prefix + "_summary.csv";
    const std::string svg_path = cfg.out_dir + "/" + prefix + ".svg";
    write_csv(records, records_path);
    write_summary_csv(rows, summary_path);
    if (cfg.mode == ExperimentConfig::Mode::Fig1a) render_fig1a_svg(rows, cfg, svg_path);
    else render_fig1b_svg(rows, cfg, svg_path);

    std::printf("dist,estimator,n,d,sigma2,runs,mean_err,std_err,theory_rate\n");
    for (const auto& row : rows)
        std::printf("%s,%s,%zu,%zu,%g,%zu,%.6g,%.6g,%.6g\n", to_string(row.dist).c_str(),
                    to_string(row.estimator).c_str(), row.n, row.d, row.sigma2, row.runs,
                    row.mean_err, row.std_err, row.theory_rate);
    std::fprintf(stderr, "wrote %s, %s, %s\n", records_path.c_str(), summary_path.c_str(),
                 svg_path.c_str());
    return kExitOk;
}

Vector gaussian_vector(std::size_t d, std::uint64_t seed, std::uint64_t draw) {
    CounterRng rng(derive_stream_key(seed, draw, StreamPurpose::Generic));
    Vector h(d);
    for (auto& v : h) v = rng.next_normal();
    return h;
}

int cmd_path_verify(std::size_t d, std::size_t seeds, std::uint64_t seed, std::size_t grid,
                    const std::string& out_dir) {
    std::string csv = "seed,d,max_l1_rel_err,max_inner_rel_err,breakpoint_order_ok,"
                      "monotonicity_violations,max_qp_dev,ok\n";
    bool all_ok = true;
    for (std::size_t k = 0; k < seeds; ++k) {
        const Vector h = gaussian_vector(d, seed, k);
        const PathState state = abs_order_stats(h);

        double max_l1 = 0.0, max_inner = 0.0;
        for (std::size_t i = 0; i < 50; ++i) {
            const double alpha =
                1.0 + (state.alpha_max() - 1.0) * static_cast<double>(i) / 49.0;
            const SegmentNorms norms = segment_norms(state, alpha);
            max_l1 = std::max(max_l1, std::fabs(norms.l1 - alpha) / alpha);
            max_inner = std::max(max_inner,
                                 std::fabs(norms.inner_h - state.h_max()) / state.h_max());
        }
        bool order_ok = true;
        for (std::size_t s = 2; s <= d; ++s)
            if (!(state.breakpoint(s) < state.breakpoint(s + 1))) order_ok = false;
        if (!(state.breakpoint(d) < state.alpha_diamond() &&
              state.alpha_diamond() < state.alpha_max()))
            order_ok = false;
        const MonotonicityReport rep = verify_monotonicity(state, grid);

        // Closed form vs the active-set program, affordable up to moderate d.
        double max_qp_dev = 0.0;
        if (d <= 500) {
            for (int a = 0; a < 5; ++a) {
                const double alpha = 1.0 + (state.alpha_max() - 1.0) * (a + 0.5) / 5.0;
                const GammaPoint g = gamma(state, alpha);
                const PathQpResult qp = solve_path_qp(state.order_stats(), state.h_max(), alpha);
                if (qp.status != QpStatus::Optimal) {
                    max_qp_dev = 1.0;
                    break;
                }
                for (std::size_t i = 0; i < d; ++i)
                    max_qp_dev = std::max(max_qp_dev, std::fabs(g.w[i] - qp.w[i]));
            }
        }

        const bool ok = max_l1 <= 1e-10 && max_inner <= 1e-10 && order_ok &&
                        rep.total_violations() == 0 && max_qp_dev <= 1e-6;
        all_ok = all_ok && ok;
        char line[256];
        std::snprintf(line, sizeof line, "%zu,%zu,%.3e,%.3e,%d,%zu,%.3e,%d\n", k, d, max_l1,
                      max_inner, order_ok ? 1 : 0, rep.total_violations(), max_qp_dev,
                      ok ? 1 : 0);
        csv += line;
    }
    std::fputs(csv.c_str(), stdout);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(out_dir + "/path_verify.csv", std::ios::binary);
        out << csv;
    }
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_aux_verify(std::size_t n, std::size_t d, double sigma2, std::size_t draws,
                   double rho, double c_b, std::uint64_t seed, const std::string& out_dir) {
    AuxParams params = AuxParams::make(n, d, sigma2);
    if (rho > 0.0) params.rho = rho;
    params.c_b = c_b;
    const double rate = theory_rate(n, d, sigma2);

    std::string csv =
        "draw,phi_n,alpha_n,phi_plus,phi_minus,interval_lo,interval_hi,target_rate,ordered\n";
    bool all_ok = true;
    double sum_n = 0.0, sum_p = 0.0, sum_m = 0.0;
    std::size_t nonempty = 0;
    for (std::size_t k = 0; k < draws; ++k) {
        const Vector h = gaussian_vector(d, seed, k);
        const PathState state = abs_order_stats(h);
        const AuxiliaryReport rep =
            make_auxiliary_report(state, params, MBoundVariant::ProofSketch);

        const bool ordered =
            rep.interval.empty || rep.phi_minus.value <= rep.phi_plus.value * (1.0 + 1e-12);
        all_ok = all_ok && ordered && rep.phi_n.status == PhiStatus::Ok;
        if (!rep.interval.empty) {
            ++nonempty;
            sum_p += rep.phi_plus.value;
            sum_m += rep.phi_minus.value;
        }
        sum_n += rep.phi_n.value;
        char line[320];
        std::snprintf(line, sizeof line, "%zu,%.10g,%.6g,%.10g,%.10g,%.6g,%.6g,%.10g,%d\n", k,
                      rep.phi_n.value, rep.phi_n.alpha_star,
                      rep.interval.empty ? NAN : rep.phi_plus.value,
                      rep.interval.empty ? NAN : rep.phi_minus.value,
                      rep.interval.empty ? NAN : rep.interval.lo,
                      rep.interval.empty ? NAN : rep.interval.hi, rate, ordered ? 1 : 0);
        csv += line;
    }
    char line[320];
    std::snprintf(line, sizeof line, "summary,%.10g,,%.10g,%.10g,,,%.10g,%d\n",
                  sum_n / static_cast<double>(draws),
                  nonempty ? sum_p / static_cast<double>(nonempty) : NAN,
                  nonempty ? sum_m / static_cast<double>(nonempty) : NAN, rate, all_ok ? 1 : 0);
    csv += line;
    std::fputs(csv.c_str(), stdout);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(out_dir + "/aux_verify.csv", std::ios::binary);
        out << csv;
    }
    return all_ok ? kExitOk : kExitCheckFailed;
}

int cmd_quantile(std::uint64_t s, std::uint64_t d) {
    const QuantilePair q = t_quantile(s, d);
    const double t2 = q.t * q.t;
    const double logds = std::log(static_cast<double>(d) / static_cast<double>(s));
    std::printf("s,d,t,t_bar,log_sandwich,tbar_sandwich\n");
    std::string log_verdict = "na", tbar_verdict = "na";
    if (d >= 11 * s) {
        log_verdict = (logds <= t2 && t2 <= 2.0 * logds) ? "pass" : "fail";
        if (q.t_bar) {
            const double tb2 = *q.t_bar * *q.t_bar;
            tbar_verdict = (tb2 - 1.0 <= t2 && t2 <= tb2) ? "pass" : "fail";
        }
    }
    std::printf("%llu,%llu,%.17g,%.17g,%s,%s\n", static_cast<unsigned long long>(s),
                static_cast<unsigned long long>(d), q.t, q.t_bar ? *q.t_bar : NAN,
                log_verdict.c_str(), tbar_verdict.c_str());
    return (log_verdict == "fail" || tbar_verdict == "fail") ? kExitCheckFailed : kExitOk;
}

int cmd_solve(std::size_t n, std::size_t d, double sigma2, const std::string& dist_name,
              std::uint64_t seed, std::uint64_t run_index, const std::string& estimator,
              const std::string& dump_path) {
    auto dist = parse_distribution(dist_name);
    if (!dist) throw CLI::ValidationError("--dist", "unknown distribution: " + dist_name);
    InstanceConfig ic;
    ic.n = n;
    ic.d = d;
    ic.sigma2 = sigma2;
    ic.dist = *dist;
    ic.seed = seed;
    ic.run_index = run_index;
    const RegressionInstance inst = gen_instance(ic);
    if (!dump_path.empty()) dump_instance(inst, dump_path);

    std::printf("estimator,status,err_l2sq,l1_norm,l2_norm,support_size,residual_inf\n");
    bool ok = true;
    auto report = [&](const char* name, const InterpolatorResult& fit) {
        ok = ok && fit.solver_status == LpStatus::Optimal;
        std::printf("%s,%s,%.10g,%.10g,%.10g,%zu,%.3e\n", name, to_string(fit.solver_status),
                    fit.solver_status == LpStatus::Optimal
                        ? prediction_error(fit.w_hat, inst.w_star)
                        : NAN,
                    fit.l1_norm, fit.l2_norm, fit.support_size, fit.interpolation_residual);
    };
    if (estimator == "bp" || estimator == "both") report("bp", basis_pursuit(inst.x, inst.y));
    if (estimator == "minl2" || estimator == "both")
        report("minl2", min_l2_interpolator(inst.x, inst.y));
    return ok ? kExitOk : kExitFatal;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimum-norm interpolation experiments and verification suites"};
    app.require_subcommand(1);
    std::string config_doc;
    static const char* kConfigHelp = "flat key=value config file (command-line flags override)";

    // fig1a ------------------------------------------------------------
    auto* fig1a = app.add_subcommand("fig1a", "BP error vs dimension sweep");
    std::string scale_a = "paper";
    std::size_t n_a = 0, runs_a = 0, threads_a = 1;
    double sigma2_a = -1.0;
    std::vector<std::size_t> d_grid_a;
    std::vector<std::string> dists_a;
    std::uint64_t seed_a = 1;
    std::string out_a = ".";
    fig1a->add_option("--scale", scale_a, "preset: paper or small")
        ->check(CLI::IsMember({"paper", "small"}));
    fig1a->add_option("--n", n_a, "sample count");
    fig1a->add_option("--sigma2", sigma2_a, "noise variance");
    fig1a->add_option("--d", d_grid_a, "dimension grid");
    fig1a->add_option("--dist", dists_a, "feature distributions");
    fig1a->add_option("--runs", runs_a, "trials per grid point");
    fig1a->add_option("--seed", seed_a, "master seed");
    fig1a->add_option("--out", out_a, "output directory");
    fig1a->add_option("--threads", threads_a, "worker threads");
    fig1a->add_option("--config", config_doc, kConfigHelp);

    // fig1b ------------------------------------------------------------
    auto* fig1b = app.add_subcommand("fig1b", "BP and min-l2 error vs noise sweep");
    std::string scale_b = "paper";
    std::size_t n_b = 0, d_b = 0, runs_b = 0, threads_b = 1;
    std::vector<double> sigma2_grid_b;
    std::uint64_t seed_b = 1;
    std::string out_b = ".";
    fig1b->add_option("--scale", scale_b, "preset: paper or small")
        ->check(CLI::IsMember({"paper", "small"}));
    fig1b->add_option("--n", n_b, "sample count");
    fig1b->add_option("--d", d_b, "dimension");
    fig1b->add_option("--sigma2", sigma2_grid_b, "noise variance grid");
    fig1b->add_option("--runs", runs_b, "trials per grid point");
    fig1b->add_option("--seed", seed_b, "master seed");
    fig1b->add_option("--out", out_b, "output directory");
    fig1b->add_option("--threads", threads_b, "worker threads");
    fig1b->add_option("--config", config_doc, kConfigHelp);

    // path-verify --------------------------------------------------------
    auto* pathv = app.add_subcommand("path-verify", "path invariants over random draws");
    std::size_t d_p = 200, seeds_p = 10, grid_p = 5;
    std::uint64_t seed_p = 1;
    std::string out_p;
    pathv->add_option("--d", d_p, "dimension");
    pathv->add_option("--seeds", seeds_p, "number of draws");
    pathv->add_option("--grid", grid_p, "midpoints per segment");
    pathv->add_option("--seed", seed_p, "master seed");
    pathv->add_option("--out", out_p, "output directory");
    pathv->add_option("--config", config_doc, kConfigHelp);

    // aux-verify ---------------------------------------------------------
    auto* auxv = app.add_subcommand("aux-verify", "auxiliary program values over random draws");
    std::size_t n_x = 100, d_x = 5000, draws_x = 50;
    double sigma2_x = 1.0, rho_x = 0.0, cb_x = 0.0;
    std::uint64_t seed_x = 1;
    std::string out_x;
    auxv->add_option("--n", n_x, "sample count");
    auxv->add_option("--d", d_x, "dimension");
    auxv->add_option("--sigma2", sigma2_x, "noise variance");
    auxv->add_option("--draws", draws_x, "number of draws");
    auxv->add_option("--rho", rho_x, "override rho (default 10/log(d/n)^2.5)");
    auxv->add_option("--cB", cb_x, "constant in the localization bound");
    auxv->add_option("--seed", seed_x, "master seed");
    auxv->add_option("--out", out_x, "output directory");
    auxv->add_option("--config", config_doc, kConfigHelp);

    // quantile -----------------------------------------------------------
    auto* quant = app.add_subcommand("quantile", "tail quantile and sandwich verdicts");
    std::uint64_t s_q = 0, d_q = 0;
    quant->add_option("--s", s_q, "tail count")->required();
    quant->add_option("--d", d_q, "dimension")->required();
    quant->add_option("--config", config_doc, kConfigHelp);

    // solve ----------------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "generate one instance and fit interpolators");
    std::size_t n_s = 100, d_s = 1000;
    double sigma2_s = 1.0;
    std::string dist_s = "normal", estimator_s = "both", dump_s;
    std::uint64_t seed_s = 1, run_s = 0;
    solve->add_option("--n", n_s, "sample count");
    solve->add_option("--d", d_s, "dimension");
    solve->add_option("--sigma2", sigma2_s, "noise variance");
    solve->add_option("--dist", dist_s, "feature distribution");
    solve->add_option("--seed", seed_s, "master seed");
    solve->add_option("--run-index", run_s, "trial index");
    solve->add_option("--estimator", estimator_s, "bp, minl2 or both")
        ->check(CLI::IsMember({"bp", "minl2", "both"}));
    solve->add_option("--dump", dump_s, "dump the instance to a binary file");
    solve->add_option("--config", config_doc, kConfigHelp);

    std::vector<std::string> args;
    try {
        args = expand_config_args(argc, argv);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFatal;
    }
    try {
        std::vector<const char*> argv_expanded;
        argv_expanded.push_back(argv[0]);
        for (const auto& a : args) argv_expanded.push_back(a.c_str());
        app.parse(static_cast<int>(argv_expanded.size()), argv_expanded.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (fig1a->parsed()) {
            ExperimentConfig cfg = scale_a == "small" ? ExperimentConfig::fig1a_small()
                                                      : ExperimentConfig::fig1a_paper();
            if (n_a) cfg.n = n_a;
            if (sigma2_a >= 0.0) cfg.sigma2 = sigma2_a;
            if (!d_grid_a.empty()) cfg.d_grid = d_grid_a;
            if (!dists_a.empty()) cfg.dists = parse_dists(dists_a);
            if (runs_a) cfg.runs = runs_a;
            cfg.seed = seed_a;
            cfg.out_dir = out_a;
            cfg.threads = threads_a;
            return run_experiment(cfg, "fig1a");
        }
        if (fig1b->parsed()) {
            ExperimentConfig cfg = scale_b == "small" ? ExperimentConfig::fig1b_small()
                                                      : ExperimentConfig::fig1b_paper();
            if (n_b) cfg.n = n_b;
            if (d_b) cfg.d = d_b;
            if (!sigma2_grid_b.empty()) cfg.sigma2_grid = sigma2_grid_b;
            if (runs_b) cfg.runs = runs_b;
            cfg.seed = seed_b;
            cfg.out_dir = out_b;
            cfg.threads = threads_b;
            return run_experiment(cfg, "fig1b");
        }
        if (pathv->parsed()) return cmd_path_verify(d_p, seeds_p, seed_p, grid_p, out_p);
        if (auxv->parsed())
            return cmd_aux_verify(n_x, d_x, sigma2_x, draws_x, rho_x, cb_x, seed_x, out_x);
        if (quant->parsed()) return cmd_quantile(s_q, d_q);
        if (solve->parsed())
            return cmd_solve(n_s, d_s, sigma2_s, dist_s, seed_s, run_s, estimator_s, dump_s);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFatal;
    }
    return kExitOk;
}
