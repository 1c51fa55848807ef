#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bpinterp/auxiliary.hpp"
#include "bpinterp/datagen.hpp"
#include "bpinterp/experiments.hpp"
#include "bpinterp/interpolators.hpp"
#include "bpinterp/normal_tail.hpp"
#include "bpinterp/path.hpp"
#include "bpinterp/qp.hpp"

namespace py = pybind11;
using namespace bpinterp;

namespace {

Matrix matrix_from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(arr.shape(0)), static_cast<std::size_t>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + arr.size(), m.data());
    return m;
}

py::array_t<double> numpy_from_vector(const Vector& v) {
    py::array_t<double> arr(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), arr.mutable_data());
    return arr;
}

py::array_t<double> numpy_from_matrix(const Matrix& m) {
    py::array_t<double> arr({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.rows() * m.cols(), arr.mutable_data());
    return arr;
}

py::dict result_to_dict(const InterpolatorResult& fit) {
    py::dict out;
    out["w_hat"] = numpy_from_vector(fit.w_hat);
    out["l1_norm"] = fit.l1_norm;
    out["l2_norm"] = fit.l2_norm;
    out["interpolation_residual"] = fit.interpolation_residual;
    out["status"] = std::string(to_string(fit.solver_status));
    out["support_size"] = fit.support_size;
    return out;
}

FeatureDistribution dist_from_name(const std::string& name) {
    auto d = parse_distribution(name);
    if (!d) throw std::invalid_argument("unknown distribution: " + name);
    return *d;
}

} // namespace

PYBIND11_MODULE(_bpinterp, m) {
    m.doc() = "minimum-l1/l2-norm interpolation: estimators, Gaussian tail "
              "machinery, and the auxiliary-program toolbox";

    // Tail machinery -----------------------------------------------------
    m.def("phi_c", [](double x) { return static_cast<double>(phi_c(x)); },
          "Complementary standard-normal CDF");
    m.def("erfcx", &erfcx, "Scaled complementary error function exp(z^2) erfc(z)");
    m.def("h_factor", &h_factor, "Mills-ratio factor of the normal tail");
    m.def("truncated_moments", [](double x) {
        const TruncatedMoments tm = truncated_moments(x);
        return py::make_tuple(tm.first, tm.second);
    });
    m.def("t_quantile", [](std::uint64_t s, std::uint64_t d) {
        const QuantilePair q = t_quantile(s, d);
        py::dict out;
        out["t"] = q.t;
        out["t_bar"] = q.t_bar ? py::object(py::float_(*q.t_bar)) : py::none();
        return out;
    });

    // Data generation ------------------------------------------------------
    m.def(
        "gen_instance",
        [](std::size_t n, std::size_t d, double sigma2, const std::string& dist,
           std::uint64_t seed, std::uint64_t run_index) {
            InstanceConfig cfg;
            cfg.n = n;
            cfg.d = d;
            cfg.sigma2 = sigma2;
            cfg.dist = dist_from_name(dist);
            cfg.seed = seed;
            cfg.run_index = run_index;
            const RegressionInstance inst = gen_instance(cfg);
            py::dict out;
            out["x"] = numpy_from_matrix(inst.x);
            out["w_star"] = numpy_from_vector(inst.w_star);
            out["xi"] = numpy_from_vector(inst.xi);
            out["y"] = numpy_from_vector(inst.y);
            return out;
        },
        py::arg("n"), py::arg("d"), py::arg("sigma2") = 1.0, py::arg("dist") = "normal",
        py::arg("seed") = 0, py::arg("run_index") = 0);

    // Estimators ---------------------------------------------------------
    m.def(
        "basis_pursuit",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<double>& y) {
            return result_to_dict(basis_pursuit(matrix_from_numpy(x), y));
        },
        py::arg("x"), py::arg("y"), "Minimum-l1-norm interpolator");
    m.def(
        "min_l2_interpolator",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
           const std::vector<double>& y) {
            return result_to_dict(min_l2_interpolator(matrix_from_numpy(x), y));
        },
        py::arg("x"), py::arg("y"), "Minimum-l2-norm interpolator");
    m.def("prediction_error", &prediction_error, py::arg("w_hat"), py::arg("w_star"));

    // Path ------------------------------------------------------------------
    m.def("path_breakpoints", [](const std::vector<double>& h) {
        const PathState state = abs_order_stats(h);
        std::vector<double> bp;
        for (std::size_t s = 2; s <= state.dim() + 1; ++s) bp.push_back(state.breakpoint(s));
        py::dict out;
        out["order_stats"] = numpy_from_vector(state.order_stats());
        out["breakpoints"] = numpy_from_vector(bp);
        out["alpha_max"] = state.alpha_max();
        out["alpha_diamond"] = state.alpha_diamond();
        return out;
    });
    m.def("path_gamma", [](const std::vector<double>& h, double alpha) {
        const PathState state = abs_order_stats(h);
        const GammaPoint pt = gamma(state, alpha);
        py::dict out;
        out["w"] = numpy_from_vector(pt.w);
        out["segment_s"] = pt.segment_s;
        out["lambda"] = pt.lambda;
        out["mu"] = pt.mu;
        out["l1"] = pt.l1;
        out["l2sq"] = pt.l2sq;
        out["inner_h"] = pt.inner_h;
        return out;
    });

    // Auxiliary programs -----------------------------------------------------
    m.def(
        "aux_report",
        [](const std::vector<double>& h, std::size_t n, double sigma2, double rho, double c_b,
           double c_geoff, double s_star) {
            AuxParams params = AuxParams::make(n, h.size(), sigma2);
            if (rho > 0.0) params.rho = rho;
            params.c_b = c_b;
            params.c_geoff = c_geoff;
            params.s_star = s_star;
            params.b_localization = b_radius(params, MBoundVariant::ProofSketch);
            const PathState state = abs_order_stats(h);
            const AuxiliaryReport rep =
                make_auxiliary_report(state, params, MBoundVariant::ProofSketch);
            py::dict out;
            out["phi_n"] = rep.phi_n.value;
            out["phi_n_alpha"] = rep.phi_n.alpha_star;
            out["interval_empty"] = rep.interval.empty;
            out["interval"] = py::make_tuple(rep.interval.lo, rep.interval.hi);
            out["phi_plus"] = rep.interval.empty ? py::object(py::none())
                                                 : py::float_(rep.phi_plus.value);
            out["phi_minus"] = rep.interval.empty ? py::object(py::none())
                                                  : py::float_(rep.phi_minus.value);
            out["m_bound"] = rep.m;
            out["b_localization"] = params.b_localization;
            out["target_rate"] = rep.target_rate;
            return out;
        },
        py::arg("h"), py::arg("n"), py::arg("sigma2") = 1.0, py::arg("rho") = 0.0,
        py::arg("c_b") = 0.0, py::arg("c_geoff") = 2.0, py::arg("s_star") = 1.0);
    m.def("sparsity_window", [](std::size_t n, std::size_t d, double lam) {
        const SparsityWindow w = sparsity_window(AuxParams::make(n, d, 1.0), lam);
        py::dict out;
        out["s_lower"] = w.s_lower;
        out["s_upper"] = w.s_upper;
        out["approx_lower"] = w.approx_lower;
        out["approx_upper"] = w.approx_upper;
        return out;
    });
}
