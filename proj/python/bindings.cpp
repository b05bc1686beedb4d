#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "tktp/boundary_cache.hpp"
#include "tktp/copula.hpp"
#include "tktp/errors.hpp"
#include "tktp/correlation.hpp"
#include "tktp/multistage.hpp"
#include "tktp/sample.hpp"
#include "tktp/screen.hpp"
#include "tktp/simstudy.hpp"
#include "tktp/taupath.hpp"

namespace py = pybind11;

namespace {

tktp::BcsPolicy make_policy(const std::string& tie_break, std::uint64_t seed,
                            const std::string& algorithm) {
    tktp::BcsPolicy p;
    if (tie_break == "first")
        p.tie_break = tktp::TieBreak::first_element;
    else if (tie_break == "random")
        p.tie_break = tktp::TieBreak::seeded_random;
    else
        throw tktp::ArgumentError("tie_break must be 'first' or 'random'");
    p.seed = seed;
    if (algorithm == "fastbcs")
        p.algorithm = tktp::BcsAlgorithm::fastbcs;
    else if (algorithm == "fastbcs2")
        p.algorithm = tktp::BcsAlgorithm::fastbcs2;
    else
        throw tktp::ArgumentError("algorithm must be 'fastbcs' or 'fastbcs2'");
    return p;
}

tktp::copula::CopulaSpec make_spec(const std::string& family, const std::string& kind,
                                   double value) {
    tktp::copula::CopulaSpec spec;
    if (family == "frank")
        spec.family = tktp::copula::Family::frank;
    else if (family == "gaussian")
        spec.family = tktp::copula::Family::gaussian;
    else if (family == "independence")
        spec.family = tktp::copula::Family::independence;
    else
        throw tktp::ArgumentError("family must be frank, gaussian or independence");
    if (kind == "tau")
        spec.kind = tktp::copula::StrengthKind::kendall_tau;
    else if (kind == "rho")
        spec.kind = tktp::copula::StrengthKind::spearman_rho;
    else if (kind == "native")
        spec.kind = tktp::copula::StrengthKind::native;
    else
        throw tktp::ArgumentError("kind must be tau, rho or native");
    spec.value = value;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_tktp, m) {
    m.doc() = "Top-K tau-path screening for monotone association";

    py::register_exception<tktp::Error>(m, "TktpError");

    py::class_<tktp::TauPathResult>(m, "TauPathResult")
        .def_readonly("pi", &tktp::TauPathResult::pi)
        .def_readonly("tau", &tktp::TauPathResult::tau);

    py::class_<tktp::MamleCurve>(m, "MamleCurve")
        .def_readonly("n", &tktp::MamleCurve::n)
        .def_readonly("window", &tktp::MamleCurve::window)
        .def_readonly("theta", &tktp::MamleCurve::theta)
        .def_readonly("clamped_stages", &tktp::MamleCurve::clamped_stages)
        .def_property_readonly("first_stage", &tktp::MamleCurve::first_stage);

    py::class_<tktp::RejectBoundary>(m, "RejectBoundary")
        .def_readonly("n", &tktp::RejectBoundary::n)
        .def_readonly("window", &tktp::RejectBoundary::window)
        .def_readonly("alpha", &tktp::RejectBoundary::alpha)
        .def_readonly("nsim", &tktp::RejectBoundary::nsim)
        .def_readonly("seed", &tktp::RejectBoundary::seed)
        .def_readonly("q", &tktp::RejectBoundary::q);

    py::class_<tktp::TktpSelection>(m, "TktpSelection")
        .def_readonly("k_hat", &tktp::TktpSelection::k_hat)
        .def_readonly("selected", &tktp::TktpSelection::selected)
        .def_readonly("taupath", &tktp::TktpSelection::taupath)
        .def_readonly("mamle", &tktp::TktpSelection::mamle);

    m.def(
        "to_ranks",
        [](const std::vector<double>& values) { return tktp::to_ranks(values); },
        py::arg("values"));

    m.def(
        "kendall_tau",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return tktp::kendall_tau(x, y);
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return tktp::pearson(x, y);
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "spearman",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return tktp::spearman(x, y);
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "tau_path",
        [](const std::vector<double>& x, const std::vector<double>& y,
           const std::string& algorithm, const std::string& tie_break, std::uint64_t seed) {
            return tktp::tau_path(tktp::Sample(x, y), make_policy(tie_break, seed, algorithm));
        },
        py::arg("x"), py::arg("y"), py::arg("algorithm") = "fastbcs2",
        py::arg("tie_break") = "first", py::arg("seed") = 0,
        "Sequentially maximal monotone decreasing tau-path (pi, tau).");

    m.def(
        "verify_sequential_maximality",
        [](const std::vector<double>& x, const std::vector<double>& y,
           const tktp::TauPathResult& r) {
            return tktp::verify_sequential_maximality(tktp::Sample(x, y), r);
        },
        py::arg("x"), py::arg("y"), py::arg("result"));

    m.def(
        "taupath_mamle",
        [](const std::vector<double>& tau, std::int32_t window) {
            return tktp::taupath_mamle(tau, window);
        },
        py::arg("tau"), py::arg("window"),
        "Windowed truncated-geometric MLE curve along a stage-indexed tau sequence.");

    m.def("truncated_geom_mle",
          [](const std::vector<double>& v, const std::vector<std::int32_t>& m) {
              return tktp::truncated_geom_mle(v, m);
          });

    m.def(
        "generate_reject_boundary",
        [](std::int32_t n, std::int32_t window, std::int32_t nsim, double alpha,
           std::uint64_t seed, int threads) {
            return tktp::generate_reject_boundary(n, window, nsim, alpha, seed, {}, threads);
        },
        py::arg("n"), py::arg("window") = 5, py::arg("nsim") = 10000, py::arg("alpha") = 0.05,
        py::arg("seed") = 1, py::arg("threads") = 0);

    m.def("stopping_point", &tktp::stopping_point, py::arg("mamle"), py::arg("boundary"),
          py::arg("alpha") = 0.05);

    m.def(
        "tktp",
        [](const std::vector<double>& x, const std::vector<double>& y, double alpha,
           std::int32_t window, std::int32_t nsim, std::uint64_t seed,
           const std::string& algorithm, const std::string& tie_break,
           const std::string& cache_dir, int threads) {
            tktp::TktpConfig cfg;
            cfg.alpha = alpha;
            cfg.window = window;
            cfg.nsim = nsim;
            cfg.seed = seed;
            cfg.policy = make_policy(tie_break, seed, algorithm);
            cfg.cache_dir = cache_dir;
            cfg.threads = threads;
            return tktp::tktp(tktp::Sample(x, y), cfg);
        },
        py::arg("x"), py::arg("y"), py::arg("alpha") = 0.05, py::arg("window") = 5,
        py::arg("nsim") = 10000, py::arg("seed") = 1, py::arg("algorithm") = "fastbcs2",
        py::arg("tie_break") = "first", py::arg("cache_dir") = "", py::arg("threads") = 0,
        "Full top-K tau-path screen; returns the selection and its diagnostics.");

    m.def("frank_theta_from_tau", &tktp::copula::frank_theta_from_tau, py::arg("tau"));
    m.def("frank_tau_from_theta", &tktp::copula::frank_tau_from_theta, py::arg("theta"));
    m.def("gaussian_r_from_tau", &tktp::copula::gaussian_r_from_tau, py::arg("tau"));
    m.def("gaussian_r_from_rho", &tktp::copula::gaussian_r_from_rho, py::arg("rho"));
    m.def("gaussian_tau_from_r", &tktp::copula::gaussian_tau_from_r, py::arg("r"));
    m.def("gaussian_rho_from_r", &tktp::copula::gaussian_rho_from_r, py::arg("r"));
    m.def("debye1", &tktp::copula::debye1, py::arg("x"));

    m.def(
        "copula_sample",
        [](const std::string& family, const std::string& kind, double value, std::int32_t n,
           std::uint64_t seed) {
            const tktp::Sample s = tktp::copula::draw(make_spec(family, kind, value), n, seed);
            return py::make_tuple(s.x, s.y);
        },
        py::arg("family"), py::arg("kind"), py::arg("value"), py::arg("n"), py::arg("seed") = 1,
        "Draw n points with uniform margins; returns (x, y).");

    m.def(
        "mixture_sample",
        [](const std::string& family, const std::string& kind, double value, double p,
           std::int32_t n, std::uint64_t seed) {
            const tktp::copula::MixtureSpec mix(make_spec(family, kind, value), p, n);
            const auto labeled = tktp::copula::sample_mixture(mix, seed);
            return py::make_tuple(labeled.sample.x, labeled.sample.y, labeled.label);
        },
        py::arg("family"), py::arg("kind"), py::arg("value"), py::arg("p"), py::arg("n"),
        py::arg("seed") = 1,
        "Mixture with the independence copula; returns (x, y, labels), label 0 = independent.");

    m.def("lis_power_floor", &tktp::simstudy::lis_power_floor, py::arg("n"),
          "Detectability floor 2 sqrt(n) - 1.758 n^(1/6).");

    m.def(
        "jaccard",
        [](const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
            std::vector<std::int32_t> sa = a, sb = b;
            std::sort(sa.begin(), sa.end());
            std::sort(sb.begin(), sb.end());
            return tktp::screen::jaccard(sa, sb);
        },
        py::arg("a"), py::arg("b"));
}
