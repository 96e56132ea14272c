#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fekete/arith.hpp"
#include "fekete/eval.hpp"
#include "fekete/process.hpp"
#include "fekete/quad.hpp"
#include "fekete/util/parallel.hpp"
#include "fekete/verify.hpp"
#include "fekete/version.hpp"

namespace py = pybind11;
using namespace fekete;

namespace {

int resolve_threads(int threads) { return threads > 0 ? threads : default_threads(); }

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
    py::array_t<T> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())},
                       std::vector<py::ssize_t>{static_cast<py::ssize_t>(sizeof(T))});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::dict estimate_dict(const Estimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["std_error"] = e.std_error;
    d["n_samples"] = e.n_samples;
    d["seed"] = e.seed;
    d["mode"] = e.mode == Estimate::Mode::exact ? "exact" : "monte_carlo";
    return d;
}

MomentSpec make_spec(const std::vector<double>& t, const std::vector<int>& r,
                     const std::vector<int>& s) {
    MomentSpec spec;
    spec.nodes = t;
    spec.r = r;
    spec.s = s;
    spec.validate();
    return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fekete polynomial statistics and the limiting random process";
    m.attr("__version__") = kVersion;

    m.def("is_prime", &is_prime, py::arg("n"));

    py::class_<LegendreTable>(m, "LegendreTable")
        .def(py::init([](uint64_t p) { return legendre_table(p); }), py::arg("p"))
        .def_readonly("p", &LegendreTable::p)
        .def("sign", &LegendreTable::sign, py::arg("n"))
        .def("symbols", [](const LegendreTable& t) { return to_array(t.symbols); })
        .def("save", [](const LegendreTable& t, const std::string& path) { save_table(t, path); })
        .def_static("load", [](const std::string& path) { return load_table(path); });

    m.def("gauss_sum", [](uint64_t p) { return gauss_sum(legendre_table(p)); }, py::arg("p"));
    m.def(
        "quadratic_correlation",
        [](uint64_t p, int64_t n) { return quadratic_correlation(legendre_table(p), n); },
        py::arg("p"), py::arg("n"));

    m.def(
        "fekete_horner",
        [](uint64_t p, std::complex<double> z) { return fekete_horner(legendre_table(p), z); },
        py::arg("p"), py::arg("z"));

    m.def(
        "fekete_grid",
        [](uint64_t p, double t) {
            return to_array(fekete_grid(legendre_table(p), t));
        },
        py::arg("p"), py::arg("t"), "F_p at the arc points e((k+t)/p), k = 0..p-1");

    m.def(
        "arc_g",
        [](uint64_t p, uint64_t k, double t) { return ArcFunction(legendre_table(p), k).G(t); },
        py::arg("p"), py::arg("k"), py::arg("t"));
    m.def(
        "arc_h",
        [](uint64_t p, uint64_t k, double t) { return ArcFunction(legendre_table(p), k).H(t); },
        py::arg("p"), py::arg("k"), py::arg("t"));
    m.def(
        "arc_h_deriv",
        [](uint64_t p, uint64_t k, double t, int order) {
            return ArcFunction(legendre_table(p), k).H_deriv(t, order);
        },
        py::arg("p"), py::arg("k"), py::arg("t"), py::arg("order"));

    m.def(
        "mahler_fekete",
        [](uint64_t p, int nodes, int threads) {
            QuadConfig cfg;
            cfg.nodes = nodes;
            const MahlerResult r = mahler_fekete(legendre_table(p), cfg, resolve_threads(threads));
            py::dict d = estimate_dict(r.estimate);
            d["error_estimate"] = r.error_estimate;
            d["log_mean"] = r.log_mean;
            return d;
        },
        py::arg("p"), py::arg("nodes") = 32, py::arg("threads") = 0);

    m.def(
        "lq_norm_fekete",
        [](uint64_t p, double q, int nodes, int threads) {
            QuadConfig cfg;
            cfg.nodes = nodes;
            const LqResult r = lq_norm_fekete(legendre_table(p), q, cfg, resolve_threads(threads));
            py::dict d = estimate_dict(r.estimate);
            d["error_estimate"] = r.error_estimate;
            return d;
        },
        py::arg("p"), py::arg("q"), py::arg("nodes") = 32, py::arg("threads") = 0);

    m.def(
        "circle_zero_count",
        [](uint64_t p, int threads) {
            QuadConfig cfg;
            const ZeroCountResult r =
                circle_zero_count(legendre_table(p), cfg, resolve_threads(threads));
            py::dict d;
            d["count"] = r.count;
            d["ratio"] = r.ratio;
            d["endpoint_zeros"] = r.endpoint_zeros;
            return d;
        },
        py::arg("p"), py::arg("threads") = 0);

    m.def(
        "sample_pattern",
        [](int J, uint64_t seed, uint64_t index) {
            return to_array(sample_pattern(J, seed, index).signs);
        },
        py::arg("J"), py::arg("seed"), py::arg("index"));

    m.def(
        "truncated_h",
        [](py::array_t<int8_t> signs, double t, int order) {
            SignPattern pat;
            const auto buf = signs.unchecked<1>();
            if (buf.shape(0) % 2 == 0) throw std::domain_error("signs length must be 2J+1");
            pat.J = static_cast<int>((buf.shape(0) - 1) / 2);
            pat.signs.assign(buf.data(0), buf.data(0) + buf.shape(0));
            const TruncatedH h(pat);
            if (order == 0) return h.value(t);
            if (order == 1) return h.deriv1(t);
            if (order == 2) return h.deriv2(t);
            throw std::domain_error("order must be 0, 1 or 2");
        },
        py::arg("signs"), py::arg("t"), py::arg("order") = 0);

    m.def("second_moment_exact",
          [](double t, py::object J) {
              return J.is_none() ? second_moment_exact(t)
                                 : second_moment_exact(t, J.cast<int>());
          },
          py::arg("t"), py::arg("J") = py::none());
    m.def("fourth_moment_exact", &fourth_moment_exact, py::arg("t"), py::arg("J"));

    m.def(
        "k0_estimate",
        [](int J, uint64_t samples, const std::string& mode, uint64_t seed, int nodes, int threads) {
            QuadConfig cfg;
            cfg.nodes = nodes;
            const auto md = mode == "exact" ? Estimate::Mode::exact : Estimate::Mode::monte_carlo;
            const K0Result r = k0_estimate(J, samples, md, seed, cfg, resolve_threads(threads));
            py::dict d = estimate_dict(r.k0);
            d["A"] = r.log_integral.value;
            d["A_std_error"] = r.log_integral.std_error;
            d["resample_incidents"] = r.resample_incidents;
            return d;
        },
        py::arg("J"), py::arg("samples") = 10000, py::arg("mode") = "mc", py::arg("seed") = 1,
        py::arg("nodes") = 32, py::arg("threads") = 0);

    m.def(
        "kq_estimate",
        [](double q, int J, uint64_t samples, uint64_t seed, int nodes, int threads) {
            QuadConfig cfg;
            cfg.nodes = nodes;
            return estimate_dict(kq_estimate(q, J, samples, seed, cfg, resolve_threads(threads)));
        },
        py::arg("q"), py::arg("J"), py::arg("samples") = 10000, py::arg("seed") = 1,
        py::arg("nodes") = 32, py::arg("threads") = 0);

    m.def(
        "moment_lhs",
        [](uint64_t p, const std::vector<double>& t, const std::vector<int>& r,
           const std::vector<int>& s, int threads) {
            return moment_lhs(legendre_table(p), make_spec(t, r, s), resolve_threads(threads));
        },
        py::arg("p"), py::arg("t"), py::arg("r"), py::arg("s"), py::arg("threads") = 0);
    m.def(
        "moment_rhs_exact",
        [](int J, const std::vector<double>& t, const std::vector<int>& r,
           const std::vector<int>& s) { return moment_rhs_exact(J, make_spec(t, r, s)); },
        py::arg("J"), py::arg("t"), py::arg("r"), py::arg("s"));

    m.def(
        "distribution_compare",
        [](uint64_t p, int J, uint64_t samples, int grid_per_arc, uint64_t seed, int threads) {
            const DistReport rep =
                distribution_compare(legendre_table(p), default_rectangles(), J, samples,
                                     grid_per_arc, seed, resolve_threads(threads));
            py::dict d;
            d["max_gap"] = rep.max_gap;
            d["empirical"] = rep.empirical;
            d["process"] = rep.process;
            d["gap"] = rep.gap;
            return d;
        },
        py::arg("p"), py::arg("J") = 1000, py::arg("samples") = 100000, py::arg("grid_per_arc") = 100,
        py::arg("seed") = 1, py::arg("threads") = 0);

    m.def(
        "sup_norms",
        [](uint64_t p, int threads) {
            const SupNormReport rep = sup_norm_report(legendre_table(p), resolve_threads(threads));
            py::dict d;
            d["sup_F"] = rep.sup_F;
            d["sup_dF"] = rep.sup_dF;
            return d;
        },
        py::arg("p"), py::arg("threads") = 0);
}
