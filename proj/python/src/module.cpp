#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bcj/channel.hpp"
#include "bcj/cli.hpp"
#include "bcj/constellation.hpp"
#include "bcj/errors.hpp"
#include "bcj/experiments.hpp"
#include "bcj/infometrics.hpp"
#include "bcj/io.hpp"
#include "bcj/schemes.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

bcj::EntropyMethod method_from(const std::string& name) {
    if (name == "auto") return bcj::EntropyMethod::Auto;
    if (name == "mc") return bcj::EntropyMethod::MonteCarlo;
    if (name == "quadrature") return bcj::EntropyMethod::Quadrature;
    throw std::invalid_argument("method must be auto, mc or quadrature");
}

bcj::EntropyBudget budget_from(const std::string& method, std::int64_t n_samples) {
    bcj::EntropyBudget b;
    b.method = method_from(method);
    b.n_samples = n_samples;
    return b;
}

py::dict estimate_dict(const bcj::MiEstimate& e) {
    return py::dict("value"_a = e.value, "std_error"_a = e.std_error, "n_samples"_a = e.n_samples,
                    "h_output"_a = e.h_output, "h_conditional"_a = e.h_conditional);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Blind cooperative jamming simulator for the Gaussian wiretap channel with helpers";
    m.attr("__version__") = bcj::cli::kVersion;

    static py::exception<bcj::CapExceeded> cap_exc(m, "CapExceeded", PyExc_ValueError);
    static py::exception<bcj::DegenerateGains> degenerate_exc(m, "DegenerateGains", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const bcj::CapExceeded& e) {
            py::set_error(cap_exc, e.what());
        } catch (const bcj::DegenerateGains& e) {
            py::set_error(degenerate_exc, e.what());
        }
    });

    py::enum_<bcj::SchemeKind>(m, "SchemeKind")
        .value("Blind", bcj::SchemeKind::Blind)
        .value("CsiAligned", bcj::SchemeKind::CsiAligned)
        .value("GaussianJam", bcj::SchemeKind::GaussianJam);

    py::class_<bcj::ChannelRealization>(m, "Channel")
        .def(py::init<>())
        .def_readwrite("m", &bcj::ChannelRealization::m)
        .def_readwrite("h", &bcj::ChannelRealization::h)
        .def_readwrite("g", &bcj::ChannelRealization::g)
        .def_readwrite("sigma1", &bcj::ChannelRealization::sigma1)
        .def_readwrite("sigma2", &bcj::ChannelRealization::sigma2)
        .def_readwrite("seed", &bcj::ChannelRealization::seed)
        .def("__repr__", [](const bcj::ChannelRealization& ch) { return nlohmann::json(ch).dump(); });

    m.def("sample_channel",
          [](int m_, std::uint64_t seed, double lo, double hi) { return bcj::sample_channel(m_, seed, {lo, hi}); },
          "m"_a, "seed"_a, "lo"_a = 0.5, "hi"_a = 2.0);

    py::class_<bcj::SchemeConfig>(m, "SchemeConfig")
        .def_readonly("kind", &bcj::SchemeConfig::kind)
        .def_readonly("m", &bcj::SchemeConfig::m)
        .def_readonly("p", &bcj::SchemeConfig::p)
        .def_readonly("delta", &bcj::SchemeConfig::delta)
        .def_readonly("gamma", &bcj::SchemeConfig::gamma)
        .def_readonly("q", &bcj::SchemeConfig::q)
        .def_readonly("a", &bcj::SchemeConfig::a)
        .def_readonly("alphas", &bcj::SchemeConfig::alphas)
        .def_readonly("c_bar", &bcj::SchemeConfig::c_bar)
        .def_readonly("trivial", &bcj::SchemeConfig::trivial)
        .def("__repr__", [](const bcj::SchemeConfig& c) { return nlohmann::json(c).dump(); });

    m.def("schedule_q", &bcj::schedule_q, "p"_a, "m"_a, "delta"_a);
    m.def("blind_gamma", [](const std::vector<double>& h, const std::vector<double>& alphas) {
        return bcj::blind_gamma(h, alphas);
    });
    m.def(
        "make_blind_scheme",
        [](int m_, double p, double delta, const std::vector<double>& h, double c_bar, std::uint64_t seed) {
            return bcj::make_blind_scheme(m_, p, delta, h, c_bar, seed);
        },
        "m"_a, "p"_a, "delta"_a, "h"_a, "c_bar"_a, "seed"_a);
    m.def(
        "make_csi_scheme",
        [](int m_, double p, double delta, const std::vector<double>& h, const std::vector<double>& g) {
            return bcj::make_csi_scheme(m_, p, delta, h, g, 0);
        },
        "m"_a, "p"_a, "delta"_a, "h"_a, "g"_a);
    m.def(
        "make_gaussian_jam_scheme",
        [](int m_, double p, double delta, const std::vector<double>& h, double c_bar, std::uint64_t seed) {
            return bcj::make_gaussian_jam_scheme(m_, p, delta, h, c_bar, seed);
        },
        "m"_a, "p"_a, "delta"_a, "h"_a, "c_bar"_a, "seed"_a);
    m.def(
        "encode",
        [](const bcj::SchemeConfig& cfg, const std::vector<double>& h, const std::vector<int>& v,
           const std::vector<int>& u, const std::vector<double>& jam_noise) {
            return bcj::encode(cfg, h, v, u, jam_noise).x;
        },
        "cfg"_a, "h"_a, "v"_a, "u"_a, "jam_noise"_a = std::vector<double>{});
    m.def("analytic_power",
          [](const bcj::SchemeConfig& cfg, const std::vector<double>& h) { return bcj::analytic_power(cfg, h); });

    py::class_<bcj::ScalarLattice>(m, "ScalarLattice")
        .def_property_readonly("size", &bcj::ScalarLattice::size)
        .def_property_readonly("collision", &bcj::ScalarLattice::collision)
        .def_property_readonly("points",
                               [](const bcj::ScalarLattice& l) {
                                   const auto p = l.points();
                                   return std::vector<double>(p.begin(), p.end());
                               })
        .def("nearest_point", [](const bcj::ScalarLattice& l, double y) { return bcj::nearest_point(y, l); })
        .def("min_distance", [](const bcj::ScalarLattice& l) { return bcj::min_distance(l); });

    m.def(
        "receiver_lattice",
        [](double h1, const std::vector<double>& alphas, double a, int q, int jam_streams) {
            return bcj::build_receiver_lattice(h1, alphas, a, q, jam_streams);
        },
        "h1"_a, "alphas"_a, "a"_a, "q"_a, "jam_streams"_a = -1);

    m.def(
        "dmin_study",
        [](int m_, const std::vector<int>& q_grid, int n_draws, std::uint64_t seed) {
            const auto s = bcj::fit_dmin_exponent(m_, q_grid, n_draws, seed);
            return py::dict("slopes"_a = s.slopes, "median_slope"_a = s.median_slope, "min_slope"_a = s.min_slope,
                            "redraws"_a = s.redraws);
        },
        "m"_a, "q_grid"_a, "n_draws"_a, "seed"_a);

    m.def("gaussian_entropy_bits", &bcj::gaussian_entropy_bits, "sigma"_a);
    m.def(
        "mixture_entropy",
        [](std::vector<double> means, std::vector<double> weights, double sigma, const std::string& method,
           std::int64_t n_samples, std::uint64_t seed) {
            const auto e = bcj::mixture_entropy({std::move(means), std::move(weights), sigma},
                                                budget_from(method, n_samples), seed);
            return std::make_tuple(e.value, e.std_error);
        },
        "means"_a, "weights"_a, "sigma"_a, "method"_a = "auto", "n_samples"_a = 200'000, "seed"_a = 0);
    m.def(
        "mi_pam",
        [](const std::vector<double>& coeffs, const std::vector<int>& qs, std::size_t designated, double sigma,
           const std::string& method, std::int64_t n_samples, std::uint64_t seed) {
            if (coeffs.size() != qs.size()) throw std::invalid_argument("coeffs and qs differ in length");
            std::vector<bcj::DiscreteInput> inputs;
            for (std::size_t i = 0; i < coeffs.size(); ++i) inputs.push_back(bcj::DiscreteInput::pam(coeffs[i], qs[i]));
            return estimate_dict(bcj::mi_discrete_input(inputs, designated, sigma, budget_from(method, n_samples), seed));
        },
        "coeffs"_a, "qs"_a, "designated"_a, "sigma"_a, "method"_a = "auto", "n_samples"_a = 200'000, "seed"_a = 0);
    m.def(
        "rate_lower_bound",
        [](const bcj::SchemeConfig& cfg, const bcj::ChannelRealization& ch, const std::string& method,
           std::int64_t n_samples, std::uint64_t seed) {
            const auto rb = bcj::rate_lower_bound(cfg, ch, budget_from(method, n_samples), seed);
            return py::dict("i_v_y1"_a = estimate_dict(rb.i_v_y1), "i_v_y2"_a = estimate_dict(rb.i_v_y2),
                            "bound"_a = rb.bound);
        },
        "cfg"_a, "channel"_a, "method"_a = "auto", "n_samples"_a = 200'000, "seed"_a = 0);
    m.def("gaussian_wiretap_capacity", &bcj::gaussian_wiretap_capacity, "h1"_a, "g1"_a, "p"_a);
    m.def("finite_delta_dof", &bcj::finite_delta_dof, "m"_a, "delta"_a);
    m.def("leakage_coefficient", &bcj::leakage_coefficient, "m"_a, "delta"_a);

    m.def(
        "sweep_csv",
        [](const std::string& kind, int m_, double delta, std::vector<double> p_grid, int draws, std::uint64_t seed,
           int workers, bool with_ser, bool with_rate, std::int64_t n_samples, std::int64_t max_trials) {
            bcj::SweepSpec spec;
            spec.kind = bcj::scheme_kind_from_string(kind);
            spec.m = m_;
            spec.delta = delta;
            spec.p_grid = std::move(p_grid);
            spec.n_draws = draws;
            spec.seed = seed;
            spec.workers = workers;
            spec.with_ser = with_ser;
            spec.with_rate = with_rate;
            spec.mi_budget.n_samples = n_samples;
            spec.ser_budget.max_trials = max_trials;
            bcj::SweepResult res;
            {
                py::gil_scoped_release release;
                res = bcj::sweep_power(spec);
            }
            return std::make_tuple(bcj::to_csv(bcj::sweep_table(res.rows)), res.warnings);
        },
        "kind"_a, "m"_a, "delta"_a, "p_grid"_a, "draws"_a = 10, "seed"_a = 1, "workers"_a = 1, "with_ser"_a = true,
        "with_rate"_a = true, "n_samples"_a = 200'000, "max_trials"_a = 1'000'000,
        "Runs a power sweep and returns (csv_text, warnings).");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = bcj::cli::run(args, out, err);
            }
            return std::make_tuple(code, out.str(), err.str());
        },
        "args"_a, "Runs a bcj command; returns (exit_code, stdout, stderr).");
}
