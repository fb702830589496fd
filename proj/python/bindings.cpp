#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rislab/ast.hpp"
#include "rislab/channel.hpp"
#include "rislab/fbl.hpp"
#include "rislab/montecarlo.hpp"
#include "rislab/optimize.hpp"
#include "rislab/specfun.hpp"

namespace py = pybind11;
using namespace rislab;

namespace {

std::optional<NomaConfig> opt_noma(const py::object& noma) {
    if (noma.is_none()) return std::nullopt;
    return noma.cast<NomaConfig>();
}

}  // namespace

PYBIND11_MODULE(_rislab, m) {
    m.doc() = "Average secrecy throughput of reflecting-surface-assisted aerial links "
              "under finite-blocklength coding";

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("d_gr_m", &SystemConfig::d_gr_m)
        .def_readwrite("d_ra_m", &SystemConfig::d_ra_m)
        .def_readwrite("d_ge_m", &SystemConfig::d_ge_m)
        .def_readwrite("alpha", &SystemConfig::alpha)
        .def_readwrite("k_gr_db", &SystemConfig::k_gr_db)
        .def_readwrite("k_ra_db", &SystemConfig::k_ra_db)
        .def_readwrite("omega_gr", &SystemConfig::omega_gr)
        .def_readwrite("omega_ra", &SystemConfig::omega_ra)
        .def_readwrite("n_elements", &SystemConfig::n_elements)
        .def_readwrite("p_g_dbw", &SystemConfig::p_g_dbw)
        .def_readwrite("sigma2_a", &SystemConfig::sigma2_a)
        .def_readwrite("sigma2_e", &SystemConfig::sigma2_e)
        .def("rho_a", &SystemConfig::rho_a)
        .def("rho_e", &SystemConfig::rho_e)
        .def("delta_gain", &SystemConfig::delta_gain)
        .def("eve_mean_snr", &SystemConfig::eve_mean_snr)
        .def("__repr__", [](const SystemConfig& c) { return "SystemConfig(" + describe(c) + ")"; });

    py::class_<NomaConfig>(m, "NomaConfig")
        .def(py::init<>())
        .def_readwrite("a_a", &NomaConfig::a_a)
        .def_readwrite("omega_sic", &NomaConfig::omega_sic)
        .def_readwrite("omega_i", &NomaConfig::omega_i)
        .def("a_e", &NomaConfig::a_e)
        .def("__repr__", [](const NomaConfig& c) { return "NomaConfig(" + describe(c) + ")"; });

    py::class_<SecrecyCode>(m, "SecrecyCode")
        .def(py::init<>())
        .def(py::init([](int m_, double b, double delta) {
                 SecrecyCode c;
                 c.m = m_;
                 c.b = b;
                 c.delta = delta;
                 c.validate();
                 return c;
             }),
             py::arg("m"), py::arg("b"), py::arg("delta") = 1e-3)
        .def_readwrite("m", &SecrecyCode::m)
        .def_readwrite("b", &SecrecyCode::b)
        .def_readwrite("delta", &SecrecyCode::delta)
        .def("rate", &SecrecyCode::rate)
        .def("__repr__", [](const SecrecyCode& c) { return "SecrecyCode(" + describe(c) + ")"; });

    py::class_<CascadeGammaFit>(m, "CascadeGammaFit")
        .def_readonly("mu", &CascadeGammaFit::mu)
        .def_readonly("vartheta", &CascadeGammaFit::vartheta)
        .def_readonly("k_hat", &CascadeGammaFit::k_hat)
        .def_readonly("theta_hat", &CascadeGammaFit::theta_hat)
        .def_readonly("kappa", &CascadeGammaFit::kappa);

    py::enum_<AstKind>(m, "AstKind")
        .value("analytic", AstKind::analytic)
        .value("asymptotic", AstKind::asymptotic)
        .value("infinite_blocklength", AstKind::infinite_blocklength)
        .value("monte_carlo", AstKind::monte_carlo);

    py::class_<AstResult>(m, "AstResult")
        .def_readonly("value", &AstResult::value)
        .def_readonly("kind", &AstResult::kind)
        .def_readonly("eps_bar", &AstResult::eps_bar)
        .def_readonly("sem", &AstResult::sem)
        .def_readonly("components", &AstResult::components)
        .def_readonly("eps_bar_approx", &AstResult::eps_bar_approx)
        .def_readonly("meta", &AstResult::meta)
        .def("__repr__", [](const AstResult& r) {
            return "AstResult(value=" + std::to_string(r.value) + ", kind=" +
                   std::string(to_string(r.kind)) + ")";
        });

    py::enum_<Scenario>(m, "Scenario")
        .value("external", Scenario::external)
        .value("internal", Scenario::internal);

    py::class_<SimPlan>(m, "SimPlan")
        .def(py::init([](std::int64_t realizations, std::uint64_t seed, Scenario scenario) {
                 SimPlan p;
                 p.realizations = realizations;
                 p.seed = seed;
                 p.scenario = scenario;
                 return p;
             }),
             py::arg("realizations") = 100000, py::arg("seed") = 1,
             py::arg("scenario") = Scenario::external)
        .def_readwrite("realizations", &SimPlan::realizations)
        .def_readwrite("seed", &SimPlan::seed)
        .def_readwrite("scenario", &SimPlan::scenario)
        .def_readwrite("batch", &SimPlan::batch);

    py::enum_<Binding>(m, "Binding")
        .value("interior", Binding::interior)
        .value("reliability_bound", Binding::reliability_bound)
        .value("latency_bound", Binding::latency_bound);

    py::class_<OptResult>(m, "OptResult")
        .def_readonly("m_star", &OptResult::m_star)
        .def_readonly("ast_at_star", &OptResult::ast_at_star)
        .def_readonly("m_relaxed", &OptResult::m_relaxed)
        .def_readonly("feasible", &OptResult::feasible)
        .def_readonly("binding", &OptResult::binding)
        .def_readonly("fallback_grid_search", &OptResult::fallback_grid_search);

    m.def("q_func", &specfun::q_func, py::arg("x"));
    m.def("q_inv", &specfun::q_inv, py::arg("p"));
    m.def("laguerre_half", &specfun::laguerre_half, py::arg("x"));
    m.def("parabolic_cylinder_d", &specfun::parabolic_cylinder_d, py::arg("order"), py::arg("z"));
    m.def("reg_lower_gamma", &specfun::reg_lower_gamma, py::arg("a"), py::arg("x"));
    m.def("dispersion", &dispersion, py::arg("gamma"));
    m.def("secrecy_bler", &secrecy_bler, py::arg("gamma_a"), py::arg("gamma_e"), py::arg("code"));
    m.def("bler_no_secrecy", &bler_no_secrecy, py::arg("gamma"), py::arg("code"));

    m.def("fit_cascade", &fit_cascade, py::arg("cfg"));
    m.def("cdf_cascade_power", &cdf_cascade_power, py::arg("fit"), py::arg("z"));
    m.def("cdf_snr_external", &cdf_snr_external, py::arg("cfg"), py::arg("fit"), py::arg("x"));

    m.def(
        "ast_external",
        [](const SystemConfig& cfg, const CascadeGammaFit& fit, const SecrecyCode& code, int m2) {
            return ast_external(cfg, fit, code, m2);
        },
        py::arg("cfg"), py::arg("fit"), py::arg("code"), py::arg("m2") = 100);
    m.def("ast_external_asymptotic", &ast_external_asymptotic, py::arg("cfg"), py::arg("fit"),
          py::arg("code"));
    m.def(
        "ast_external_infblock",
        [](const SystemConfig& cfg, const CascadeGammaFit& fit, const SecrecyCode& code, int m2) {
            return ast_external_infblock(cfg, fit, code, m2);
        },
        py::arg("cfg"), py::arg("fit"), py::arg("code"), py::arg("m2") = 100);
    m.def(
        "ast_internal",
        [](const SystemConfig& cfg, const NomaConfig& noma, const CascadeGammaFit& fit,
           const SecrecyCode& code, int m2) { return ast_internal(cfg, noma, fit, code, m2); },
        py::arg("cfg"), py::arg("noma"), py::arg("fit"), py::arg("code"), py::arg("m2") = 100);
    m.def("ast_internal_asymptotic", &ast_internal_asymptotic, py::arg("cfg"), py::arg("noma"),
          py::arg("fit"), py::arg("code"), py::arg("perfect_sic"));
    m.def(
        "ast_internal_infblock",
        [](const SystemConfig& cfg, const NomaConfig& noma, const CascadeGammaFit& fit,
           const SecrecyCode& code, int m2) {
            return ast_internal_infblock(cfg, noma, fit, code, m2);
        },
        py::arg("cfg"), py::arg("noma"), py::arg("fit"), py::arg("code"), py::arg("m2") = 100);

    m.def(
        "simulate_ast",
        [](const SystemConfig& cfg, const SecrecyCode& code, const SimPlan& plan,
           const py::object& noma, int threads) {
            return simulate_ast(cfg, opt_noma(noma), code, plan, threads);
        },
        py::arg("cfg"), py::arg("code"), py::arg("plan"), py::arg("noma") = py::none(),
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());

    m.def(
        "optimize_blocklength",
        [](const SystemConfig& cfg, const SecrecyCode& code_template, int m_lo, int m_hi,
           Scenario scenario, const py::object& noma, double eps_th, double m_th) {
            auto curve = make_analytic_curve(cfg, opt_noma(noma), code_template, scenario);
            if (eps_th < 1.0 || m_th < 1e9)
                return optimize_constrained(curve, OptConstraints{eps_th, m_th}, m_lo, m_hi);
            return optimize_unconstrained(curve, m_lo, m_hi);
        },
        py::arg("cfg"), py::arg("code_template"), py::arg("m_lo") = 50, py::arg("m_hi") = 2000,
        py::arg("scenario") = Scenario::external, py::arg("noma") = py::none(),
        py::arg("eps_th") = 1.0, py::arg("m_th") = 1e9,
        py::call_guard<py::gil_scoped_release>());

    m.attr("__version__") = "0.1.0";
}
