// Experiment CLI: analytic/simulated secrecy-throughput evaluation, sweep
// runner, blocklength optimizer and a quick numerical self-check.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rislab/ast.hpp"
#include "rislab/channel.hpp"
#include "rislab/experiment.hpp"
#include "rislab/fbl.hpp"
#include "rislab/montecarlo.hpp"
#include "rislab/optimize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInfeasible = 3;

struct CommonOpts {
    std::string config_path;
    std::string scenario = "external";
    std::uint64_t seed = 1;
    std::int64_t realizations = 100000;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rislab::SpecError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// analyze/simulate/optimize accept the same flat config format as sweep
// specs; the [experiment] section is optional there.
rislab::ExperimentSpec load_point_config(const CommonOpts& o) {
    rislab::ExperimentSpec spec;
    if (!o.config_path.empty()) {
        std::string text = read_file(o.config_path);
        if (text.find("[experiment]") == std::string::npos)
            text = "[experiment]\nname = point\nsweep = m\nsweep_start = 1\nsweep_stop = 1\n"
                   "series = analytic\n" + text;
        spec = rislab::parse_experiment(text);
    } else {
        spec.series = {rislab::AstKind::analytic};
        spec.sweep_start = spec.sweep_stop = 1.0;
    }
    if (o.scenario == "internal") {
        spec.scenario = rislab::Scenario::internal;
        spec.has_noma = true;
    } else if (o.scenario == "external") {
        spec.scenario = rislab::Scenario::external;
    } else {
        throw rislab::SpecError("--scenario must be external or internal");
    }
    spec.plan.scenario = spec.scenario;
    spec.plan.seed = o.seed;
    spec.plan.realizations = o.realizations;
    return spec;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const rislab::SpecError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_analyze(const CommonOpts& o, const std::string& series_csv) {
    auto spec = load_point_config(o);
    auto fit = rislab::fit_cascade(spec.system);
    bool internal = spec.scenario == rislab::Scenario::internal;
    std::optional<rislab::NomaConfig> noma =
        internal ? std::optional<rislab::NomaConfig>(spec.noma) : std::nullopt;

    std::cout << "scenario: " << to_string(spec.scenario) << "\n"
              << "cascade fit: k_hat=" << fit.k_hat << " theta_hat=" << fit.theta_hat << "\n"
              << "code: m=" << spec.code.m << " b=" << spec.code.b << " delta=" << spec.code.delta
              << "\n";
    bool any_nan = false;
    for (const auto& name : {"analytic", "asymptotic", "infinite_blocklength", "monte_carlo"}) {
        if (series_csv.find(name) == std::string::npos) continue;
        rislab::AstResult r;
        if (std::string(name) == "analytic")
            r = internal ? rislab::ast_internal(spec.system, spec.noma, fit, spec.code)
                         : rislab::ast_external(spec.system, fit, spec.code);
        else if (std::string(name) == "asymptotic")
            r = internal ? rislab::ast_internal_asymptotic(spec.system, spec.noma, fit, spec.code,
                                                           spec.noma.omega_sic == 0.0)
                         : rislab::ast_external_asymptotic(spec.system, fit, spec.code);
        else if (std::string(name) == "infinite_blocklength")
            r = internal ? rislab::ast_internal_infblock(spec.system, spec.noma, fit, spec.code)
                         : rislab::ast_external_infblock(spec.system, fit, spec.code);
        else
            r = rislab::simulate_ast(spec.system, noma, spec.code, spec.plan);
        std::cout << name << ": ast=" << r.value << " bpcu, eps_bar=" << r.eps_bar;
        if (r.kind == rislab::AstKind::monte_carlo) std::cout << " sem=" << r.sem;
        if (r.components)
            std::cout << " eps_first=" << r.components->first
                      << " eps_second=" << r.components->second;
        std::cout << "\n";
        if (std::isnan(r.value)) any_nan = true;
    }
    return any_nan ? kExitNumerical : kExitOk;
}

int cmd_simulate(const CommonOpts& o) {
    auto spec = load_point_config(o);
    std::optional<rislab::NomaConfig> noma = spec.scenario == rislab::Scenario::internal
                                                 ? std::optional<rislab::NomaConfig>(spec.noma)
                                                 : std::nullopt;
    auto r = rislab::simulate_ast(spec.system, noma, spec.code, spec.plan);
    std::cout << "monte_carlo: ast=" << r.value << " bpcu, eps_bar=" << r.eps_bar
              << " sem=" << r.sem << " realizations=" << spec.plan.realizations
              << " seed=" << spec.plan.seed << "\n";
    if (r.components)
        std::cout << "stages: eps_first=" << r.components->first
                  << " eps_second=" << r.components->second
                  << " eps_bar_additive=" << r.eps_bar_approx << "\n";
    return std::isnan(r.value) ? kExitNumerical : kExitOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir, std::uint64_t seed,
              bool seed_set, std::int64_t realizations, bool realizations_set,
              const std::string& series_csv) {
    auto spec = rislab::parse_experiment(read_file(spec_path));
    if (seed_set) spec.plan.seed = seed;
    if (realizations_set) spec.plan.realizations = realizations;
    if (!series_csv.empty()) {
        spec.series.clear();
        std::stringstream ss(series_csv);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "analytic") spec.series.push_back(rislab::AstKind::analytic);
            else if (item == "asymptotic") spec.series.push_back(rislab::AstKind::asymptotic);
            else if (item == "infinite_blocklength")
                spec.series.push_back(rislab::AstKind::infinite_blocklength);
            else if (item == "monte_carlo") spec.series.push_back(rislab::AstKind::monte_carlo);
            else throw rislab::SpecError("--series: unknown series '" + item + "'");
        }
    }
    spec.validate();
    std::filesystem::create_directories(out_dir);
    rislab::ResultTable table = spec.kind == rislab::ExperimentKind::optimizer
                                    ? rislab::run_optimizer_sweep(spec)
                                    : rislab::run_experiment(spec);
    std::string csv_path = out_dir + "/" + spec.name + ".csv";
    rislab::write_csv_atomic(table, csv_path);
    std::ofstream gp(out_dir + "/" + spec.name + ".gp");
    gp << rislab::gnuplot_script(spec, spec.name + ".csv");
    std::cout << "wrote " << csv_path << " (" << table.rows.size() << " rows)\n";
    if (!table.summary.empty()) std::cout << table.summary;
    bool any_error = false;
    for (const auto& r : table.rows)
        if (r.notes.find("error:") != std::string::npos) any_error = true;
    if (any_error) std::cout << "warning: some rows carry error markers\n";
    return any_error ? kExitNumerical : kExitOk;
}

int cmd_optimize(const CommonOpts& o, int m_lo, int m_hi, double eps_th, double m_th) {
    auto spec = load_point_config(o);
    std::optional<rislab::NomaConfig> noma = spec.scenario == rislab::Scenario::internal
                                                 ? std::optional<rislab::NomaConfig>(spec.noma)
                                                 : std::nullopt;
    auto curve = rislab::make_analytic_curve(spec.system, noma, spec.code, spec.scenario);
    rislab::OptResult res;
    if (eps_th < 1.0 || m_th < 1e9) {
        rislab::OptConstraints cons{eps_th, m_th};
        res = rislab::optimize_constrained(curve, cons, m_lo, m_hi);
    } else {
        res = rislab::optimize_unconstrained(curve, m_lo, m_hi);
    }
    std::cout << "m_star=" << res.m_star << " ast=" << res.ast_at_star
              << " m_relaxed=" << res.m_relaxed << " binding=" << to_string(res.binding)
              << " feasible=" << (res.feasible ? "yes" : "no")
              << (res.fallback_grid_search ? " (grid fallback)" : "") << "\n";
    return res.feasible ? kExitOk : kExitInfeasible;
}

int cmd_selftest() {
    using namespace rislab;
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    bool reflect = true;
    for (double x = -8.0; x <= 8.0; x += 0.25)
        reflect = reflect && std::abs(specfun::q_func(x) + specfun::q_func(-x) - 1.0) < 1e-13;
    check("q reflection", reflect);

    bool round_trip = true;
    for (double p : {1e-6, 1e-3, 0.1, 0.5, 0.9})
        round_trip = round_trip && std::abs(specfun::q_func(specfun::q_inv(p)) - p) / p < 1e-9;
    check("q round trip", round_trip);

    bool dual = true;
    for (double a : {0.5, 2.5, 10.0})
        for (double x : {0.3, 1.7, 9.0})
            dual = dual && std::abs(specfun::reg_lower_gamma_series(a, x) -
                                    specfun::reg_lower_gamma_contfrac(a, x)) < 1e-12;
    check("incomplete gamma dual path", dual);

    SystemConfig cfg;
    SecrecyCode code;
    auto fit = fit_cascade(cfg);
    double a100 = ast_external(cfg, fit, code, 100).value;
    double a200 = ast_external(cfg, fit, code, 200).value;
    check("quadrature doubling", std::abs(a100 - a200) < 1e-6 * std::abs(a200));

    SimPlan plan;
    plan.realizations = 20000;
    plan.seed = 7;
    auto s1 = simulate_ast(cfg, std::nullopt, code, plan, 1);
    auto s2 = simulate_ast(cfg, std::nullopt, code, plan, 4);
    check("simulation worker independence", s1.value == s2.value && s1.sem == s2.sem);
    check("analytic vs simulation", std::abs(a200 - s1.value) < std::max(0.02, 3.0 * s1.sem));

    std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy-throughput analysis for reflecting-surface-assisted aerial links"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string series = "analytic,monte_carlo";

    auto add_common = [&](CLI::App* sub, bool with_series) {
        sub->add_option("--config", common.config_path, "flat key-value config file");
        sub->add_option("--scenario", common.scenario, "external|internal")
            ->check(CLI::IsMember({"external", "internal"}));
        sub->add_option("--seed", common.seed, "simulation seed");
        sub->add_option("--realizations", common.realizations, "simulation sample count");
        if (with_series) sub->add_option("--series", series, "comma-separated series list");
    };

    auto* analyze = app.add_subcommand("analyze", "evaluate one configuration point");
    add_common(analyze, true);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation only");
    add_common(simulate, false);

    std::string spec_path, out_dir = ".";
    std::uint64_t sweep_seed = 0;
    std::int64_t sweep_realizations = 0;
    std::string sweep_series;
    auto* sweep = app.add_subcommand("sweep", "run an experiment spec file");
    sweep->add_option("spec", spec_path, "experiment spec file")->required();
    sweep->add_option("--out", out_dir, "output directory");
    auto* seed_opt = sweep->add_option("--seed", sweep_seed, "override spec seed");
    auto* real_opt =
        sweep->add_option("--realizations", sweep_realizations, "override spec sample count");
    sweep->add_option("--series", sweep_series, "override spec series list");

    int m_lo = 50, m_hi = 2000;
    double eps_th = 1.0, m_th = 1e9;
    auto* optimize = app.add_subcommand("optimize", "blocklength optimization");
    add_common(optimize, false);
    optimize->add_option("--m-lo", m_lo, "lower blocklength bound");
    optimize->add_option("--m-hi", m_hi, "upper blocklength bound");
    optimize->add_option("--eps-th", eps_th, "maximum tolerable average block error");
    optimize->add_option("--m-th", m_th, "maximum blocklength (latency bound)");

    app.add_subcommand("selftest", "run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        if (app.got_subcommand("analyze")) return cmd_analyze(common, series);
        if (app.got_subcommand("simulate")) return cmd_simulate(common);
        if (app.got_subcommand("sweep"))
            return cmd_sweep(spec_path, out_dir, sweep_seed, seed_opt->count() > 0,
                             sweep_realizations, real_opt->count() > 0, sweep_series);
        if (app.got_subcommand("optimize")) return cmd_optimize(common, m_lo, m_hi, eps_th, m_th);
        if (app.got_subcommand("selftest")) return cmd_selftest();
        return kExitValidation;
    });
}
