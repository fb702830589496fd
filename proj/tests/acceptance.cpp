// Acceptance suite: each criterion prints one [PASS]/[FAIL] line; the exit
// code is the number of failed criteria.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "rislab/ast.hpp"
#include "rislab/channel.hpp"
#include "rislab/experiment.hpp"
#include "rislab/fbl.hpp"
#include "rislab/montecarlo.hpp"
#include "rislab/optimize.hpp"

using namespace rislab;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

SecrecyCode make_code(int m, double b, double delta = 1e-3) {
    SecrecyCode c;
    c.m = m;
    c.b = b;
    c.delta = delta;
    return c;
}

template <class F>
void parallel_for(int n, F&& f) {
    int workers = std::min(n, resolve_threads(0));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) f(i);
        });
    for (auto& t : pool) t.join();
}

// Exactly one local maximum up to plateau ties.
bool unimodal(const std::vector<double>& v, double tol) {
    size_t peak = 0;
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[peak]) peak = i;
    for (size_t i = 0; i + 1 < peak; ++i)
        if (v[i] > v[i + 1] + tol) return false;
    for (size_t i = peak; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i] + tol) return false;
    return true;
}

void criterion1_external_oracle() {
    auto t0 = std::chrono::steady_clock::now();
    SystemConfig cfg;
    auto fit = fit_cascade(cfg);
    struct Case { int m; double b; };
    std::vector<Case> cases;
    for (int m : {100, 200, 400, 800})
        for (double b : {200.0, 300.0}) cases.push_back({m, b});
    std::vector<std::string> details(cases.size());
    std::vector<bool> ok(cases.size());
    parallel_for(static_cast<int>(cases.size()), [&](int i) {
        auto code = make_code(cases[i].m, cases[i].b);
        auto analytic = ast_external(cfg, fit, code);
        SimPlan plan;
        plan.realizations = 100000;
        plan.seed = 1000 + i;
        auto mc = simulate_ast(cfg, std::nullopt, code, plan, 1);
        double gap = std::abs(analytic.value - mc.value);
        double tol = std::max(0.02, 3.0 * mc.sem);
        ok[i] = gap <= tol;
        std::ostringstream os;
        os << "m=" << cases[i].m << " B=" << cases[i].b << " |gap|=" << gap << " tol=" << tol;
        details[i] = os.str();
    });
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = secs <= 60.0;
    std::ostringstream os;
    for (size_t i = 0; i < cases.size(); ++i) {
        if (!ok[i]) pass = false;
        os << (i ? "; " : "") << details[i] << (ok[i] ? "" : " <-");
    }
    os << "; runtime=" << secs << "s";
    report(1, "oracle equivalence (external)", pass, os.str());
}

void criterion2_internal_oracle() {
    SystemConfig cfg;
    NomaConfig noma;
    auto fit = fit_cascade(cfg);
    auto code = make_code(300, 150.0);
    auto analytic = ast_internal(cfg, noma, fit, code);
    SimPlan plan;
    plan.realizations = 100000;
    plan.seed = 2000;
    plan.scenario = Scenario::internal;
    auto mc = simulate_ast(cfg, noma, code, plan);
    double gap = std::abs(analytic.value - mc.value);
    double tol = std::max(0.02, 3.0 * mc.sem);
    double comp_gap = std::abs(mc.eps_bar - mc.eps_bar_approx);
    bool pass = gap <= tol && comp_gap < 0.01;
    std::ostringstream os;
    os << "|analytic-mc|=" << gap << " tol=" << tol
       << "; |eps_exact-eps_additive|=" << comp_gap << " (<0.01)";
    report(2, "oracle equivalence (internal)", pass, os.str());
}

void criterion3_residual_interference_deltas() {
    SystemConfig cfg;
    NomaConfig noma;
    noma.a_a = 0.3;
    auto code = make_code(300, 150.0);
    auto mc_at = [&](double p_dbw, double omega) {
        SystemConfig c = cfg;
        c.p_g_dbw = p_dbw;
        NomaConfig n = noma;
        n.omega_sic = omega;
        SimPlan plan;
        plan.realizations = 100000;
        plan.seed = 3000;  // shared randomness across the omega pair
        plan.scenario = Scenario::internal;
        return simulate_ast(c, n, code, plan).value;
    };
    double d20 = mc_at(20.0, 0.01) - mc_at(20.0, 0.05);
    double d26 = mc_at(26.0, 0.01) - mc_at(26.0, 0.05);
    bool pass = std::abs(d20 - 0.09) <= 0.03 && std::abs(d26 - 0.16) <= 0.03;
    std::ostringstream os;
    os << "delta(20 dBW)=" << d20 << " (expect 0.09±0.03); delta(26 dBW)=" << d26
       << " (expect 0.16±0.03)";
    report(3, "residual-interference throughput deltas", pass, os.str());
}

void criterion4_infinite_blocklength_convergence() {
    SystemConfig cfg;
    NomaConfig noma;
    auto fit = fit_cascade(cfg);
    std::ostringstream os;
    bool pass = true;

    auto run = [&](const char* tag, auto fin, auto inf) {
        double prev = 1e100;
        double last = 0.0;
        bool mono = true;
        for (int m : {1000, 10000, 100000}) {
            double f = fin(m);
            double i = inf(m);
            double rel = std::abs(f - i) / i;
            if (rel >= prev) mono = false;
            prev = rel;
            last = rel;
        }
        bool ok = mono && last < 1e-3;
        os << tag << ": monotone=" << (mono ? "yes" : "no") << " rel@1e5=" << last << "; ";
        if (!ok) pass = false;
    };
    run("external B=300",
        [&](int m) { return ast_external(cfg, fit, make_code(m, 300.0)).value; },
        [&](int m) { return ast_external_infblock(cfg, fit, make_code(m, 300.0)).value; });
    run("internal B=150",
        [&](int m) { return ast_internal(cfg, noma, fit, make_code(m, 150.0)).value; },
        [&](int m) { return ast_internal_infblock(cfg, noma, fit, make_code(m, 150.0)).value; });
    report(4, "infinite-blocklength convergence", pass, os.str());
}

void criterion5_high_snr_asymptotes() {
    SystemConfig cfg;
    auto code_ext = make_code(200, 300.0);
    std::ostringstream os;
    bool pass = true;

    SystemConfig hp = cfg;
    hp.p_g_dbw = 50.0;
    auto fit_hp = fit_cascade(hp);
    double ext_gap = std::abs(ast_external(hp, fit_hp, code_ext).value -
                              ast_external_asymptotic(hp, fit_hp, code_ext).value);
    os << "external |50dBW-limit|=" << ext_gap;
    if (ext_gap >= 0.02) pass = false;

    NomaConfig perfect;
    perfect.omega_sic = 0.0;
    auto code_int = make_code(300, 150.0);
    SystemConfig hp55 = cfg;
    hp55.p_g_dbw = 55.0;
    auto fit55 = fit_cascade(hp55);
    double p_gap = std::abs(ast_internal(hp55, perfect, fit55, code_int).value -
                            ast_internal_asymptotic(hp55, perfect, fit55, code_int, true).value);
    os << "; perfect-SIC |55dBW-limit|=" << p_gap;
    if (p_gap >= 0.02) pass = false;

    NomaConfig imperfect;  // omega = 0.01
    double prev = 1e9;
    bool decreasing = true;
    double last = 0.0;
    for (double p : {40.0, 45.0, 50.0}) {
        SystemConfig c = cfg;
        c.p_g_dbw = p;
        SimPlan plan;
        plan.realizations = 100000;
        plan.seed = 5000;
        plan.scenario = Scenario::internal;
        last = simulate_ast(c, imperfect, code_int, plan).value;
        if (last >= prev) decreasing = false;
        prev = last;
    }
    os << "; imperfect-SIC mc@50dBW=" << last << " decreasing=" << (decreasing ? "yes" : "no");
    if (!(last < 0.05 && decreasing)) pass = false;

    report(5, "high-power asymptotes", pass, os.str());
}

void criterion6_optimizer_correctness() {
    std::ostringstream os;
    bool pass = true;
    CounterRng rng(606, 0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); };

    int grid_mismatches = 0;
    for (int t = 0; t < 5; ++t) {
        SystemConfig cfg;
        cfg.p_g_dbw = uniform(15.0, 45.0);
        const int ns[4] = {36, 64, 100, 144};
        cfg.n_elements = ns[static_cast<int>(uniform(0.0, 3.999))];
        auto code = make_code(200, uniform(100.0, 400.0), uniform(0.0, 1.0) < 0.5 ? 1e-2 : 1e-3);
        auto curve = make_analytic_curve(cfg, std::nullopt, code, Scenario::external);
        auto res = optimize_unconstrained(curve, 50, 2000);
        int brute = 50;
        double best = curve.ast(50);
        for (int m = 51; m <= 2000; ++m) {
            double v = curve.ast(m);
            if (v > best) { best = v; brute = m; }
        }
        if (res.m_star != brute && std::abs(res.ast_at_star - best) > 1e-10) ++grid_mismatches;

        // constrained vs feasible brute force
        double eps_th = uniform(0.02, 0.3);
        double m_th = uniform(100.0, 1500.0);
        auto cres = optimize_constrained(curve, OptConstraints{eps_th, m_th}, 50, 2000);
        int cbest = -1;
        double cbest_val = -1.0;
        for (int m = 50; m <= std::min(2000, static_cast<int>(m_th)); ++m) {
            if (curve.eps(m) > eps_th) continue;
            double v = curve.ast(m);
            if (v > cbest_val) { cbest_val = v; cbest = m; }
        }
        if (cbest < 0) {
            if (cres.feasible) ++grid_mismatches;
        } else if (!cres.feasible ||
                   (cres.m_star != cbest && std::abs(cres.ast_at_star - cbest_val) > 1e-10)) {
            ++grid_mismatches;
        }
    }
    os << "grid mismatches=" << grid_mismatches << "/10";
    if (grid_mismatches) pass = false;

    // power sweep trends under both leakage caps
    bool ast_monotone = true, m_monotone = true, dominance = true;
    double prev_ast = -1.0;
    int prev_m = 1 << 30;
    for (double p : {10.0, 20.0, 30.0, 40.0}) {
        SystemConfig cfg;
        cfg.p_g_dbw = p;
        auto loose = optimize_unconstrained(
            make_analytic_curve(cfg, std::nullopt, make_code(200, 300.0, 1e-2), Scenario::external),
            50, 2000);
        auto tight = optimize_unconstrained(
            make_analytic_curve(cfg, std::nullopt, make_code(200, 300.0, 1e-3), Scenario::external),
            50, 2000);
        if (loose.ast_at_star < tight.ast_at_star - 1e-12) dominance = false;
        if (tight.ast_at_star < prev_ast - 1e-12) ast_monotone = false;
        if (tight.m_star > prev_m) m_monotone = false;
        prev_ast = tight.ast_at_star;
        prev_m = tight.m_star;
    }
    os << "; optimal AST nondecreasing=" << (ast_monotone ? "yes" : "no")
       << "; m* nonincreasing=" << (m_monotone ? "yes" : "no")
       << "; looser leakage dominates=" << (dominance ? "yes" : "no");
    if (!(ast_monotone && m_monotone && dominance)) pass = false;

    report(6, "optimizer correctness", pass, os.str());
}

void criterion7_unimodality_suite() {
    std::ostringstream os;
    bool pass = true;
    CounterRng rng(707, 0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); };

    int bad_scans = 0;
    struct Scan { SystemConfig cfg; NomaConfig noma; SecrecyCode code; bool internal; };
    std::vector<Scan> scans;
    for (int t = 0; t < 5; ++t) {
        Scan s;
        s.cfg.p_g_dbw = uniform(20.0, 40.0);
        s.code = make_code(200, uniform(150.0, 350.0));
        s.internal = false;
        scans.push_back(s);
    }
    for (int t = 0; t < 5; ++t) {
        Scan s;
        s.cfg.p_g_dbw = uniform(22.0, 32.0);
        s.noma.a_a = uniform(0.15, 0.35);
        s.noma.omega_sic = uniform(0.005, 0.03);
        s.code = make_code(300, uniform(80.0, 200.0));
        s.internal = true;
        scans.push_back(s);
    }
    std::vector<bool> scan_ok(scans.size());
    parallel_for(static_cast<int>(scans.size()), [&](int idx) {
        const Scan& s = scans[idx];
        auto fit = fit_cascade(s.cfg);
        auto grid_i = interference_grid(s.cfg, s.noma);
        auto grid_j = eve_grid_internal(s.cfg, s.noma);
        auto grid_e = eve_grid_external(s.cfg);
        std::vector<double> vals;
        for (int m = 50; m <= 2000; m += 10) {
            auto code = s.code;
            code.m = m;
            vals.push_back(s.internal
                               ? ast_internal(s.cfg, s.noma, fit, code, grid_i, grid_j).value
                               : ast_external(s.cfg, fit, code, grid_e).value);
        }
        scan_ok[idx] = unimodal(vals, 1e-10);
    });
    for (bool ok : scan_ok)
        if (!ok) ++bad_scans;
    os << "non-unimodal blocklength scans=" << bad_scans << "/10";
    if (bad_scans) pass = false;

    // power-fraction sweep
    SystemConfig cfg25;
    cfg25.p_g_dbw = 25.0;
    auto fit25 = fit_cascade(cfg25);
    auto code_int = make_code(300, 150.0);
    std::vector<double> by_aa;
    for (double aa = 0.05; aa <= 0.451; aa += 0.01) {
        NomaConfig n;
        n.a_a = aa;
        n.omega_sic = 0.01;
        by_aa.push_back(ast_internal(cfg25, n, fit25, code_int).value);
    }
    bool aa_ok = unimodal(by_aa, 1e-10);
    os << "; power-fraction unimodal=" << (aa_ok ? "yes" : "no");
    if (!aa_ok) pass = false;

    // element-count monotonicity
    bool n_ok = true;
    double prev_e = -1.0, prev_i = -1.0;
    for (int n : {36, 64, 100, 144}) {
        SystemConfig c;
        c.n_elements = n;
        auto fit = fit_cascade(c);
        NomaConfig noma;
        double ve = ast_external(c, fit, make_code(200, 300.0)).value;
        double vi = ast_internal(c, noma, fit, code_int).value;
        if (ve < prev_e - 1e-12 || vi < prev_i - 1e-12) n_ok = false;
        prev_e = ve;
        prev_i = vi;
    }
    os << "; nondecreasing in N=" << (n_ok ? "yes" : "no");
    if (!n_ok) pass = false;

    report(7, "unimodality and element-count trends", pass, os.str());
}

void criterion8_numerics_suite() {
    std::ostringstream os;
    bool pass = true;

    bool reflect = true;
    for (double x = -8.0; x <= 8.0; x += 1.0 / 64.0)
        reflect = reflect && std::abs(specfun::q_func(x) + specfun::q_func(-x) - 1.0) < 1e-13;
    os << "q reflection=" << (reflect ? "ok" : "BAD");
    pass = pass && reflect;

    bool round_trip = true;
    for (double p : {1e-6, 1e-3, 0.1, 0.5, 0.9})
        round_trip = round_trip && std::abs(specfun::q_func(specfun::q_inv(p)) - p) / p < 1e-9;
    os << "; q round trip=" << (round_trip ? "ok" : "BAD");
    pass = pass && round_trip;

    bool dual = true;
    for (double a : {0.4, 2.5, 12.0, 80.0})
        for (double f : {0.3, 0.9, 1.0, 1.4, 2.5}) {
            double x = a * f;
            dual = dual && std::abs(specfun::reg_lower_gamma_series(a, x) -
                                    specfun::reg_lower_gamma_contfrac(a, x)) < 1e-12;
        }
    os << "; gamma dual-path=" << (dual ? "ok" : "BAD");
    pass = pass && dual;

    bool pcd0 = std::abs(specfun::parabolic_cylinder_d(0.0, 2.0) - std::exp(-1.0)) < 1e-10;
    double d1_expect =
        std::exp(0.25) * std::sqrt(specfun::kPi / 2.0) * std::erfc(1.0 / std::sqrt(2.0));
    bool pcd1 = std::abs(specfun::parabolic_cylinder_d(-1.0, 1.0) - d1_expect) < 1e-9;
    os << "; cylinder closed forms=" << ((pcd0 && pcd1) ? "ok" : "BAD");
    pass = pass && pcd0 && pcd1;

    // quadrature stability under node doubling on every closed-form evaluator
    SystemConfig cfg;
    NomaConfig noma;
    auto fit = fit_cascade(cfg);
    auto code_ext = make_code(200, 300.0);
    auto code_int = make_code(300, 150.0);
    double worst = 0.0;
    auto rel_change = [&](double v100, double v200) {
        double rel = std::abs(v100 - v200) / std::max(1e-300, std::abs(v200));
        worst = std::max(worst, rel);
    };
    rel_change(ast_external(cfg, fit, code_ext, 100).value,
               ast_external(cfg, fit, code_ext, 200).value);
    rel_change(ast_external_infblock(cfg, fit, code_ext, 100).value,
               ast_external_infblock(cfg, fit, code_ext, 200).value);
    rel_change(ast_internal(cfg, noma, fit, code_int, 100).value,
               ast_internal(cfg, noma, fit, code_int, 200).value);
    rel_change(ast_internal_infblock(cfg, noma, fit, code_int, 100).value,
               ast_internal_infblock(cfg, noma, fit, code_int, 200).value);
    rel_change(cdf_sinr_noma_second(cfg, noma, fit, interference_grid(cfg, noma, 100), 1.0),
               cdf_sinr_noma_second(cfg, noma, fit, interference_grid(cfg, noma, 200), 1.0));
    os << "; node-doubling worst rel change=" << worst;
    pass = pass && worst < 1e-6;

    // moment match of the cascade fit
    double worst_mom = 0.0;
    for (int n : {16, 64, 100, 256}) {
        SystemConfig c;
        c.n_elements = n;
        auto f = fit_cascade(c);
        const int samples = 100000;
        double mean = 0.0, sq = 0.0;
        for (int r = 0; r < samples; ++r) {
            CounterRng rng(808, r);
            double x = 0.0;
            for (int i = 0; i < n; ++i)
                x += sample_rician(c.k_gr(), c.omega_gr, rng) *
                     sample_rician(c.k_ra(), c.omega_ra, rng);
            mean += x;
            sq += x * x;
        }
        mean /= samples;
        double var = sq / samples - mean * mean;
        worst_mom = std::max(worst_mom, std::abs(mean - n * f.mu) / (n * f.mu));
        worst_mom = std::max(worst_mom, std::abs(var - n * f.vartheta) / (n * f.vartheta));
    }
    os << "; fit moment worst rel err=" << worst_mom;
    pass = pass && worst_mom < 0.015;

    report(8, "numerics suite", pass, os.str());
}

void criterion9_reproducibility() {
    const char* spec_text = R"([experiment]
name = repro
kind = sweep
scenario = external
sweep = m
sweep_start = 100
sweep_stop = 200
sweep_step = 50
series = analytic, monte_carlo

[system]
n_elements = 100

[code]
m = 200
b = 300
delta = 1e-3

[sim]
realizations = 20000
seed = 99
)";
    auto spec = parse_experiment(spec_text);
    setenv("RIS_LAB_THREADS", "1", 1);
    auto a = run_experiment(spec).to_csv(false);
    setenv("RIS_LAB_THREADS", "4", 1);
    auto b = run_experiment(spec).to_csv(false);
    unsetenv("RIS_LAB_THREADS");
    auto c = run_experiment(spec).to_csv(false);

    // full CSV files differ only in the timestamp line
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "rislab_accept";
    fs::create_directories(dir);
    auto table = run_experiment(spec);
    write_csv_atomic(table, (dir / "a.csv").string());
    write_csv_atomic(table, (dir / "b.csv").string());
    auto strip_first_line = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string s = ss.str();
        auto nl = s.find('\n');
        return s.substr(nl + 1);
    };
    bool files_equal = strip_first_line((dir / "a.csv").string()) ==
                       strip_first_line((dir / "b.csv").string());

    bool pass = a == b && b == c && files_equal;
    std::ostringstream os;
    os << "thread-count invariance=" << (a == b && b == c ? "yes" : "no")
       << "; file bytes (minus timestamp) identical=" << (files_equal ? "yes" : "no");
    report(9, "reproducibility", pass, os.str());
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion1_external_oracle();
    criterion2_internal_oracle();
    criterion3_residual_interference_deltas();
    criterion4_infinite_blocklength_convergence();
    criterion5_high_snr_asymptotes();
    criterion6_optimizer_correctness();
    criterion7_unimodality_suite();
    criterion8_numerics_suite();
    criterion9_reproducibility();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/9 criteria passed in %.1f s\n", 9 - g_failures, secs);
    return g_failures;
}
