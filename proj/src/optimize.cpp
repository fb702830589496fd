#include "rislab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rislab {

namespace {

double slope(const AstCurve& curve, double m) {
    double h = std::max(1.0, 1e-3 * m);
    return (curve.ast(m + h) - curve.ast(m - h)) / (2.0 * h);
}

int best_integer_near(const AstCurve& curve, double m_relaxed, int lo, int hi) {
    int mf = std::clamp(static_cast<int>(std::floor(m_relaxed)), lo, hi);
    int mc = std::clamp(static_cast<int>(std::ceil(m_relaxed)), lo, hi);
    int best = curve.ast(mf) >= curve.ast(mc) ? mf : mc;
    // Local polish: the finite-difference bisection can land a couple of
    // integers off; hill-climb to an integer-local maximum.
    double best_val = curve.ast(best);
    for (;;) {
        bool moved = false;
        if (best + 1 <= hi) {
            double v = curve.ast(best + 1);
            if (v > best_val) { best = best + 1; best_val = v; moved = true; }
        }
        if (!moved && best - 1 >= lo) {
            double v = curve.ast(best - 1);
            if (v > best_val) { best = best - 1; best_val = v; moved = true; }
        }
        if (!moved) break;
    }
    return best;
}

int grid_argmax(const AstCurve& curve, int lo, int hi) {
    int best = lo;
    double best_val = curve.ast(lo);
    for (int m = lo + 1; m <= hi; ++m) {
        double v = curve.ast(m);
        if (v > best_val) { best = m; best_val = v; }
    }
    return best;
}

}  // namespace

const char* to_string(Binding b) {
    switch (b) {
        case Binding::interior: return "interior";
        case Binding::reliability_bound: return "reliability_bound";
        case Binding::latency_bound: return "latency_bound";
    }
    return "?";
}

AstCurve make_analytic_curve(const SystemConfig& cfg, const std::optional<NomaConfig>& noma,
                             const SecrecyCode& code_template, Scenario scenario, int m2) {
    cfg.validate();
    code_template.validate();
    auto fit = fit_cascade(cfg);
    if (scenario == Scenario::internal) {
        if (!noma) throw std::invalid_argument("make_analytic_curve: internal scenario needs a NomaConfig");
        noma->validate();
        NomaConfig nm = *noma;
        auto grid_i = interference_grid(cfg, nm, m2);
        auto grid_j = eve_grid_internal(cfg, nm, m2);
        auto eval = [cfg, nm, fit, code_template, grid_i, grid_j](double m) {
            SecrecyCode code = code_template;
            code.m = std::max(1, static_cast<int>(std::llround(m)));
            return ast_internal(cfg, nm, fit, code, grid_i, grid_j);
        };
        return AstCurve{[eval](double m) { return eval(m).value; },
                        [eval](double m) { return eval(m).eps_bar; }};
    }
    auto grid = eve_grid_external(cfg, m2);
    auto eval = [cfg, fit, code_template, grid](double m) {
        SecrecyCode code = code_template;
        code.m = std::max(1, static_cast<int>(std::llround(m)));
        return ast_external(cfg, fit, code, grid);
    };
    return AstCurve{[eval](double m) { return eval(m).value; },
                    [eval](double m) { return eval(m).eps_bar; }};
}

OptResult optimize_unconstrained(const AstCurve& curve, int m_lo, int m_hi) {
    if (m_lo < 1 || m_lo > m_hi) throw std::domain_error("optimize_unconstrained: invalid bounds");
    OptResult res;
    if (m_lo == m_hi) {
        res.m_star = m_lo;
        res.m_relaxed = m_lo;
        res.ast_at_star = curve.ast(m_lo);
        res.binding = Binding::interior;
        return res;
    }
    double lo = m_lo, hi = m_hi;
    double s_lo = slope(curve, lo);
    double s_hi = slope(curve, hi);
    if (s_lo <= 0.0) {
        res.m_relaxed = lo;
        res.binding = Binding::reliability_bound;
    } else if (s_hi >= 0.0) {
        res.m_relaxed = hi;
        res.binding = Binding::latency_bound;
    } else {
        while (hi - lo > 1.0) {
            double mid = 0.5 * (lo + hi);
            if (slope(curve, mid) > 0.0) lo = mid; else hi = mid;
        }
        res.m_relaxed = 0.5 * (lo + hi);
        res.binding = Binding::interior;
    }
    res.m_star = best_integer_near(curve, res.m_relaxed, m_lo, m_hi);
    res.ast_at_star = curve.ast(res.m_star);

    // Quasi-concavity is checked, not assumed: a coarse scan that beats the
    // local optimum triggers a full grid search.
    int step = std::max(1, (m_hi - m_lo) / 64);
    for (int m = m_lo; m <= m_hi; m += step) {
        if (curve.ast(m) > res.ast_at_star + 1e-12 * (1.0 + std::abs(res.ast_at_star))) {
            res.m_star = grid_argmax(curve, m_lo, m_hi);
            res.ast_at_star = curve.ast(res.m_star);
            res.m_relaxed = res.m_star;
            res.fallback_grid_search = true;
            break;
        }
    }
    return res;
}

InverseBlerResult inverse_bler(const AstCurve& curve, double eps_th, int m_lo, int m_hi) {
    if (!(eps_th > 0.0) || !(eps_th < 1.0)) throw std::domain_error("inverse_bler: eps_th must lie in (0, 1)");
    if (m_lo < 1 || m_lo > m_hi) throw std::domain_error("inverse_bler: invalid bracket");
    double lo = m_lo, hi = m_hi;
    double e_lo = curve.eps(lo), e_hi = curve.eps(hi);
    if (e_lo <= eps_th) return {lo, e_lo == eps_th};
    if (e_hi > eps_th) return {hi, false};
    while (hi - lo > 0.25) {
        double mid = 0.5 * (lo + hi);
        if (curve.eps(mid) > eps_th) lo = mid; else hi = mid;
    }
    return {0.5 * (lo + hi), true};
}

OptResult optimize_constrained(const AstCurve& curve, const OptConstraints& cons, int m_lo,
                               int m_hi) {
    if (m_lo < 1 || m_lo > m_hi) throw std::domain_error("optimize_constrained: invalid bounds");
    int lo_feas = m_lo;
    if (cons.eps_th < 1.0) {
        auto inv = inverse_bler(curve, cons.eps_th, m_lo, m_hi);
        lo_feas = inv.bracketed || curve.eps(m_lo) <= cons.eps_th
                      ? std::max(m_lo, static_cast<int>(std::ceil(inv.m)))
                      : m_hi + 1;  // reliability unattainable inside the bounds
    }
    int hi_feas = std::min(m_hi, static_cast<int>(std::floor(cons.m_th)));

    OptResult res;
    if (lo_feas > hi_feas) {
        res.feasible = false;
        res.m_star = lo_feas <= m_hi ? lo_feas : m_hi;
        res.ast_at_star = 0.0;
        res.m_relaxed = res.m_star;
        res.binding = Binding::reliability_bound;
        return res;
    }
    OptResult unc = optimize_unconstrained(curve, m_lo, m_hi);
    res.m_relaxed = unc.m_relaxed;
    res.fallback_grid_search = unc.fallback_grid_search;
    if (unc.m_relaxed <= lo_feas) {
        res.m_star = lo_feas;
        res.binding = Binding::reliability_bound;
    } else if (unc.m_relaxed >= hi_feas) {
        res.m_star = hi_feas;
        res.binding = Binding::latency_bound;
    } else {
        res.m_star = best_integer_near(curve, unc.m_relaxed, lo_feas, hi_feas);
        res.binding = Binding::interior;
    }
    res.ast_at_star = curve.ast(res.m_star);
    return res;
}

}  // namespace rislab
