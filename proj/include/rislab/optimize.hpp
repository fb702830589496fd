#pragma once

#include <functional>

#include "rislab/ast.hpp"
#include "rislab/config.hpp"
#include "rislab/montecarlo.hpp"

namespace rislab {

/// Throughput and average error as functions of a real-relaxed blocklength,
/// with everything else (payload, leakage cap, channel) frozen.
struct AstCurve {
    std::function<double(double)> ast;  // AST(m)
    std::function<double(double)> eps;  // average block error eps_bar(m), decreasing in m
};

/// Curve backed by the closed-form evaluator of the given scenario.
AstCurve make_analytic_curve(const SystemConfig& cfg, const std::optional<NomaConfig>& noma,
                             const SecrecyCode& code_template, Scenario scenario, int m2 = 100);

struct OptConstraints {
    double eps_th = 1.0;  // maximum tolerable average block error; >= 1 disables
    double m_th = 1e9;    // maximum blocklength (latency proxy)
};

enum class Binding { interior, reliability_bound, latency_bound };

const char* to_string(Binding b);

struct OptResult {
    int m_star = 0;
    double ast_at_star = 0.0;
    double m_relaxed = 0.0;  // real-valued stationary point (or binding bound)
    bool feasible = true;
    Binding binding = Binding::interior;
    bool fallback_grid_search = false;  // set when the scan was not unimodal
};

/// Maximize AST over integer m in [m_lo, m_hi]. Bisection on a central
/// finite-difference slope locates the relaxed stationary point; the better
/// of its integer neighbours is returned after a local integer polish.
OptResult optimize_unconstrained(const AstCurve& curve, int m_lo, int m_hi);

struct InverseBlerResult {
    double m = 0.0;
    bool bracketed = true;  // false when eps_th is unreachable inside [m_lo, m_hi]
};

/// Solve eps(m) = eps_th to within 0.5 in m on the decreasing branch.
InverseBlerResult inverse_bler(const AstCurve& curve, double eps_th, int m_lo, int m_hi);

/// Reliability/latency-constrained maximization: the reliability constraint
/// becomes a lower blocklength bound, the latency constraint an upper one,
/// and quasi-concavity reduces the search to a three-case split.
OptResult optimize_constrained(const AstCurve& curve, const OptConstraints& cons, int m_lo,
                               int m_hi);

}  // namespace rislab
