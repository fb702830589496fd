#pragma once

#include <stdexcept>
#include <vector>

namespace rislab::specfun {

inline constexpr double kLog2E = 1.4426950408889634074;  // log2(e)
inline constexpr double kPi = 3.14159265358979323846;

/// Gaussian tail probability Q(x) = P{N(0,1) > x}.
double q_func(double x);

/// Inverse of q_func on (0, 1). Throws std::domain_error outside.
double q_inv(double p);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a), a > 0, x >= 0.
double reg_lower_gamma(double a, double x);

/// Unregularized gamma(a, x). Overflows for a beyond ~170; callers needing
/// large shapes use reg_lower_gamma.
double lower_inc_gamma(double a, double x);

// The two evaluation routes behind reg_lower_gamma, kept visible so they can
// be cross-checked against each other.
double reg_lower_gamma_series(double a, double x);
double reg_lower_gamma_contfrac(double a, double x);

/// Exponentially scaled modified Bessel functions e^{-z} I_nu(z), z >= 0.
double bessel_i0e(double z);
double bessel_i1e(double z);

/// Laguerre polynomial of order 1/2.
double laguerre_half(double x);

/// Parabolic cylinder function D_nu(z) for nu <= 0, z >= 0.
double parabolic_cylinder_d(double order, double z);

/// ln D_{-k}(z) for k > 0, z >= 0; stays finite where D itself under/overflows.
double log_parabolic_cylinder_d_neg(double k, double z);

/// Gauss-Chebyshev nodes/weights mapped onto (0, m1) for integrals truncated
/// at m1. Quadrature rule: integral ~= (pi*m1)/(2*m2) * sum w_i f(zeta_i).
struct QuadratureGrid {
    double m1 = 0.0;
    int m2 = 0;
    std::vector<double> nodes;    // zeta_i = m1*(cos((2i-1)pi/(2 m2)) + 1)/2
    std::vector<double> weights;  // w_i = sin((2i-1)pi/(2 m2))
};

QuadratureGrid make_grid(double m1, int m2);

template <class F>
double integrate(const QuadratureGrid& g, F&& f) {
    double s = 0.0;
    for (int i = 0; i < g.m2; ++i) s += g.weights[i] * f(g.nodes[i]);
    return kPi * g.m1 / (2.0 * g.m2) * s;
}

/// Truncation bound for a semi-infinite integral whose envelope decays like
/// e^{-x/scale}: smallest bound where the envelope drops to 1e-12 of its peak.
inline double truncation_bound(double scale) {
    if (!(scale > 0.0)) throw std::domain_error("truncation_bound: scale must be positive");
    return scale * 27.631021115928547;  // ln(1e12)
}

}  // namespace rislab::specfun
