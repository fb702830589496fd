#pragma once

#include "rislab/config.hpp"

namespace rislab {

/// Channel dispersion V(gamma) = (1 - (1+gamma)^-2) * log2(e)^2 in bits^2.
double dispersion(double gamma);

/// The SNR-only dispersion ratio 1 - (1+gamma)^-2 in [0, 1). All block-error
/// expressions below pair this ratio with base-2 rates; that pairing is the
/// one the closed-form evaluators in ast.hpp are derived against.
double dispersion_ratio(double gamma);

/// Block error probability of decoding at rate B/m with leakage cap delta:
/// Q( sqrt(m/V_A) * (log2((1+ga)/(1+ge)) - sqrt(V_E/m) Qinv(delta) - B/m) )
/// for ga > ge, and exactly 1 otherwise.
double secrecy_bler(double gamma_a, double gamma_e, const SecrecyCode& code);

/// Plain block error probability without a secrecy constraint:
/// Q( sqrt(m/V) * (log2(1+gamma) - B/m) ).
double bler_no_secrecy(double gamma, const SecrecyCode& code);

/// Clamped-affine surrogate of a Q-shaped error curve: 1 below `lower`,
/// affine through (x0, 1/2) with negative slope, 0 above `upper`.
struct Linearization {
    double x0 = 0.0;
    double slope = 0.0;  // < 0
    double lower = 0.0;  // x0 + 1/(2*slope)
    double upper = 0.0;  // x0 - 1/(2*slope)

    double eval(double x) const {
        if (x <= lower) return 1.0;
        if (x >= upper) return 0.0;
        return 0.5 + slope * (x - x0);
    }
};

/// Linearization of secrecy_bler as a function of the legitimate SNR, at a
/// fixed eavesdropper SNR. Midpoint at the SNR where the error hits 1/2,
/// slope -sqrt(m / (2 pi x0 (x0+2))).
Linearization linearize_secrecy(double gamma_e, const SecrecyCode& code);

/// Linearization of bler_no_secrecy as a function of SNR. Midpoint at
/// 2^{B/m} - 1, slope -sqrt(m / (2 pi (2^{B/m}-1))).
Linearization linearize_rate(const SecrecyCode& code);

}  // namespace rislab
