#pragma once

#include "rislab/config.hpp"
#include "rislab/specfun.hpp"

namespace rislab {

/// Gamma approximation of the coherently combined cascade channel
/// X = sum_i |h_GR,i h_RA,i|: X ~ Gamma(k_hat, theta_hat) with
/// k_hat * theta_hat = N * mu.
struct CascadeGammaFit {
    double mu = 0.0;        // per-element mean of |h_GR h_RA|
    double vartheta = 0.0;  // per-element variance
    double k_hat = 0.0;     // Gamma shape
    double theta_hat = 0.0; // Gamma scale
    double kappa = 0.0;     // common Rician factor (linear)
};

/// Moment-matched Gamma fit of the cascade channel. Requires equal Rician
/// factors on both hops; anything else is rejected rather than averaged.
CascadeGammaFit fit_cascade(const SystemConfig& cfg);

/// CDF of Z = X^2 (cascade channel power).
double cdf_cascade_power(const CascadeGammaFit& fit, double z);

/// CDF of the legitimate SNR in the external-eavesdropper scenario.
double cdf_snr_external(const SystemConfig& cfg, const CascadeGammaFit& fit, double x);

/// CDF of the first-stage decoding SINR under power-domain superposition.
/// Saturates at 1 for z >= a_E/a_A, the algebraic ceiling of that SINR.
double cdf_sinr_noma_first(const SystemConfig& cfg, const NomaConfig& noma,
                           const CascadeGammaFit& fit, double z);

/// CDF of the second-stage SINR with residual interference, evaluated by
/// Gauss-Chebyshev quadrature over the interference variable. The grid must
/// span the interference scale omega_sic * rho_A. omega_sic = 0 collapses to
/// the interference-free CDF.
double cdf_sinr_noma_second(const SystemConfig& cfg, const NomaConfig& noma,
                            const CascadeGammaFit& fit,
                            const specfun::QuadratureGrid& grid, double z);

/// Convenience grid spanning the interference scale of the config.
specfun::QuadratureGrid interference_grid(const SystemConfig& cfg, const NomaConfig& noma,
                                          int m2 = 100);
/// Convenience grid spanning the eavesdropper SNR scale (external scenario).
specfun::QuadratureGrid eve_grid_external(const SystemConfig& cfg, int m2 = 100);
/// Same for the internal eavesdropper (scale a_A * rho_E * d_GE^-alpha).
specfun::QuadratureGrid eve_grid_internal(const SystemConfig& cfg, const NomaConfig& noma,
                                          int m2 = 100);

/// Exponential SNR densities of the eavesdropper links.
double pdf_eve_external(const SystemConfig& cfg, double y);
double pdf_eve_internal(const SystemConfig& cfg, const NomaConfig& noma, double y);

}  // namespace rislab
