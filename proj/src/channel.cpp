#include "rislab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rislab {

using specfun::kPi;

CascadeGammaFit fit_cascade(const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.k_gr_db != cfg.k_ra_db)
        throw std::invalid_argument(
            "fit_cascade: unequal Rician factors are not supported by the cascade fit");
    CascadeGammaFit fit;
    fit.kappa = cfg.k_gr();
    double lag = specfun::laguerre_half(-fit.kappa);
    double lag2 = lag * lag;
    double omega_prod = cfg.omega_ra * cfg.omega_gr;
    fit.mu = kPi * std::sqrt(omega_prod) / (4.0 * (fit.kappa + 1.0)) * lag2;
    fit.vartheta = omega_prod *
                   (1.0 - kPi * kPi / (16.0 * (fit.kappa + 1.0) * (fit.kappa + 1.0)) * lag2 * lag2);
    fit.k_hat = fit.mu * fit.mu * cfg.n_elements / fit.vartheta;
    fit.theta_hat = fit.vartheta / fit.mu;
    return fit;
}

double cdf_cascade_power(const CascadeGammaFit& fit, double z) {
    if (z < 0.0) throw std::domain_error("cdf_cascade_power: z must be nonnegative");
    return specfun::reg_lower_gamma(fit.k_hat, std::sqrt(z) / fit.theta_hat);
}

double cdf_snr_external(const SystemConfig& cfg, const CascadeGammaFit& fit, double x) {
    if (x < 0.0) throw std::domain_error("cdf_snr_external: x must be nonnegative");
    return cdf_cascade_power(fit, x / cfg.delta_gain());
}

double cdf_sinr_noma_first(const SystemConfig& cfg, const NomaConfig& noma,
                           const CascadeGammaFit& fit, double z) {
    if (z < 0.0) throw std::domain_error("cdf_sinr_noma_first: z must be nonnegative");
    double ratio = noma.a_e() / noma.a_a;
    if (z >= ratio) return 1.0;
    double denom = noma.a_e() * cfg.delta_gain() - noma.a_a * cfg.delta_gain() * z;
    return specfun::reg_lower_gamma(fit.k_hat, std::sqrt(z / denom) / fit.theta_hat);
}

double cdf_sinr_noma_second(const SystemConfig& cfg, const NomaConfig& noma,
                            const CascadeGammaFit& fit,
                            const specfun::QuadratureGrid& grid, double z) {
    if (z < 0.0) throw std::domain_error("cdf_sinr_noma_second: z must be nonnegative");
    if (z == 0.0) return 0.0;
    double a1 = noma.a_a * cfg.delta_gain();
    if (noma.omega_sic == 0.0)
        return specfun::reg_lower_gamma(fit.k_hat, std::sqrt(z / a1) / fit.theta_hat);
    double scale = noma.omega_sic * cfg.rho_a();
    double s = specfun::integrate(grid, [&](double y) {
        return specfun::reg_lower_gamma(fit.k_hat, std::sqrt(z * (y + 1.0) / a1) / fit.theta_hat) *
               std::exp(-y / scale);
    });
    return std::clamp(s / scale, 0.0, 1.0);
}

specfun::QuadratureGrid interference_grid(const SystemConfig& cfg, const NomaConfig& noma,
                                          int m2) {
    double scale = noma.omega_sic * cfg.rho_a();
    if (scale <= 0.0) scale = 1.0;  // perfect cancellation never reads the grid
    return specfun::make_grid(specfun::truncation_bound(scale), m2);
}

specfun::QuadratureGrid eve_grid_external(const SystemConfig& cfg, int m2) {
    return specfun::make_grid(specfun::truncation_bound(cfg.eve_mean_snr()), m2);
}

specfun::QuadratureGrid eve_grid_internal(const SystemConfig& cfg, const NomaConfig& noma,
                                          int m2) {
    return specfun::make_grid(specfun::truncation_bound(noma.a_a * cfg.eve_mean_snr()), m2);
}

double pdf_eve_external(const SystemConfig& cfg, double y) {
    if (y < 0.0) throw std::domain_error("pdf_eve_external: y must be nonnegative");
    double mean = cfg.eve_mean_snr();
    return std::exp(-y / mean) / mean;
}

double pdf_eve_internal(const SystemConfig& cfg, const NomaConfig& noma, double y) {
    if (y < 0.0) throw std::domain_error("pdf_eve_internal: y must be nonnegative");
    double mean = noma.a_a * cfg.eve_mean_snr();
    return std::exp(-y / mean) / mean;
}

}  // namespace rislab
