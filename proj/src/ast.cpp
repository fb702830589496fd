#include "rislab/ast.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "rislab/fbl.hpp"

namespace rislab {

using specfun::kPi;

namespace {

std::atomic<std::uint64_t> g_clamp_count{0};

double clamp01(double p) {
    if (p < 0.0 || p > 1.0) {
        if (p < -1e-9 || p > 1.0 + 1e-9) g_clamp_count.fetch_add(1, std::memory_order_relaxed);
        return p < 0.0 ? 0.0 : 1.0;
    }
    return p;
}

std::string meta_string(const char* scenario, const SystemConfig& cfg, const SecrecyCode& code,
                        const NomaConfig* noma) {
    std::ostringstream os;
    os << "scenario=" << scenario << ' ' << describe(cfg) << ' ' << describe(code);
    if (noma) os << ' ' << describe(*noma);
    return os.str();
}

AstResult finish(double eps_bar, AstKind kind, const SecrecyCode& code, std::string meta) {
    AstResult r;
    r.kind = kind;
    r.eps_bar = clamp01(eps_bar);
    r.value = std::max(0.0, code.rate() * (1.0 - r.eps_bar));
    r.meta = std::move(meta);
    return r;
}

/// Midpoint SNR of the error transition at eavesdropper SNR ge, with the
/// eavesdropper dispersion ratio pinned at its high-SNR value of one.
double xi_factor(const SecrecyCode& code) {
    return std::exp2(specfun::q_inv(code.delta) / std::sqrt(static_cast<double>(code.m)) +
                     code.rate());
}

/// Same midpoint with the dispersion ratio evaluated at the given SNR.
double transition_snr(double ge, const SecrecyCode& code) {
    double ve = dispersion_ratio(ge);
    return std::exp2(std::sqrt(ve / code.m) * specfun::q_inv(code.delta) + code.rate()) *
               (1.0 + ge) -
           1.0;
}

/// Average of the cascade-amplitude CDF P(k_hat, sqrt(pow(zeta))/theta_hat)
/// against an Exp(scale) density, by Gauss-Chebyshev quadrature on
/// (0, grid.m1). `pow` maps the integration variable to the cascade power.
template <class Pow>
double gamma_cdf_average(const CascadeGammaFit& fit, const specfun::QuadratureGrid& grid,
                         double scale, Pow&& pow_of) {
    double s = specfun::integrate(grid, [&](double zeta) {
        return specfun::reg_lower_gamma(fit.k_hat, std::sqrt(pow_of(zeta)) / fit.theta_hat) *
               std::exp(-zeta / scale);
    });
    return s / scale;
}

/// Average block error in the high-power limit: with c^2 the squared
/// quadratic-over-linear coefficient of the integrand exponent,
///   eps = (c^2/2)^{k/2} e^{c^2/8} D_{-k}(c/sqrt(2)),
/// evaluated entirely in log space (each factor over/underflows on its own).
double asymptotic_eps(const CascadeGammaFit& fit, double c2) {
    double k = fit.k_hat;
    double z = std::sqrt(c2 / 2.0);
    double ln_eps = 0.5 * k * std::log(c2 / 2.0) + c2 / 8.0 +
                    specfun::log_parabolic_cylinder_d_neg(k, z);
    return clamp01(std::exp(ln_eps));
}

double lambda1(const SystemConfig& cfg) {
    return std::pow(cfg.d_ge_m, cfg.alpha) * cfg.sigma2_e /
           (std::pow(cfg.d_ra_m, cfg.alpha) * std::pow(cfg.d_gr_m, cfg.alpha) * cfg.sigma2_a);
}

}  // namespace

const char* to_string(AstKind k) {
    switch (k) {
        case AstKind::analytic: return "analytic";
        case AstKind::asymptotic: return "asymptotic";
        case AstKind::infinite_blocklength: return "infinite_blocklength";
        case AstKind::monte_carlo: return "monte_carlo";
    }
    return "?";
}

namespace diag {
std::uint64_t clamp_count() { return g_clamp_count.load(std::memory_order_relaxed); }
void reset_clamp_count() { g_clamp_count.store(0, std::memory_order_relaxed); }
}  // namespace diag

AstResult ast_external(const SystemConfig& cfg, const CascadeGammaFit& fit,
                       const SecrecyCode& code, const specfun::QuadratureGrid& grid) {
    cfg.validate();
    code.validate();
    double xi = xi_factor(code);
    double dg = cfg.delta_gain();
    double eps = gamma_cdf_average(fit, grid, cfg.eve_mean_snr(),
                                   [&](double zeta) { return (xi - 1.0 + xi * zeta) / dg; });
    return finish(eps, AstKind::analytic, code, meta_string("external", cfg, code, nullptr));
}

AstResult ast_external(const SystemConfig& cfg, const CascadeGammaFit& fit,
                       const SecrecyCode& code, int m2) {
    return ast_external(cfg, fit, code, eve_grid_external(cfg, m2));
}

AstResult ast_external_asymptotic(const SystemConfig& cfg, const CascadeGammaFit& fit,
                                  const SecrecyCode& code) {
    cfg.validate();
    code.validate();
    double th2 = fit.theta_hat * fit.theta_hat;
    double c2 = xi_factor(code) / (lambda1(cfg) * th2);
    double eps = asymptotic_eps(fit, c2);
    return finish(eps, AstKind::asymptotic, code, meta_string("external", cfg, code, nullptr));
}

AstResult ast_external_infblock(const SystemConfig& cfg, const CascadeGammaFit& fit,
                                const SecrecyCode& code, const specfun::QuadratureGrid& grid) {
    cfg.validate();
    code.validate();
    double dg = cfg.delta_gain();
    double outage = gamma_cdf_average(fit, grid, cfg.eve_mean_snr(),
                                      [&](double zeta) { return zeta / dg; });
    return finish(outage, AstKind::infinite_blocklength, code,
                  meta_string("external", cfg, code, nullptr));
}

AstResult ast_external_infblock(const SystemConfig& cfg, const CascadeGammaFit& fit,
                                const SecrecyCode& code, int m2) {
    return ast_external_infblock(cfg, fit, code, eve_grid_external(cfg, m2));
}

AstResult ast_internal(const SystemConfig& cfg, const NomaConfig& noma,
                       const CascadeGammaFit& fit, const SecrecyCode& code,
                       const specfun::QuadratureGrid& grid_interf,
                       const specfun::QuadratureGrid& grid_eve) {
    cfg.validate();
    noma.validate();
    code.validate();
    double a1 = noma.a_a * cfg.delta_gain();
    double beta = std::exp2(code.rate()) - 1.0;

    // First stage: the SINR is capped at a_E/a_A, so a rate demanding more
    // than the cap fails outright.
    double eps_ae;
    if (beta >= noma.a_e() / noma.a_a) {
        eps_ae = 1.0;
    } else {
        double denom = noma.a_e() * cfg.delta_gain() - noma.a_a * cfg.delta_gain() * beta;
        eps_ae = clamp01(specfun::reg_lower_gamma(fit.k_hat, std::sqrt(beta / denom) / fit.theta_hat));
    }

    // Second stage: average the cascade-power CDF at the per-node error
    // transition over both the interference and the eavesdropper densities.
    double eve_scale = noma.a_a * cfg.eve_mean_snr();
    double eps_a;
    if (noma.omega_sic == 0.0) {
        eps_a = gamma_cdf_average(fit, grid_eve, eve_scale,
                                  [&](double zj) { return transition_snr(zj, code) / a1; });
    } else {
        double interf_scale = noma.omega_sic * cfg.rho_a();
        double outer = specfun::integrate(grid_eve, [&](double zj) {
            double t6 = transition_snr(zj, code);
            double inner = specfun::integrate(grid_interf, [&](double zi) {
                return specfun::reg_lower_gamma(fit.k_hat,
                                                std::sqrt(t6 * (zi + 1.0) / a1) / fit.theta_hat) *
                       std::exp(-zi / interf_scale);
            });
            return inner / interf_scale * std::exp(-zj / eve_scale);
        });
        eps_a = outer / eve_scale;
    }
    eps_a = clamp01(eps_a);

    double eps_bar = std::min(1.0, eps_ae + eps_a);
    AstResult r = finish(eps_bar, AstKind::analytic, code, meta_string("internal", cfg, code, &noma));
    r.components = {eps_ae, eps_a};
    return r;
}

AstResult ast_internal(const SystemConfig& cfg, const NomaConfig& noma,
                       const CascadeGammaFit& fit, const SecrecyCode& code, int m2) {
    return ast_internal(cfg, noma, fit, code, interference_grid(cfg, noma, m2),
                        eve_grid_internal(cfg, noma, m2));
}

AstResult ast_internal_asymptotic(const SystemConfig& cfg, const NomaConfig& noma,
                                  const CascadeGammaFit& fit, const SecrecyCode& code,
                                  bool perfect_sic) {
    cfg.validate();
    noma.validate();
    code.validate();
    if (!perfect_sic) {
        // Residual interference grows with transmit power: the second stage
        // saturates at total error and the throughput collapses.
        AstResult r = finish(1.0, AstKind::asymptotic, code,
                             meta_string("internal", cfg, code, &noma));
        double eps_ae = specfun::q_func(
            std::sqrt(static_cast<double>(code.m)) *
            (std::log2(1.0 + noma.a_e() / noma.a_a) - code.rate()));
        r.components = {eps_ae, 1.0};
        return r;
    }
    double eps_ae = specfun::q_func(std::sqrt(static_cast<double>(code.m)) *
                                    (std::log2(1.0 + noma.a_e() / noma.a_a) - code.rate()));
    // Power fractions cancel from the second-stage SNR ratio at high power, so
    // the limit coincides with the external one.
    double th2 = fit.theta_hat * fit.theta_hat;
    double c2 = xi_factor(code) / (lambda1(cfg) * th2);
    double eps_a = asymptotic_eps(fit, c2);
    AstResult r = finish(std::min(1.0, eps_ae + eps_a), AstKind::asymptotic, code,
                         meta_string("internal", cfg, code, &noma));
    r.components = {eps_ae, eps_a};
    return r;
}

AstResult ast_internal_infblock(const SystemConfig& cfg, const NomaConfig& noma,
                                const CascadeGammaFit& fit, const SecrecyCode& code,
                                const specfun::QuadratureGrid& grid_interf,
                                const specfun::QuadratureGrid& grid_eve) {
    cfg.validate();
    noma.validate();
    code.validate();
    double a1 = noma.a_a * cfg.delta_gain();
    double eve_scale = noma.a_a * cfg.eve_mean_snr();
    double p_outage;
    if (noma.omega_sic == 0.0) {
        p_outage = gamma_cdf_average(fit, grid_eve, eve_scale, [&](double zj) { return zj / a1; });
    } else {
        double interf_scale = noma.omega_sic * cfg.rho_a();
        double outer = specfun::integrate(grid_eve, [&](double zj) {
            double inner = specfun::integrate(grid_interf, [&](double zi) {
                return specfun::reg_lower_gamma(fit.k_hat,
                                                std::sqrt(zj * (zi + 1.0) / a1) / fit.theta_hat) *
                       std::exp(-zi / interf_scale);
            });
            return inner / interf_scale * std::exp(-zj / eve_scale);
        });
        p_outage = outer / eve_scale;
    }
    return finish(p_outage, AstKind::infinite_blocklength, code,
                  meta_string("internal", cfg, code, &noma));
}

AstResult ast_internal_infblock(const SystemConfig& cfg, const NomaConfig& noma,
                                const CascadeGammaFit& fit, const SecrecyCode& code, int m2) {
    return ast_internal_infblock(cfg, noma, fit, code, interference_grid(cfg, noma, m2),
                                 eve_grid_internal(cfg, noma, m2));
}

}  // namespace rislab
