#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "rislab/channel.hpp"
#include "rislab/config.hpp"
#include "rislab/specfun.hpp"

namespace rislab {

enum class AstKind { analytic, asymptotic, infinite_blocklength, monte_carlo };

const char* to_string(AstKind k);

/// One evaluated average-secrecy-throughput point, in bits per channel use.
struct AstResult {
    double value = 0.0;   // in [0, B/m]
    AstKind kind = AstKind::analytic;
    double eps_bar = 0.0; // average block error behind `value`
    double sem = 0.0;     // standard error of the mean (simulation only)
    /// Internal scenario: (mean first-stage error, mean second-stage error).
    std::optional<std::pair<double, double>> components;
    /// Internal simulation only: average error under the additive two-stage
    /// approximation, for comparison against the exact composition.
    double eps_bar_approx = 0.0;
    std::string meta;
};

namespace diag {
/// Number of probability-like quantities clamped back into [0, 1] by the
/// closed-form evaluators (the approximations can stray slightly outside at
/// extreme parameters).
std::uint64_t clamp_count();
void reset_clamp_count();
}  // namespace diag

/// Closed-form average secrecy throughput, external eavesdropper. The grid
/// must span the eavesdropper SNR scale (see eve_grid_external).
AstResult ast_external(const SystemConfig& cfg, const CascadeGammaFit& fit,
                       const SecrecyCode& code, const specfun::QuadratureGrid& grid);
AstResult ast_external(const SystemConfig& cfg, const CascadeGammaFit& fit,
                       const SecrecyCode& code, int m2 = 100);

/// High-transmit-power limit of ast_external; independent of the power.
AstResult ast_external_asymptotic(const SystemConfig& cfg, const CascadeGammaFit& fit,
                                  const SecrecyCode& code);

/// Infinite-blocklength ceiling (B/m) * P{legitimate SNR > eavesdropper SNR}.
AstResult ast_external_infblock(const SystemConfig& cfg, const CascadeGammaFit& fit,
                                const SecrecyCode& code, const specfun::QuadratureGrid& grid);
AstResult ast_external_infblock(const SystemConfig& cfg, const CascadeGammaFit& fit,
                                const SecrecyCode& code, int m2 = 100);

/// Closed-form average secrecy throughput, internal (co-scheduled) eavesdropper
/// with two-stage decoding. grid_interf spans the residual-interference scale,
/// grid_eve the internal eavesdropper SNR scale. omega_sic = 0 dispatches to
/// the interference-free variant (grid_interf is then unused).
AstResult ast_internal(const SystemConfig& cfg, const NomaConfig& noma,
                       const CascadeGammaFit& fit, const SecrecyCode& code,
                       const specfun::QuadratureGrid& grid_interf,
                       const specfun::QuadratureGrid& grid_eve);
AstResult ast_internal(const SystemConfig& cfg, const NomaConfig& noma,
                       const CascadeGammaFit& fit, const SecrecyCode& code, int m2 = 100);

/// High-power limit of the internal scenario. With perfect cancellation the
/// throughput saturates at a constant; with residual interference it
/// collapses to zero (interference power scales with transmit power).
AstResult ast_internal_asymptotic(const SystemConfig& cfg, const NomaConfig& noma,
                                  const CascadeGammaFit& fit, const SecrecyCode& code,
                                  bool perfect_sic);

/// Infinite-blocklength ceiling of the internal scenario.
AstResult ast_internal_infblock(const SystemConfig& cfg, const NomaConfig& noma,
                                const CascadeGammaFit& fit, const SecrecyCode& code,
                                const specfun::QuadratureGrid& grid_interf,
                                const specfun::QuadratureGrid& grid_eve);
AstResult ast_internal_infblock(const SystemConfig& cfg, const NomaConfig& noma,
                                const CascadeGammaFit& fit, const SecrecyCode& code,
                                int m2 = 100);

}  // namespace rislab
