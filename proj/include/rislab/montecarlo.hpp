#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>

#include "rislab/ast.hpp"
#include "rislab/config.hpp"

namespace rislab {

enum class Scenario { external, internal };

const char* to_string(Scenario s);

/// Simulation plan. Identical (plan, configs) produce bit-identical results
/// for any worker count: realization r draws only from substream r.
struct SimPlan {
    std::int64_t realizations = 100000;
    std::uint64_t seed = 1;
    Scenario scenario = Scenario::external;
    std::int64_t batch = 0;  // chunk size for the worker split; 0 = default

    void validate() const;
};

/// Counter-based generator: a keyed 64-bit mix of an incrementing counter.
/// Stateless across substreams, so parallel chunks never overlap.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t substream);

    std::uint64_t next_u64();
    double next_unit();    // uniform in (0, 1]
    double next_normal();  // standard normal via Box-Muller

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// Rician envelope with shape k (linear) and mean power omega.
double sample_rician(double k_linear, double omega, CounterRng& rng);

/// One draw of (legitimate SNR, eavesdropper SNR), external scenario.
std::pair<double, double> sample_snrs_external(const SystemConfig& cfg, CounterRng& rng);

/// One draw of (first-stage SINR, second-stage SINR, eavesdropper SNR),
/// internal scenario with residual interference.
std::tuple<double, double, double> sample_snrs_internal(const SystemConfig& cfg,
                                                        const NomaConfig& noma, CounterRng& rng);

/// Empirical average secrecy throughput. The internal scenario composes the
/// two stages exactly (eps_ae + (1-eps_ae) eps_a); the additive approximation
/// is tracked alongside in eps_bar_approx. threads = 0 resolves to
/// RIS_LAB_THREADS, then hardware concurrency.
AstResult simulate_ast(const SystemConfig& cfg, const std::optional<NomaConfig>& noma,
                       const SecrecyCode& code, const SimPlan& plan, int threads = 0);

/// Worker-count resolution used across the library: explicit value wins,
/// otherwise RIS_LAB_THREADS, otherwise hardware concurrency.
int resolve_threads(int requested);

}  // namespace rislab
