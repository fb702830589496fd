#include "rislab/montecarlo.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rislab/fbl.hpp"
#include "rislab/specfun.hpp"

namespace rislab {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

struct Accum {
    double eps_sum = 0.0;
    double eps_sq_sum = 0.0;
    double eps_ae_sum = 0.0;
    double eps_a_sum = 0.0;
    double eps_approx_sum = 0.0;

    void add(const Accum& o) {
        eps_sum += o.eps_sum;
        eps_sq_sum += o.eps_sq_sum;
        eps_ae_sum += o.eps_ae_sum;
        eps_a_sum += o.eps_a_sum;
        eps_approx_sum += o.eps_approx_sum;
    }
};

}  // namespace

const char* to_string(Scenario s) { return s == Scenario::external ? "external" : "internal"; }

void SimPlan::validate() const {
    if (realizations < 1) throw std::invalid_argument("plan: realizations must be at least 1");
    if (batch < 0) throw std::invalid_argument("plan: batch must be nonnegative");
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t substream)
    : key_(mix64(seed ^ mix64(substream * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull))) {}

std::uint64_t CounterRng::next_u64() {
    return mix64((++counter_) * 0x9E3779B97F4A7C15ull ^ key_);
}

double CounterRng::next_unit() {
    // (0, 1]: 53-bit mantissa, never zero so it is always safe under log().
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::next_normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    double u1 = next_unit();
    double u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = kTwoPi * u2;
    cached_normal_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

double sample_rician(double k_linear, double omega, CounterRng& rng) {
    if (k_linear < 0.0) throw std::domain_error("sample_rician: k must be nonnegative");
    if (!(omega > 0.0)) throw std::domain_error("sample_rician: omega must be positive");
    double los = std::sqrt(k_linear * omega / (k_linear + 1.0));
    double s = std::sqrt(omega / (2.0 * (k_linear + 1.0)));
    double re = los + s * rng.next_normal();
    double im = s * rng.next_normal();
    return std::hypot(re, im);
}

namespace {

double sample_cascade_sum(const SystemConfig& cfg, CounterRng& rng) {
    double kgr = cfg.k_gr();
    double kra = cfg.k_ra();
    double x = 0.0;
    for (int i = 0; i < cfg.n_elements; ++i) {
        double egr = sample_rician(kgr, cfg.omega_gr, rng);
        double era = sample_rician(kra, cfg.omega_ra, rng);
        x += egr * era;
    }
    return x;
}

double sample_exp_unit(CounterRng& rng) {
    // |CN(0,1)|^2 via two normals, to keep the draw layout uniform.
    double re = rng.next_normal();
    double im = rng.next_normal();
    return 0.5 * (re * re + im * im);
}

}  // namespace

std::pair<double, double> sample_snrs_external(const SystemConfig& cfg, CounterRng& rng) {
    double x = sample_cascade_sum(cfg, rng);
    double gamma_a = cfg.delta_gain() * x * x;
    double gamma_e = cfg.eve_mean_snr() * sample_exp_unit(rng);
    return {gamma_a, gamma_e};
}

std::tuple<double, double, double> sample_snrs_internal(const SystemConfig& cfg,
                                                        const NomaConfig& noma, CounterRng& rng) {
    double x = sample_cascade_sum(cfg, rng);
    double z = x * x;
    double dz = cfg.delta_gain() * z;
    double sinr_first = noma.a_e() * dz / (noma.a_a * dz + 1.0);
    double gamma_e = noma.a_a * cfg.eve_mean_snr() * sample_exp_unit(rng);
    double h_i2 = noma.omega_i * sample_exp_unit(rng);
    double sinr_second = noma.a_a * dz / (noma.omega_sic * h_i2 * cfg.rho_a() + 1.0);
    return {sinr_first, sinr_second, gamma_e};
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RIS_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

AstResult simulate_ast(const SystemConfig& cfg, const std::optional<NomaConfig>& noma,
                       const SecrecyCode& code, const SimPlan& plan, int threads) {
    cfg.validate();
    code.validate();
    plan.validate();
    bool internal = plan.scenario == Scenario::internal;
    if (internal && !noma) throw std::invalid_argument("simulate_ast: internal scenario needs a NomaConfig");
    if (noma) noma->validate();

    const std::int64_t n = plan.realizations;
    const std::int64_t chunk = plan.batch > 0 ? plan.batch : 8192;
    const std::int64_t nchunks = (n + chunk - 1) / chunk;

    auto run_chunk = [&](std::int64_t c) {
        Accum acc;
        std::int64_t lo = c * chunk;
        std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        for (std::int64_t r = lo; r < hi; ++r) {
            CounterRng rng(plan.seed, static_cast<std::uint64_t>(r));
            double eps;
            if (internal) {
                auto [g_first, g_second, g_eve] = sample_snrs_internal(cfg, *noma, rng);
                double eps_ae = bler_no_secrecy(g_first, code);
                double eps_a = secrecy_bler(g_second, g_eve, code);
                eps = eps_ae + (1.0 - eps_ae) * eps_a;
                acc.eps_ae_sum += eps_ae;
                acc.eps_a_sum += eps_a;
                acc.eps_approx_sum += std::min(1.0, eps_ae + eps_a);
            } else {
                auto [g_a, g_e] = sample_snrs_external(cfg, rng);
                eps = secrecy_bler(g_a, g_e, code);
            }
            acc.eps_sum += eps;
            acc.eps_sq_sum += eps * eps;
        }
        return acc;
    };

    std::vector<Accum> parts(nchunks);
    int workers = std::min<std::int64_t>(resolve_threads(threads), nchunks);
    if (workers <= 1) {
        for (std::int64_t c = 0; c < nchunks; ++c) parts[c] = run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::int64_t> next{0};
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::int64_t c; (c = next.fetch_add(1)) < nchunks;) parts[c] = run_chunk(c);
            });
        for (auto& t : pool) t.join();
    }
    // Fixed reduction order keeps the result independent of the worker count.
    Accum total;
    for (const auto& p : parts) total.add(p);

    double nn = static_cast<double>(n);
    double eps_bar = total.eps_sum / nn;
    double var = std::max(0.0, total.eps_sq_sum / nn - eps_bar * eps_bar);
    double sem_eps = n > 1 ? std::sqrt(var / (nn - 1.0)) : 0.0;

    AstResult res;
    res.kind = AstKind::monte_carlo;
    res.eps_bar = eps_bar;
    res.value = std::max(0.0, code.rate() * (1.0 - eps_bar));
    res.sem = code.rate() * sem_eps;
    res.meta = std::string("scenario=") + to_string(plan.scenario) + ' ' + describe(cfg) + ' ' +
               describe(code) + (noma ? ' ' + describe(*noma) : std::string());
    if (internal) {
        res.components = {total.eps_ae_sum / nn, total.eps_a_sum / nn};
        res.eps_bar_approx = total.eps_approx_sum / nn;
    }
    return res;
}

}  // namespace rislab
