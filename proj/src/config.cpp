#include "rislab/config.hpp"

#include <sstream>
#include <stdexcept>

namespace rislab {

namespace {
void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

void SystemConfig::validate() const {
    require(d_gr_m > 0.0 && d_ra_m > 0.0 && d_ge_m > 0.0, "config: distances must be positive");
    require(alpha > 0.0, "config: pathloss exponent must be positive");
    require(omega_gr > 0.0 && omega_ra > 0.0, "config: channel power gains must be positive");
    require(n_elements >= 1, "config: n_elements must be at least 1");
    require(sigma2_a > 0.0 && sigma2_e > 0.0, "config: noise powers must be positive");
    require(rho_a() > 0.0 && rho_e() > 0.0, "config: transmit SNRs must be positive");
}

void NomaConfig::validate() const {
    require(a_a > 0.0 && a_a < 0.5, "noma: a_a must lie in (0, 0.5)");
    require(omega_sic >= 0.0 && omega_sic <= 1.0, "noma: omega_sic must lie in [0, 1]");
    require(omega_i > 0.0, "noma: omega_i must be positive");
}

void SecrecyCode::validate() const {
    require(m >= 1, "code: blocklength must be at least 1");
    require(b > 0.0, "code: payload must be positive");
    require(delta > 0.0 && delta < 0.5, "code: leakage probability must lie in (0, 0.5)");
}

std::string describe(const SystemConfig& cfg) {
    std::ostringstream os;
    os << "dgr=" << cfg.d_gr_m << " dra=" << cfg.d_ra_m << " dge=" << cfg.d_ge_m
       << " alpha=" << cfg.alpha << " kgr=" << cfg.k_gr_db << " kra=" << cfg.k_ra_db
       << " ogr=" << cfg.omega_gr << " ora=" << cfg.omega_ra << " n=" << cfg.n_elements
       << " pg=" << cfg.p_g_dbw << " s2a=" << cfg.sigma2_a << " s2e=" << cfg.sigma2_e;
    return os.str();
}

std::string describe(const NomaConfig& noma) {
    std::ostringstream os;
    os << "aa=" << noma.a_a << " w=" << noma.omega_sic << " oi=" << noma.omega_i;
    return os.str();
}

std::string describe(const SecrecyCode& code) {
    std::ostringstream os;
    os << "m=" << code.m << " b=" << code.b << " delta=" << code.delta;
    return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace rislab
