#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace rislab {

/// Geometry, fading, power and noise parameters of one network instance.
/// dB-valued fields are converted to linear exactly once, at the accessors;
/// everything downstream works in linear units.
struct SystemConfig {
    double d_gr_m = 30.0;   // station -> reflecting surface distance
    double d_ra_m = 20.0;   // reflecting surface -> aerial vehicle distance
    double d_ge_m = 15.0;   // station -> eavesdropper distance
    double alpha = 2.0;     // pathloss exponent
    double k_gr_db = 2.0;   // Rician K factor, station->surface link
    double k_ra_db = 2.0;   // Rician K factor, surface->vehicle link
    double omega_gr = 1.0;  // mean channel power gain
    double omega_ra = 1.0;
    int n_elements = 100;   // reflecting element count
    double p_g_dbw = 30.0;  // transmit power
    double sigma2_a = 1.0;  // noise power at the vehicle (linear)
    double sigma2_e = 1.0;  // noise power at the eavesdropper (linear)

    double p_g() const { return std::pow(10.0, p_g_dbw / 10.0); }
    double rho_a() const { return p_g() / sigma2_a; }
    double rho_e() const { return p_g() / sigma2_e; }
    double k_gr() const { return std::pow(10.0, k_gr_db / 10.0); }
    double k_ra() const { return std::pow(10.0, k_ra_db / 10.0); }

    /// Gain multiplying the squared cascade channel in the vehicle SNR.
    double delta_gain() const {
        return rho_a() * std::pow(d_ra_m, -alpha) * std::pow(d_gr_m, -alpha);
    }
    /// Mean SNR of the external eavesdropper link.
    double eve_mean_snr() const { return rho_e() * std::pow(d_ge_m, -alpha); }

    void validate() const;
};

/// Power-domain superposition parameters plus the residual-interference model.
struct NomaConfig {
    double a_a = 0.2;        // power fraction for the aerial vehicle, in (0, 0.5)
    double omega_sic = 0.01; // residual interference level, 0 = perfect cancellation
    double omega_i = 1.0;    // residual channel power

    double a_e() const { return 1.0 - a_a; }
    void validate() const;
};

/// Finite-blocklength code triple.
struct SecrecyCode {
    int m = 200;          // blocklength in channel uses
    double b = 300.0;     // payload bits per block
    double delta = 1e-3;  // information leakage probability, in (0, 0.5)

    double rate() const { return b / m; }
    void validate() const;
};

std::string describe(const SystemConfig& cfg);
std::string describe(const NomaConfig& noma);
std::string describe(const SecrecyCode& code);

/// FNV-1a hash of a string, used for config provenance stamps.
std::uint64_t fnv1a(const std::string& s);

}  // namespace rislab
