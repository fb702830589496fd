#include "rislab/fbl.hpp"

#include <cmath>
#include <stdexcept>

#include "rislab/specfun.hpp"

namespace rislab {

using specfun::kLog2E;
using specfun::kPi;

namespace {

constexpr double kVFloor = 1e-300;

// Q of a rate-deficit term scaled by sqrt(m/v); takes the sign limit when the
// dispersion ratio degenerates to zero at gamma = 0.
double q_of_deficit(double deficit, double v, double m) {
    if (v < kVFloor) {
        if (deficit > 0.0) return 0.0;
        if (deficit < 0.0) return 1.0;
        return 0.5;
    }
    return specfun::q_func(std::sqrt(m / v) * deficit);
}

}  // namespace

double dispersion_ratio(double gamma) {
    if (gamma < 0.0) throw std::domain_error("dispersion_ratio: gamma must be nonnegative");
    double g1 = 1.0 + gamma;
    return 1.0 - 1.0 / (g1 * g1);
}

double dispersion(double gamma) { return dispersion_ratio(gamma) * kLog2E * kLog2E; }

double secrecy_bler(double gamma_a, double gamma_e, const SecrecyCode& code) {
    code.validate();
    if (gamma_e < 0.0 || gamma_a < 0.0) throw std::domain_error("secrecy_bler: SNRs must be nonnegative");
    if (gamma_a <= gamma_e) return 1.0;
    double m = code.m;
    double va = dispersion_ratio(gamma_a);
    double ve = dispersion_ratio(gamma_e);
    double deficit = std::log2((1.0 + gamma_a) / (1.0 + gamma_e)) -
                     std::sqrt(ve / m) * specfun::q_inv(code.delta) - code.rate();
    return q_of_deficit(deficit, va, m);
}

double bler_no_secrecy(double gamma, const SecrecyCode& code) {
    code.validate();
    if (gamma < 0.0) throw std::domain_error("bler_no_secrecy: gamma must be nonnegative");
    double deficit = std::log2(1.0 + gamma) - code.rate();
    return q_of_deficit(deficit, dispersion_ratio(gamma), static_cast<double>(code.m));
}

Linearization linearize_secrecy(double gamma_e, const SecrecyCode& code) {
    code.validate();
    if (gamma_e < 0.0) throw std::domain_error("linearize_secrecy: gamma_e must be nonnegative");
    double m = code.m;
    double ve = dispersion_ratio(gamma_e);
    Linearization lin;
    lin.x0 = std::exp2(std::sqrt(ve / m) * specfun::q_inv(code.delta) + code.rate()) *
                 (1.0 + gamma_e) -
             1.0;
    lin.slope = -std::sqrt(m / (2.0 * kPi * lin.x0 * (lin.x0 + 2.0)));
    lin.lower = lin.x0 + 1.0 / (2.0 * lin.slope);
    lin.upper = lin.x0 - 1.0 / (2.0 * lin.slope);
    return lin;
}

Linearization linearize_rate(const SecrecyCode& code) {
    code.validate();
    double beta = std::exp2(code.rate()) - 1.0;
    Linearization lin;
    lin.x0 = beta;
    lin.slope = -std::sqrt(static_cast<double>(code.m) / (2.0 * kPi * beta));
    lin.lower = lin.x0 + 1.0 / (2.0 * lin.slope);
    lin.upper = lin.x0 - 1.0 / (2.0 * lin.slope);
    return lin;
}

}  // namespace rislab
