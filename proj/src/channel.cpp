#include "uavcov/channel.hpp"

#include <cmath>

namespace uavcov {

namespace {

double power_law(double intercept, double exponent, double d) {
    if (exponent == 3.0) return intercept * d * d * d;
    if (exponent == 4.0) {
        const double d2 = d * d;
        return intercept * d2 * d2;
    }
    if (exponent == 2.0) return intercept * d * d;
    return intercept * std::pow(d, exponent);
}

}  // namespace

PathLossPair path_loss(LinkKind link, const NetworkParams& p, double ground_r) {
    if (link == LinkKind::SD) {
        const double d = 1.0 + ground_r;
        const auto& c = p.path_loss.g2g;
        return {power_law(c.a_los, c.alpha_los, d), power_law(c.a_nlos, c.alpha_nlos, d)};
    }
    const double d = std::sqrt(ground_r * ground_r + p.h_r * p.h_r);
    const auto& c = p.path_loss.a2g;
    return {power_law(c.a_los, c.alpha_los, d), power_law(c.a_nlos, c.alpha_nlos, d)};
}

double los_probability(LinkKind link, const NetworkParams& p, double ground_r) {
    if (link == LinkKind::SD) {
        if (ground_r <= 0.0) return 1.0;
        const double e = std::exp(-ground_r / p.los.d2);
        return std::min(p.los.d1 / ground_r, 1.0) * (1.0 - e) + e;
    }
    // elevation angle in degrees; straight overhead at r = 0
    const double theta =
        ground_r > 0.0 ? std::atan(p.h_r / ground_r) * (180.0 / M_PI) : 90.0;
    return 1.0 / (1.0 + p.los.a * std::exp(-p.los.b * (theta - p.los.a)));
}

std::complex<double> rician_power_lt(double k_factor, std::complex<double> s) {
    const double kp1 = k_factor + 1.0;
    const std::complex<double> denom = kp1 + s;
    return (kp1 / denom) * std::exp(-k_factor * s / denom);
}

double beamforming_gain(LinkKind link, GainRole role, const NetworkParams& p) {
    const bool target = role == GainRole::Target;
    switch (link) {
        case LinkKind::SD: return target ? p.g_t_max : p.g_t_min;
        case LinkKind::SR:
            return target ? p.g_t_max * p.g_r_max : p.g_t_min * p.g_r_min;
        case LinkKind::RD: return target ? p.g_r_max : p.g_r_min;
    }
    return 0.0;
}

}  // namespace uavcov
