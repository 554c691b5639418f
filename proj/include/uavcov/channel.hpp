#pragma once

#include <complex>

#include "uavcov/params.hpp"

namespace uavcov {

/// Linear path loss of a link at ground distance r, for both LoS states.
/// Ground links evaluate the power law at 1+r (removes the r=0 singularity);
/// air-to-ground links use the 3-D distance sqrt(r^2 + h_r^2).
struct PathLossPair {
    double los;
    double nlos;

    double get(LosState n) const { return n == LosState::Los ? los : nlos; }
};

PathLossPair path_loss(LinkKind link, const NetworkParams& p, double ground_r);

/// LoS probability of a link at ground distance r: d1/d2 model for ground
/// links, elevation-angle sigmoid for air-to-ground links.
double los_probability(LinkKind link, const NetworkParams& p, double ground_r);

/// Laplace transform of the normalised Rician fading power gain,
/// ((K+1)/(K+1+s)) * exp(-K s / (K+1+s)). Valid for complex s away from
/// the pole at -(K+1); the imaginary axis used by the inversion is safe.
std::complex<double> rician_power_lt(double k_factor, std::complex<double> s);

/// Sectored-antenna array gain of a link, assuming the intended beam pair is
/// aligned and every interfering pair is misaligned.
double beamforming_gain(LinkKind link, GainRole role, const NetworkParams& p);

}  // namespace uavcov
