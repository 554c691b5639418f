#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavcov::quad {

using cplx = std::complex<double>;

/// Tolerances and budgets for the adaptive engine. Semi-infinite tails are
/// truncated where the integrand envelope falls below `tail_envelope` times
/// its running peak.
struct Spec {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    int max_subdivisions = 400;
    double tail_envelope = 1e-12;

    Spec() = default;
    Spec(double at, double rt, int ms = 400, double te = 1e-12)
        : abs_tol(at), rel_tol(rt), max_subdivisions(ms), tail_envelope(te) {}
};

template <typename T>
struct Result {
    T value{};
    double error = 0.0;
    int subdivisions = 0;
    double truncation_point = std::numeric_limits<double>::infinity();
};

/// Raised when the requested tolerance is not reached within the subdivision
/// budget, or the integrand fails to decay. Carries the best estimate.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double best, double achieved)
        : std::runtime_error(what), best_estimate(best), achieved_error(achieved) {}
    double best_estimate;
    double achieved_error;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<cplx(double)>;

/// Adaptive Gauss-Kronrod 15(7) on a finite interval.
Result<double> integrate(const RealFn& f, double a, double b, const Spec& spec);
Result<cplx> integrate_complex(const ComplexFn& f, double a, double b, const Spec& spec);

/// Same, but seeded with an initial partition (breakpoints must be ascending
/// and bracket the domain).
Result<double> integrate_segmented(const RealFn& f, const std::vector<double>& breakpoints,
                                   const Spec& spec);

/// Integral over [a, inf). The tail is folded onto (0, 1] with the rational
/// map r = a + scale*(1-u)/u, so both exponential and power-law tails are
/// resolved without an explicit cutoff. `scale_hint` should be of the order
/// of the distance over which the integrand varies; 0 picks a default.
Result<double> integrate_semi_infinite(const RealFn& f, double a, const Spec& spec,
                                       double scale_hint = 0.0);
Result<cplx> integrate_semi_infinite_complex(const ComplexFn& f, double a, const Spec& spec,
                                             double scale_hint = 0.0);

/// (1/pi) * Int_0^inf Im[g(tau)]/tau dtau, the oscillatory half of the
/// Gil-Pelaez CCDF inversion (the 1/2 offset is added by the caller).
///
/// The support is located by marching geometrically graded segments away
/// from tau_scale (the reciprocal of the dominant transform scale); the
/// residual tau->0 mass follows from the linear vanishing of Im[g]. When g
/// carries an asymptotically linear phase exp(-j tau x) - a threshold or
/// point mass - pass x as `osc_rate`: segments are then capped at half
/// periods and the undamped tail is summed as an accelerated alternating
/// series instead of being chased to the truncation cap.
Result<double> gil_pelaez(const ComplexFn& g, const Spec& spec, double tau_scale = 1.0,
                          double osc_rate = 0.0);

}  // namespace uavcov::quad
