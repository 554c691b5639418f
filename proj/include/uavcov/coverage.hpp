#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "uavcov/channel.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/params.hpp"
#include "uavcov/quad.hpp"

namespace uavcov {

enum class Quantity { Total, DirectLink, FirstHop, SecondHop, RelayLink, Association };

const char* to_string(Quantity q);
Quantity quantity_from_string(const std::string& s);

/// One evaluation request: linear SINR threshold, elapsed time and the
/// requested quantity.
struct CoverageQuery {
    double beta = 1.0;  // linear
    double t = 0.0;     // [s]
    Quantity quantity = Quantity::Total;
};

/// Layered tolerances: the outermost distance integrals carry the loosest
/// budget, the inversion layer and the interference-transform layer sit
/// below it.
struct CoverageSpecs {
    quad::Spec outer{1e-5, 1e-5, 300};
    quad::Spec gil_pelaez{1e-7, 1e-7, 600};
    quad::Spec inner{1e-8, 1e-8, 400};

    /// Oracle-grade preset for closed-form comparisons.
    static CoverageSpecs tight() {
        CoverageSpecs s;
        s.outer = quad::Spec(1e-7, 1e-7, 500);
        s.gil_pelaez = quad::Spec(1e-9, 1e-9, 800);
        s.inner = quad::Spec(1e-10, 1e-10, 500);
        return s;
    }
};

/// Raised when a probability estimate violates its bounds by more than the
/// quadrature error can explain.
class NumericalIntegrityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Laplace transform of the aggregate interference of a link, conditioned on
/// the serving distance at t = 0, via the PPP generating functional.
std::complex<double> interference_lt(LinkKind link, const NetworkParams& p,
                                     const MobilityState& m, double serving_dist0,
                                     std::complex<double> s,
                                     const CoverageSpecs& specs = {});

/// Coverage probability of one link in a fixed LoS state, conditioned on the
/// serving distance (for RD, the distance at t = 0). Gil-Pelaez inversion of
/// the signal/interference characteristic-function product.
double conditional_cp(LinkKind link, LosState state, double serving_dist0, double beta,
                      const NetworkParams& p, const MobilityState& m,
                      const CoverageSpecs& specs = {});

/// LoS/NLoS mixture of conditional_cp, with the mixture weights evaluated at
/// the moved distance. Computed in a single inversion pass; identical to the
/// weighted sum by linearity.
double link_cp(LinkKind link, double serving_dist0, double beta, const NetworkParams& p,
               const MobilityState& m, const CoverageSpecs& specs = {});

/// Four association-region contributions to the total coverage probability.
struct TotalCpBreakdown {
    double i_sd_a = 0.0;
    double i_sd_b = 0.0;
    double i_srd_a = 0.0;
    double i_srd_b = 0.0;
    double total() const { return i_sd_a + i_sd_b + i_srd_a + i_srd_b; }
};

TotalCpBreakdown total_cp(const NetworkParams& p, double beta, const MobilityState& m,
                          const CoverageSpecs& specs = {});

struct RelayCp {
    double first_hop = 0.0;
    double second_hop = 0.0;
    double two_hop = 0.0;
};

/// Unconditional per-hop and two-hop coverage of the relay path. The first
/// hop does not depend on time.
RelayCp relay_cp(const NetworkParams& p, double beta, const MobilityState& m,
                 const CoverageSpecs& specs = {});

/// Unconditional direct-link coverage (relay path ignored entirely).
double direct_link_cp(const NetworkParams& p, double beta, const CoverageSpecs& specs = {});

/// Mean same-serving-TBS probability over the relay-association region;
/// reports how strongly the first-hop independence assumption is stressed.
double approx1_diagnostic(const NetworkParams& p, const MobilityState& m,
                          const CoverageSpecs& specs = {});

/// Dispatch a query to the matching analytic expression.
double evaluate(const NetworkParams& p, const CoverageQuery& q, const MobilityState& m,
                const CoverageSpecs& specs = {});

}  // namespace uavcov
