#pragma once

#include "uavcov/params.hpp"
#include "uavcov/quad.hpp"

namespace uavcov {

/// Distance between the UE and its serving RN under the approach-and-hover
/// scheme: (r_rd0 - v t) clamped at zero.
double serving_rn_distance(double r_rd0, double v, double t);

/// Rayleigh-type nearest-neighbour distance density 2 pi lambda r
/// exp(-pi lambda r^2) of a homogeneous PPP of density lambda.
double nearest_distance_pdf(double lambda, double r);
double nearest_distance_pdf(LinkKind link, const NetworkParams& p, double r);

/// Mean nearest-neighbour distance, 1/(2 sqrt(lambda)).
double nearest_distance_mean(double lambda);

/// Radial density of the interfering point process of a link, conditioned on
/// the serving distance at t = 0. Ground links keep a hard exclusion disk;
/// the RN process under the mobile scheme develops the three-branch profile
/// (full density beyond r_rd0 + vt, an angular-overlap transition band, and
/// a filled core once the serving RN has passed the origin).
double interferer_density(LinkKind link, const NetworkParams& p, const MobilityState& m,
                          double serving_dist0, double r);

/// Probability that the UE and its serving RN are served by the same TBS,
/// conditioned on both serving distances. Evaluated in exponentially scaled
/// Bessel form, stable for large density-distance products.
double same_tbs_probability(const NetworkParams& p, double r_sd, double r_rd_t);

/// Probability that the UE selects the relay link at the queried time.
double relay_association_probability(const NetworkParams& p, const MobilityState& m);

/// Mean initial serving-RN distance divided by the UAV speed.
double expected_travel_time(const NetworkParams& p);

/// Direct/relay decision regions over (r_sd, r_rd0).
struct AssociationRegions {
    double h_r;
    double vt;

    /// Largest r_sd for which the direct link wins, given r_rd0.
    double direct_boundary(double r_rd0) const {
        const double moved = r_rd0 > vt ? r_rd0 - vt : 0.0;
        return std::sqrt(moved * moved + h_r * h_r);
    }

    bool selects_direct(double r_sd, double r_rd0) const {
        return r_sd <= direct_boundary(r_rd0);
    }
};

}  // namespace uavcov
