#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uavcov/coverage.hpp"
#include "uavcov/params.hpp"
#include "uavcov/rng.hpp"

namespace uavcov {

/// Monte-Carlo run controls. The disk radius bounds the sampled processes;
/// at the shipped densities the boundary is far beyond any relevant
/// interferer (checked by the edge-effect test).
struct McConfig {
    int n_drops = 50000;
    uint64_t seed = 1;
    double disk_radius = 100e3;  // [m]
    int jobs = 0;                // 0 = hardware concurrency
    /// When positive, nodes are additionally sampled on the annulus
    /// [disk_radius, outer_radius] from independent substreams, leaving the
    /// inner realisation untouched. Used to measure boundary truncation.
    double outer_radius = 0.0;
};

struct McEstimate {
    double value = 0.0;
    double half_width = 0.0;  // 95% confidence
    int n = 0;
    uint64_t seed = 0;
};

/// One sampled network: node positions at the requested time, the selected
/// serving nodes and the association outcome.
struct DropRealization {
    std::vector<double> tbs_x, tbs_y;
    std::vector<double> rn_x, rn_y;  // positions at time t, ground projection
    int serving_tbs_ue = -1;         // nearest TBS to the UE
    int serving_rn = -1;             // RN designated at t = 0 (-1 if none)
    int serving_tbs_rn = -1;         // nearest TBS to the serving RN at time t
    double r_sd = 0.0;               // UE to serving TBS, ground distance
    double r_rd0 = 0.0;              // UE to serving RN at t = 0
    double r_rd_t = 0.0;             // UE to serving RN at time t
    double r_sr_t = 0.0;             // serving RN to its TBS at time t
    bool relay_selected = false;
    bool resampled = false;  // true if an empty TBS process forced a redraw
};

/// Sample one drop of the full system model. The stream key must be unique
/// per drop; node attributes draw from substreams derived from it.
DropRealization simulate_drop(const NetworkParams& p, const MobilityState& m,
                              uint64_t drop_key, const McConfig& mc);

/// Empirical probability that the requested SINR (or association) event
/// holds, over independent drops.
McEstimate estimate(const NetworkParams& p, const CoverageQuery& q, const MobilityState& m,
                    const McConfig& mc);

/// One pass over shared drops, thresholding the same per-drop SINRs against
/// every beta; column i of the result corresponds to betas[i].
std::vector<McEstimate> estimate_batch(const NetworkParams& p, const std::vector<double>& betas,
                                       Quantity quantity, const MobilityState& m,
                                       const McConfig& mc);

/// Overall and distance-binned rate at which the UE and its serving RN pick
/// the same TBS, with the matching analytic prediction averaged over the
/// same samples.
struct SameTbsRates {
    McEstimate overall;
    int bins = 0;
    double bin_width = 0.0;  // same grid on both axes
    std::vector<int64_t> count;       // bins x bins, row-major (r_sd, r_rd)
    std::vector<int64_t> same_count;  // same TBS observed
    std::vector<double> predicted_sum;  // analytic probability accumulated

    double empirical(int i, int j) const;
    double predicted(int i, int j) const;
    double half_width(int i, int j) const;
};

SameTbsRates measure_same_tbs_rate(const NetworkParams& p, const MobilityState& m,
                                   const McConfig& mc, int bins = 5, double bin_width = 800.0);

/// Nearest-RN initial distances, one per drop (drops without RNs are
/// skipped). Used for distribution tests against the analytic density.
std::vector<double> sample_nearest_distances(double lambda, int n_drops, uint64_t seed,
                                             double disk_radius);

/// Radial histogram of interfering-RN distances at time t, conditioned on
/// the initial serving distance falling inside [r0_lo, r0_hi), plus the
/// per-drop analytic expectation accumulated over the same drops.
struct RadialHistogram {
    std::vector<double> edges;
    std::vector<double> mean_count;      // observed mean count per bin per drop
    std::vector<double> expected_count;  // analytic mean over the same drops
    std::vector<double> half_width;      // 95% on the observed mean
    int drops_used = 0;
};

RadialHistogram interferer_histogram(const NetworkParams& p, const MobilityState& m,
                                     const McConfig& mc, double r0_lo, double r0_hi,
                                     const std::vector<double>& edges);

}  // namespace uavcov
