#pragma once

#include <string>
#include <vector>

namespace uavcov {

struct ResultRow;

/// Render every figure-style view the rows support into `dir`:
///   - relay-association heatmaps over (altitude, RN density), one per time,
///     with labelled 0.25/0.5/0.75 contours;
///   - coverage vs threshold curves per altitude and time, with the
///     direct-link baseline dashed and MC points as markers;
///   - coverage vs time curves per altitude at a fixed threshold.
/// Pure function of the rows; returns the paths written.
std::vector<std::string> emit_plots(const std::vector<ResultRow>& rows,
                                    const std::string& dir);

}  // namespace uavcov
