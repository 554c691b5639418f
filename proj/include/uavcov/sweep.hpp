#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uavcov/config.hpp"
#include "uavcov/coverage.hpp"
#include "uavcov/mcsim.hpp"

namespace uavcov {

/// One evaluated sweep point. Optional fields stay empty when the engine
/// that produces them did not run (or failed; see `error`).
struct ResultRow {
    std::string quantity;
    std::string scheme;
    double t = 0.0;
    double beta_db = 0.0;
    double h_r = 0.0;
    double lambda_r = 0.0;
    double lambda_t = 0.0;
    double v = 0.0;
    std::optional<double> analytic;
    std::optional<double> mc;
    std::optional<double> mc_half_width;
    std::optional<int> mc_drops;
    std::optional<double> term_sd_a, term_sd_b, term_srd_a, term_srd_b;
    std::optional<double> approx1;
    std::optional<std::string> error;
};

/// Stable CSV schema (column order fixed, 9 significant digits, LF):
/// quantity,scheme,t_s,beta_db,h_r_m,lambda_r_per_m2,lambda_t_per_m2,v_mps,
/// analytic,mc,mc_half_width,mc_drops,term_sd_a,term_sd_b,term_srd_a,
/// term_srd_b,approx1_diag,error
extern const char* kCsvHeader;

std::string to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_csv(const std::string& path);

struct RunOutcome {
    std::vector<ResultRow> rows;
    int failed_rows = 0;
    std::string csv_path;
    std::vector<std::string> plot_paths;
};

/// Expand the sweep, evaluate every row with the selected engines, write
/// the CSV (and plots unless disabled). Engine failures are recorded in the
/// row and counted, not fatal.
RunOutcome run_experiment(const ExperimentConfig& cfg);

/// Row expansion without evaluation (used by tests and dry runs).
std::vector<ResultRow> expand_rows(const ExperimentConfig& cfg);

}  // namespace uavcov
