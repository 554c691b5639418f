#pragma once

#include <map>
#include <string>
#include <vector>

#include "uavcov/sweep.hpp"

namespace uavcov {

class ReportError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct QuantityAgreement {
    int rows = 0;
    double max_abs_diff = 0.0;
    double mean_abs_diff = 0.0;
    double within_3hw = 0.0;  // fraction
};

struct CompareSummary {
    std::map<std::string, QuantityAgreement> per_quantity;
    /// mean same-TBS diagnostic keyed by TBS density (monotone check input)
    std::map<double, double> approx1_by_lambda_t;
    int total_rows = 0;

    std::string to_text() const;
    std::string to_json() const;
};

/// Summarise analytic-vs-MC agreement of a CSV produced by a `both` run.
/// Rows lacking either engine value raise a format error.
CompareSummary compare_report(const std::vector<ResultRow>& rows);
CompareSummary compare_report_file(const std::string& csv_path);

}  // namespace uavcov
