#include "uavcov/report.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace uavcov {

CompareSummary compare_report(const std::vector<ResultRow>& rows) {
    CompareSummary s;
    std::map<std::string, std::vector<double>> diffs;
    std::map<std::string, int> within;
    std::map<double, std::pair<double, int>> approx1_acc;

    int usable = 0;
    for (const auto& r : rows) {
        if (r.error) continue;
        if (!r.analytic || !r.mc) continue;
        ++usable;
        const double d = std::abs(*r.analytic - *r.mc);
        diffs[r.quantity].push_back(d);
        if (r.mc_half_width && d <= 3.0 * *r.mc_half_width) within[r.quantity]++;
        if (r.approx1) {
            auto& acc = approx1_acc[r.lambda_t];
            acc.first += *r.approx1;
            acc.second++;
        }
    }
    if (usable == 0) {
        throw ReportError("compare: no rows carry both analytic and MC values");
    }
    s.total_rows = usable;
    for (auto& [quantity, ds] : diffs) {
        QuantityAgreement a;
        a.rows = static_cast<int>(ds.size());
        double sum = 0.0;
        for (double d : ds) {
            a.max_abs_diff = std::max(a.max_abs_diff, d);
            sum += d;
        }
        a.mean_abs_diff = sum / a.rows;
        a.within_3hw = static_cast<double>(within[quantity]) / a.rows;
        s.per_quantity[quantity] = a;
    }
    for (auto& [lt, acc] : approx1_acc) {
        s.approx1_by_lambda_t[lt] = acc.first / acc.second;
    }
    return s;
}

CompareSummary compare_report_file(const std::string& csv_path) {
    std::vector<ResultRow> rows;
    try {
        rows = read_csv(csv_path);
    } catch (const std::exception& e) {
        throw ReportError(std::string("compare: ") + e.what());
    }
    return compare_report(rows);
}

std::string CompareSummary::to_text() const {
    std::ostringstream os;
    os << "analytic vs MC agreement (" << total_rows << " rows)\n";
    char buf[160];
    for (const auto& [quantity, a] : per_quantity) {
        std::snprintf(buf, sizeof(buf),
                      "  %-12s rows=%-4d max|d|=%.6f mean|d|=%.6f within3hw=%.1f%%\n",
                      quantity.c_str(), a.rows, a.max_abs_diff, a.mean_abs_diff,
                      100.0 * a.within_3hw);
        os << buf;
    }
    if (!approx1_by_lambda_t.empty()) {
        os << "  same-TBS diagnostic (mean, by TBS density):\n";
        for (const auto& [lt, v] : approx1_by_lambda_t) {
            std::snprintf(buf, sizeof(buf), "    lambda_t=%.3g -> %.6f\n", lt, v);
            os << buf;
        }
    }
    return os.str();
}

std::string CompareSummary::to_json() const {
    nlohmann::json j;
    j["rows"] = total_rows;
    for (const auto& [quantity, a] : per_quantity) {
        j["quantities"][quantity] = {{"rows", a.rows},
                                     {"max_abs_diff", a.max_abs_diff},
                                     {"mean_abs_diff", a.mean_abs_diff},
                                     {"within_3hw", a.within_3hw}};
    }
    for (const auto& [lt, v] : approx1_by_lambda_t) {
        j["approx1_by_lambda_t"].push_back({{"lambda_t", lt}, {"mean", v}});
    }
    return j.dump(2) + "\n";
}

}  // namespace uavcov
