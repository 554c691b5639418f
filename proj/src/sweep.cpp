#include "uavcov/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "uavcov/parallel.hpp"
#include "uavcov/svgplot.hpp"

namespace uavcov {

const char* kCsvHeader =
    "quantity,scheme,t_s,beta_db,h_r_m,lambda_r_per_m2,lambda_t_per_m2,v_mps,"
    "analytic,mc,mc_half_width,mc_drops,term_sd_a,term_sd_b,term_srd_a,term_srd_b,"
    "approx1_diag,error";

namespace {

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string opt9(const std::optional<double>& v) { return v ? fmt9(*v) : std::string(); }

NetworkParams apply_overrides(const ExperimentConfig& cfg, const ResultRow& row) {
    NetworkParams p = cfg.network;
    p.h_r = row.h_r;
    p.lambda_r = row.lambda_r;
    p.lambda_t = row.lambda_t;
    p.v = row.v;
    return p;
}

/// Key of a shared-drop group: everything but the threshold.
std::string mc_group_key(const ResultRow& r) {
    std::ostringstream os;
    os << r.quantity << '|' << r.scheme << '|' << fmt9(r.t) << '|' << fmt9(r.h_r) << '|'
       << fmt9(r.lambda_r) << '|' << fmt9(r.lambda_t) << '|' << fmt9(r.v);
    return os.str();
}

void evaluate_analytic(const ExperimentConfig& cfg, ResultRow& row) {
    const NetworkParams p = apply_overrides(cfg, row);
    const MobilityState m{cfg.scheme, row.v, row.t};
    const CoverageQuery q{db_to_linear(row.beta_db), row.t, quantity_from_string(row.quantity)};
    if (q.quantity == Quantity::Total) {
        const auto breakdown = total_cp(p, q.beta, m);
        row.analytic = breakdown.total();
        row.term_sd_a = breakdown.i_sd_a;
        row.term_sd_b = breakdown.i_sd_b;
        row.term_srd_a = breakdown.i_srd_a;
        row.term_srd_b = breakdown.i_srd_b;
        row.approx1 = approx1_diagnostic(p, m);
    } else {
        row.analytic = evaluate(p, q, m);
    }
}

}  // namespace

std::vector<ResultRow> expand_rows(const ExperimentConfig& cfg) {
    ResultRow base;
    base.scheme = to_string(cfg.scheme);
    base.t = cfg.t;
    base.beta_db = cfg.beta_db;
    base.h_r = cfg.network.h_r;
    base.lambda_r = cfg.network.lambda_r;
    base.lambda_t = cfg.network.lambda_t;
    base.v = cfg.network.v;

    std::vector<ResultRow> rows{base};
    for (const auto& axis : cfg.axes) {
        std::vector<ResultRow> next;
        next.reserve(rows.size() * axis.values.size());
        for (const auto& row : rows) {
            for (double value : axis.values) {
                ResultRow r = row;
                if (axis.name == "beta_db") r.beta_db = value;
                else if (axis.name == "t") r.t = value;
                else if (axis.name == "h_r") r.h_r = value;
                else if (axis.name == "lambda_r") r.lambda_r = value;
                else if (axis.name == "lambda_t") r.lambda_t = value;
                else if (axis.name == "v") r.v = value;
                next.push_back(std::move(r));
            }
        }
        rows = std::move(next);
    }

    std::vector<ResultRow> out;
    out.reserve(rows.size() * cfg.quantities.size());
    for (const auto& row : rows) {
        for (auto q : cfg.quantities) {
            ResultRow r = row;
            r.quantity = to_string(q);
            out.push_back(std::move(r));
        }
    }
    return out;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.quantity << ',' << r.scheme << ',' << fmt9(r.t) << ',' << fmt9(r.beta_db) << ','
           << fmt9(r.h_r) << ',' << fmt9(r.lambda_r) << ',' << fmt9(r.lambda_t) << ','
           << fmt9(r.v) << ',' << opt9(r.analytic) << ',' << opt9(r.mc) << ','
           << opt9(r.mc_half_width) << ',' << (r.mc_drops ? std::to_string(*r.mc_drops) : "")
           << ',' << opt9(r.term_sd_a) << ',' << opt9(r.term_sd_b) << ',' << opt9(r.term_srd_a)
           << ',' << opt9(r.term_srd_b) << ',' << opt9(r.approx1) << ','
           << (r.error ? *r.error : "") << '\n';
    }
    return os.str();
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_csv(rows);
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string header;
    if (!std::getline(in, header) || header != kCsvHeader) {
        throw std::runtime_error("csv: unexpected header in " + path);
    }
    std::vector<ResultRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        f.resize(18);
        ResultRow r;
        r.quantity = f[0];
        r.scheme = f[1];
        r.t = std::stod(f[2]);
        r.beta_db = std::stod(f[3]);
        r.h_r = std::stod(f[4]);
        r.lambda_r = std::stod(f[5]);
        r.lambda_t = std::stod(f[6]);
        r.v = std::stod(f[7]);
        auto opt = [](const std::string& s) -> std::optional<double> {
            return s.empty() ? std::nullopt : std::optional<double>(std::stod(s));
        };
        r.analytic = opt(f[8]);
        r.mc = opt(f[9]);
        r.mc_half_width = opt(f[10]);
        if (!f[11].empty()) r.mc_drops = std::stoi(f[11]);
        r.term_sd_a = opt(f[12]);
        r.term_sd_b = opt(f[13]);
        r.term_srd_a = opt(f[14]);
        r.term_srd_b = opt(f[15]);
        r.approx1 = opt(f[16]);
        if (!f[17].empty()) r.error = f[17];
        rows.push_back(std::move(r));
    }
    return rows;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    RunOutcome outcome;
    outcome.rows = expand_rows(cfg);
    auto& rows = outcome.rows;

    // Monte-Carlo pass: rows sharing everything but the threshold reuse the
    // same drops, thresholded per row.
    if (cfg.engine != Engine::Analytic) {
        std::map<std::string, std::vector<size_t>> groups;
        for (size_t i = 0; i < rows.size(); ++i) groups[mc_group_key(rows[i])].push_back(i);
        McConfig mc;
        mc.n_drops = cfg.mc.n_drops;
        mc.seed = cfg.mc.seed;
        mc.disk_radius = cfg.mc.disk_radius;
        mc.jobs = cfg.jobs;
        for (auto& [key, idxs] : groups) {
            auto& first = rows[idxs.front()];
            const NetworkParams p = apply_overrides(cfg, first);
            const MobilityState m{cfg.scheme, first.v, first.t};
            const Quantity q = quantity_from_string(first.quantity);
            std::vector<double> betas;
            if (q == Quantity::Association) {
                betas = {1.0};
            } else {
                betas.reserve(idxs.size());
                for (size_t i : idxs) betas.push_back(db_to_linear(rows[i].beta_db));
            }
            try {
                const auto est = estimate_batch(p, betas, q, m, mc);
                for (size_t k = 0; k < idxs.size(); ++k) {
                    const auto& e = q == Quantity::Association ? est.front() : est[k];
                    rows[idxs[k]].mc = e.value;
                    rows[idxs[k]].mc_half_width = e.half_width;
                    rows[idxs[k]].mc_drops = e.n;
                }
            } catch (const std::exception& e) {
                for (size_t i : idxs) rows[i].error = e.what();
            }
        }
    }

    // analytic pass, parallel over rows
    if (cfg.engine != Engine::Mc) {
        parallel_map_blocks<int>(static_cast<int64_t>(rows.size()), 1, cfg.jobs,
                                 [&](int64_t lo, int64_t) {
                                     auto& row = rows[static_cast<size_t>(lo)];
                                     try {
                                         evaluate_analytic(cfg, row);
                                     } catch (const std::exception& e) {
                                         row.error = row.error ? *row.error + "; " + e.what()
                                                               : e.what();
                                     }
                                     return 0;
                                 });
    }

    for (const auto& r : rows) {
        if (r.error) outcome.failed_rows++;
    }

    std::filesystem::create_directories(cfg.output.dir);
    outcome.csv_path = (std::filesystem::path(cfg.output.dir) / "results.csv").string();
    write_csv(rows, outcome.csv_path);

    if (cfg.output.plots) {
        outcome.plot_paths = emit_plots(rows, cfg.output.dir);
    }
    return outcome;
}

}  // namespace uavcov
