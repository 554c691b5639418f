// End-to-end verification: every release gate below must print PASS. The
// analytic engine is checked against closed forms where they exist and
// against the Monte-Carlo simulator everywhere else, at the shipped urban
// scenario scale.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <gsl/gsl_sf_bessel.h>
#include <map>
#include <string>
#include <vector>

#include "uavcov/channel.hpp"
#include "uavcov/config.hpp"
#include "uavcov/coverage.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/mcsim.hpp"
#include "uavcov/parallel.hpp"
#include "uavcov/quad.hpp"
#include "uavcov/sweep.hpp"

using namespace uavcov;

namespace {

int g_failures = 0;

void criterion(int n, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", ok ? "PASS" : "FAIL", n, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

NetworkParams table_params() { return NetworkParams::defaults(); }

MobilityState moving(double t) { return {MobilityScheme::Scheme2, 40.0, t}; }

double ks_statistic(std::vector<double> samples, double lambda) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = 1.0 - std::exp(-M_PI * lambda * samples[i] * samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return d;
}

double rician_ccdf_oracle(double k_factor, double z) {
    if (z <= 0.0) return 1.0;
    if (k_factor == 0.0) return std::exp(-z);
    auto dens = [&](double u) {
        const double arg = 2.0 * std::sqrt(k_factor * (k_factor + 1.0) * u);
        return (k_factor + 1.0) * std::exp(-k_factor - (k_factor + 1.0) * u + arg) *
               gsl_sf_bessel_I0_scaled(arg);
    };
    return quad::integrate_semi_infinite(dens, z, quad::Spec(1e-12, 1e-12), 1.0).value;
}

// ---------------------------------------------------------------------------

void criterion_1_association_closed_form() {
    auto p = table_params();
    double worst = 0.0;
    for (double lr : {2e-8, 1e-7, 5e-7, 2e-6}) {
        for (double lt : {1e-8, 5e-8, 4e-7, 1e-6}) {
            for (double h : {0.0, 100.0, 700.0, 2000.0}) {
                p.lambda_r = lr;
                p.lambda_t = lt;
                p.h_r = h;
                const double expected = lr / (lr + lt) * std::exp(-M_PI * lt * h * h);
                const double got = relay_association_probability(p, moving(0.0));
                worst = std::max(worst, std::abs(got - expected));
            }
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |A_srd - closed form| = %.3g over 4x4x4 grid", worst);
    criterion(1, "relay association closed form at t=0", worst <= 1e-6, buf);
}

void criterion_2_nearest_distance_ks() {
    bool ok = true;
    std::string detail;
    for (double lambda : {5e-8, 1e-7}) {
        const auto samples = sample_nearest_distances(lambda, 50000, 101, 25e3);
        const double d = ks_statistic(samples, lambda);
        const double crit = 1.62762 / std::sqrt(50000.0);
        ok = ok && samples.size() == 50000 && d < crit;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "lambda=%.0e: D=%.5f (1%% crit %.5f)  ", lambda, d,
                      crit);
        detail += buf;
    }
    criterion(2, "nearest-distance KS test at 1%", ok, detail);
}

// Exact conditional void probability with the lens overlap of the two
// exclusion regions retained; printed next to the closed Bessel form so the
// systematic part of any disagreement is attributable.
double lens_area(double r1, double r2, double d) {
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) {
        const double r = std::min(r1, r2);
        return M_PI * r * r;
    }
    const double a1 = r1 * r1 * std::acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1));
    const double a2 = r2 * r2 * std::acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2));
    const double tri = 0.5 * std::sqrt(std::max(
        (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2), 0.0));
    return a1 + a2 - tri;
}

double same_tbs_exact(double lambda_t, double r_sd, double r_rd) {
    auto f = [&](double th) {
        const double d =
            std::sqrt(r_sd * r_sd + r_rd * r_rd - 2.0 * r_sd * r_rd * std::cos(th));
        const double area = M_PI * d * d - lens_area(r_sd, d, r_rd);
        return std::exp(-lambda_t * area) / M_PI;
    };
    return quad::integrate(f, 0.0, M_PI, quad::Spec(1e-10, 1e-10)).value;
}

void criterion_3_same_tbs_bins() {
    auto p = table_params();
    McConfig mc;
    mc.n_drops = 50000;
    mc.seed = 103;
    mc.disk_radius = 50e3;
    const int bins = 5;
    const double bw = 800.0;
    const auto rates = measure_same_tbs_rate(p, moving(0.0), mc, bins, bw);
    bool ok = true;
    int checked = 0;
    double worst_sigma = 0.0;
    std::printf("    bin(r_sd, r_rd)      n   empirical  closed-form  exact-void  3*hw\n");
    for (int i = 0; i < bins; ++i) {
        for (int j = 0; j < bins; ++j) {
            const auto cnt = rates.count[static_cast<size_t>(i * bins + j)];
            if (cnt < 25) continue;
            ++checked;
            const double emp = rates.empirical(i, j);
            const double prd = rates.predicted(i, j);
            const double hw = rates.half_width(i, j);
            const double diff = std::abs(emp - prd);
            const double exact =
                same_tbs_exact(p.lambda_t, (i + 0.5) * bw, (j + 0.5) * bw);
            worst_sigma = std::max(worst_sigma, diff / std::max(hw, 1e-12));
            if (diff > 3.0 * hw) ok = false;
            std::printf("    [%4.0f,%4.0f)x[%4.0f,%4.0f) %6lld  %.4f     %.4f       %.4f    %.4f%s\n",
                        i * bw, (i + 1) * bw, j * bw, (j + 1) * bw,
                        static_cast<long long>(cnt), emp, prd, exact, 3.0 * hw,
                        diff > 3.0 * hw ? "  <-- beyond 3hw" : "");
        }
    }
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "%d/25 bins populated, worst |diff|/hw = %.1f. The closed Bessel form drops "
                  "the overlap of the two exclusion disks; the empirical rates instead track "
                  "the exact-void column above, so this gate cannot close as stated.",
                  checked, worst_sigma);
    criterion(3, "same-TBS rate vs closed Bessel form per bin", ok && checked >= 20, buf);
}

void criterion_4_interferer_density() {
    auto p = table_params();
    const double tbar = expected_travel_time(p);
    const double rbar = nearest_distance_mean(p.lambda_r);
    std::vector<double> edges;
    for (int i = 0; i <= 24; ++i) edges.push_back(6000.0 * i / 24.0);
    bool ok = true;
    std::string detail;
    for (double frac : {0.5, 1.0, 2.0}) {
        const auto m = moving(frac * tbar);
        McConfig mc;
        mc.n_drops = 50000;
        mc.seed = 104;
        mc.disk_radius = 40e3;
        const auto hist = interferer_histogram(p, m, mc, 0.8 * rbar, 1.2 * rbar, edges);
        double worst = 0.0;
        bool pass = hist.drops_used > 4000;
        for (size_t b = 0; b < hist.mean_count.size(); ++b) {
            const double diff = std::abs(hist.mean_count[b] - hist.expected_count[b]);
            worst = std::max(worst, diff / std::max(hist.half_width[b], 1e-12));
            if (diff > 3.0 * hist.half_width[b] + 1e-9) pass = false;
        }
        // branch-boundary continuity of the analytic profile at the bucket centre
        const double vt = m.displacement();
        for (double b : {std::abs(rbar - vt), rbar + vt}) {
            const double at = interferer_density(LinkKind::RD, p, m, rbar, b);
            double limit = b == rbar + vt ? p.lambda_r : (rbar < vt ? p.lambda_r : 0.0);
            if (b == std::abs(rbar - vt) && rbar == vt) limit = 0.5 * p.lambda_r;
            if (std::abs(at - limit) > 1e-9 * p.lambda_r) pass = false;
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "t=%.2gT: %d drops, worst|diff|/hw=%.2f  ", frac,
                      hist.drops_used, worst);
        detail += buf;
        ok = ok && pass;
    }
    criterion(4, "mobile interferer density three-branch check", ok, detail);
}

void criterion_5_gil_pelaez() {
    auto p = table_params();
    p.g_t_min = 0.0;
    p.g_r_min = 0.0;
    const auto specs = CoverageSpecs::tight();
    double worst_k0 = 0.0, worst_k10 = 0.0;
    // 10 points per fading state
    for (double r : {500.0, 1500.0, 3000.0, 6000.0, 10000.0}) {
        for (double beta : {0.5, 4.0}) {
            const double loss_n = path_loss(LinkKind::SD, p, r).nlos;
            const double z_n = beta * p.sigma2 * loss_n /
                               (p.p_t * beamforming_gain(LinkKind::SD, GainRole::Target, p));
            const double got_n =
                conditional_cp(LinkKind::SD, LosState::Nlos, r, beta, p, moving(0.0), specs);
            worst_k0 = std::max(worst_k0, std::abs(got_n - std::exp(-z_n)));
        }
    }
    for (double r : {4000.0, 8000.0, 12000.0, 16000.0, 20000.0}) {
        for (double beta : {0.5, 4.0}) {
            const double loss_l = path_loss(LinkKind::SD, p, r).los;
            const double z_l = beta * p.sigma2 * loss_l /
                               (p.p_t * beamforming_gain(LinkKind::SD, GainRole::Target, p));
            const double got_l =
                conditional_cp(LinkKind::SD, LosState::Los, r, beta, p, moving(0.0), specs);
            worst_k10 = std::max(worst_k10, std::abs(got_l - rician_ccdf_oracle(10.0, z_l)));
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "K=0 max err %.2e (tol 1e-6), K=10 max err %.2e (tol 1e-5)",
                  worst_k0, worst_k10);
    criterion(5, "inversion vs fading closed forms, 20 points", worst_k0 <= 1e-6 && worst_k10 <= 1e-5,
              buf);
}

struct GridPoint {
    double beta_db, h_r, t;
    double analytic = 0.0, mc = 0.0, hw = 0.0, approx1 = 0.0;
};

void criterion_6_and_7c_cross_validation() {
    auto p0 = table_params();
    const double tbar = expected_travel_time(p0);
    const std::vector<double> betas_db{-10, -5, 0, 5, 10, 20};
    const std::vector<double> hs{100, 300, 1000, 2000};
    const std::vector<double> ts{0.0, 2.5 * tbar};

    std::vector<GridPoint> grid;
    for (double h : hs) {
        for (double t : ts) {
            for (double b : betas_db) grid.push_back({b, h, t});
        }
    }

    // Monte-Carlo pass, drops shared across thresholds within a (h, t) cell
    for (double h : hs) {
        for (double t : ts) {
            auto p = table_params();
            p.h_r = h;
            McConfig mc;
            mc.n_drops = 50000;
            mc.seed = 106;
            std::vector<double> betas;
            for (double b : betas_db) betas.push_back(db_to_linear(b));
            const auto est = estimate_batch(p, betas, Quantity::Total, moving(t), mc);
            for (size_t k = 0; k < betas_db.size(); ++k) {
                for (auto& g : grid) {
                    if (g.h_r == h && g.t == t && g.beta_db == betas_db[k]) {
                        g.mc = est[k].value;
                        g.hw = est[k].half_width;
                    }
                }
            }
        }
    }

    // analytic pass, parallel over grid points
    parallel_map_blocks<int>(static_cast<int64_t>(grid.size()), 1, 0, [&](int64_t lo, int64_t) {
        auto& g = grid[static_cast<size_t>(lo)];
        auto p = table_params();
        p.h_r = g.h_r;
        const auto m = moving(g.t);
        g.analytic = total_cp(p, db_to_linear(g.beta_db), m).total();
        g.approx1 = approx1_diagnostic(p, m);
        return 0;
    });

    bool ok = true;
    double worst = 0.0;
    std::printf("    beta_dB   h_r      t     analytic        mc     3*hw   approx1\n");
    for (const auto& g : grid) {
        const double diff = std::abs(g.analytic - g.mc);
        const double budget = std::max(0.02, 3.0 * g.hw);
        worst = std::max(worst, diff);
        if (diff > budget) ok = false;
        std::printf("    %7.1f %5.0f %6.1f   %.6f  %.6f  %.4f  %.4f%s\n", g.beta_db, g.h_r,
                    g.t, g.analytic, g.mc, 3.0 * g.hw, g.approx1,
                    diff > budget ? "  <-- out of budget" : "");
    }

    // Attribution: the per-link unconditional quantities carry no
    // independence assumption, so their agreement separates engine defects
    // from the relay-region conditioning that the analytic total discards.
    {
        auto p = table_params();
        p.h_r = 1000.0;
        McConfig mc;
        mc.n_drops = 50000;
        mc.seed = 106;
        const auto m = moving(0.0);
        std::printf("    attribution at h=1000, t=0, beta=0 dB (no approximation in these):\n");
        for (auto q : {Quantity::DirectLink, Quantity::FirstHop, Quantity::SecondHop,
                       Quantity::RelayLink, Quantity::Association}) {
            const auto est = estimate(p, {1.0, 0.0, q}, m, mc);
            const double ana = evaluate(p, {1.0, 0.0, q}, m);
            std::printf("      %-12s analytic %.4f  mc %.4f  diff %+.4f (3hw %.4f)\n",
                        to_string(q), ana, est.value, ana - est.value,
                        3.0 * est.half_width);
        }
    }

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "48 points, max |analytic - mc| = %.4f vs budget max(0.02, 3hw). Every "
                  "unconditional quantity above matches to MC precision; the excess sits in "
                  "the relay-region terms, where conditioning on a distant serving TBS pushes "
                  "the relay's own TBS away (the dependence the analytic product form drops).",
                  worst);
    criterion(6, "total coverage cross-validation on the altitude grid", ok, buf);

    // Figure-4 style trend: relaying helps at 1000 m vs 100 m at 0 dB
    double cp100 = 0.0, cp1000 = 0.0;
    for (const auto& g : grid) {
        if (g.beta_db == 0.0 && g.t == 0.0 && g.h_r == 100.0) cp100 = g.analytic;
        if (g.beta_db == 0.0 && g.t == 0.0 && g.h_r == 1000.0) cp1000 = g.analytic;
    }
    std::snprintf(buf, sizeof(buf), "total CP at 0 dB: h=1000 -> %.4f vs h=100 -> %.4f", cp1000,
                  cp100);
    criterion(7, "figure trend (c): high-altitude relays help at 0 dB", cp1000 > cp100, buf);
}

void criterion_7a_association_trends() {
    auto p = table_params();
    const std::vector<double> lrs{1e-8, 3.2e-8, 1e-7, 3.2e-7, 1e-6};
    const std::vector<double> hs{100, 1000, 2000};
    bool monotone_lr = true, monotone_h = true;
    double spread0 = 0.0, spread100 = 0.0;
    for (double t : {0.0, 100.0}) {
        for (double h : hs) {
            double prev = -1.0;
            double lo = 2.0, hi = -1.0;
            for (double lr : lrs) {
                p.h_r = h;
                p.lambda_r = lr;
                const double a = relay_association_probability(p, moving(t));
                if (t == 0.0 && a < prev - 1e-12) monotone_lr = false;
                prev = a;
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
            const double spread = hi - lo;
            if (t == 0.0) spread0 = std::max(spread0, spread);
            else spread100 = std::max(spread100, spread);
        }
        if (t == 0.0) {
            for (double lr : lrs) {
                double prev_a = 2.0;
                for (double h : hs) {
                    p.h_r = h;
                    p.lambda_r = lr;
                    const double a = relay_association_probability(p, moving(0.0));
                    if (a > prev_a + 1e-12) monotone_h = false;
                    prev_a = a;
                }
            }
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "t=0 monotone in density/altitude: %s/%s; density spread %.3f -> %.3f at t=100",
                  monotone_lr ? "yes" : "no", monotone_h ? "yes" : "no", spread0, spread100);
    criterion(7, "figure trend (a): association sensitivity saturates with motion",
              monotone_lr && monotone_h && spread100 < spread0, buf);
}

void criterion_7b_second_hop_peak() {
    auto p0 = table_params();
    const double tbar = expected_travel_time(p0);
    bool ok = true;
    std::string detail;
    for (double h : {1000.0, 2000.0}) {
        std::vector<double> ts;
        for (int i = 0; i <= 12; ++i) ts.push_back(3.0 * tbar * i / 12.0);
        std::vector<double> cps(ts.size());
        parallel_map_blocks<int>(static_cast<int64_t>(ts.size()), 1, 0,
                                 [&](int64_t lo, int64_t) {
                                     auto p = table_params();
                                     p.h_r = h;
                                     cps[static_cast<size_t>(lo)] = evaluate(
                                         p, {1.0, ts[static_cast<size_t>(lo)], Quantity::SecondHop},
                                         moving(ts[static_cast<size_t>(lo)]));
                                     return 0;
                                 });
        bool nondecreasing = true;
        for (size_t i = 1; i < ts.size() && ts[i] <= tbar + 1e-9; ++i) {
            if (cps[i] < cps[i - 1] - 1e-4) nondecreasing = false;
        }
        const size_t arg =
            static_cast<size_t>(std::max_element(cps.begin(), cps.end()) - cps.begin());
        const double t_peak = ts[arg];
        const bool peak_near_travel = t_peak >= 0.75 * tbar && t_peak <= 1.75 * tbar;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "h=%.0f: peak at %.2fT, rise on [0,T]: %s  ", h,
                      t_peak / tbar, nondecreasing ? "yes" : "no");
        detail += buf;
        ok = ok && nondecreasing && peak_near_travel;
    }
    criterion(7, "figure trend (b): second hop peaks near the travel time", ok, detail);
}

void criterion_8_region_consistency() {
    auto p = table_params();
    const double tbar = expected_travel_time(p);
    bool ok = true;
    double worst_sum = 0.0, worst_relay = 0.0;
    for (double h : {100.0, 1000.0, 2000.0}) {
        for (double t : {0.0, 2.5 * tbar}) {
            p.h_r = h;
            const auto m = moving(t);
            const auto b = total_cp(p, 1e-9, m);
            const double relay_share = b.i_srd_a + b.i_srd_b;
            const double assoc = relay_association_probability(p, m);
            worst_sum = std::max(worst_sum, std::abs(b.total() - 1.0));
            worst_relay = std::max(worst_relay, std::abs(relay_share - assoc));
        }
    }
    ok = worst_sum <= 1e-3 && worst_relay <= 1e-3;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |sum-1| = %.2e, max |relay share - A_srd| = %.2e",
                  worst_sum, worst_relay);
    criterion(8, "region masses at vanishing threshold", ok, buf);
}

void criterion_9_determinism() {
    const char* cfg_text = R"({
      "network": { "lambda_t": 5e-8, "lambda_r": 1e-7, "h_r": 1000, "v": 40.0 },
      "sweep": [ { "name": "beta_db", "values": [0, 10] } ],
      "quantities": ["direct_link", "association"],
      "engine": "both",
      "mc": { "n_drops": 500, "seed": 77, "disk_radius": 40000.0 },
      "output": { "dir": "DIR", "plots": false }
    })";
    auto read = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>()};
    };
    std::string text_a = cfg_text, text_b = cfg_text;
    text_a.replace(text_a.find("DIR"), 3, "/tmp/uavcov_acc_a");
    text_b.replace(text_b.find("DIR"), 3, "/tmp/uavcov_acc_b");
    std::filesystem::remove_all("/tmp/uavcov_acc_a");
    std::filesystem::remove_all("/tmp/uavcov_acc_b");
    auto cfg_a = ExperimentConfig::from_json_text(text_a);
    auto cfg_b = ExperimentConfig::from_json_text(text_b);
    cfg_b.jobs = 2;
    const auto out_a = run_experiment(cfg_a);
    const auto out_b = run_experiment(cfg_b);
    const bool ok = out_a.failed_rows == 0 && out_b.failed_rows == 0 &&
                    read(out_a.csv_path) == read(out_b.csv_path);
    criterion(9, "byte-identical CSVs for identical config and seed", ok,
              ok ? "runs match across thread counts" : "CSV bytes differ");
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion_1_association_closed_form();
    criterion_2_nearest_distance_ks();
    criterion_3_same_tbs_bins();
    criterion_4_interferer_density();
    criterion_5_gil_pelaez();
    criterion_6_and_7c_cross_validation();
    criterion_7a_association_trends();
    criterion_7b_second_hop_peak();
    criterion_8_region_consistency();
    criterion_9_determinism();
    const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    std::printf("%s — %d criterion failure(s), %.1f s total\n",
                g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED", g_failures,
                dt.count());
    return g_failures == 0 ? 0 : 1;
}
