#include "uavcov/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uavcov/channel.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/parallel.hpp"

namespace uavcov {

namespace {

// stream purposes under one drop key
enum Purpose : uint64_t {
    kTbsInner = 1,
    kTbsOuter,
    kRnInner,
    kRnOuter,
    kRnMove,
    kTbsUeLink,  // TBS -> UE links (signal and interference)
    kTbsRnLink,  // TBS -> serving RN links
    kRnUeLink,   // RN -> UE links
};

constexpr uint64_t kDropDomain = 0xd20f5ca1eull;

struct Workspace {
    std::vector<double> tbs_x, tbs_y;
    std::vector<double> rn_x, rn_y;
    int serving_tbs_ue = -1;
    int serving_rn = -1;
    int serving_tbs_rn = -1;
    double r_sd = 0.0;
    double r_rd0 = 0.0;
    double r_rd_t = 0.0;
    double r_sr_t = 0.0;
    bool relay = false;
    bool resampled = false;
};

void sample_annulus(RngStream& g, double lambda, double r_lo, double r_hi,
                    std::vector<double>& xs, std::vector<double>& ys) {
    const double area = M_PI * (r_hi * r_hi - r_lo * r_lo);
    const int n = g.poisson(lambda * area);
    for (int i = 0; i < n; ++i) {
        const double r = std::sqrt(r_lo * r_lo + (r_hi * r_hi - r_lo * r_lo) * g.uniform());
        const double phi = 2.0 * M_PI * g.uniform();
        xs.push_back(r * std::cos(phi));
        ys.push_back(r * std::sin(phi));
    }
}

int nearest_index(const std::vector<double>& xs, const std::vector<double>& ys, double px,
                  double py, double& best_dist) {
    int best = -1;
    double best2 = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < xs.size(); ++j) {
        const double dx = xs[j] - px;
        const double dy = ys[j] - py;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best2) {
            best2 = d2;
            best = static_cast<int>(j);
        }
    }
    best_dist = best >= 0 ? std::sqrt(best2) : std::numeric_limits<double>::infinity();
    return best;
}

/// Sample both processes, advance them to time t and resolve the serving
/// nodes. Geometry draws are keyed by (drop, region); node attributes hang
/// off per-node substreams so extending the disk or reordering evaluation
/// cannot shift them.
void build_drop(Workspace& ws, const NetworkParams& p, const MobilityState& m,
                uint64_t drop_key, const McConfig& mc) {
    ws.tbs_x.clear();
    ws.tbs_y.clear();
    ws.rn_x.clear();
    ws.rn_y.clear();
    ws.resampled = false;

    uint64_t key = drop_key;
    for (int attempt = 0;; ++attempt) {
        RngStream tbs_gen(derive_seed(key, kTbsInner));
        sample_annulus(tbs_gen, p.lambda_t, 0.0, mc.disk_radius, ws.tbs_x, ws.tbs_y);
        if (mc.outer_radius > mc.disk_radius) {
            RngStream outer_gen(derive_seed(key, kTbsOuter));
            sample_annulus(outer_gen, p.lambda_t, mc.disk_radius, mc.outer_radius, ws.tbs_x,
                           ws.tbs_y);
        }
        if (!ws.tbs_x.empty()) break;
        // no TBS anywhere: neither link can exist; redraw this drop
        if (attempt > 200) throw std::runtime_error("mcsim: TBS process empty repeatedly");
        ws.resampled = true;
        key = derive_seed(key, 0x5e5aull, static_cast<uint64_t>(attempt + 1));
        ws.tbs_x.clear();
        ws.tbs_y.clear();
    }

    RngStream rn_gen(derive_seed(key, kRnInner));
    sample_annulus(rn_gen, p.lambda_r, 0.0, mc.disk_radius, ws.rn_x, ws.rn_y);
    if (mc.outer_radius > mc.disk_radius) {
        RngStream outer_gen(derive_seed(key, kRnOuter));
        sample_annulus(outer_gen, p.lambda_r, mc.disk_radius, mc.outer_radius, ws.rn_x, ws.rn_y);
    }

    ws.serving_tbs_ue = nearest_index(ws.tbs_x, ws.tbs_y, 0.0, 0.0, ws.r_sd);

    double nearest0;
    const int nearest_rn0 = nearest_index(ws.rn_x, ws.rn_y, 0.0, 0.0, nearest0);
    ws.r_rd0 = nearest0;

    // advance RNs to time t
    const double step = m.v * m.t;
    if (step > 0.0 && m.scheme != MobilityScheme::Hover) {
        for (size_t j = 0; j < ws.rn_x.size(); ++j) {
            if (m.scheme == MobilityScheme::Scheme2 && static_cast<int>(j) == nearest_rn0) {
                continue;  // handled below
            }
            RngStream mv(derive_seed(key, kRnMove, j));
            const double phi = 2.0 * M_PI * mv.uniform();
            ws.rn_x[j] += step * std::cos(phi);
            ws.rn_y[j] += step * std::sin(phi);
        }
        if (m.scheme == MobilityScheme::Scheme2 && nearest_rn0 >= 0) {
            const double moved = serving_rn_distance(nearest0, m.v, m.t);
            const double shrink = nearest0 > 0.0 ? moved / nearest0 : 0.0;
            ws.rn_x[nearest_rn0] *= shrink;
            ws.rn_y[nearest_rn0] *= shrink;
        }
    }

    if (m.scheme == MobilityScheme::Scheme2) {
        ws.serving_rn = nearest_rn0;
        ws.r_rd_t = nearest_rn0 >= 0 ? serving_rn_distance(nearest0, m.v, m.t)
                                     : std::numeric_limits<double>::infinity();
    } else {
        // instantaneous handover: nearest RN at the observation time
        ws.serving_rn = nearest_index(ws.rn_x, ws.rn_y, 0.0, 0.0, ws.r_rd_t);
    }

    if (ws.serving_rn >= 0) {
        ws.serving_tbs_rn = nearest_index(ws.tbs_x, ws.tbs_y, ws.rn_x[ws.serving_rn],
                                          ws.rn_y[ws.serving_rn], ws.r_sr_t);
    } else {
        ws.serving_tbs_rn = -1;
        ws.r_sr_t = std::numeric_limits<double>::infinity();
    }

    const double boundary2 = ws.r_rd_t * ws.r_rd_t + p.h_r * p.h_r;
    ws.relay = ws.serving_rn >= 0 && ws.r_sd * ws.r_sd > boundary2;
}

/// Fading power of one link; LoS state then fading, in stream order.
double link_power_factor(RngStream& s, LinkKind link, const NetworkParams& p, double ground_r,
                         double& loss_out) {
    const double p_los = los_probability(link, p, ground_r);
    const bool los = s.uniform() < p_los;
    const auto pl = path_loss(link, p, ground_r);
    const auto pc = propagation_class(link);
    const double k = p.rician.k(pc, los ? LosState::Los : LosState::Nlos, ground_r);
    loss_out = los ? pl.los : pl.nlos;
    return s.rician_power(k);
}

double sinr_direct(const Workspace& ws, const NetworkParams& p, uint64_t drop_key) {
    double loss;
    RngStream sig(derive_seed(drop_key, kTbsUeLink, ws.serving_tbs_ue));
    const double h2 = link_power_factor(sig, LinkKind::SD, p, ws.r_sd, loss);
    const double signal =
        p.p_t * beamforming_gain(LinkKind::SD, GainRole::Target, p) * h2 / loss;

    const double g_int = beamforming_gain(LinkKind::SD, GainRole::Interference, p);
    double interference = 0.0;
    for (size_t j = 0; j < ws.tbs_x.size(); ++j) {
        if (static_cast<int>(j) == ws.serving_tbs_ue) continue;
        const double r = std::hypot(ws.tbs_x[j], ws.tbs_y[j]);
        RngStream s(derive_seed(drop_key, kTbsUeLink, j));
        double l;
        const double hj = link_power_factor(s, LinkKind::SD, p, r, l);
        interference += p.p_t * g_int * hj / l;
    }
    const double den = interference + p.sigma2;
    return den > 0.0 ? signal / den : std::numeric_limits<double>::infinity();
}

double sinr_first_hop(const Workspace& ws, const NetworkParams& p, uint64_t drop_key) {
    const double rx = ws.rn_x[ws.serving_rn];
    const double ry = ws.rn_y[ws.serving_rn];

    double loss;
    RngStream sig(derive_seed(drop_key, kTbsRnLink, ws.serving_tbs_rn));
    const double h2 = link_power_factor(sig, LinkKind::SR, p, ws.r_sr_t, loss);
    const double signal =
        p.p_t * beamforming_gain(LinkKind::SR, GainRole::Target, p) * h2 / loss;

    const double g_int = beamforming_gain(LinkKind::SR, GainRole::Interference, p);
    double interference = 0.0;
    for (size_t j = 0; j < ws.tbs_x.size(); ++j) {
        if (static_cast<int>(j) == ws.serving_tbs_rn) continue;
        const double r = std::hypot(ws.tbs_x[j] - rx, ws.tbs_y[j] - ry);
        RngStream s(derive_seed(drop_key, kTbsRnLink, j));
        double l;
        const double hj = link_power_factor(s, LinkKind::SR, p, r, l);
        interference += p.p_t * g_int * hj / l;
    }
    const double den = interference + p.sigma2;
    return den > 0.0 ? signal / den : std::numeric_limits<double>::infinity();
}

double sinr_second_hop(const Workspace& ws, const NetworkParams& p, uint64_t drop_key) {
    double loss;
    RngStream sig(derive_seed(drop_key, kRnUeLink, ws.serving_rn));
    const double h2 = link_power_factor(sig, LinkKind::RD, p, ws.r_rd_t, loss);
    const double signal =
        p.p_r * beamforming_gain(LinkKind::RD, GainRole::Target, p) * h2 / loss;

    const double g_int = beamforming_gain(LinkKind::RD, GainRole::Interference, p);
    double interference = 0.0;
    for (size_t j = 0; j < ws.rn_x.size(); ++j) {
        if (static_cast<int>(j) == ws.serving_rn) continue;
        const double r = std::hypot(ws.rn_x[j], ws.rn_y[j]);
        RngStream s(derive_seed(drop_key, kRnUeLink, j));
        double l;
        const double hj = link_power_factor(s, LinkKind::RD, p, r, l);
        interference += p.p_r * g_int * hj / l;
    }
    const double den = interference + p.sigma2;
    return den > 0.0 ? signal / den : std::numeric_limits<double>::infinity();
}

McEstimate make_estimate(int64_t successes, int64_t n, uint64_t seed) {
    McEstimate e;
    e.n = static_cast<int>(n);
    e.seed = seed;
    if (n > 0) {
        e.value = static_cast<double>(successes) / static_cast<double>(n);
        e.half_width = 1.96 * std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n));
    }
    return e;
}

}  // namespace

DropRealization simulate_drop(const NetworkParams& p, const MobilityState& m,
                              uint64_t drop_key, const McConfig& mc) {
    Workspace ws;
    build_drop(ws, p, m, drop_key, mc);
    DropRealization d;
    d.tbs_x = ws.tbs_x;
    d.tbs_y = ws.tbs_y;
    d.rn_x = ws.rn_x;
    d.rn_y = ws.rn_y;
    d.serving_tbs_ue = ws.serving_tbs_ue;
    d.serving_rn = ws.serving_rn;
    d.serving_tbs_rn = ws.serving_tbs_rn;
    d.r_sd = ws.r_sd;
    d.r_rd0 = ws.r_rd0;
    d.r_rd_t = ws.r_rd_t;
    d.r_sr_t = ws.r_sr_t;
    d.relay_selected = ws.relay;
    d.resampled = ws.resampled;
    return d;
}

std::vector<McEstimate> estimate_batch(const NetworkParams& p, const std::vector<double>& betas,
                                       Quantity quantity, const MobilityState& m,
                                       const McConfig& mc) {
    if (mc.n_drops < 1) throw std::invalid_argument("mcsim: n_drops must be >= 1");
    if (quantity == Quantity::Association && betas.size() != 1) {
        throw std::invalid_argument("mcsim: association takes a single dummy threshold");
    }

    struct Block {
        std::vector<int64_t> hits;
        int64_t used = 0;
    };
    const int64_t block_size = 256;

    auto worker = [&](int64_t lo, int64_t hi) {
        Block blk;
        blk.hits.assign(betas.size(), 0);
        Workspace ws;
        for (int64_t i = lo; i < hi; ++i) {
            const uint64_t drop_key = derive_seed(mc.seed, kDropDomain, static_cast<uint64_t>(i));
            build_drop(ws, p, m, drop_key, mc);

            if (quantity == Quantity::Association) {
                blk.used++;
                if (ws.relay) blk.hits[0]++;
                continue;
            }

            const bool needs_rn = quantity != Quantity::DirectLink &&
                                  !(quantity == Quantity::Total && !ws.relay);
            if (needs_rn && ws.serving_rn < 0) {
                continue;  // no RN in the disk: relay quantities undefined
            }

            double value = 0.0;
            switch (quantity) {
                case Quantity::Total:
                    value = ws.relay ? std::min(sinr_first_hop(ws, p, drop_key),
                                                sinr_second_hop(ws, p, drop_key))
                                     : sinr_direct(ws, p, drop_key);
                    break;
                case Quantity::DirectLink: value = sinr_direct(ws, p, drop_key); break;
                case Quantity::FirstHop: value = sinr_first_hop(ws, p, drop_key); break;
                case Quantity::SecondHop: value = sinr_second_hop(ws, p, drop_key); break;
                case Quantity::RelayLink:
                    value = std::min(sinr_first_hop(ws, p, drop_key),
                                     sinr_second_hop(ws, p, drop_key));
                    break;
                case Quantity::Association: break;
            }
            blk.used++;
            for (size_t b = 0; b < betas.size(); ++b) {
                if (value >= betas[b]) blk.hits[b]++;
            }
        }
        return blk;
    };

    const auto blocks = parallel_map_blocks<Block>(mc.n_drops, block_size, mc.jobs, worker);

    std::vector<int64_t> hits(betas.size(), 0);
    int64_t used = 0;
    for (const auto& blk : blocks) {
        used += blk.used;
        for (size_t b = 0; b < betas.size(); ++b) hits[b] += blk.hits[b];
    }
    std::vector<McEstimate> out;
    out.reserve(betas.size());
    for (size_t b = 0; b < betas.size(); ++b) out.push_back(make_estimate(hits[b], used, mc.seed));
    return out;
}

McEstimate estimate(const NetworkParams& p, const CoverageQuery& q, const MobilityState& m,
                    const McConfig& mc) {
    return estimate_batch(p, {q.beta}, q.quantity, m, mc).front();
}

double SameTbsRates::empirical(int i, int j) const {
    const auto c = count[static_cast<size_t>(i * bins + j)];
    return c > 0 ? static_cast<double>(same_count[static_cast<size_t>(i * bins + j)]) /
                       static_cast<double>(c)
                 : 0.0;
}

double SameTbsRates::predicted(int i, int j) const {
    const auto c = count[static_cast<size_t>(i * bins + j)];
    return c > 0 ? predicted_sum[static_cast<size_t>(i * bins + j)] / static_cast<double>(c)
                 : 0.0;
}

double SameTbsRates::half_width(int i, int j) const {
    const auto c = count[static_cast<size_t>(i * bins + j)];
    if (c == 0) return 1.0;
    const double p_hat = empirical(i, j);
    return 1.96 * std::sqrt(std::max(p_hat * (1.0 - p_hat), 1e-12) / static_cast<double>(c));
}

SameTbsRates measure_same_tbs_rate(const NetworkParams& p, const MobilityState& m,
                                   const McConfig& mc, int bins, double bin_width) {
    struct Block {
        std::vector<int64_t> count, same;
        std::vector<double> pred;
        int64_t overall_n = 0, overall_same = 0;
    };
    const size_t cells = static_cast<size_t>(bins) * static_cast<size_t>(bins);

    auto worker = [&](int64_t lo, int64_t hi) {
        Block blk;
        blk.count.assign(cells, 0);
        blk.same.assign(cells, 0);
        blk.pred.assign(cells, 0.0);
        Workspace ws;
        for (int64_t i = lo; i < hi; ++i) {
            const uint64_t drop_key = derive_seed(mc.seed, kDropDomain, static_cast<uint64_t>(i));
            build_drop(ws, p, m, drop_key, mc);
            if (ws.serving_rn < 0 || ws.serving_tbs_rn < 0) continue;
            const bool same = ws.serving_tbs_rn == ws.serving_tbs_ue;
            blk.overall_n++;
            if (same) blk.overall_same++;
            const int bi = static_cast<int>(ws.r_sd / bin_width);
            const int bj = static_cast<int>(ws.r_rd_t / bin_width);
            if (bi < bins && bj < bins) {
                const size_t cell = static_cast<size_t>(bi * bins + bj);
                blk.count[cell]++;
                if (same) blk.same[cell]++;
                blk.pred[cell] += same_tbs_probability(p, ws.r_sd, ws.r_rd_t);
            }
        }
        return blk;
    };

    const auto blocks = parallel_map_blocks<Block>(mc.n_drops, 256, mc.jobs, worker);

    SameTbsRates out;
    out.bins = bins;
    out.bin_width = bin_width;
    out.count.assign(cells, 0);
    out.same_count.assign(cells, 0);
    out.predicted_sum.assign(cells, 0.0);
    int64_t overall_n = 0, overall_same = 0;
    for (const auto& blk : blocks) {
        overall_n += blk.overall_n;
        overall_same += blk.overall_same;
        for (size_t c = 0; c < cells; ++c) {
            out.count[c] += blk.count[c];
            out.same_count[c] += blk.same[c];
            out.predicted_sum[c] += blk.pred[c];
        }
    }
    out.overall = make_estimate(overall_same, overall_n, mc.seed);
    return out;
}

std::vector<double> sample_nearest_distances(double lambda, int n_drops, uint64_t seed,
                                             double disk_radius) {
    NetworkParams p;
    p.lambda_r = lambda;
    McConfig mc;
    mc.seed = seed;
    mc.disk_radius = disk_radius;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n_drops));
    std::vector<double> xs, ys;
    for (int i = 0; i < n_drops; ++i) {
        const uint64_t drop_key = derive_seed(seed, kDropDomain, static_cast<uint64_t>(i));
        xs.clear();
        ys.clear();
        RngStream gen(derive_seed(drop_key, kRnInner));
        sample_annulus(gen, lambda, 0.0, disk_radius, xs, ys);
        double dist;
        if (nearest_index(xs, ys, 0.0, 0.0, dist) >= 0) out.push_back(dist);
    }
    return out;
}

RadialHistogram interferer_histogram(const NetworkParams& p, const MobilityState& m,
                                     const McConfig& mc, double r0_lo, double r0_hi,
                                     const std::vector<double>& edges) {
    const size_t nb = edges.size() - 1;

    // expected count in [lo, hi) for one drop: integral of the conditional
    // radial density times 2 pi r, split at the branch boundaries
    auto expected_bin = [&](double r_rd0, double lo, double hi) {
        const double vt = m.displacement();
        const double inner = std::abs(r_rd0 - vt);
        const double outer = r_rd0 + vt;
        double total = 0.0;
        double segs[4] = {lo, std::clamp(inner, lo, hi), std::clamp(outer, lo, hi), hi};
        for (int s = 0; s < 3; ++s) {
            const double a = segs[s], b = segs[s + 1];
            if (b <= a) continue;
            // 5-point Gauss-Legendre on [a, b]
            static const double gx[5] = {-0.906179845938664, -0.538469310105683, 0.0,
                                         0.538469310105683, 0.906179845938664};
            static const double gw[5] = {0.236926885056189, 0.478628670499366,
                                         0.568888888888889, 0.478628670499366,
                                         0.236926885056189};
            const double c = 0.5 * (a + b), h = 0.5 * (b - a);
            double acc = 0.0;
            for (int k = 0; k < 5; ++k) {
                const double r = c + h * gx[k];
                acc += gw[k] * interferer_density(LinkKind::RD, p, m, r_rd0, r) * 2.0 * M_PI * r;
            }
            total += acc * h;
        }
        return total;
    };

    struct Block {
        std::vector<double> sum, sum2, expect;
        int64_t used = 0;
    };

    auto worker = [&](int64_t lo_i, int64_t hi_i) {
        Block blk;
        blk.sum.assign(nb, 0.0);
        blk.sum2.assign(nb, 0.0);
        blk.expect.assign(nb, 0.0);
        Workspace ws;
        std::vector<double> counts(nb);
        for (int64_t i = lo_i; i < hi_i; ++i) {
            const uint64_t drop_key = derive_seed(mc.seed, kDropDomain, static_cast<uint64_t>(i));
            build_drop(ws, p, m, drop_key, mc);
            if (ws.serving_rn < 0 || ws.r_rd0 < r0_lo || ws.r_rd0 >= r0_hi) continue;
            blk.used++;
            std::fill(counts.begin(), counts.end(), 0.0);
            for (size_t j = 0; j < ws.rn_x.size(); ++j) {
                if (static_cast<int>(j) == ws.serving_rn) continue;
                const double r = std::hypot(ws.rn_x[j], ws.rn_y[j]);
                const auto it = std::upper_bound(edges.begin(), edges.end(), r);
                if (it == edges.begin() || it == edges.end()) continue;
                counts[static_cast<size_t>(it - edges.begin() - 1)] += 1.0;
            }
            for (size_t b = 0; b < nb; ++b) {
                blk.sum[b] += counts[b];
                blk.sum2[b] += counts[b] * counts[b];
                blk.expect[b] += expected_bin(ws.r_rd0, edges[b], edges[b + 1]);
            }
        }
        return blk;
    };

    const auto blocks = parallel_map_blocks<Block>(mc.n_drops, 256, mc.jobs, worker);

    RadialHistogram out;
    out.edges = edges;
    out.mean_count.assign(nb, 0.0);
    out.expected_count.assign(nb, 0.0);
    out.half_width.assign(nb, 0.0);
    std::vector<double> sum(nb, 0.0), sum2(nb, 0.0), expect(nb, 0.0);
    int64_t used = 0;
    for (const auto& blk : blocks) {
        used += blk.used;
        for (size_t b = 0; b < nb; ++b) {
            sum[b] += blk.sum[b];
            sum2[b] += blk.sum2[b];
            expect[b] += blk.expect[b];
        }
    }
    out.drops_used = static_cast<int>(used);
    if (used > 0) {
        for (size_t b = 0; b < nb; ++b) {
            const double n = static_cast<double>(used);
            out.mean_count[b] = sum[b] / n;
            out.expected_count[b] = expect[b] / n;
            const double var = std::max(sum2[b] / n - out.mean_count[b] * out.mean_count[b], 0.0);
            out.half_width[b] = 1.96 * std::sqrt(var / n);
        }
    }
    return out;
}

}  // namespace uavcov
