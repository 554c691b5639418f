#include "uavcov/coverage.hpp"

#include <algorithm>
#include <cmath>

namespace uavcov {

using cplx = std::complex<double>;

namespace {

constexpr cplx kJ{0.0, 1.0};

/// Per-distance factors of the interference transform integrand.
struct LinkChannel {
    LinkKind link;
    const NetworkParams* p;
    double power;
    double gain_target;
    double gain_interf;
    PropagationClass pclass;

    LinkChannel(LinkKind k, const NetworkParams& params)
        : link(k),
          p(&params),
          power(tx_power(k, params)),
          gain_target(beamforming_gain(k, GainRole::Target, params)),
          gain_interf(beamforming_gain(k, GainRole::Interference, params)),
          pclass(propagation_class(k)) {}

    double k_factor(LosState n, double r) const { return p->rician.k(pclass, n, r); }
};

/// 1 - sum_n p_n(r) L_h(s P G_m / L_n(r)), the per-interferer deficit of the
/// generating functional.
cplx interferer_deficit(const LinkChannel& ch, double r, cplx s) {
    const auto pl = path_loss(ch.link, *ch.p, r);
    const double p_los = los_probability(ch.link, *ch.p, r);
    const double drive = ch.power * ch.gain_interf;
    cplx acc{1.0, 0.0};
    acc -= p_los * rician_power_lt(ch.k_factor(LosState::Los, r), s * (drive / pl.los));
    acc -= (1.0 - p_los) *
           rician_power_lt(ch.k_factor(LosState::Nlos, r), s * (drive / pl.nlos));
    return acc;
}

/// Exponent of Eq.-style generating functional: 2 pi Int deficit * density * r dr.
cplx interference_exponent(const LinkChannel& ch, const NetworkParams& p,
                           const MobilityState& m, double serving_dist0, cplx s,
                           const quad::Spec& spec) {
    if (s == cplx{} || ch.gain_interf == 0.0) return {};
    const double lambda = node_density(ch.link, p);
    const double scale = std::max(serving_dist0, 1.0 / std::sqrt(M_PI * lambda));

    if (ch.link != LinkKind::RD || m.displacement() <= 0.0) {
        auto f = [&](double r) -> cplx {
            return 2.0 * M_PI * lambda * r * interferer_deficit(ch, r, s);
        };
        return quad::integrate_semi_infinite_complex(f, serving_dist0, spec, scale).value;
    }

    // mobile RN interferers: piecewise density over the three radial branches
    const double vt = m.displacement();
    const double inner = std::abs(serving_dist0 - vt);
    const double outer = serving_dist0 + vt;
    cplx total{};
    if (serving_dist0 < vt && inner > 0.0) {
        auto f = [&](double r) -> cplx {
            return 2.0 * M_PI * lambda * r * interferer_deficit(ch, r, s);
        };
        total += quad::integrate_complex(f, 0.0, inner, spec).value;
    }
    auto f_band = [&](double r) -> cplx {
        const double dens = interferer_density(LinkKind::RD, p, m, serving_dist0, r);
        return 2.0 * M_PI * dens * r * interferer_deficit(ch, r, s);
    };
    total += quad::integrate_complex(f_band, inner, outer, spec).value;
    auto f_tail = [&](double r) -> cplx {
        return 2.0 * M_PI * lambda * r * interferer_deficit(ch, r, s);
    };
    total += quad::integrate_semi_infinite_complex(f_tail, outer, spec, scale).value;
    return total;
}

/// Gil-Pelaez CCDF for a link whose signal factor is a weighted mix of the
/// LoS and NLoS transforms. `weights[n]` picks the mixture (1/0 selects a
/// single state).
double mixed_cp(const LinkChannel& ch, const NetworkParams& p, const MobilityState& m,
                double serving_dist0, double effective_dist, double beta,
                const double weights[2], const CoverageSpecs& specs) {
    const auto pl = path_loss(ch.link, p, effective_dist);
    if (!(pl.los > 0.0) || !(pl.nlos > 0.0)) {
        throw std::domain_error("path loss vanishes at zero 3-D distance");
    }
    const double drive = ch.power * ch.gain_target;
    const double a_los = drive / pl.los;
    const double a_nlos = drive / pl.nlos;
    const double k_los = ch.k_factor(LosState::Los, effective_dist);
    const double k_nlos = ch.k_factor(LosState::Nlos, effective_dist);
    const double noise_arg = beta * p.sigma2;

    // Noise-only upper bound: when beta sigma^2 sits hundreds of fading
    // standard deviations above the strongest signal state, coverage is
    // below ~1e-50 and the inversion is skipped.
    bool hopeless = noise_arg > 0.0;
    for (int n = 0; n < 2 && hopeless; ++n) {
        if (weights[n] == 0.0) continue;
        const double a_n = n == 0 ? a_los : a_nlos;
        const double k_n = n == 0 ? k_los : k_nlos;
        if (!(noise_arg / a_n > 120.0 + 3.0 * k_n)) hopeless = false;
    }
    if (hopeless) return 0.0;

    auto g = [&](double tau) -> cplx {
        cplx signal{};
        if (weights[0] != 0.0) {
            signal += weights[0] * rician_power_lt(k_los, -kJ * tau * a_los);
        }
        if (weights[1] != 0.0) {
            signal += weights[1] * rician_power_lt(k_nlos, -kJ * tau * a_nlos);
        }
        const cplx interf =
            std::exp(-interference_exponent(ch, p, m, serving_dist0, kJ * tau * beta,
                                            specs.inner));
        return signal * interf * std::exp(-kJ * tau * noise_arg);
    };

    const double a_mix = weights[0] * a_los + weights[1] * a_nlos;
    const double tau_scale = a_mix > 0.0 ? 1.0 / a_mix : 1.0;
    const auto gp = quad::gil_pelaez(g, specs.gil_pelaez, tau_scale, noise_arg);

    const double cp = 0.5 + gp.value;
    const double allowance = 10.0 * std::max(specs.gil_pelaez.abs_tol, gp.error);
    if (cp < -allowance || cp > 1.0 + allowance) {
        throw NumericalIntegrityError("conditional coverage " + std::to_string(cp) +
                                      " out of [0,1] beyond quadrature allowance");
    }
    return std::clamp(cp, 0.0, 1.0);
}

double effective_distance(LinkKind link, double serving_dist0, const MobilityState& m) {
    if (link == LinkKind::RD) {
        return serving_rn_distance(serving_dist0, 1.0, m.displacement());
    }
    return serving_dist0;
}

/// Unconditional CP of a link: conditioning distance integrated against the
/// nearest-neighbour density, with an optional extra radial weight.
double unconditioned_cp(LinkKind link, const NetworkParams& p, const MobilityState& m,
                        double beta, const CoverageSpecs& specs) {
    const double lambda = node_density(link, p);
    const double peak_w = nearest_distance_pdf(lambda, 1.0 / std::sqrt(2.0 * M_PI * lambda));
    auto f = [&](double r) {
        const double w = nearest_distance_pdf(lambda, r);
        if (w <= 1e-20 * peak_w) return 0.0;
        return w * link_cp(link, r, beta, p, m, specs);
    };
    return quad::integrate_semi_infinite(f, 0.0, specs.outer, 1.0 / std::sqrt(M_PI * lambda))
        .value;
}

}  // namespace

const char* to_string(Quantity q) {
    switch (q) {
        case Quantity::Total: return "total";
        case Quantity::DirectLink: return "direct_link";
        case Quantity::FirstHop: return "first_hop";
        case Quantity::SecondHop: return "second_hop";
        case Quantity::RelayLink: return "relay_link";
        case Quantity::Association: return "association";
    }
    return "?";
}

Quantity quantity_from_string(const std::string& s) {
    if (s == "total") return Quantity::Total;
    if (s == "direct_link") return Quantity::DirectLink;
    if (s == "first_hop") return Quantity::FirstHop;
    if (s == "second_hop") return Quantity::SecondHop;
    if (s == "relay_link") return Quantity::RelayLink;
    if (s == "association") return Quantity::Association;
    throw std::invalid_argument("unknown quantity: " + s);
}

cplx interference_lt(LinkKind link, const NetworkParams& p, const MobilityState& m,
                     double serving_dist0, cplx s, const CoverageSpecs& specs) {
    if (s == cplx{}) return {1.0, 0.0};
    const LinkChannel ch(link, p);
    return std::exp(-interference_exponent(ch, p, m, serving_dist0, s, specs.inner));
}

double conditional_cp(LinkKind link, LosState state, double serving_dist0, double beta,
                      const NetworkParams& p, const MobilityState& m,
                      const CoverageSpecs& specs) {
    const LinkChannel ch(link, p);
    const double eff = effective_distance(link, serving_dist0, m);
    const double w[2] = {state == LosState::Los ? 1.0 : 0.0,
                         state == LosState::Nlos ? 1.0 : 0.0};
    return mixed_cp(ch, p, m, serving_dist0, eff, beta, w, specs);
}

double link_cp(LinkKind link, double serving_dist0, double beta, const NetworkParams& p,
               const MobilityState& m, const CoverageSpecs& specs) {
    const LinkChannel ch(link, p);
    const double eff = effective_distance(link, serving_dist0, m);
    const double p_los = los_probability(link, p, eff);
    const double w[2] = {p_los, 1.0 - p_los};
    return mixed_cp(ch, p, m, serving_dist0, eff, beta, w, specs);
}

TotalCpBreakdown total_cp(const NetworkParams& p, double beta, const MobilityState& m,
                          const CoverageSpecs& specs) {
    const double lt = p.lambda_t;
    const double lr = p.lambda_r;
    const double h = p.h_r;
    const double h2 = h * h;
    const double vt = m.displacement();
    const double t_scale = 1.0 / std::sqrt(M_PI * lt);
    const double r_scale = 1.0 / std::sqrt(M_PI * lr);
    const double peak_t = nearest_distance_pdf(lt, 1.0 / std::sqrt(2.0 * M_PI * lt));
    const double peak_r = nearest_distance_pdf(lr, 1.0 / std::sqrt(2.0 * M_PI * lr));

    TotalCpBreakdown out;

    // direct link, serving TBS closer than the UAV altitude
    if (h > 0.0) {
        auto f = [&](double r) {
            const double w = nearest_distance_pdf(lt, r);
            if (w <= 1e-20 * peak_t) return 0.0;
            return w * link_cp(LinkKind::SD, r, beta, p, m, specs);
        };
        out.i_sd_a = quad::integrate(f, 0.0, h, specs.outer).value;
    }

    // direct link beyond the altitude: weighted by the probability that no
    // RN reaches closer, exp(-pi lr (sqrt(r^2-h^2)+vt)^2)
    {
        auto f = [&](double r) {
            const double root = std::sqrt(std::max(r * r - h2, 0.0)) + vt;
            const double w =
                nearest_distance_pdf(lt, r) * std::exp(-M_PI * lr * root * root);
            if (w <= 1e-20 * peak_t) return 0.0;
            return w * link_cp(LinkKind::SD, r, beta, p, m, specs);
        };
        out.i_sd_b = quad::integrate_semi_infinite(f, h, specs.outer, t_scale).value;
    }

    // first-hop factor, shared by both relay-region terms (time-invariant)
    double sr_factor;
    {
        auto f = [&](double r) {
            const double w = nearest_distance_pdf(lt, r);
            if (w <= 1e-20 * peak_t) return 0.0;
            return w * link_cp(LinkKind::SR, r, beta, p, m, specs);
        };
        sr_factor = quad::integrate_semi_infinite(f, 0.0, specs.outer, t_scale).value;
    }

    // relay region with the serving RN already overhead
    if (vt > 0.0) {
        auto f = [&](double r) {
            const double w = nearest_distance_pdf(lr, r);
            if (w <= 1e-20 * peak_r) return 0.0;
            return w * link_cp(LinkKind::RD, r, beta, p, m, specs);
        };
        const double inner = quad::integrate(f, 0.0, vt, specs.outer).value;
        out.i_srd_a = std::exp(-M_PI * lt * h2) * sr_factor * inner;
    }

    // relay region with the serving RN still approaching; the direct-link
    // exclusion weight exp(-pi lt ((r-vt)^2 + h^2)) is kept inside the
    // integrand so no large exponentials are formed
    {
        auto f = [&](double r) {
            const double d = r - vt;
            const double w = nearest_distance_pdf(lr, r) *
                             std::exp(-M_PI * lt * (d * d + h2));
            if (w <= 1e-20 * peak_r) return 0.0;
            return w * link_cp(LinkKind::RD, r, beta, p, m, specs);
        };
        const double outer_int =
            quad::integrate_semi_infinite(f, vt, specs.outer, r_scale).value;
        out.i_srd_b = sr_factor * outer_int;
    }

    for (double term : {out.i_sd_a, out.i_sd_b, out.i_srd_a, out.i_srd_b}) {
        if (term < -1e-6 || term > 1.0 + 1e-6) {
            throw NumericalIntegrityError("region term out of [0,1]: " + std::to_string(term));
        }
    }
    if (out.total() > 1.0 + 1e-4) {
        throw NumericalIntegrityError("region terms sum to " + std::to_string(out.total()));
    }
    return out;
}

RelayCp relay_cp(const NetworkParams& p, double beta, const MobilityState& m,
                 const CoverageSpecs& specs) {
    RelayCp out;
    out.first_hop = unconditioned_cp(LinkKind::SR, p, m, beta, specs);
    out.second_hop = unconditioned_cp(LinkKind::RD, p, m, beta, specs);
    out.two_hop = out.first_hop * out.second_hop;
    return out;
}

double direct_link_cp(const NetworkParams& p, double beta, const CoverageSpecs& specs) {
    return unconditioned_cp(LinkKind::SD, p, MobilityState{MobilityScheme::Scheme2, p.v, 0.0},
                            beta, specs);
}

double approx1_diagnostic(const NetworkParams& p, const MobilityState& m,
                          const CoverageSpecs& specs) {
    const double vt = m.displacement();
    const AssociationRegions regions{p.h_r, vt};
    const double lt_scale = 1.0 / std::sqrt(M_PI * p.lambda_t);
    const double lr_scale = 1.0 / std::sqrt(M_PI * p.lambda_r);

    quad::Spec spec(1e-9, 1e-9);
    auto outer = [&](double r_rd0) {
        const double moved = serving_rn_distance(r_rd0, 1.0, vt);
        const double lower = regions.direct_boundary(r_rd0);
        auto inner = [&](double r_sd) {
            return nearest_distance_pdf(p.lambda_t, r_sd) *
                   same_tbs_probability(p, r_sd, moved);
        };
        return nearest_distance_pdf(p.lambda_r, r_rd0) *
               quad::integrate_semi_infinite(inner, lower, spec, lt_scale).value;
    };
    const double num = quad::integrate_semi_infinite(outer, 0.0, spec, lr_scale).value;
    const double mass = relay_association_probability(p, m);
    (void)specs;
    return mass > 0.0 ? num / mass : 0.0;
}

double evaluate(const NetworkParams& p, const CoverageQuery& q, const MobilityState& m,
                const CoverageSpecs& specs) {
    switch (q.quantity) {
        case Quantity::Total: return total_cp(p, q.beta, m, specs).total();
        case Quantity::DirectLink: return direct_link_cp(p, q.beta, specs);
        case Quantity::FirstHop: return relay_cp(p, q.beta, m, specs).first_hop;
        case Quantity::SecondHop:
            return unconditioned_cp(LinkKind::RD, p, m, q.beta, specs);
        case Quantity::RelayLink: {
            const auto r = relay_cp(p, q.beta, m, specs);
            return r.two_hop;
        }
        case Quantity::Association: return relay_association_probability(p, m);
    }
    throw std::invalid_argument("evaluate: unknown quantity");
}

}  // namespace uavcov
