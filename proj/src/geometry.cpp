#include "uavcov/geometry.hpp"

#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <stdexcept>

namespace uavcov {

double serving_rn_distance(double r_rd0, double v, double t) {
    const double d = r_rd0 - v * t;
    return d > 0.0 ? d : 0.0;
}

double nearest_distance_pdf(double lambda, double r) {
    return 2.0 * M_PI * lambda * r * std::exp(-M_PI * lambda * r * r);
}

double nearest_distance_pdf(LinkKind link, const NetworkParams& p, double r) {
    return nearest_distance_pdf(node_density(link, p), r);
}

double nearest_distance_mean(double lambda) { return 0.5 / std::sqrt(lambda); }

double interferer_density(LinkKind link, const NetworkParams& p, const MobilityState& m,
                          double serving_dist0, double r) {
    if (link != LinkKind::RD) {
        // static transmitters: everything beyond the serving node interferes
        return r >= serving_dist0 ? p.lambda_t : 0.0;
    }
    const double vt = m.displacement();
    if (vt <= 0.0) {
        return r >= serving_dist0 ? p.lambda_r : 0.0;
    }
    const double outer = serving_dist0 + vt;
    const double inner = std::abs(serving_dist0 - vt);
    if (r >= outer) return p.lambda_r;
    if (r == inner) {
        // exact limit of the transition branch: arccos(+-1) or, with the
        // boundary collapsed onto the origin, the half-plane overlap
        if (serving_dist0 < vt) return p.lambda_r;
        return serving_dist0 > vt ? 0.0 : 0.5 * p.lambda_r;
    }
    if (r > inner) {
        double arg = (serving_dist0 * serving_dist0 - r * r - vt * vt) / (2.0 * r * vt);
        if (arg < -1.0 - 1e-9 || arg > 1.0 + 1e-9) {
            throw std::logic_error("interferer_density: arccos argument out of range");
        }
        arg = std::clamp(arg, -1.0, 1.0);
        return p.lambda_r / M_PI * std::acos(arg);
    }
    return serving_dist0 < vt ? p.lambda_r : 0.0;
}

double same_tbs_probability(const NetworkParams& p, double r_sd, double r_rd_t) {
    const double a = M_PI * p.lambda_t * (r_sd * r_sd + r_rd_t * r_rd_t);
    const double b = 2.0 * M_PI * p.lambda_t * r_sd * r_rd_t;
    // exp(-a) I0(b) = exp(b - a) * [exp(-b) I0(b)], with b <= a always
    return std::exp(b - a) * gsl_sf_bessel_I0_scaled(b);
}

double relay_association_probability(const NetworkParams& p, const MobilityState& m) {
    const double lt = p.lambda_t;
    const double lr = p.lambda_r;
    const double h2 = p.h_r * p.h_r;
    const double vt = m.displacement();

    const double core = std::exp(-M_PI * lt * h2) * (1.0 - std::exp(-M_PI * lr * vt * vt));

    // Tail term written with the exclusion weight folded into the integrand,
    // exp(-pi lt ((r-vt)^2 + h^2) - pi lr r^2), so no large exponentials meet.
    auto integrand = [&](double r) {
        const double d = r - vt;
        return r * std::exp(-M_PI * lt * (d * d + h2) - M_PI * lr * r * r);
    };
    quad::Spec spec(1e-10, 1e-10);
    const double scale = 1.0 / std::sqrt(M_PI * (lr + lt));
    const auto tail = quad::integrate_semi_infinite(integrand, vt, spec, scale);

    const double a_srd = core + 2.0 * M_PI * lr * tail.value;
    return std::clamp(a_srd, 0.0, 1.0);
}

double expected_travel_time(const NetworkParams& p) {
    if (p.v <= 0.0) {
        throw std::domain_error("expected_travel_time: v must be positive");
    }
    return nearest_distance_mean(p.lambda_r) / p.v;
}

void NetworkParams::validate() const {
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0)) throw std::invalid_argument(std::string(name) + ": must be > 0");
    };
    auto non_negative = [](double x, const char* name) {
        if (!(x >= 0.0)) throw std::invalid_argument(std::string(name) + ": must be >= 0");
    };
    positive(lambda_t, "lambda_t");
    positive(lambda_r, "lambda_r");
    non_negative(h_r, "h_r");
    positive(p_t, "p_t");
    positive(p_r, "p_r");
    non_negative(sigma2, "sigma2");
    non_negative(v, "v");
    positive(g_t_min, "g_t_min");
    positive(g_r_min, "g_r_min");
    if (g_t_max < g_t_min) throw std::invalid_argument("g_t_max: must be >= g_t_min");
    if (g_r_max < g_r_min) throw std::invalid_argument("g_r_max: must be >= g_r_min");
    positive(path_loss.g2g.a_los, "path_loss.g2g.a_los");
    positive(path_loss.g2g.a_nlos, "path_loss.g2g.a_nlos");
    positive(path_loss.a2g.a_los, "path_loss.a2g.a_los");
    positive(path_loss.a2g.a_nlos, "path_loss.a2g.a_nlos");
    positive(los.d1, "los.d1");
    positive(los.d2, "los.d2");
    positive(los.a, "los.a");
    positive(los.b, "los.b");
}

}  // namespace uavcov
