#include "uavcov/quad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace uavcov::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename T>
double absval(T v) {
    return std::abs(v);
}

template <typename T>
struct Panel {
    double a, b;
    T value;
    double error;
    bool operator<(const Panel& o) const {
        // strict total order so the refinement sequence is deterministic
        if (error != o.error) return error < o.error;
        return a > o.a;
    }
};

template <typename T, typename F>
Panel<T> gk15(const F& f, double a, double b) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    T fv1[7], fv2[7];
    const T fc = f(centr);
    T resg = fc * kWg[3];
    T resk = fc * kWgk[7];
    double resabs = absval(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double absc = hlgth * kXgk[j];
        fv1[j] = f(centr - absc);
        fv2[j] = f(centr + absc);
        const T fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (absval(fv1[j]) + absval(fv2[j]));
    }
    const T reskh = resk * 0.5;
    double resasc = kWgk[7] * absval(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (absval(fv1[j] - reskh) + absval(fv2[j] - reskh));
    }
    resasc *= std::abs(hlgth);
    resabs *= std::abs(hlgth);

    double err = absval((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    const double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(eps * 50.0 * resabs, err);
    }
    if (std::isnan(err) || std::isnan(absval(resk))) {
        throw ConvergenceError("integrand evaluated to NaN in [" + std::to_string(a) + ", " +
                                   std::to_string(b) + "]",
                               0.0, std::numeric_limits<double>::infinity());
    }
    return Panel<T>{a, b, resk * hlgth, err};
}

template <typename T, typename F>
Result<T> adaptive(const F& f, const std::vector<double>& breaks, const Spec& spec) {
    std::priority_queue<Panel<T>> heap;
    T total{};
    double total_err = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto p = gk15<T>(f, breaks[i], breaks[i + 1]);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }
    int splits = 0;
    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * absval(total)); };
    while (total_err > tolerance() && splits < spec.max_subdivisions && !heap.empty()) {
        Panel<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval exhausted at machine precision; accept its estimate
            continue;
        }
        auto left = gk15<T>(f, worst.a, mid);
        auto right = gk15<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    if (total_err > tolerance()) {
        throw ConvergenceError("adaptive quadrature: tolerance " + std::to_string(tolerance()) +
                                   " not reached, best error " + std::to_string(total_err),
                               absval(total), total_err);
    }
    Result<T> res;
    res.value = total;
    res.error = total_err;
    res.subdivisions = splits + static_cast<int>(breaks.size()) - 1;
    return res;
}

// Map [a, inf) onto (0, 1]: r = a + s*(1-u)/u. Power-law tails of order
// r^{-2} or faster become bounded near u = 0.
template <typename T, typename F>
Result<T> semi_infinite_impl(const F& f, double a, const Spec& spec, double scale_hint) {
    const double s = scale_hint > 0.0 ? scale_hint : std::max(std::abs(a), 1.0);
    double max_r_seen = a;
    auto mapped = [&](double u) -> T {
        const double r = a + s * (1.0 - u) / u;
        max_r_seen = std::max(max_r_seen, r);
        return f(r) * (s / (u * u));
    };
    // mild grading towards u=0 so widely separated scales start resolved
    const std::vector<double> breaks{1e-6, 1e-4, 1e-2, 0.1, 0.3, 0.6, 1.0};
    auto res = adaptive<T>(mapped, breaks, spec);
    res.truncation_point = max_r_seen;
    return res;
}

}  // namespace

Result<double> integrate(const RealFn& f, double a, double b, const Spec& spec) {
    return adaptive<double>(f, std::vector<double>{a, b}, spec);
}

Result<cplx> integrate_complex(const ComplexFn& f, double a, double b, const Spec& spec) {
    return adaptive<cplx>(f, std::vector<double>{a, b}, spec);
}

Result<double> integrate_segmented(const RealFn& f, const std::vector<double>& breakpoints,
                                   const Spec& spec) {
    if (breakpoints.size() < 2) {
        throw std::invalid_argument("integrate_segmented: need at least two breakpoints");
    }
    return adaptive<double>(f, breakpoints, spec);
}

Result<double> integrate_semi_infinite(const RealFn& f, double a, const Spec& spec,
                                       double scale_hint) {
    return semi_infinite_impl<double>(f, a, spec, scale_hint);
}

Result<cplx> integrate_semi_infinite_complex(const ComplexFn& f, double a, const Spec& spec,
                                             double scale_hint) {
    return semi_infinite_impl<cplx>(f, a, spec, scale_hint);
}

Result<double> gil_pelaez(const ComplexFn& g, const Spec& spec, double tau_scale,
                          double osc_rate) {
    auto h = [&](double tau) { return std::imag(g(tau)) / tau; };
    const double x = std::max(osc_rate, 0.0);

    // Start below both the transform scale and the oscillation scale; to the
    // left of the start everything is smooth and Im[g] vanishes linearly.
    double tau_start = std::max(tau_scale, std::numeric_limits<double>::min());
    if (x > 0.0) tau_start = std::min(tau_start, 1.0 / x);

    // contribution-weighted envelope |Im g|, tracked over the whole march
    double peak = 0.0;
    auto probe = [&](double tau) {
        const double v = std::abs(std::imag(g(tau)));
        peak = std::max(peak, v);
        return v;
    };

    // left march: plain geometric steps down
    constexpr double kStep = M_E * M_E;
    double tau_lo = tau_start;
    {
        int below = 0;
        for (int k = 0; k < 60; ++k) {
            tau_lo /= kStep;
            below = probe(tau_lo) <= spec.tail_envelope * std::max(peak, 1e-300) ? below + 1 : 0;
            if (below >= 3 && peak > 0.0) break;
        }
    }

    // right march: geometric steps capped at half oscillation periods; stops
    // when the envelope has died or when only the linear phase is left
    std::vector<double> breaks{tau_lo};
    for (double tau = tau_lo; tau < tau_start; tau *= kStep) {
        if (tau > tau_lo) breaks.push_back(tau);
    }
    breaks.push_back(tau_start);

    bool decayed = false;
    bool oscillatory_tail = false;
    double tau = tau_start;
    double env_last = 0.0;
    {
        int below = 0;
        const int cap = 400;
        for (int k = 0; k < cap; ++k) {
            double next = tau * kStep;
            if (x > 0.0) next = std::min(next, tau + M_PI / x);
            if (!std::isfinite(next)) break;
            breaks.push_back(next);
            tau = next;
            env_last = probe(tau);
            if (!std::isfinite(env_last)) {
                throw ConvergenceError("gil_pelaez: integrand not finite at tau = " +
                                           std::to_string(tau),
                                       0.0, std::numeric_limits<double>::infinity());
            }
            below = env_last <= spec.tail_envelope * std::max(peak, 1e-300) ? below + 1 : 0;
            if (below >= 3) {
                decayed = true;
                break;
            }
            if (x > 0.0 && tau * x >= 6.0 * M_PI && tau >= tau_start && k >= 8) {
                oscillatory_tail = true;
                break;
            }
        }
    }

    if (!decayed && !oscillatory_tail && peak > 0.0) {
        // Bounded envelope with no known linear phase: evaluate with Abel
        // damping exp(-eps tau) and extrapolate eps -> 0. Unbounded growth
        // is a genuine failure.
        const double ref = std::abs(std::imag(g(tau_start)));
        if (!std::isfinite(peak) || !(env_last <= 10.0 * std::max(ref, 1e-9 * peak))) {
            throw ConvergenceError("gil_pelaez: integrand envelope grows towards the cap", 0.0,
                                   std::numeric_limits<double>::infinity());
        }
        const double eps0 = 1e-3 / tau_scale;
        double vals[3];
        double errs[3];
        for (int i = 0; i < 3; ++i) {
            const double eps = eps0 / static_cast<double>(1 << i);
            auto damped = [&](double t) { return g(t) * std::exp(-eps * t); };
            const auto r = gil_pelaez(damped, spec, tau_scale, 0.0);
            vals[i] = r.value;
            errs[i] = r.error;
        }
        const double lin0 = 2.0 * vals[1] - vals[0];
        const double lin1 = 2.0 * vals[2] - vals[1];
        Result<double> res;
        res.value = (4.0 * lin1 - lin0) / 3.0;
        res.error = std::abs(lin1 - lin0) + errs[2];
        return res;
    }

    auto res = adaptive<double>(h, breaks, spec);

    if (oscillatory_tail) {
        // Beyond the switch point the sign flips every pi/x; sum half-period
        // panels and collapse the alternating series by iterated averaging.
        constexpr int kTerms = 48;
        std::vector<double> partial(kTerms);
        double running = 0.0;
        double t0 = breaks.back();
        for (int k = 0; k < kTerms; ++k) {
            const double t1 = t0 + M_PI / x;
            running += gk15<double>(h, t0, t1).value;
            partial[static_cast<size_t>(k)] = running;
            t0 = t1;
        }
        double prev_est = partial.back();
        double est = prev_est;
        for (size_t n = partial.size() - 1; n >= 1; --n) {
            for (size_t i = 0; i < n; ++i) partial[i] = 0.5 * (partial[i] + partial[i + 1]);
            prev_est = est;
            est = partial[0];
        }
        res.value += est;
        res.error += std::abs(est - prev_est);
    }

    // Left-tail closure: on (0, tau_lo] the integrand Im[g]/tau is flat with
    // value Im[g(tau_lo)]/tau_lo, so the missing mass is Im[g(tau_lo)].
    res.value += std::imag(g(tau_lo));
    res.value /= M_PI;
    res.error /= M_PI;
    res.truncation_point = tau;
    return res;
}

}  // namespace uavcov::quad
