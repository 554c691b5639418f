#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace uavcov {

/// Link classes of the relay scenario: TBS->UE (direct), TBS->RN (first hop),
/// RN->UE (second hop).
enum class LinkKind { SD, SR, RD };

enum class LosState { Los, Nlos };

enum class PropagationClass { G2G, A2G };

enum class GainRole { Target, Interference };

enum class MobilityScheme { Hover, Scheme1, Scheme2 };

/// Mobility scheme selector plus elapsed time. Hover and Scheme1 leave the
/// serving-link geometry statistically unchanged, so analytic code treats
/// them as Scheme2 evaluated at t = 0.
struct MobilityState {
    MobilityScheme scheme = MobilityScheme::Scheme2;
    double v = 0.0;  // UAV speed [m/s]
    double t = 0.0;  // elapsed time [s]

    /// Effective serving-node displacement used by the analytic expressions.
    double displacement() const {
        return scheme == MobilityScheme::Scheme2 ? v * t : 0.0;
    }
};

/// Linear-scale path loss L(d) = A * d^alpha per propagation class and
/// LoS/NLoS state. The intercepts are dimensionless linear factors.
struct PathLossClass {
    double a_los = 0.01;
    double a_nlos = 0.01;
    double alpha_los = 3.0;
    double alpha_nlos = 4.0;
};

struct PathLossParams {
    PathLossClass g2g;
    PathLossClass a2g;
};

/// LoS probability model parameters: d1/d2 near/far critical distances for
/// ground links, (a, b) sigmoid fit for air-to-ground links.
struct LosModelParams {
    double d1 = 18.0;   // [m]
    double d2 = 63.0;   // [m]
    double a = 9.612;
    double b = 0.158;
};

/// Rician K factor per (propagation class, LoS state), optionally distance
/// dependent. Fading power is normalised (unit mean) in all cases.
struct RicianKModel {
    // [G2G/A2G][LoS/NLoS]
    double k_const[2][2] = {{10.0, 0.0}, {10.0, 0.0}};
    std::function<double(double)> k_fn[2][2] = {};

    double k(PropagationClass c, LosState n, double r) const {
        const auto ci = static_cast<int>(c);
        const auto ni = static_cast<int>(n);
        if (k_fn[ci][ni]) {
            return k_fn[ci][ni](r);
        }
        return k_const[ci][ni];
    }

    bool is_constant() const {
        for (const auto& row : k_fn) {
            for (const auto& fn : row) {
                if (fn) return false;
            }
        }
        return true;
    }
};

/// Full scenario description: node densities, powers, altitude, sectored
/// beamforming gains and channel parameters.
struct NetworkParams {
    double lambda_t = 5e-8;  // TBS density [1/m^2]
    double lambda_r = 1e-7;  // UAV RN density [1/m^2]
    double h_r = 1000.0;     // UAV altitude [m]
    double p_t = 1.0;        // TBS transmit power [W]
    double p_r = 1.0;        // RN transmit power [W]
    double sigma2 = 1e-10;   // noise power [W]
    double v = 40.0;         // UAV speed [m/s]

    double g_t_max = 2.0;
    double g_t_min = 0.5;
    double g_r_max = 1.0;
    double g_r_min = 1.0;

    PathLossParams path_loss;
    LosModelParams los;
    RicianKModel rician;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;

    static NetworkParams defaults() { return NetworkParams{}; }
};

inline PropagationClass propagation_class(LinkKind link) {
    return link == LinkKind::SD ? PropagationClass::G2G : PropagationClass::A2G;
}

inline double node_density(LinkKind link, const NetworkParams& p) {
    return link == LinkKind::RD ? p.lambda_r : p.lambda_t;
}

inline double tx_power(LinkKind link, const NetworkParams& p) {
    return link == LinkKind::RD ? p.p_r : p.p_t;
}

inline const char* to_string(LinkKind link) {
    switch (link) {
        case LinkKind::SD: return "SD";
        case LinkKind::SR: return "SR";
        case LinkKind::RD: return "RD";
    }
    return "?";
}

inline const char* to_string(MobilityScheme s) {
    switch (s) {
        case MobilityScheme::Hover: return "hover";
        case MobilityScheme::Scheme1: return "scheme1";
        case MobilityScheme::Scheme2: return "scheme2";
    }
    return "?";
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace uavcov
