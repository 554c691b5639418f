#include "uavcov/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>

namespace uavcov {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError(path + "." + key + ": missing or not a number");
    }
    return j[key].get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? j[key].get<double>() : fallback;
}

void parse_path_loss_class(const json& j, const std::string& path, PathLossClass& out) {
    out.a_los = number_or(j, "a_los", out.a_los);
    out.a_nlos = number_or(j, "a_nlos", out.a_nlos);
    out.alpha_los = number_or(j, "alpha_los", out.alpha_los);
    out.alpha_nlos = number_or(j, "alpha_nlos", out.alpha_nlos);
    if (out.alpha_nlos < out.alpha_los) {
        // configuration sanity only; the model stays evaluable
        std::fprintf(stderr, "warning: %s.alpha_nlos below alpha_los\n", path.c_str());
    }
}

std::vector<double> expand_axis(const json& j, const std::string& path) {
    if (j.contains("values")) {
        if (!j["values"].is_array() || j["values"].empty()) {
            throw ConfigError(path + ".values: must be a non-empty array");
        }
        return j["values"].get<std::vector<double>>();
    }
    const double lo = require_number(j, path, "min");
    const double hi = require_number(j, path, "max");
    const int n = static_cast<int>(require_number(j, path, "points"));
    if (n < 1) throw ConfigError(path + ".points: must be >= 1");
    const std::string scale = j.value("scale", "linear");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        if (scale == "linear") {
            out.push_back(lo + f * (hi - lo));
        } else if (scale == "log") {
            if (lo <= 0.0 || hi <= 0.0) throw ConfigError(path + ": log scale needs positive bounds");
            out.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
        } else if (scale == "db") {
            out.push_back(std::pow(10.0, (lo + f * (hi - lo)) / 10.0));
        } else {
            throw ConfigError(path + ".scale: must be linear|log|db");
        }
    }
    return out;
}

}  // namespace

Engine engine_from_string(const std::string& s) {
    if (s == "analytic") return Engine::Analytic;
    if (s == "mc") return Engine::Mc;
    if (s == "both") return Engine::Both;
    throw ConfigError("engine: must be analytic|mc|both, got '" + s + "'");
}

const char* to_string(Engine e) {
    switch (e) {
        case Engine::Analytic: return "analytic";
        case Engine::Mc: return "mc";
        case Engine::Both: return "both";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    ExperimentConfig cfg;

    if (root.contains("network")) {
        const auto& n = root["network"];
        auto& p = cfg.network;
        p.lambda_t = number_or(n, "lambda_t", p.lambda_t);
        p.lambda_r = number_or(n, "lambda_r", p.lambda_r);
        p.h_r = number_or(n, "h_r", p.h_r);
        p.p_t = number_or(n, "p_t", p.p_t);
        p.p_r = number_or(n, "p_r", p.p_r);
        p.sigma2 = number_or(n, "sigma2", p.sigma2);
        p.v = number_or(n, "v", p.v);
        p.g_t_max = number_or(n, "g_t_max", p.g_t_max);
        p.g_t_min = number_or(n, "g_t_min", p.g_t_min);
        p.g_r_max = number_or(n, "g_r_max", p.g_r_max);
        p.g_r_min = number_or(n, "g_r_min", p.g_r_min);
    }
    if (root.contains("channel")) {
        const auto& c = root["channel"];
        if (c.contains("g2g")) {
            parse_path_loss_class(c["g2g"], "channel.g2g", cfg.network.path_loss.g2g);
            cfg.network.rician.k_const[0][0] = number_or(c["g2g"], "k_los", 10.0);
            cfg.network.rician.k_const[0][1] = number_or(c["g2g"], "k_nlos", 0.0);
            cfg.network.los.d1 = number_or(c["g2g"], "d1", cfg.network.los.d1);
            cfg.network.los.d2 = number_or(c["g2g"], "d2", cfg.network.los.d2);
        }
        if (c.contains("a2g")) {
            parse_path_loss_class(c["a2g"], "channel.a2g", cfg.network.path_loss.a2g);
            cfg.network.rician.k_const[1][0] = number_or(c["a2g"], "k_los", 10.0);
            cfg.network.rician.k_const[1][1] = number_or(c["a2g"], "k_nlos", 0.0);
            cfg.network.los.a = number_or(c["a2g"], "a", cfg.network.los.a);
            cfg.network.los.b = number_or(c["a2g"], "b", cfg.network.los.b);
        }
    }
    try {
        cfg.network.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("network.") + e.what());
    }

    if (root.contains("mobility")) {
        const auto& m = root["mobility"];
        const std::string scheme = m.value("scheme", "scheme2");
        if (scheme == "hover") cfg.scheme = MobilityScheme::Hover;
        else if (scheme == "scheme1") cfg.scheme = MobilityScheme::Scheme1;
        else if (scheme == "scheme2") cfg.scheme = MobilityScheme::Scheme2;
        else throw ConfigError("mobility.scheme: must be hover|scheme1|scheme2");
        cfg.t = number_or(m, "t", 0.0);
        if (cfg.t < 0.0) throw ConfigError("mobility.t: must be >= 0");
    }
    cfg.beta_db = number_or(root, "beta_db", 0.0);

    static const std::set<std::string> known_axes{"beta_db", "t",        "h_r",
                                                  "lambda_r", "lambda_t", "v"};
    if (root.contains("sweep")) {
        if (!root["sweep"].is_array()) throw ConfigError("sweep: must be an array");
        int idx = 0;
        for (const auto& a : root["sweep"]) {
            const std::string path = "sweep[" + std::to_string(idx) + "]";
            SweepAxis axis;
            axis.name = a.value("name", "");
            if (!known_axes.count(axis.name)) {
                throw ConfigError(path + ".name: unknown parameter '" + axis.name + "'");
            }
            axis.values = expand_axis(a, path);
            for (double v : axis.values) {
                if ((axis.name == "lambda_r" || axis.name == "lambda_t") && v <= 0.0) {
                    throw ConfigError(path + ": " + axis.name + " values must be > 0");
                }
                if ((axis.name == "t" || axis.name == "h_r" || axis.name == "v") && v < 0.0) {
                    throw ConfigError(path + ": " + axis.name + " values must be >= 0");
                }
            }
            cfg.axes.push_back(std::move(axis));
            ++idx;
        }
    }

    if (root.contains("quantities")) {
        for (const auto& q : root["quantities"]) {
            try {
                cfg.quantities.push_back(quantity_from_string(q.get<std::string>()));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("quantities: ") + e.what());
            }
        }
    }
    if (cfg.quantities.empty()) cfg.quantities = {Quantity::Total};

    cfg.engine = engine_from_string(root.value("engine", "both"));

    if (root.contains("mc")) {
        const auto& m = root["mc"];
        cfg.mc.n_drops = static_cast<int>(number_or(m, "n_drops", cfg.mc.n_drops));
        if (cfg.mc.n_drops < 1) throw ConfigError("mc.n_drops: must be >= 1");
        cfg.mc.seed = static_cast<uint64_t>(number_or(m, "seed", 1.0));
        cfg.mc.disk_radius = number_or(m, "disk_radius", cfg.mc.disk_radius);
        if (cfg.mc.disk_radius <= 0.0) throw ConfigError("mc.disk_radius: must be > 0");
    }

    if (root.contains("output")) {
        const auto& o = root["output"];
        cfg.output.dir = o.value("dir", cfg.output.dir);
        cfg.output.plots = o.value("plots", cfg.output.plots);
    }
    cfg.jobs = static_cast<int>(number_or(root, "jobs", 0.0));
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

}  // namespace uavcov
