#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavcov/coverage.hpp"
#include "uavcov/params.hpp"

namespace uavcov {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Engine { Analytic, Mc, Both };

Engine engine_from_string(const std::string& s);
const char* to_string(Engine e);

/// One sweep dimension, already expanded to explicit points. The axis name
/// selects which scenario parameter the points override.
struct SweepAxis {
    std::string name;  // beta_db | t | h_r | lambda_r | lambda_t | v
    std::vector<double> values;
};

struct McBlock {
    int n_drops = 50000;
    uint64_t seed = 1;
    double disk_radius = 100e3;
};

struct OutputBlock {
    std::string dir = "out";
    bool plots = true;
};

struct ExperimentConfig {
    NetworkParams network;
    MobilityScheme scheme = MobilityScheme::Scheme2;
    double beta_db = 0.0;  // used when beta_db is not swept
    double t = 0.0;        // used when t is not swept
    std::vector<SweepAxis> axes;
    std::vector<Quantity> quantities;
    Engine engine = Engine::Both;
    McBlock mc;
    OutputBlock output;
    int jobs = 0;

    /// Parses and validates; throws ConfigError naming the offending field.
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
};

}  // namespace uavcov
