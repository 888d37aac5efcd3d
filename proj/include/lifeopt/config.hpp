#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lifeopt/params.hpp"

namespace lifeopt {

/// Unreadable, malformed or incomplete configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverSettings {
    std::size_t grid_steps = 10000;
    double theta_max = 2.0;
    std::size_t theta_points = 21;
    double identity_tolerance = 1e-6;  ///< relative |J* - V(0, W0)|
};

struct McSettings {
    std::size_t paths = 100000;
    double dt = 1e-3;        ///< step for the utility comparison
    double check_dt = 1e-2;  ///< step for the martingale and budget checks
    std::uint64_t seed = 42;
    unsigned workers = 0;
    double mu_shift = 0.0;
    std::string dynamics = "hjb-generator";
    std::vector<double> martingale_times{2.5, 5.0, 10.0};
    std::vector<double> utility_thetas{0.0, 1.0};
};

struct SweepSettings {
    std::vector<double> thetas{0.0, 1.0};
    double compare_theta = 1.0;
    double x_min = 0.0;
    double x_max = 10.0;
    std::size_t x_points = 101;
    std::vector<double> x_values{1.0, 5.0, 10.0};
};

struct RunConfig {
    ModelParams model;
    SolverSettings solver;
    McSettings mc;
    SweepSettings sweep;
    std::string output_dir = "./out";
    std::string source;  ///< path the configuration was read from
};

/// Parses a JSON configuration document. Model parameters are validated.
RunConfig parse_config(const std::string& text, const std::string& source = "<memory>");
RunConfig load_config(const std::string& path);

/// "0,0.5,1" -> {0, 0.5, 1}
std::vector<double> parse_theta_list(const std::string& text);

}  // namespace lifeopt
