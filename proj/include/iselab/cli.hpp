#pragma once

// Command-line front end. Every artifact starts with a provenance record
// holding the full RunConfig and the library version.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace iselab {

inline constexpr const char* kVersion = ISELAB_VERSION;
inline constexpr int kMaxKCap = 500;

struct RunConfig {
    std::string subcommand;
    int max_k = 20;
    int digits = 12;
    int n = 10;
    std::string method = "refined";
    std::string kind = "excursion";
    int grid_n = 2000;
    int snake_n = 2000;
    std::int64_t n_samples = 10000;
    std::uint64_t seed = 42;
    int workers = 0;
    std::string format = "table";
    std::string out;
    bool timestamp = true;
    std::string convention = "ordered";
    double k1 = 0;
    double k2 = 0;
    std::vector<double> x_grid{1.0, 1.5, 2.0};
    std::vector<int> k_grid{5, 10, 20, 40};
    std::vector<double> t_grid{1.0, 10.0, 30.0};

    nlohmann::json to_json() const;
};

/// Runs one invocation. Returns 0 when every internal check passed, 1 when a
/// check failed and 2 on invalid input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace iselab
