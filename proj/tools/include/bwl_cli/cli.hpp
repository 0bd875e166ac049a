#ifndef BWL_CLI_HPP
#define BWL_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bwl::cli {

/// Flat run configuration; a JSON config file seeds the defaults and command
/// line flags override field by field. Every report embeds the full config.
struct RunConfig {
    int window_L = 4;
    int resolution = 6;
    double p = 2.0;
    double lambda = 1.0;
    std::optional<double> alpha;
    std::string kind = "apl";
    double local_k = 0.0;
    double c = 1024.0;
    int alpha_grid_m = 12;
    int alpha_grid_per_octave = 2;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;
};

/// Dispatch one subcommand. Returns 0 on success, 2 on invalid flags or
/// domain errors, 1 when a verification subcommand finds a violation.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace bwl::cli

#endif
