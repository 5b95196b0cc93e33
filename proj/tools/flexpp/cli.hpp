#pragma once

#include "flexpp/engine.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexpp::cli {

inline constexpr const char* kVersion = "flexpp 1.0.0";

/// Bad command line. Maps to exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Definition {
    std::string name;
    std::string body;
};

struct CliConfig {
    std::string input;  ///< empty or "-" reads standard input
    std::string output; ///< empty writes standard output
    std::string preset = "default";
    std::vector<std::string> mode_overrides; ///< applied in order after the preset
    std::vector<Definition> definitions;
    std::vector<std::string> include_dirs;
    bool exec_enabled = false;
    bool warn_redefine = false;
    Limits limits;
    bool show_version = false;
    bool show_help = false;
    std::string help_text;
};

/// Arguments exclude the program name. Throws UsageError.
CliConfig parse_args(std::span<const std::string> args);

/// Builds the engine mode from preset plus overrides. Throws UsageError.
ModeDescriptor resolve_mode(const CliConfig& config);

/// Whole program: returns the exit status.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err);

} // namespace flexpp::cli
