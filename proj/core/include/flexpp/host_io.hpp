#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flexpp {

class HostError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct IncludeResolution {
    std::string requested;
    std::filesystem::path resolved; ///< absolute, lexically normal
    std::filesystem::path root;     ///< directory the file was found under (empty if absolute)
    std::size_t depth = 0;          ///< nesting depth of the included file
};

/// Looks in `including_dir` first, then `search_paths` in order. `chain`
/// holds the files currently being processed, outermost first; its length
/// is the current include depth.
/// Throws HostError when nothing is found or the depth limit would be passed.
IncludeResolution resolve_include(std::string_view requested,
                                  const std::filesystem::path& including_dir,
                                  std::span<const std::filesystem::path> search_paths,
                                  std::span<const std::string> chain, std::size_t max_depth);

/// Whole file as bytes, no newline translation.
std::string read_file(const std::filesystem::path& path);

struct ExecResult {
    std::string output;
    int exit_status = 0;
};

/// Runs `command` through `shell -c`, capturing standard output. Standard
/// error is inherited. Throws HostError if the shell cannot be started.
ExecResult run_exec(const std::string& command, const std::string& shell = "/bin/sh");

} // namespace flexpp
