#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace flexpp {

/// A position in some input. `line == 0` means the origin has no meaningful
/// line (command-line definitions, for instance).
struct Location {
    std::string file;
    std::size_t line = 0;

    bool operator==(const Location&) const = default;
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    Location where;
    std::string message;
};

/// Renders "file:line: severity: message".
std::string format_diagnostic(const Diagnostic& d);

using DiagnosticSink = std::function<void(const Diagnostic&)>;

/// A processing error tied to an input location. Every failure that escapes
/// Engine::process is one of these.
class Error : public std::runtime_error {
public:
    Error(Location where, const std::string& message)
        : std::runtime_error(message), where_(std::move(where)) {}

    const Location& where() const noexcept { return where_; }
    Diagnostic diagnostic() const { return {Severity::Error, where_, what()}; }

private:
    Location where_;
};

} // namespace flexpp
