#include "flexpp/diagnostics.hpp"

namespace flexpp {

std::string format_diagnostic(const Diagnostic& d) {
    std::string s = d.where.file.empty() ? std::string("flexpp") : d.where.file;
    if (d.where.line > 0) {
        s += ':';
        s += std::to_string(d.where.line);
    }
    s += d.severity == Severity::Error ? ": error: " : ": warning: ";
    s += d.message;
    return s;
}

} // namespace flexpp
