#pragma once

#include "flexpp/diagnostics.hpp"
#include "flexpp/mode.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flexpp {

/// Built-in directives. Their names are reserved in every mode.
enum class Directive {
    Define, Defeval, Undef,
    Ifdef, Ifndef, Ifeq, Ifneq, If, Elif, Else, Endif,
    Include, Exec, Eval, Mode,
};

std::optional<Directive> find_directive(std::string_view name);
std::string_view directive_name(Directive d);
/// Number of arguments the directive takes; the last one absorbs any
/// further separators.
std::size_t directive_arity(Directive d);
bool is_conditional(Directive d);

class DefinitionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MacroDefinition {
    std::string name;
    std::string body;
    int max_arg_ref = 0;
    Location origin;
};

/// Highest argument reference (1-9) occurring unquoted in `body`, 0 if none.
int max_arg_ref(std::string_view body, const ModeDescriptor& mode);

/// Why `name` cannot be a macro name under `mode`, or nullopt if it can.
std::optional<std::string> invalid_macro_name(std::string_view name, const ModeDescriptor& mode);

/// Flat table of user macros. Definitions are shared so an expansion in
/// progress keeps its body alive across a redefinition.
class MacroStore {
public:
    /// Stores `body` raw, replacing any previous definition.
    /// Throws DefinitionError for invalid or reserved names.
    std::shared_ptr<const MacroDefinition> define(std::string name, std::string body,
                                                  Location origin, const ModeDescriptor& mode);

    /// Returns true if something was removed.
    bool undef(std::string_view name);

    std::shared_ptr<const MacroDefinition> lookup(std::string_view name) const;
    bool is_defined(std::string_view name) const { return table_.find(name) != table_.end(); }
    std::size_t size() const noexcept { return table_.size(); }

private:
    std::map<std::string, std::shared_ptr<const MacroDefinition>, std::less<>> table_;
};

} // namespace flexpp
