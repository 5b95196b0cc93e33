#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flexpp {

/// How the engine treats the interior of a delimited region.
enum class SpecKind {
    Comment, ///< interior and delimiters dropped
    String,  ///< interior and delimiters copied verbatim
    Quote,   ///< interior copied, delimiters dropped
};

/// One comment or string rule. An end delimiter of exactly "\n" stops the
/// region before the newline, so the newline itself stays in the stream.
struct CommentStringSpec {
    std::string start;
    std::string end;
    std::optional<char> escape;
    SpecKind kind = SpecKind::Comment;
    bool expand_inside = false;
    bool active_in_directives = true;

    bool operator==(const CommentStringSpec&) const = default;
};

/// The complete lexical definition of user macros and directives.
///
/// In every delimiter field below (not in comment/string specs) a space
/// character matches a run of one or more blanks (spaces or tabs). An empty
/// `user_short_end` / `meta_short_end` means "identifier boundary": the
/// invocation ends right after the name unless an argument list follows.
struct ModeDescriptor {
    std::string user_macro_start;
    std::string user_short_end;
    std::string arg_start = "(";
    std::string arg_sep = ",";
    std::string arg_end = ")";
    std::optional<char> stack_open = '(';
    std::optional<char> stack_close = ')';
    std::string arg_ref_prefix = "#";
    std::optional<char> quote_char = '\\';

    std::string meta_start = "#";
    std::string meta_short_end = "\n";
    std::string meta_arg_start = " ";
    std::string meta_arg_sep = " ";
    std::string meta_arg_end = "\n";
    bool meta_line_anchored = false;

    std::vector<CommentStringSpec> specs;

    bool operator==(const ModeDescriptor&) const = default;
};

enum class Preset { Default, Cpp, Tex, Html, Prolog };

/// Raised for unknown presets, malformed mode text and invariant violations.
class ModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::optional<Preset> preset_from_name(std::string_view name);
std::string_view preset_name(Preset p);

ModeDescriptor preset(Preset p);
/// Throws ModeError naming the valid presets when `name` is unknown.
ModeDescriptor preset(std::string_view name);

/// Every violated invariant, in a fixed order. Empty means valid.
std::vector<std::string> validate(const ModeDescriptor& mode);

/// Applies `key=value;key=value` overrides to `base` and validates the
/// result. Values support the escapes \n \t \r \\ \xHH and \; \= \, for
/// the separators. Recognised keys are the ModeDescriptor field names plus
///
///   preset=<name>           restart from a preset
///   spec=<kind>,<start>,<end>[,<escape>[,expand][,nodirectives]]
///                           add a spec, or replace the one with that start
///   remove_spec=<start>     drop the spec with that start delimiter
///   clear_specs=            drop every spec
///
/// Keys are trimmed, values are taken verbatim.
ModeDescriptor parse_mode_spec(std::string_view spec, const ModeDescriptor& base);

} // namespace flexpp
