#pragma once

#include "flexpp/mode.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace flexpp {

/// Lexical failure inside one source (unterminated region or argument list).
/// `offset` is the byte offset of the construct that was left open.
class ScanError : public std::runtime_error {
public:
    ScanError(const std::string& message, std::size_t offset)
        : std::runtime_error(message), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

inline bool is_ident_char(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline bool is_blank(char c) { return c == ' ' || c == '\t'; }

/// End of the maximal identifier run starting at `pos`.
std::size_t identifier_end(std::string_view text, std::size_t pos);

/// Length of the mode delimiter `delim` matched at `pos`, where a space in
/// `delim` matches one or more blanks. nullopt if it does not match; an empty
/// delimiter never matches.
std::optional<std::size_t> match_delimiter(std::string_view text, std::size_t pos,
                                           std::string_view delim);

/// A comment/string region located in some text.
struct Region {
    std::size_t begin = 0;
    std::size_t interior_begin = 0;
    std::size_t interior_end = 0;
    std::size_t end = 0; ///< one past the closing delimiter (or the newline position)
};

/// Locates the region opened by `spec` at `pos`. Throws ScanError when the
/// region is never closed; a "\n"-terminated region may also end at the end
/// of the text.
std::optional<Region> match_region(std::string_view text, std::size_t pos,
                                   const CommentStringSpec& spec);

/// Delimiters for one argument list.
struct ArgumentSyntax {
    std::string_view sep;
    std::string_view end;
    std::optional<char> open;
    std::optional<char> close;
    std::optional<char> quote;
    bool keep_quotes = false;    ///< directive args keep the quote for later expansion
    bool directive_specs = false; ///< honour only specs active in directives
};

struct CapturedArguments {
    std::vector<std::string> args;
    std::size_t end = 0;           ///< first byte after the closing delimiter
    bool ended_at_newline = false; ///< the list was closed by a "\n" end delimiter
};

/// Raised by capture_arguments when the closing delimiter never comes.
class UnterminatedArguments : public ScanError {
public:
    using ScanError::ScanError;
};

/// Reads arguments starting just after the opening delimiter. At most
/// `max_args` are split off; later separators belong to the last argument.
/// Comment regions are dropped, string and quote regions are copied raw.
CapturedArguments capture_arguments(std::string_view text, std::size_t pos,
                                    const ArgumentSyntax& syntax, std::size_t max_args,
                                    const std::vector<CommentStringSpec>& specs);

ArgumentSyntax user_argument_syntax(const ModeDescriptor& mode);
ArgumentSyntax directive_argument_syntax(const ModeDescriptor& mode);

struct MacroName {
    std::string name;
    std::size_t end = 0; ///< first byte after the name
};

/// Recognises a user-macro name at `pos` (after user_macro_start, if any).
std::optional<MacroName> scan_macro_name(std::string_view text, std::size_t pos,
                                         const ModeDescriptor& mode);

/// Maximum number of arguments a user invocation binds.
inline constexpr std::size_t kMaxArguments = 9;

struct Invocation {
    std::string name;
    std::vector<std::string> args;
    std::size_t consumed = 0;
};

/// Argument list following a macro name that ends at `after_name`.
/// nullopt when the bytes there neither close a short invocation nor open
/// an argument list. Throws ScanError for an unterminated list.
std::optional<CapturedArguments> scan_invocation_arguments(std::string_view text,
                                                           std::size_t after_name,
                                                           const ModeDescriptor& mode);

/// Name plus raw arguments of the invocation at `pos`, regardless of whether
/// the name is defined.
std::optional<Invocation> parse_invocation(std::string_view text, std::size_t pos,
                                           const ModeDescriptor& mode);

} // namespace flexpp
