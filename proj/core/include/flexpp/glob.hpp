#pragma once

#include <bitset>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace flexpp {

class PatternError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A compiled wildcard pattern: `?` any byte, `*` any run, `[set]` with
/// ranges and leading `!` or `^` for negation (a `]` right after the opening
/// bracket is a member), `\` escapes the next byte. Matching is anchored at
/// both ends.
class GlobPattern {
public:
    /// Throws PatternError on an unterminated set or a trailing backslash.
    explicit GlobPattern(std::string_view pattern);

    bool matches(std::string_view subject) const;

private:
    enum class Kind { Byte, Any, Star, Set };
    struct Element {
        Kind kind;
        unsigned char byte = 0;
        std::bitset<256> set;
    };
    std::vector<Element> elements_;
};

/// Whole-subject wildcard match.
bool glob_match(std::string_view pattern, std::string_view subject);

} // namespace flexpp
