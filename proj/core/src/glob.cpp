#include "flexpp/glob.hpp"

namespace flexpp {

GlobPattern::GlobPattern(std::string_view p) {
    std::size_t i = 0;
    auto escaped_byte = [&]() -> unsigned char {
        if (p[i] == '\\') {
            if (++i >= p.size())
                throw PatternError("trailing backslash in pattern");
        }
        return static_cast<unsigned char>(p[i++]);
    };

    while (i < p.size()) {
        const char c = p[i];
        if (c == '*') {
            ++i;
            // Adjacent stars are equivalent to one.
            if (elements_.empty() || elements_.back().kind != Kind::Star)
                elements_.push_back({Kind::Star, 0, {}});
        } else if (c == '?') {
            ++i;
            elements_.push_back({Kind::Any, 0, {}});
        } else if (c == '[') {
            ++i;
            Element e{Kind::Set, 0, {}};
            bool negate = false;
            if (i < p.size() && (p[i] == '!' || p[i] == '^')) {
                negate = true;
                ++i;
            }
            bool first = true;
            for (;;) {
                if (i >= p.size())
                    throw PatternError("unterminated '[' in pattern");
                if (p[i] == ']' && !first) {
                    ++i;
                    break;
                }
                first = false;
                unsigned char lo = escaped_byte();
                if (i + 1 < p.size() && p[i] == '-' && p[i + 1] != ']') {
                    ++i;
                    unsigned char hi = escaped_byte();
                    for (unsigned v = lo; v <= hi; ++v)
                        e.set.set(v);
                } else {
                    e.set.set(lo);
                }
            }
            if (negate)
                e.set.flip();
            elements_.push_back(std::move(e));
        } else {
            elements_.push_back({Kind::Byte, escaped_byte(), {}});
        }
    }
}

bool GlobPattern::matches(std::string_view s) const {
    // Every non-star element consumes exactly one byte, so backtracking to
    // the most recent star is complete.
    std::size_t pi = 0, si = 0;
    std::size_t star_pi = std::string_view::npos, star_si = 0;
    auto one = [&](const Element& e, unsigned char b) {
        switch (e.kind) {
        case Kind::Byte: return e.byte == b;
        case Kind::Any: return true;
        case Kind::Set: return e.set.test(b);
        case Kind::Star: return false;
        }
        return false;
    };
    while (si < s.size()) {
        if (pi < elements_.size() && elements_[pi].kind == Kind::Star) {
            star_pi = pi++;
            star_si = si;
        } else if (pi < elements_.size() && one(elements_[pi], static_cast<unsigned char>(s[si]))) {
            ++pi;
            ++si;
        } else if (star_pi != std::string_view::npos) {
            pi = star_pi + 1;
            si = ++star_si;
        } else {
            return false;
        }
    }
    while (pi < elements_.size() && elements_[pi].kind == Kind::Star)
        ++pi;
    return pi == elements_.size();
}

bool glob_match(std::string_view pattern, std::string_view subject) {
    return GlobPattern(pattern).matches(subject);
}

} // namespace flexpp
