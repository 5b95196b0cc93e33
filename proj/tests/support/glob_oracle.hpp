#pragma once

// Reference wildcard matcher for tests: a table over (pattern position,
// subject position) that walks the raw pattern text. Shares no code with
// the library matcher.

#include <optional>
#include <string_view>
#include <vector>

namespace oracle {

struct ClassStep {
    bool ok = false;        // pattern is well formed here
    bool matches = false;   // the byte is accepted
    std::size_t next = 0;   // pattern position after this element
};

// Reads one pattern element at `p` and tests byte `b` against it.
inline ClassStep glob_element(std::string_view pat, std::size_t p, unsigned char b) {
    ClassStep r;
    char c = pat[p];
    if (c == '?') {
        return {true, true, p + 1};
    }
    if (c == '\\') {
        if (p + 1 >= pat.size()) return r;
        return {true, static_cast<unsigned char>(pat[p + 1]) == b, p + 2};
    }
    if (c != '[') {
        return {true, static_cast<unsigned char>(c) == b, p + 1};
    }
    std::size_t q = p + 1;
    bool negated = false;
    if (q < pat.size() && (pat[q] == '!' || pat[q] == '^')) {
        negated = true;
        ++q;
    }
    bool hit = false;
    bool first = true;
    auto take = [&](unsigned char& out) {
        if (pat[q] == '\\') {
            ++q;
            if (q >= pat.size()) return false;
        }
        out = static_cast<unsigned char>(pat[q]);
        ++q;
        return true;
    };
    while (true) {
        if (q >= pat.size()) return r;
        if (!first && pat[q] == ']') break;
        first = false;
        unsigned char lo = 0;
        if (!take(lo)) return r;
        unsigned char hi = lo;
        if (q + 1 < pat.size() && pat[q] == '-' && pat[q + 1] != ']') {
            ++q;
            if (!take(hi)) return r;
        }
        if (lo <= b && b <= hi) hit = true;
    }
    return {true, hit != negated, q + 1};
}

// Whether the pattern is well formed.
inline bool glob_valid(std::string_view pat) {
    std::size_t p = 0;
    while (p < pat.size()) {
        if (pat[p] == '*') { ++p; continue; }
        auto s = glob_element(pat, p, 0);
        if (!s.ok) return false;
        p = s.next;
    }
    return true;
}

// nullopt for a malformed pattern.
inline std::optional<bool> glob_dp(std::string_view pat, std::string_view s) {
    if (!glob_valid(pat)) return std::nullopt;
    const std::size_t P = pat.size(), S = s.size();
    // m[p][i]: pattern suffix from p matches subject suffix from i.
    std::vector<std::vector<char>> m(P + 2, std::vector<char>(S + 1, 0));
    m[P][S] = 1;
    for (std::size_t pp = P; pp-- > 0;) {
        // Only element starts matter; interior bytes of a class stay 0 and
        // are never consulted.
        for (std::size_t i = S + 1; i-- > 0;) {
            if (pat[pp] == '*') {
                m[pp][i] = m[pp + 1][i] || (i < S && m[pp][i + 1]);
            } else if (i < S) {
                auto st = glob_element(pat, pp, static_cast<unsigned char>(s[i]));
                m[pp][i] = st.ok && st.matches && m[st.next][i + 1];
            }
        }
    }
    return m[0][0] != 0;
}

} // namespace oracle
