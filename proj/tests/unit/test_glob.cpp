#include <doctest.h>

#include "flexpp/glob.hpp"
#include "glob_oracle.hpp"

#include <random>

using namespace flexpp;

namespace {

std::optional<bool> library(std::string_view p, std::string_view s) {
    try {
        return glob_match(p, s);
    } catch (const PatternError&) {
        return std::nullopt;
    }
}

} // namespace

TEST_CASE("glob examples") {
    CHECK(glob_match("*", ""));
    CHECK(glob_match("a?c", "abc"));
    CHECK_FALSE(glob_match("a?c", "ac"));
    CHECK(glob_match("[a-c]*d", "bxyzd"));
    CHECK_FALSE(glob_match("[!a]x", "ax"));
    CHECK(glob_match("[^a]x", "bx"));
    CHECK(glob_match("[]]", "]"));
    CHECK(glob_match("[!]]", "a"));
    CHECK(glob_match("a\\*", "a*"));
    CHECK_FALSE(glob_match("a\\*", "ab"));
    CHECK(glob_match("[a-]", "-"));
    CHECK_FALSE(glob_match("abc", "abcd"));
}

TEST_CASE("malformed patterns") {
    CHECK_THROWS_AS(glob_match("[ab", "a"), PatternError);
    CHECK_THROWS_AS(glob_match("ab\\", "ab"), PatternError);
    CHECK_THROWS_AS(GlobPattern("[\\"), PatternError);
}

TEST_CASE("oracle agrees on the examples") {
    CHECK(oracle::glob_dp("[a-c]*d", "bxyzd") == true);
    CHECK(oracle::glob_dp("[!a]x", "ax") == false);
    CHECK(oracle::glob_dp("[ab", "a") == std::nullopt);
}

TEST_CASE("library matches the table oracle on random pairs") {
    const char alphabet[] = {'a', 'b', '-', '!', '*', '?', '[', ']', '\\'};
    std::mt19937 rng(99);
    for (int n = 0; n < 50000; ++n) {
        std::string p(rng() % 9, 'a'), s(rng() % 9, 'a');
        for (auto& c : p) c = alphabet[rng() % 9];
        for (auto& c : s) c = alphabet[rng() % 9];
        CAPTURE(p);
        CAPTURE(s);
        REQUIRE(library(p, s) == oracle::glob_dp(p, s));
    }
}

TEST_CASE("a compiled pattern is reusable") {
    GlobPattern g("*.c");
    CHECK(g.matches("main.c"));
    CHECK_FALSE(g.matches("main.h"));
    CHECK(g.matches(".c"));
}
