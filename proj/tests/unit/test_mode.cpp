#include <doctest.h>

#include "flexpp/mode.hpp"

using namespace flexpp;

TEST_CASE("every preset validates and round-trips its name") {
    for (auto p : {Preset::Default, Preset::Cpp, Preset::Tex, Preset::Html, Preset::Prolog}) {
        CAPTURE(preset_name(p));
        CHECK(validate(preset(p)).empty());
        CHECK(preset_from_name(preset_name(p)) == p);
        CHECK(preset(preset_name(p)) == preset(p));
    }
}

TEST_CASE("unknown preset lists the valid ones") {
    CHECK_FALSE(preset_from_name("fortran"));
    try {
        preset("fortran");
        FAIL("expected ModeError");
    } catch (const ModeError& e) {
        CHECK(std::string(e.what()).find("cpp, tex, html, prolog") != std::string::npos);
    }
}

TEST_CASE("preset tables") {
    auto cpp = preset(Preset::Cpp);
    CHECK(cpp.meta_line_anchored);
    REQUIRE(cpp.specs.size() == 4);
    CHECK(cpp.specs[0].start == "/*");
    CHECK(cpp.specs[1].end == "\n");

    auto tex = preset(Preset::Tex);
    CHECK(tex.user_macro_start == "\\");
    CHECK(tex.arg_start == "{");
    CHECK(tex.arg_sep == "}{");
    CHECK_FALSE(tex.quote_char);

    auto html = preset(Preset::Html);
    CHECK(html.meta_start == "<#");
    CHECK(html.meta_arg_sep == "|");

    auto prolog = preset(Preset::Prolog);
    bool percent = false;
    for (const auto& s : prolog.specs) {
        CHECK(s.start != "//");
        percent = percent || s.start == "%";
    }
    CHECK(percent);
}

TEST_CASE("parse_mode_spec overrides selected fields") {
    auto m = parse_mode_spec("arg_start=[;arg_sep=:;arg_end=]", preset(Preset::Default));
    CHECK(m.arg_start == "[");
    CHECK(m.arg_sep == ":");
    CHECK(m.arg_end == "]");
    CHECK(m.meta_start == "#");
}

TEST_CASE("parse_mode_spec with an empty override is the identity") {
    for (auto p : {Preset::Default, Preset::Cpp, Preset::Tex, Preset::Html, Preset::Prolog})
        CHECK(parse_mode_spec("", preset(p)) == preset(p));
}

TEST_CASE("parse_mode_spec is idempotent") {
    const char* specs[] = {
        "meta_start=@;meta_arg_end=\\n",
        "spec=comment,{-,-}",
        "spec=string,`,`,\\\\,expand;quote_char=none",
        "preset=tex;meta_line_anchored=1",
    };
    for (const char* s : specs) {
        CAPTURE(s);
        auto once = parse_mode_spec(s, preset(Preset::Default));
        CHECK(parse_mode_spec(s, once) == once);
    }
}

TEST_CASE("escapes in values") {
    auto m = parse_mode_spec("meta_arg_end=\\x3B;arg_sep=\\,;user_short_end=\\t",
                             preset(Preset::Default));
    CHECK(m.meta_arg_end == ";");
    CHECK(m.arg_sep == ",");
    CHECK(m.user_short_end == "\t");
}

TEST_CASE("spec keys add, replace and remove") {
    auto m = parse_mode_spec("spec=comment,<!--,-->", preset(Preset::Default));
    REQUIRE(m.specs.size() == 1);
    CHECK(m.specs[0].kind == SpecKind::Comment);
    m = parse_mode_spec("spec=string,<!--,-->,\\\\", m);
    REQUIRE(m.specs.size() == 1);
    CHECK(m.specs[0].kind == SpecKind::String);
    CHECK(m.specs[0].escape == '\\');
    m = parse_mode_spec("remove_spec=<!--", m);
    CHECK(m.specs.empty());
    m = parse_mode_spec("clear_specs=", preset(Preset::Cpp));
    CHECK(m.specs.empty());
}

TEST_CASE("malformed and invalid overrides are rejected") {
    auto base = preset(Preset::Default);
    CHECK_THROWS_AS(parse_mode_spec("arg_start", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("nonsense=1", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("arg_start=", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("stack_open=none", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("meta_start=;user_macro_start=", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("meta_line_anchored=maybe", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("spec=comment,/*,*/;spec=bogus,a,b", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("quote_char=ab", base), ModeError);
    CHECK_THROWS_AS(parse_mode_spec("preset=nope", base), ModeError);
}

TEST_CASE("validate reports each broken invariant") {
    ModeDescriptor m;
    m.arg_start.clear();
    m.stack_close.reset();
    auto v = validate(m);
    CHECK(v.size() == 2);

    ModeDescriptor dup;
    dup.specs.push_back({"/*", "*/", std::nullopt, SpecKind::Comment, false, true});
    dup.specs.push_back({"/*", "x", std::nullopt, SpecKind::String, false, true});
    CHECK(validate(dup).size() == 1);
}
