#include "flexpp/mode.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace flexpp {

namespace {

constexpr std::array<std::pair<std::string_view, Preset>, 5> kPresets{{
    {"default", Preset::Default},
    {"cpp", Preset::Cpp},
    {"tex", Preset::Tex},
    {"html", Preset::Html},
    {"prolog", Preset::Prolog},
}};

CommentStringSpec comment(std::string start, std::string end) {
    return {std::move(start), std::move(end), std::nullopt, SpecKind::Comment, false, true};
}

CommentStringSpec string_literal(std::string delim) {
    return {delim, delim, '\\', SpecKind::String, false, true};
}

ModeDescriptor cpp_mode() {
    ModeDescriptor m;
    m.meta_line_anchored = true;
    m.specs = {comment("/*", "*/"), comment("//", "\n"), string_literal("\""), string_literal("'")};
    return m;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// `offset` is the position of `raw` inside the whole spec text, for messages.
std::string unescape(std::string_view raw, std::size_t offset) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '\\') {
            out += raw[i];
            continue;
        }
        if (i + 1 >= raw.size())
            throw ModeError("dangling backslash at offset " + std::to_string(offset + i));
        char c = raw[++i];
        switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '\\': case ';': case '=': case ',': case '"': case '\'': out += c; break;
        case 'x': {
            int hi = i + 1 < raw.size() ? hex_value(raw[i + 1]) : -1;
            int lo = i + 2 < raw.size() ? hex_value(raw[i + 2]) : -1;
            if (hi < 0 || lo < 0)
                throw ModeError("invalid \\x escape at offset " + std::to_string(offset + i - 1));
            out += static_cast<char>(hi * 16 + lo);
            i += 2;
            break;
        }
        default:
            throw ModeError("invalid escape '\\" + std::string(1, c) + "' at offset " +
                            std::to_string(offset + i - 1));
        }
    }
    return out;
}

struct Piece {
    std::string_view text;
    std::size_t offset;
};

// Splits on `sep` wherever it is not preceded by an escaping backslash.
std::vector<Piece> split_unescaped(std::string_view s, char sep, std::size_t offset) {
    std::vector<Piece> pieces;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\') {
            ++i;
            continue;
        }
        if (s[i] == sep) {
            pieces.push_back({s.substr(begin, i - begin), offset + begin});
            begin = i + 1;
        }
    }
    pieces.push_back({s.substr(begin), offset + begin});
    return pieces;
}

std::size_t find_unescaped(std::string_view s, char c) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\')
            ++i;
        else if (s[i] == c)
            return i;
    }
    return std::string_view::npos;
}

std::optional<char> single_char(std::string_view key, const std::string& value) {
    if (value.empty() || value == "none")
        return std::nullopt;
    if (value.size() != 1)
        throw ModeError(std::string(key) + " must be a single character");
    return value[0];
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ModeError(std::string(key) + " expects true or false");
}

CommentStringSpec parse_spec_value(std::string_view raw, std::size_t offset) {
    auto fields = split_unescaped(raw, ',', offset);
    if (fields.size() < 3)
        throw ModeError("spec at offset " + std::to_string(offset) +
                        " needs at least kind,start,end");
    CommentStringSpec spec;
    auto kind = trim(fields[0].text);
    if (kind == "comment")
        spec.kind = SpecKind::Comment;
    else if (kind == "string")
        spec.kind = SpecKind::String;
    else if (kind == "quote")
        spec.kind = SpecKind::Quote;
    else
        throw ModeError("unknown spec kind '" + std::string(kind) + "' at offset " +
                        std::to_string(fields[0].offset));
    spec.start = unescape(fields[1].text, fields[1].offset);
    spec.end = unescape(fields[2].text, fields[2].offset);
    if (fields.size() > 3)
        spec.escape = single_char("spec escape", unescape(fields[3].text, fields[3].offset));
    for (std::size_t i = 4; i < fields.size(); ++i) {
        auto flag = trim(fields[i].text);
        if (flag == "expand")
            spec.expand_inside = true;
        else if (flag == "nodirectives")
            spec.active_in_directives = false;
        else
            throw ModeError("unknown spec flag '" + std::string(flag) + "' at offset " +
                            std::to_string(fields[i].offset));
    }
    return spec;
}

void apply_pair(ModeDescriptor& m, std::string_view key, const std::string& value,
                std::string_view raw_value, std::size_t value_offset) {
    if (key == "preset") m = preset(value);
    else if (key == "user_macro_start") m.user_macro_start = value;
    else if (key == "user_short_end") m.user_short_end = value;
    else if (key == "arg_start") m.arg_start = value;
    else if (key == "arg_sep") m.arg_sep = value;
    else if (key == "arg_end") m.arg_end = value;
    else if (key == "stack_open") m.stack_open = single_char(key, value);
    else if (key == "stack_close") m.stack_close = single_char(key, value);
    else if (key == "arg_ref_prefix") m.arg_ref_prefix = value;
    else if (key == "quote_char") m.quote_char = single_char(key, value);
    else if (key == "meta_start") m.meta_start = value;
    else if (key == "meta_short_end") m.meta_short_end = value;
    else if (key == "meta_arg_start") m.meta_arg_start = value;
    else if (key == "meta_arg_sep") m.meta_arg_sep = value;
    else if (key == "meta_arg_end") m.meta_arg_end = value;
    else if (key == "meta_line_anchored") m.meta_line_anchored = parse_bool(key, value);
    else if (key == "spec") {
        auto spec = parse_spec_value(raw_value, value_offset);
        auto it = std::find_if(m.specs.begin(), m.specs.end(),
                               [&](const CommentStringSpec& s) { return s.start == spec.start; });
        if (it != m.specs.end())
            *it = std::move(spec);
        else
            m.specs.push_back(std::move(spec));
    } else if (key == "remove_spec") {
        std::erase_if(m.specs, [&](const CommentStringSpec& s) { return s.start == value; });
    } else if (key == "clear_specs") {
        m.specs.clear();
    } else {
        throw ModeError("unknown mode key '" + std::string(key) + "'");
    }
}

} // namespace

std::optional<Preset> preset_from_name(std::string_view name) {
    for (const auto& [n, p] : kPresets)
        if (n == name) return p;
    return std::nullopt;
}

std::string_view preset_name(Preset p) {
    for (const auto& [n, q] : kPresets)
        if (q == p) return n;
    return "default";
}

ModeDescriptor preset(Preset p) {
    switch (p) {
    case Preset::Default:
        return ModeDescriptor{};
    case Preset::Cpp:
        return cpp_mode();
    case Preset::Tex: {
        ModeDescriptor m;
        m.user_macro_start = "\\";
        m.arg_start = "{";
        m.arg_sep = "}{";
        m.arg_end = "}";
        m.stack_open = '{';
        m.stack_close = '}';
        m.quote_char.reset();
        m.meta_start = "\\";
        m.meta_short_end = "";
        m.meta_arg_start = "{";
        m.meta_arg_sep = "}{";
        m.meta_arg_end = "}";
        m.specs = {comment("%", "\n")};
        return m;
    }
    case Preset::Html: {
        ModeDescriptor m;
        m.user_macro_start = "<#";
        m.user_short_end = ">";
        m.arg_start = " ";
        m.arg_sep = "|";
        m.arg_end = ">";
        m.stack_open = '<';
        m.stack_close = '>';
        m.meta_start = "<#";
        m.meta_short_end = ">";
        m.meta_arg_start = " ";
        m.meta_arg_sep = "|";
        m.meta_arg_end = ">";
        return m;
    }
    case Preset::Prolog: {
        ModeDescriptor m = cpp_mode();
        m.specs[1] = comment("%", "\n");
        return m;
    }
    }
    return ModeDescriptor{};
}

ModeDescriptor preset(std::string_view name) {
    if (auto p = preset_from_name(name))
        return preset(*p);
    throw ModeError("unknown preset '" + std::string(name) +
                    "' (valid presets: default, cpp, tex, html, prolog)");
}

std::vector<std::string> validate(const ModeDescriptor& m) {
    std::vector<std::string> v;
    if (m.user_macro_start.empty() && m.meta_start.empty())
        v.emplace_back("user_macro_start and meta_start must not both be empty");
    if (m.arg_start.empty())
        v.emplace_back("arg_start must be non-empty");
    if (m.arg_end.empty())
        v.emplace_back("arg_end must be non-empty");
    if (m.stack_open.has_value() != m.stack_close.has_value())
        v.emplace_back("stack_open and stack_close must be both set or both unset");
    if (m.quote_char && (m.stack_open == m.quote_char || m.stack_close == m.quote_char))
        v.emplace_back("stack_open and stack_close must differ from quote_char");
    if (m.arg_ref_prefix.empty())
        v.emplace_back("arg_ref_prefix must be non-empty");
    if (!m.meta_start.empty()) {
        if (m.meta_arg_start.empty())
            v.emplace_back("meta_arg_start must be non-empty");
        if (m.meta_arg_end.empty())
            v.emplace_back("meta_arg_end must be non-empty");
    }
    std::set<std::string> starts;
    for (const auto& s : m.specs) {
        if (s.start.empty())
            v.emplace_back("spec start delimiter must be non-empty");
        if (s.end.empty())
            v.emplace_back("spec end delimiter must be non-empty (spec '" + s.start + "')");
        if (s.kind == SpecKind::Comment && s.expand_inside)
            v.emplace_back("comment spec '" + s.start + "' cannot expand its interior");
        if (!s.start.empty() && !starts.insert(s.start).second)
            v.emplace_back("duplicate spec start delimiter '" + s.start + "'");
    }
    return v;
}

ModeDescriptor parse_mode_spec(std::string_view spec, const ModeDescriptor& base) {
    ModeDescriptor m = base;
    for (const auto& piece : split_unescaped(spec, ';', 0)) {
        if (trim(piece.text).empty())
            continue;
        auto eq = find_unescaped(piece.text, '=');
        if (eq == std::string_view::npos)
            throw ModeError("malformed mode pair at offset " + std::to_string(piece.offset) +
                            ": expected key=value");
        auto key = trim(piece.text.substr(0, eq));
        if (key.empty())
            throw ModeError("missing key at offset " + std::to_string(piece.offset));
        auto raw_value = piece.text.substr(eq + 1);
        std::size_t value_offset = piece.offset + eq + 1;
        std::string value = key == "spec" ? std::string() : unescape(raw_value, value_offset);
        try {
            apply_pair(m, key, value, raw_value, value_offset);
        } catch (const ModeError& e) {
            std::string msg = e.what();
            if (msg.find("offset") == std::string::npos)
                msg += " (at offset " + std::to_string(piece.offset) + ")";
            throw ModeError(msg);
        }
    }
    auto violations = validate(m);
    if (!violations.empty()) {
        std::string msg;
        for (const auto& s : violations) {
            if (!msg.empty()) msg += "; ";
            msg += s;
        }
        throw ModeError(msg);
    }
    return m;
}

} // namespace flexpp
