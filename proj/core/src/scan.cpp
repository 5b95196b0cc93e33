#include "flexpp/scanner.hpp"

namespace flexpp {

namespace {

std::string_view kind_word(SpecKind k) {
    switch (k) {
    case SpecKind::Comment: return "comment";
    case SpecKind::String: return "string";
    case SpecKind::Quote: return "quoted region";
    }
    return "region";
}

} // namespace

std::size_t identifier_end(std::string_view text, std::size_t pos) {
    while (pos < text.size() && is_ident_char(static_cast<unsigned char>(text[pos])))
        ++pos;
    return pos;
}

std::optional<std::size_t> match_delimiter(std::string_view text, std::size_t pos,
                                           std::string_view delim) {
    if (delim.empty())
        return std::nullopt;
    std::size_t i = pos;
    for (char d : delim) {
        if (d == ' ') {
            if (i >= text.size() || !is_blank(text[i]))
                return std::nullopt;
            while (i < text.size() && is_blank(text[i]))
                ++i;
        } else {
            if (i >= text.size() || text[i] != d)
                return std::nullopt;
            ++i;
        }
    }
    return i - pos;
}

std::optional<Region> match_region(std::string_view text, std::size_t pos,
                                   const CommentStringSpec& spec) {
    if (spec.start.empty() || text.substr(pos, spec.start.size()) != spec.start)
        return std::nullopt;
    const bool newline_end = spec.end == "\n";
    const std::size_t interior = pos + spec.start.size();
    std::size_t i = interior;
    while (i < text.size()) {
        if (spec.escape && text[i] == *spec.escape) {
            i += 2;
            continue;
        }
        if (text.substr(i, spec.end.size()) == spec.end)
            return Region{pos, interior, i, newline_end ? i : i + spec.end.size()};
        ++i;
    }
    if (newline_end)
        return Region{pos, interior, text.size(), text.size()};
    throw ScanError("unterminated " + std::string(kind_word(spec.kind)) + " starting with '" +
                        spec.start + "'",
                    pos);
}

CapturedArguments capture_arguments(std::string_view text, std::size_t pos,
                                    const ArgumentSyntax& syntax, std::size_t max_args,
                                    const std::vector<CommentStringSpec>& specs) {
    const std::size_t list_start = pos;
    const bool newline_end = syntax.end == "\n";
    CapturedArguments result;
    std::string current;
    int depth = 0;

    auto finish = [&](std::size_t end, bool at_newline) {
        result.args.push_back(std::move(current));
        result.end = end;
        result.ended_at_newline = at_newline;
        return result;
    };

    for (;;) {
        if (pos >= text.size()) {
            if (newline_end)
                return finish(text.size(), false);
            throw UnterminatedArguments("unterminated argument list", list_start);
        }
        const char c = text[pos];

        if (syntax.quote && c == *syntax.quote) {
            if (syntax.keep_quotes)
                current += c;
            if (pos + 1 < text.size())
                current += text[pos + 1];
            pos += 2;
            continue;
        }

        bool in_region = false;
        for (const auto& spec : specs) {
            if (syntax.directive_specs && !spec.active_in_directives)
                continue;
            if (auto r = match_region(text, pos, spec)) {
                if (spec.kind != SpecKind::Comment)
                    current.append(text.substr(r->begin, r->end - r->begin));
                pos = r->end;
                in_region = true;
                break;
            }
        }
        if (in_region)
            continue;

        // A newline terminator closes the list whatever the nesting depth.
        if (newline_end && c == '\n')
            return finish(pos + 1, true);

        if (depth == 0) {
            if (result.args.size() + 1 < max_args) {
                if (auto n = match_delimiter(text, pos, syntax.sep)) {
                    result.args.push_back(std::move(current));
                    current.clear();
                    pos += *n;
                    continue;
                }
            }
            if (auto n = match_delimiter(text, pos, syntax.end))
                return finish(pos + *n, false);
        }

        if (syntax.open && c == *syntax.open)
            ++depth;
        else if (syntax.close && c == *syntax.close && depth > 0)
            --depth;
        current += c;
        ++pos;
    }
}

ArgumentSyntax user_argument_syntax(const ModeDescriptor& mode) {
    return {mode.arg_sep, mode.arg_end, mode.stack_open, mode.stack_close, mode.quote_char,
            false, false};
}

ArgumentSyntax directive_argument_syntax(const ModeDescriptor& mode) {
    return {mode.meta_arg_sep, mode.meta_arg_end, mode.stack_open, mode.stack_close,
            mode.quote_char, true, true};
}

std::optional<MacroName> scan_macro_name(std::string_view text, std::size_t pos,
                                         const ModeDescriptor& mode) {
    std::size_t begin = pos;
    if (!mode.user_macro_start.empty()) {
        auto n = match_delimiter(text, pos, mode.user_macro_start);
        if (!n)
            return std::nullopt;
        begin += *n;
    }
    std::size_t end = identifier_end(text, begin);
    if (end == begin)
        return std::nullopt;
    return MacroName{std::string(text.substr(begin, end - begin)), end};
}

std::optional<CapturedArguments> scan_invocation_arguments(std::string_view text,
                                                           std::size_t after_name,
                                                           const ModeDescriptor& mode) {
    if (auto n = match_delimiter(text, after_name, mode.user_short_end))
        return CapturedArguments{{}, after_name + *n, false};
    if (auto n = match_delimiter(text, after_name, mode.arg_start))
        return capture_arguments(text, after_name + *n, user_argument_syntax(mode),
                                 kMaxArguments, mode.specs);
    if (mode.user_short_end.empty())
        return CapturedArguments{{}, after_name, false};
    return std::nullopt;
}

std::optional<Invocation> parse_invocation(std::string_view text, std::size_t pos,
                                           const ModeDescriptor& mode) {
    auto name = scan_macro_name(text, pos, mode);
    if (!name)
        return std::nullopt;
    auto args = scan_invocation_arguments(text, name->end, mode);
    if (!args)
        return std::nullopt;
    return Invocation{std::move(name->name), std::move(args->args), args->end - pos};
}

} // namespace flexpp
