#include "flexpp/engine.hpp"

#include "flexpp/eval.hpp"
#include "flexpp/host_io.hpp"

#include <algorithm>
#include <system_error>

namespace flexpp {

namespace fs = std::filesystem;

namespace {

bool at_line_start(std::string_view text, std::size_t pos, bool is_file) {
    return pos == 0 ? is_file : text[pos - 1] == '\n';
}

std::string_view trim_blanks(std::string_view s) {
    while (!s.empty() && is_blank(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_blank(s.back()))
        s.remove_suffix(1);
    return s;
}

std::string_view trim_space(std::string_view s) {
    auto space = [](char c) { return is_blank(c) || c == '\n' || c == '\r'; };
    while (!s.empty() && space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && space(s.back()))
        s.remove_suffix(1);
    return s;
}

std::string join(const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) {
        if (!s.empty()) s += "; ";
        s += p;
    }
    return s;
}

} // namespace

Engine::Source Engine::make_source(SourceKind kind, std::string_view text,
                                   std::shared_ptr<const void> owner) {
    Source s;
    s.kind = kind;
    s.text = text;
    s.owner = std::move(owner);
    return s;
}

Engine::Engine(EngineOptions options) : options_(std::move(options)), mode_(options_.mode) {
    if (auto v = validate(mode_); !v.empty())
        throw Error({}, "invalid mode: " + join(v));
    rebuild_tables();
}

Engine::~Engine() = default;

void Engine::set_mode(ModeDescriptor mode) {
    if (auto v = validate(mode); !v.empty())
        throw Error({}, "invalid mode: " + join(v));
    mode_ = std::move(mode);
    rebuild_tables();
}

void Engine::rebuild_tables() {
    interesting_.fill(false);
    auto mark_first = [&](const std::string& s) {
        if (s.empty()) return;
        if (s.front() == ' ') {
            interesting_[' '] = interesting_['\t'] = true;
        } else {
            interesting_[static_cast<unsigned char>(s.front())] = true;
        }
    };
    for (const auto& spec : mode_.specs)
        mark_first(spec.start);
    if (mode_.quote_char)
        interesting_[static_cast<unsigned char>(*mode_.quote_char)] = true;
    mark_first(mode_.arg_ref_prefix);
    mark_first(mode_.meta_start);
    mark_first(mode_.user_macro_start);
    if (mode_.user_macro_start.empty())
        for (unsigned c = 0; c < 256; ++c)
            if (is_ident_char(static_cast<unsigned char>(c)))
                interesting_[c] = true;
    // Blanks at line start may precede a directive.
    interesting_[' '] = interesting_['\t'] = true;
}

std::string Engine::process(std::string_view input, std::string origin, fs::path base_dir) {
    if (base_dir.empty()) {
        std::error_code ec;
        base_dir = fs::current_path(ec);
    }
    auto owner = std::make_shared<const std::string>(input);
    Source src = make_source(SourceKind::File, *owner, owner);
    src.name = std::move(origin);
    src.dir = std::move(base_dir);

    struct Reset {
        Engine& e;
        ~Reset() {
            e.sources_.clear();
            e.frames_.clear();
        }
    } reset{*this};

    std::string out;
    out.reserve(input.size());
    push_source(std::move(src));
    run(0, out);
    return out;
}

std::string Engine::process_file(const fs::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const HostError& e) {
        throw Error({path.string(), 0}, e.what());
    }
    return process(text, path.string(), path.parent_path());
}

void Engine::define(std::string name, std::string body, bool eager, Location origin) {
    if (eager)
        body = expand(body);
    const bool existed = macros_.is_defined(name);
    try {
        macros_.define(name, std::move(body), origin, mode_);
    } catch (const DefinitionError& e) {
        throw Error(std::move(origin), e.what());
    }
    if (existed && options_.warn_redefine && options_.on_diagnostic)
        options_.on_diagnostic({Severity::Warning, origin, "redefinition of '" + name + "'"});
}

void Engine::undef(std::string_view name) { macros_.undef(name); }

// ---------------------------------------------------------------------------
// Source stack

void Engine::push_source(Source src) {
    if (sources_.size() >= options_.limits.expansion_depth_max)
        throw Error(location(), "expansion depth limit (" +
                                    std::to_string(options_.limits.expansion_depth_max) +
                                    ") exceeded while expanding '" + src.name + "'");
    src.frame_base = frames_.size();
    sources_.push_back(std::move(src));
}

void Engine::pop_source() {
    const Source& s = sources_.back();
    if (frames_.size() > s.frame_base)
        throw Error(frames_.back().origin, "conditional is never closed (missing endif)");
    sources_.pop_back();
}

bool Engine::active() const { return frames_.empty() || frames_.back().phase == Phase::Taking; }

Location Engine::location_at(const Source& src, std::size_t offset) const {
    if (src.kind != SourceKind::File)
        return location();
    if (offset < src.line_pos) {
        src.line_pos = 0;
        src.line_no = 1;
    }
    offset = std::min(offset, src.text.size());
    src.line_no += static_cast<std::size_t>(
        std::count(src.text.begin() + static_cast<std::ptrdiff_t>(src.line_pos),
                   src.text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
    src.line_pos = offset;
    return {src.name, src.line_no};
}

Location Engine::location() const {
    for (auto it = sources_.rbegin(); it != sources_.rend(); ++it)
        if (it->kind == SourceKind::File)
            return location_at(*it, it->mark);
    return {"<cli>", 0};
}

void Engine::warn(const std::string& message) {
    if (options_.on_diagnostic)
        options_.on_diagnostic({Severity::Warning, location(), message});
}

// ---------------------------------------------------------------------------
// Main loop

void Engine::run(std::size_t base, std::string& out) {
    while (sources_.size() > base) {
        Source& s = top();
        if (s.pos >= s.text.size()) {
            pop_source();
            continue;
        }
        try {
            if (active())
                step_active(out);
            else
                step_skipping();
        } catch (const Error&) {
            throw;
        } catch (const UnterminatedArguments& e) {
            throw Error(location_at(top(), e.offset()), e.what());
        } catch (const ScanError& e) {
            throw Error(location_at(top(), e.offset()), e.what());
        } catch (const std::exception& e) {
            throw Error(location(), e.what());
        }
    }
}

void Engine::step_active(std::string& out) {
    Source& s = top();
    const std::string_view text = s.text;
    const std::size_t pos = s.pos;
    if (s.kind == SourceKind::File)
        s.mark = pos;
    const unsigned char c = static_cast<unsigned char>(text[pos]);

    if (!interesting_[c]) {
        std::size_t end = pos + 1;
        while (end < text.size() && !interesting_[static_cast<unsigned char>(text[end])])
            ++end;
        out.append(text.substr(pos, end - pos));
        s.pos = end;
        return;
    }

    if (mode_.quote_char && c == static_cast<unsigned char>(*mode_.quote_char)) {
        if (pos + 1 < text.size())
            out += text[pos + 1];
        s.pos = std::min(pos + 2, text.size());
        return;
    }

    for (const auto& spec : mode_.specs) {
        if (auto r = match_region(text, pos, spec)) {
            s.pos = r->end;
            emit_region(*r, spec, out);
            return;
        }
    }

    if (s.env) {
        const auto& prefix = mode_.arg_ref_prefix;
        const std::size_t digit_at = pos + prefix.size();
        if (text.substr(pos, prefix.size()) == prefix && digit_at < text.size() &&
            text[digit_at] >= '1' && text[digit_at] <= '9') {
            const auto index = static_cast<std::size_t>(text[digit_at] - '1');
            s.pos = digit_at + 1;
            std::shared_ptr<const ArgEnv> env = s.env;
            if (index < env->args.size() && !env->args[index].empty()) {
                Source arg = make_source(SourceKind::Argument, env->args[index], env);
                arg.env = env->caller;
                arg.name = prefix + text[digit_at];
                push_source(std::move(arg));
            }
            return;
        }
    }

    if (!mode_.meta_start.empty()) {
        if (is_blank(static_cast<char>(c)) &&
            at_line_start(text, pos, s.kind == SourceKind::File)) {
            std::size_t ws_end = pos;
            while (ws_end < text.size() && is_blank(text[ws_end]))
                ++ws_end;
            if (match_delimiter(text, ws_end, mode_.meta_start) &&
                try_directive(pos, ws_end, false, out))
                return;
            out.append(text.substr(pos, ws_end - pos));
            top().pos = ws_end;
            return;
        }
        if (match_delimiter(text, pos, mode_.meta_start) && try_directive(pos, pos, false, out))
            return;
    }

    if (try_user_macro(out))
        return;

    if (is_blank(static_cast<char>(c))) {
        std::size_t end = pos;
        while (end < text.size() && is_blank(text[end]))
            ++end;
        out.append(text.substr(pos, end - pos));
        top().pos = end;
        return;
    }
    out += static_cast<char>(c);
    top().pos = pos + 1;
}

void Engine::step_skipping() {
    Source& s = top();
    const std::string_view text = s.text;
    const std::size_t pos = s.pos;
    if (s.kind == SourceKind::File)
        s.mark = pos;
    const unsigned char c = static_cast<unsigned char>(text[pos]);

    if (!interesting_[c]) {
        std::size_t end = pos + 1;
        while (end < text.size() && !interesting_[static_cast<unsigned char>(text[end])])
            ++end;
        s.pos = end;
        return;
    }
    if (mode_.quote_char && c == static_cast<unsigned char>(*mode_.quote_char)) {
        s.pos = std::min(pos + 2, text.size());
        return;
    }
    for (const auto& spec : mode_.specs) {
        if (spec.kind != SpecKind::Comment)
            continue;
        if (auto r = match_region(text, pos, spec)) {
            s.pos = r->end;
            return;
        }
    }
    std::string discard;
    if (!mode_.meta_start.empty()) {
        if (is_blank(static_cast<char>(c)) &&
            at_line_start(text, pos, s.kind == SourceKind::File)) {
            std::size_t ws_end = pos;
            while (ws_end < text.size() && is_blank(text[ws_end]))
                ++ws_end;
            if (match_delimiter(text, ws_end, mode_.meta_start) &&
                try_directive(pos, ws_end, true, discard))
                return;
            top().pos = ws_end;
            return;
        }
        if (match_delimiter(text, pos, mode_.meta_start) && try_directive(pos, pos, true, discard))
            return;
    }
    if (mode_.user_macro_start.empty() && is_ident_char(c)) {
        top().pos = identifier_end(text, pos);
        return;
    }
    top().pos = pos + 1;
}

void Engine::emit_region(const Region& r, const CommentStringSpec& spec, std::string& out) {
    if (spec.kind == SpecKind::Comment)
        return;
    // Copy the view first: expand() may push sources and move `top()`.
    const std::string_view text = top().text;
    const std::string_view open = text.substr(r.begin, r.interior_begin - r.begin);
    const std::string_view interior = text.substr(r.interior_begin, r.interior_end - r.interior_begin);
    const std::string_view close = text.substr(r.interior_end, r.end - r.interior_end);
    if (spec.kind == SpecKind::String)
        out.append(open);
    if (spec.expand_inside)
        out += expand(interior);
    else
        out.append(interior);
    if (spec.kind == SpecKind::String)
        out.append(close);
}

bool Engine::try_user_macro(std::string& out) {
    Source& s = top();
    const std::string_view text = s.text;
    const std::size_t pos = s.pos;
    auto name = scan_macro_name(text, pos, mode_);
    if (!name)
        return false;
    auto def = macros_.lookup(name->name);
    std::optional<CapturedArguments> args;
    if (def) {
        try {
            args = scan_invocation_arguments(text, name->end, mode_);
        } catch (const UnterminatedArguments&) {
            throw Error(location_at(s, pos),
                        "unterminated invocation of '" + name->name + "': argument list is never closed");
        }
    }
    if (!args) {
        // Only the prefix is consumed so an argument reference or another
        // construct right after it is still seen.
        std::size_t end = name->end;
        if (!mode_.user_macro_start.empty())
            end = pos + *match_delimiter(text, pos, mode_.user_macro_start);
        out.append(text.substr(pos, end - pos));
        s.pos = end;
        return true;
    }
    s.pos = args->end;
    auto env = std::make_shared<ArgEnv>(ArgEnv{std::move(args->args), s.env});
    Source body = make_source(SourceKind::Body, def->body, def);
    body.env = std::move(env);
    body.name = def->name;
    push_source(std::move(body));
    return true;
}

// ---------------------------------------------------------------------------
// Directives

bool Engine::try_directive(std::size_t line_begin, std::size_t meta_pos, bool skipping,
                           std::string& out) {
    Source& s = top();
    const std::string_view text = s.text;
    auto meta_len = match_delimiter(text, meta_pos, mode_.meta_start);
    if (!meta_len)
        return false;
    const bool line_start = at_line_start(text, line_begin, s.kind == SourceKind::File);
    if (mode_.meta_line_anchored && !line_start)
        return false;

    const std::size_t name_begin = meta_pos + *meta_len;
    if (name_begin >= text.size())
        return false;
    const char first = text[name_begin];
    if (!(std::isalpha(static_cast<unsigned char>(first)) || first == '_'))
        return false;
    const std::size_t name_end = identifier_end(text, name_begin);
    const std::string_view name = text.substr(name_begin, name_end - name_begin);

    auto directive = find_directive(name);
    if (!directive) {
        if (mode_.meta_start == mode_.user_macro_start)
            return false;
        if (skipping) {
            s.pos = name_end;
            return true;
        }
        throw Error(location_at(s, meta_pos), "unknown directive '" + std::string(name) + "'");
    }

    DirectiveCall call{*directive, {}};
    const std::size_t arity = directive_arity(*directive);
    std::size_t end = name_end;
    bool ended_at_newline = false;
    if (auto n = match_delimiter(text, name_end, mode_.meta_short_end)) {
        end = name_end + *n;
        ended_at_newline = mode_.meta_short_end.back() == '\n';
    } else if (auto n = match_delimiter(text, name_end, mode_.meta_arg_start)) {
        CapturedArguments cap;
        try {
            cap = capture_arguments(text, name_end + *n, directive_argument_syntax(mode_),
                                    std::max<std::size_t>(arity, 1), mode_.specs);
        } catch (const UnterminatedArguments&) {
            throw Error(location_at(s, meta_pos),
                        "unterminated '" + std::string(name) + "' directive: argument list is never closed");
        }
        end = cap.end;
        ended_at_newline = cap.ended_at_newline;
        if (arity > 0)
            call.args = std::move(cap.args);
    }
    if (mode_.meta_arg_end == "\n" || mode_.meta_short_end.ends_with('\n')) {
        for (auto& a : call.args) {
            while (!a.empty() && (is_blank(a.back()) || a.back() == '\r'))
                a.pop_back();
        }
    }

    std::size_t resume = end;
    bool whole_line = false;
    if (line_start) {
        if (ended_at_newline) {
            whole_line = true;
        } else {
            std::size_t k = end;
            while (k < text.size() && (is_blank(text[k]) || text[k] == '\r'))
                ++k;
            if (k >= text.size() || text[k] == '\n') {
                whole_line = true;
                resume = std::min(k + 1, text.size());
            }
        }
    }
    if (!whole_line && !skipping && line_begin < meta_pos)
        out.append(text.substr(line_begin, meta_pos - line_begin));
    s.pos = resume;
    execute(call, skipping, out);
    return true;
}

namespace {

std::string_view required(const std::vector<std::string>& args, std::size_t i, Directive d) {
    if (i >= args.size() || trim_space(args[i]).empty())
        throw std::runtime_error(std::string(directive_name(d)) + ": missing argument");
    return args[i];
}

std::string_view optional_arg(const std::vector<std::string>& args, std::size_t i) {
    return i < args.size() ? std::string_view(args[i]) : std::string_view();
}

} // namespace

void Engine::execute(const DirectiveCall& call, bool skipping, std::string& out) {
    if (is_conditional(call.directive)) {
        execute_conditional(call, skipping);
        return;
    }
    if (skipping)
        return;

    switch (call.directive) {
    case Directive::Define:
        define_from_directive(call, false);
        break;
    case Directive::Defeval:
        define_from_directive(call, true);
        break;
    case Directive::Undef: {
        auto name = trim_space(required(call.args, 0, call.directive));
        if (!mode_.user_macro_start.empty() && name.starts_with(mode_.user_macro_start))
            name.remove_prefix(mode_.user_macro_start.size());
        macros_.undef(name);
        break;
    }
    case Directive::Include: {
        std::string path(trim_space(expand(required(call.args, 0, call.directive))));
        if (path.size() >= 2 && ((path.front() == '"' && path.back() == '"') ||
                                 (path.front() == '<' && path.back() == '>')))
            path = path.substr(1, path.size() - 2);
        include(path);
        break;
    }
    case Directive::Exec:
        exec(std::string(trim_space(expand(required(call.args, 0, call.directive)))), out);
        break;
    case Directive::Eval: {
        auto value = evaluate(expand_condition(required(call.args, 0, call.directive)),
                              [this](std::string_view n) { return macros_.is_defined(n); });
        out += value.text();
        break;
    }
    case Directive::Mode: {
        try {
            mode_ = parse_mode_spec(trim_space(required(call.args, 0, call.directive)), mode_);
        } catch (const ModeError& e) {
            throw Error(location(), std::string("mode: ") + e.what());
        }
        rebuild_tables();
        break;
    }
    default:
        break;
    }
}

std::size_t Engine::current_frame(std::string_view directive) {
    if (frames_.size() <= top().frame_base)
        throw Error(location(), std::string(directive) + " without matching conditional");
    return frames_.size() - 1;
}

void Engine::execute_conditional(const DirectiveCall& call, bool skipping) {
    switch (call.directive) {
    case Directive::Elif: {
        std::size_t i = current_frame("elif");
        if (frames_[i].saw_else)
            throw Error(location(), "elif after else");
        if (frames_[i].phase == Phase::Taking) {
            frames_[i].phase = Phase::Done;
        } else if (frames_[i].phase == Phase::Skipping) {
            // Evaluate with the frame lifted so the expansion runs active.
            Frame frame = std::move(frames_[i]);
            frames_.pop_back();
            bool taken = false;
            try {
                taken = evaluate_condition(call);
            } catch (...) {
                frames_.push_back(std::move(frame));
                throw;
            }
            frame.phase = taken ? Phase::Taking : Phase::Skipping;
            frames_.push_back(std::move(frame));
        }
        return;
    }
    case Directive::Else: {
        std::size_t i = current_frame("else");
        if (frames_[i].saw_else)
            throw Error(location(), "duplicate else in conditional opened at " +
                                        frames_[i].origin.file + ":" +
                                        std::to_string(frames_[i].origin.line));
        frames_[i].saw_else = true;
        if (frames_[i].phase == Phase::Taking)
            frames_[i].phase = Phase::Done;
        else if (frames_[i].phase == Phase::Skipping)
            frames_[i].phase = Phase::Taking;
        return;
    }
    case Directive::Endif:
        current_frame("endif");
        frames_.pop_back();
        return;
    default:
        break;
    }

    Location origin = location();
    if (skipping) {
        frames_.push_back({Phase::Done, false, std::move(origin)});
        return;
    }
    const bool taken = evaluate_condition(call);
    frames_.push_back({taken ? Phase::Taking : Phase::Skipping, false, std::move(origin)});
}

bool Engine::evaluate_condition(const DirectiveCall& call) {
    const Directive d = call.directive;
    switch (d) {
    case Directive::Ifdef:
    case Directive::Ifndef: {
        auto name = trim_space(required(call.args, 0, d));
        if (!mode_.user_macro_start.empty() && name.starts_with(mode_.user_macro_start))
            name.remove_prefix(mode_.user_macro_start.size());
        return macros_.is_defined(name) == (d == Directive::Ifdef);
    }
    case Directive::Ifeq:
    case Directive::Ifneq: {
        std::string lhs = expand(optional_arg(call.args, 0));
        std::string rhs = expand(optional_arg(call.args, 1));
        return (trim_blanks(lhs) == trim_blanks(rhs)) == (d == Directive::Ifeq);
    }
    case Directive::If:
    case Directive::Elif: {
        auto value = evaluate(expand_condition(required(call.args, 0, d)),
                              [this](std::string_view n) { return macros_.is_defined(n); });
        if (!value.is_integer())
            throw std::runtime_error(std::string(directive_name(d)) +
                                     ": condition is not an integer ('" + value.text() + "')");
        return value.integer() != 0;
    }
    default:
        return false;
    }
}

std::string Engine::expand(std::string_view text) {
    std::string result;
    if (text.empty())
        return result;
    Source src = make_source(SourceKind::Expansion, text, nullptr);
    src.env = sources_.empty() ? nullptr : top().env;
    src.name = "<expansion>";
    push_source(std::move(src));
    run(sources_.size() - 1, result);
    return result;
}

std::string Engine::expand_condition(std::string_view text) {
    // defined(name) is answered before expansion, otherwise the name itself
    // would be replaced by its body.
    std::string pre;
    std::size_t i = 0;
    constexpr std::string_view kDefined = "defined";
    while (i < text.size()) {
        if (text[i] == '\'') {
            auto close = text.find('\'', i + 1);
            close = close == std::string_view::npos ? text.size() : close + 1;
            pre.append(text.substr(i, close - i));
            i = close;
            continue;
        }
        if (text.substr(i, kDefined.size()) == kDefined &&
            (i == 0 || !is_ident_char(static_cast<unsigned char>(text[i - 1])))) {
            std::size_t j = i + kDefined.size();
            while (j < text.size() && is_blank(text[j])) ++j;
            if (j < text.size() && text[j] == '(') {
                ++j;
                while (j < text.size() && is_blank(text[j])) ++j;
                if (!mode_.user_macro_start.empty())
                    if (auto n = match_delimiter(text, j, mode_.user_macro_start))
                        j += *n;
                std::size_t name_end = identifier_end(text, j);
                std::size_t k = name_end;
                while (k < text.size() && is_blank(text[k])) ++k;
                if (name_end > j && k < text.size() && text[k] == ')') {
                    pre += macros_.is_defined(text.substr(j, name_end - j)) ? '1' : '0';
                    i = k + 1;
                    continue;
                }
            }
        }
        pre += text[i++];
    }
    return expand(pre);
}

void Engine::define_from_directive(const DirectiveCall& call, bool eager) {
    auto name = trim_space(required(call.args, 0, call.directive));
    if (!mode_.user_macro_start.empty())
        if (auto n = match_delimiter(name, 0, mode_.user_macro_start))
            name.remove_prefix(*n);
    define(std::string(name), std::string(optional_arg(call.args, 1)), eager, location());
}

void Engine::include(const std::string& requested) {
    std::vector<std::string> chain;
    fs::path including_dir;
    fs::path including_name;
    for (const auto& src : sources_) {
        if (src.kind == SourceKind::File) {
            chain.push_back(src.name);
            including_dir = src.dir;
            including_name = src.name;
        }
    }
    IncludeResolution r = resolve_include(requested, including_dir, options_.include_paths, chain,
                                          options_.limits.include_depth_max);
    auto content = std::make_shared<const std::string>(read_file(r.resolved));
    Source src = make_source(SourceKind::File, *content, content);
    // Name the file the way the user would: next to its includer, under the
    // -I directory as given, or by its absolute path.
    if (r.root.empty())
        src.name = r.resolved.string();
    else if (r.root == including_dir)
        src.name = (including_name.parent_path() / requested).lexically_normal().string();
    else
        src.name = (r.root / requested).lexically_normal().string();
    src.dir = r.resolved.parent_path();
    push_source(std::move(src));
}

void Engine::exec(const std::string& command, std::string& out) {
    if (!options_.exec_enabled) {
        warn("exec disabled; pass -x");
        return;
    }
    ExecResult r = run_exec(command, options_.exec_shell);
    if (r.exit_status != 0)
        warn("command '" + command + "' exited with status " + std::to_string(r.exit_status));
    out += r.output;
}

} // namespace flexpp
