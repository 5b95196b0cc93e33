#include "flexpp/macro_store.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace flexpp {

namespace {

struct DirectiveInfo {
    std::string_view name;
    Directive directive;
    std::size_t arity;
};

constexpr std::array<DirectiveInfo, 15> kDirectives{{
    {"define", Directive::Define, 2},
    {"defeval", Directive::Defeval, 2},
    {"undef", Directive::Undef, 1},
    {"ifdef", Directive::Ifdef, 1},
    {"ifndef", Directive::Ifndef, 1},
    {"ifeq", Directive::Ifeq, 2},
    {"ifneq", Directive::Ifneq, 2},
    {"if", Directive::If, 1},
    {"elif", Directive::Elif, 1},
    {"else", Directive::Else, 0},
    {"endif", Directive::Endif, 0},
    {"include", Directive::Include, 1},
    {"exec", Directive::Exec, 1},
    {"eval", Directive::Eval, 1},
    {"mode", Directive::Mode, 1},
}};

const DirectiveInfo& info(Directive d) {
    for (const auto& i : kDirectives)
        if (i.directive == d) return i;
    return kDirectives.front();
}

} // namespace

std::optional<Directive> find_directive(std::string_view name) {
    for (const auto& i : kDirectives)
        if (i.name == name) return i.directive;
    return std::nullopt;
}

std::string_view directive_name(Directive d) { return info(d).name; }

std::size_t directive_arity(Directive d) { return info(d).arity; }

bool is_conditional(Directive d) {
    switch (d) {
    case Directive::Ifdef: case Directive::Ifndef: case Directive::Ifeq: case Directive::Ifneq:
    case Directive::If: case Directive::Elif: case Directive::Else: case Directive::Endif:
        return true;
    default:
        return false;
    }
}

int max_arg_ref(std::string_view body, const ModeDescriptor& mode) {
    const std::string_view prefix = mode.arg_ref_prefix;
    int best = 0;
    for (std::size_t i = 0; i < body.size();) {
        if (mode.quote_char && body[i] == *mode.quote_char) {
            i += 2;
            continue;
        }
        if (!prefix.empty() && body.substr(i, prefix.size()) == prefix &&
            i + prefix.size() < body.size()) {
            char d = body[i + prefix.size()];
            if (d >= '1' && d <= '9') {
                best = std::max(best, d - '0');
                i += prefix.size() + 1;
                continue;
            }
        }
        ++i;
    }
    return best;
}

std::optional<std::string> invalid_macro_name(std::string_view name, const ModeDescriptor& mode) {
    if (name.empty())
        return "macro name must not be empty";
    auto first = [](const std::string& s) -> std::optional<char> {
        if (s.empty()) return std::nullopt;
        return s.front() == ' ' ? std::optional<char>(' ') : std::optional<char>(s.front());
    };
    for (auto delim : {first(mode.arg_start), first(mode.arg_sep), first(mode.arg_end),
                       mode.quote_char}) {
        if (!delim) continue;
        for (char c : name) {
            if (c == *delim || (*delim == ' ' && (c == ' ' || c == '\t')))
                return "macro name '" + std::string(name) + "' contains the delimiter '" +
                       std::string(1, *delim) + "'";
        }
    }
    if (find_directive(name))
        return "cannot define '" + std::string(name) + "': it is a built-in directive name";
    return std::nullopt;
}

std::shared_ptr<const MacroDefinition> MacroStore::define(std::string name, std::string body,
                                                          Location origin,
                                                          const ModeDescriptor& mode) {
    if (auto why = invalid_macro_name(name, mode))
        throw DefinitionError(*why);
    auto def = std::make_shared<MacroDefinition>();
    def->max_arg_ref = max_arg_ref(body, mode);
    def->name = name;
    def->body = std::move(body);
    def->origin = std::move(origin);
    auto it = table_.find(name);
    if (it != table_.end())
        it->second = def;
    else
        table_.emplace(std::move(name), def);
    return def;
}

bool MacroStore::undef(std::string_view name) {
    auto it = table_.find(name);
    if (it == table_.end())
        return false;
    table_.erase(it);
    return true;
}

std::shared_ptr<const MacroDefinition> MacroStore::lookup(std::string_view name) const {
    auto it = table_.find(name);
    return it == table_.end() ? nullptr : it->second;
}

} // namespace flexpp
