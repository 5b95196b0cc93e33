// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Corpus runs go through the installed CLI binary;
// the randomized criteria drive the library directly.

#include "cond_oracle.hpp"
#include "eval_edge_cases.hpp"
#include "expr_reference.hpp"
#include "glob_oracle.hpp"

#include "flexpp/engine.hpp"
#include "flexpp/eval.hpp"
#include "flexpp/glob.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const fs::path kCorpus = FLEXPP_CORPUS_DIR;
const std::string kCli = FLEXPP_CLI_PATH;

// Pinned sizes and tolerances.
constexpr std::size_t kMinGoldenFiles = 25;
constexpr int kEvalSamples = 10'000;
constexpr int kEvalMaxDepth = 6;
constexpr int kCondNests = 1'000;
constexpr int kCondMaxDepth = 8;
constexpr int kPassThroughPerPreset = 1'000;
constexpr std::size_t kGlobExhaustiveLen = 4;
constexpr std::size_t kGlobSampledMaxLen = 6;
constexpr int kGlobSubjectsPerLongPattern = 16;
constexpr double kGlobTimeBudgetSeconds = 30.0;

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const fs::path& p) {
    std::vector<std::string> out;
    if (!fs::exists(p)) return out;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) {
        if (c == '\'') q += "'\\''";
        else q += c;
    }
    return q + "'";
}

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

class Scratch {
public:
    Scratch() {
        char tmpl[] = "/tmp/flexpp-acceptance-XXXXXX";
        dir_ = mkdtemp(tmpl);
    }
    ~Scratch() { fs::remove_all(dir_); }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
};

// Runs a command line in `cwd` with a scrubbed environment plus `env`.
Run run_command(const std::vector<std::string>& argv, const fs::path& cwd,
                const std::vector<std::string>& env, const Scratch& scratch) {
    const fs::path out = scratch.dir() / "stdout";
    const fs::path err = scratch.dir() / "stderr";
    std::string cmd = "cd " + shell_quote(cwd.string()) + " && env -i PATH=/usr/bin:/bin";
    for (const auto& e : env) cmd += " " + shell_quote(e);
    for (const auto& a : argv) cmd += " " + shell_quote(a);
    cmd += " </dev/null >" + shell_quote(out.string()) + " 2>" + shell_quote(err.string());
    int raw = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

Run run_cli(const std::vector<std::string>& args, const fs::path& cwd, const Scratch& scratch,
            const std::vector<std::string>& env = {}) {
    std::vector<std::string> argv{kCli};
    argv.insert(argv.end(), args.begin(), args.end());
    return run_command(argv, cwd, env, scratch);
}

std::vector<fs::path> files_with(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string preset_of(const std::vector<std::string>& args) {
    std::string p = "default";
    for (const auto& a : args) {
        if (a == "-C") p = "cpp";
        if (a == "-T") p = "tex";
        if (a == "-H") p = "html";
        if (a == "-P") p = "prolog";
    }
    return p;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void report(int n, const std::string& title, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << n << "] " << title << ": " << o.detail
              << std::endl;
    if (!o.pass) ++g_failures;
}

// 1 -------------------------------------------------------------------------
Outcome golden_corpus(const Scratch& scratch) {
    const fs::path dir = kCorpus / "golden";
    const char* directives[] = {"define", "defeval", "undef",  "ifdef", "ifndef",
                                "ifeq",   "ifneq",   "if",     "elif",  "else",
                                "endif",  "include", "exec",   "eval",  "mode"};
    const std::map<std::string, std::string> meta = {
        {"default", "#"}, {"cpp", "#"}, {"tex", "\\"}, {"html", "<#"}, {"prolog", "#"}};
    std::map<std::string, std::set<std::string>> covered;
    std::size_t files = 0, matched = 0;
    std::string first_mismatch;
    for (const auto& in : files_with(dir, ".gpp")) {
        ++files;
        auto args = lines_of(fs::path(in).replace_extension(".args"));
        const std::string preset = preset_of(args);
        args.push_back(in.filename().string());
        Run r = run_cli(args, dir, scratch);
        const std::string want = slurp(fs::path(in).replace_extension(".expected"));
        if (r.status == 0 && r.out == want) ++matched;
        else if (first_mismatch.empty()) first_mismatch = in.filename().string();

        const std::string text = slurp(in);
        for (const char* d : directives) {
            const std::string needle = meta.at(preset) + d;
            for (std::size_t at = text.find(needle); at != std::string::npos;
                 at = text.find(needle, at + 1)) {
                std::size_t after = at + needle.size();
                if (after >= text.size() || !std::isalnum(static_cast<unsigned char>(text[after]))) {
                    covered[preset].insert(d);
                    break;
                }
            }
        }
    }
    std::size_t combos = 0;
    for (const auto& [p, set] : covered) combos += set.size();
    const std::size_t needed = meta.size() * std::size(directives);
    Outcome o;
    o.pass = files >= kMinGoldenFiles && matched == files && combos == needed;
    o.detail = std::to_string(matched) + "/" + std::to_string(files) +
               " files byte-exact (need >= " + std::to_string(kMinGoldenFiles) + "), " +
               std::to_string(combos) + "/" + std::to_string(needed) + " directive x preset pairs";
    if (!first_mismatch.empty()) o.detail += "; first mismatch " + first_mismatch;
    return o;
}

// 2 -------------------------------------------------------------------------
Outcome preset_equivalence(const Scratch& scratch) {
    const fs::path base = kCorpus / "equivalence";
    std::size_t programs = 0, identical = 0;
    std::string bad;
    for (const auto& prog : files_with(base / "default", ".gpp")) {
        ++programs;
        const std::string name = prog.filename().string();
        Run d = run_cli({name}, base / "default", scratch);
        Run t = run_cli({"-T", name}, base / "tex", scratch);
        Run h = run_cli({"-H", name}, base / "html", scratch);
        if (d.status == 0 && t.status == 0 && h.status == 0 && !d.out.empty() &&
            d.out == t.out && d.out == h.out)
            ++identical;
        else if (bad.empty())
            bad = name;
    }
    Outcome o;
    o.pass = programs >= 3 && identical == programs;
    o.detail = std::to_string(identical) + "/" + std::to_string(programs) +
               " programs identical across default/tex/html (tolerance: byte-exact)";
    if (!bad.empty()) o.detail += "; differs: " + bad;
    return o;
}

// 3 -------------------------------------------------------------------------
std::string normalize_cpp(const std::string& text) {
    std::istringstream in(text);
    std::string out;
    for (std::string line; std::getline(in, line);) {
        std::string collapsed;
        bool blank = false;
        for (char c : line) {
            if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
                blank = true;
                continue;
            }
            if (blank && !collapsed.empty()) collapsed += ' ';
            blank = false;
            collapsed += c;
        }
        if (collapsed.empty() || collapsed[0] == '#') continue;
        out += collapsed + "\n";
    }
    return out;
}

Outcome cpp_compatibility(const Scratch& scratch) {
    const fs::path dir = kCorpus / "cpp";
    const bool have_cpp = std::system("command -v cpp >/dev/null 2>&1") == 0;
    std::size_t files = 0, frozen_ok = 0, live_ok = 0;
    std::string bad;
    for (const auto& c : files_with(dir, ".c")) {
        ++files;
        const std::string name = c.filename().string();
        Run ours = run_cli({"-C", name}, dir, scratch);
        if (ours.status == 0 && ours.out == slurp(fs::path(c).replace_extension(".expected")))
            ++frozen_ok;
        else if (bad.empty())
            bad = name + " (frozen)";
        if (!have_cpp) continue;
        Run ref = run_command({"cpp", "-P", "-undef", "-nostdinc", name}, dir, {}, scratch);
        if (ref.status == 0 && normalize_cpp(ref.out) == normalize_cpp(ours.out)) ++live_ok;
        else if (bad.empty())
            bad = name + " (system cpp)";
    }
    Outcome o;
    o.pass = have_cpp && files == 10 && frozen_ok == files && live_ok == files;
    o.detail = std::to_string(live_ok) + "/" + std::to_string(files) +
               " match `cpp -P -undef -nostdinc` after whitespace normalization, " +
               std::to_string(frozen_ok) + "/" + std::to_string(files) + " match frozen output";
    if (!have_cpp) o.detail += "; no system cpp found";
    if (!bad.empty()) o.detail += "; first mismatch " + bad;
    return o;
}

// 4 -------------------------------------------------------------------------
Outcome glob_oracle() {
    const std::string alphabet = "ab-!*?[]\\";
    const auto start = std::chrono::steady_clock::now();
    std::size_t pairs = 0, disagreements = 0;
    std::string first_bad;

    auto check = [&](const std::string& p, const std::string& s,
                     const std::optional<flexpp::GlobPattern>& compiled) {
        ++pairs;
        std::optional<bool> got;
        if (compiled) got = compiled->matches(s);
        if (got != oracle::glob_dp(p, s)) {
            if (disagreements++ == 0) first_bad = "'" + p + "' vs '" + s + "'";
        }
    };
    auto compile = [](const std::string& p) -> std::optional<flexpp::GlobPattern> {
        try {
            return flexpp::GlobPattern(p);
        } catch (const flexpp::PatternError&) {
            return std::nullopt;
        }
    };
    auto all_strings = [&](std::size_t max_len) {
        std::vector<std::string> out{""};
        std::vector<std::string> layer{""};
        for (std::size_t len = 1; len <= max_len; ++len) {
            std::vector<std::string> next;
            for (const auto& s : layer)
                for (char c : alphabet) next.push_back(s + c);
            out.insert(out.end(), next.begin(), next.end());
            layer = std::move(next);
        }
        return out;
    };

    // Tier 1: every pattern against every subject, both up to length 4.
    const auto short_strings = all_strings(kGlobExhaustiveLen);
    for (const auto& p : short_strings) {
        auto compiled = compile(p);
        for (const auto& s : short_strings) check(p, s, compiled);
    }
    const std::size_t exhaustive = pairs;

    // Tier 2: every pattern of length 5-6 against random subjects up to 6.
    std::mt19937_64 rng(4242);
    std::vector<std::string> layer;
    for (const auto& s : short_strings)
        if (s.size() == kGlobExhaustiveLen) layer.push_back(s);
    bool budget_hit = false;
    for (std::size_t len = kGlobExhaustiveLen + 1; len <= kGlobSampledMaxLen && !budget_hit; ++len) {
        std::vector<std::string> next;
        for (const auto& s : layer)
            for (char c : alphabet) next.push_back(s + c);
        for (const auto& p : next) {
            auto compiled = compile(p);
            for (int k = 0; k < kGlobSubjectsPerLongPattern; ++k) {
                std::string s(rng() % (kGlobSampledMaxLen + 1), 'a');
                for (auto& c : s) c = alphabet[rng() % alphabet.size()];
                check(p, s, compiled);
            }
        }
        layer = std::move(next);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        budget_hit = elapsed > kGlobTimeBudgetSeconds;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Outcome o;
    o.pass = disagreements == 0 && pairs >= 10'000'000;
    std::ostringstream d;
    d << pairs << " pairs over the 9-symbol alphabet (" << exhaustive
      << " exhaustive with |p|,|s| <= 4; " << pairs - exhaustive
      << " for every pattern of length 5-6 x 16 random subjects), " << disagreements
      << " disagreements, " << static_cast<int>(secs * 10) / 10.0 << " s";
    if (budget_hit) d << " (time budget reached)";
    if (!first_bad.empty()) d << "; first: " << first_bad;
    o.detail = d.str();
    return o;
}

// 5 -------------------------------------------------------------------------
std::string kind_name(flexpp::EvalError::Kind k) {
    using K = flexpp::EvalError::Kind;
    switch (k) {
    case K::Syntax: return "syntax";
    case K::Type: return "type";
    case K::DivisionByZero: return "division";
    case K::Overflow: return "overflow";
    case K::Pattern: return "pattern";
    }
    return "?";
}

std::string ref_kind(oracle::RefError e) {
    switch (e) {
    case oracle::RefError::None: return "";
    case oracle::RefError::Type: return "type";
    case oracle::RefError::DivisionByZero: return "division";
    case oracle::RefError::Overflow: return "overflow";
    case oracle::RefError::Pattern: return "pattern";
    }
    return "?";
}

Outcome evaluator_oracle() {
    auto defined = [](std::string_view n) { return n == "x"; };
    oracle::ExprGenerator gen(20260101);
    oracle::ReferenceInterpreter ref({"x"});
    int agree = 0, errors = 0;
    std::string first_bad;
    for (int i = 0; i < kEvalSamples; ++i) {
        auto sample = gen.next(kEvalMaxDepth);
        auto want = ref.run(*sample.tree);
        std::string got_kind, got_text;
        bool got_int = false;
        try {
            auto v = flexpp::evaluate(sample.text, defined);
            got_int = v.is_integer();
            got_text = v.text();
        } catch (const flexpp::EvalError& e) {
            got_kind = kind_name(e.kind());
        }
        bool ok = got_kind == ref_kind(want.error) &&
                  (!got_kind.empty() ||
                   (got_int == want.value.is_int && got_text == want.value.text()));
        if (want.error != oracle::RefError::None) ++errors;
        if (ok) ++agree;
        else if (first_bad.empty()) first_bad = sample.text;
    }
    int edge_ok = 0, edge_total = 0;
    for (const auto& c : oracle::kEvalEdgeCases) {
        ++edge_total;
        try {
            auto v = flexpp::evaluate(c.expr, defined);
            if (c.error.empty() && v.is_integer() && v.integer() == c.value) ++edge_ok;
        } catch (const flexpp::EvalError& e) {
            if (kind_name(e.kind()) == c.error) ++edge_ok;
        }
    }
    Outcome o;
    o.pass = agree == kEvalSamples && edge_ok == edge_total;
    o.detail = std::to_string(agree) + "/" + std::to_string(kEvalSamples) +
               " random expressions (depth <= 6, " + std::to_string(errors) +
               " expected errors) agree with the reference; edge table " +
               std::to_string(edge_ok) + "/" + std::to_string(edge_total);
    if (!first_bad.empty()) o.detail += "; first disagreement: " + first_bad;
    return o;
}

// 6 -------------------------------------------------------------------------
Outcome conditional_fuzz() {
    oracle::CondGenerator gen(8080);
    int agree = 0;
    std::size_t bytes = 0;
    for (int i = 0; i < kCondNests; ++i) {
        auto nest = gen.nest(kCondMaxDepth);
        auto defined = gen.defined_set();
        std::string input, want;
        oracle::cond_render(nest, input);
        oracle::cond_expected(nest, defined, want);
        bytes += input.size();
        try {
            flexpp::Engine e;
            for (const auto& d : defined) e.define(d, "1");
            if (e.process(input) == want) ++agree;
        } catch (const flexpp::Error&) {
        }
    }
    Outcome o;
    o.pass = agree == kCondNests;
    o.detail = std::to_string(agree) + "/" + std::to_string(kCondNests) +
               " nests (depth <= 8, " + std::to_string(bytes / 1024) +
               " KiB total) select exactly the oracle's branches";
    return o;
}

// 7 -------------------------------------------------------------------------
Outcome pass_through() {
    using flexpp::Preset;
    std::mt19937_64 rng(777);
    int total = 0, same = 0;
    for (auto p : {Preset::Default, Preset::Cpp, Preset::Tex, Preset::Html, Preset::Prolog}) {
        auto mode = flexpp::preset(p);
        std::string excluded;
        for (const auto& s : mode.specs) excluded += s.start[0];
        if (mode.quote_char) excluded += *mode.quote_char;
        if (!mode.meta_start.empty()) excluded += mode.meta_start[0];
        if (!mode.user_macro_start.empty()) excluded += mode.user_macro_start[0];
        std::vector<char> allowed;
        for (int b = 0; b < 256; ++b)
            if (excluded.find(static_cast<char>(b)) == std::string::npos)
                allowed.push_back(static_cast<char>(b));
        for (int i = 0; i < kPassThroughPerPreset; ++i) {
            std::string s(rng() % 200, ' ');
            for (auto& c : s) c = allowed[rng() % allowed.size()];
            ++total;
            try {
                flexpp::EngineOptions opts;
                opts.mode = mode;
                flexpp::Engine e(std::move(opts));
                if (e.process(s) == s) ++same;
            } catch (const flexpp::Error&) {
            }
        }
    }
    Outcome o;
    o.pass = same == total;
    o.detail = std::to_string(same) + "/" + std::to_string(total) +
               " random byte strings unchanged (5 presets x 1000, spec/meta/macro/quote "
               "opening bytes excluded)";
    return o;
}

// 8 -------------------------------------------------------------------------
Outcome safety_gate(const Scratch& scratch) {
    const fs::path dir = kCorpus / "golden";
    const std::vector<std::string> env_a{"HOME=/tmp", "LANG=C", "USER=alpha"};
    const std::vector<std::string> env_b{"HOME=/nonexistent", "LANG=tr_TR.UTF-8", "USER=beta",
                                         "TZ=Asia/Tokyo", "FLEXPP_PROBE=1", "SHELL=/bin/false"};
    std::size_t files = 0, stable = 0;
    std::string bad;
    for (const auto& in : files_with(dir, ".gpp")) {
        ++files;
        auto args = lines_of(fs::path(in).replace_extension(".args"));
        args.push_back(in.filename().string());
        Run a = run_cli(args, dir, scratch, env_a);
        Run b = run_cli(args, dir, scratch, env_b);
        if (a.status == b.status && a.out == b.out) ++stable;
        else if (bad.empty()) bad = in.filename().string();
    }
    Run gated = run_cli({"exec-echo.gpp"}, kCorpus, scratch);
    Run enabled = run_cli({"-x", "exec-echo.gpp"}, kCorpus, scratch);
    const bool gate_ok = gated.status == 0 && gated.out.empty() &&
                         gated.err.find("exec disabled; pass -x") != std::string::npos;
    const bool exec_ok = enabled.status == 0 && enabled.out == "hi\n";
    Outcome o;
    o.pass = files > 0 && stable == files && gate_ok && exec_ok;
    o.detail = std::to_string(stable) + "/" + std::to_string(files) +
               " corpus files identical under two environments with exec disabled; "
               "exec-echo.gpp: without -x " +
               (gate_ok ? "empty output + warning" : "UNEXPECTED") + ", with -x " +
               (exec_ok ? "\"hi\\n\"" : "UNEXPECTED");
    if (!bad.empty()) o.detail += "; unstable: " + bad;
    return o;
}

// 9 -------------------------------------------------------------------------
Outcome error_diagnostics(const Scratch& scratch) {
    const fs::path dir = kCorpus / "errors";
    std::size_t cases = 0, ok = 0;
    std::string bad;
    for (const auto& in : files_with(dir, ".gpp")) {
        ++cases;
        auto args = lines_of(fs::path(in).replace_extension(".args"));
        auto env = lines_of(fs::path(in).replace_extension(".env"));
        std::string line, message;
        for (const auto& l : lines_of(fs::path(in).replace_extension(".expect"))) {
            if (l.rfind("line=", 0) == 0) line = l.substr(5);
            if (l.rfind("message=", 0) == 0) message = l.substr(8);
        }
        const std::string name = in.filename().string();
        args.push_back(name);
        Run r = run_cli(args, dir, scratch, env);
        const std::string where = name + ":" + line + ": error: ";
        if (r.status == 1 && r.out.empty() && r.err.find(where) != std::string::npos &&
            r.err.find(message) != std::string::npos)
            ++ok;
        else if (bad.empty())
            bad = name + " -> status " + std::to_string(r.status) + ", " + r.err;
    }
    // Usage errors are a separate class with their own exit status.
    const std::vector<std::vector<std::string>> usage = {
        {"--no-such-flag"}, {"-D"}, {"-o", "a", "-o", "b"}, {"--max-expand"}};
    std::size_t usage_ok = 0;
    for (const auto& args : usage)
        if (run_cli(args, dir, scratch).status == 2) ++usage_ok;
    Outcome o;
    o.pass = cases >= 25 && ok == cases && usage_ok == usage.size();
    o.detail = std::to_string(ok) + "/" + std::to_string(cases) +
               " error cases exit 1 with file:line: error: <message>; " + std::to_string(usage_ok) +
               "/" + std::to_string(usage.size()) + " usage errors exit 2";
    if (!bad.empty()) o.detail += "; first failure " + bad;
    return o;
}

} // namespace

int main() {
    Scratch scratch;
    const auto start = std::chrono::steady_clock::now();
    report(1, "golden corpus", golden_corpus(scratch));
    report(2, "preset equivalence", preset_equivalence(scratch));
    report(3, "C preprocessor subset", cpp_compatibility(scratch));
    report(4, "glob oracle", glob_oracle());
    report(5, "evaluator oracle", evaluator_oracle());
    report(6, "conditional fuzz", conditional_fuzz());
    report(7, "pass-through", pass_through());
    report(8, "safety gate", safety_gate(scratch));
    report(9, "error diagnostics", error_diagnostics(scratch));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (g_failures == 0 ? "all 9 criteria passed" : std::to_string(g_failures) +
                                                                  " criteria failed")
              << " in " << static_cast<int>(secs * 10) / 10.0 << " s" << std::endl;
    return g_failures == 0 ? 0 : 1;
}
