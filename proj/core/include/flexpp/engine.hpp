#pragma once

#include "flexpp/diagnostics.hpp"
#include "flexpp/macro_store.hpp"
#include "flexpp/mode.hpp"
#include "flexpp/scanner.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace flexpp {

struct Limits {
    std::size_t expansion_depth_max = 4096;
    std::size_t include_depth_max = 64;
};

struct EngineOptions {
    ModeDescriptor mode = preset(Preset::Default);
    std::vector<std::filesystem::path> include_paths;
    bool exec_enabled = false;
    std::string exec_shell = "/bin/sh";
    bool warn_redefine = false;
    Limits limits;
    /// Receives warnings. Errors are thrown as flexpp::Error instead.
    DiagnosticSink on_diagnostic;
};

/// Single-pass, mode-driven macro processor.
///
/// Macros, mode and conditional state live in the engine and persist across
/// process() calls, so several inputs can share definitions. An engine is
/// not thread-safe; separate engines share nothing.
class Engine {
public:
    explicit Engine(EngineOptions options = {});
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Processes `input`, naming it `origin` in diagnostics. Relative
    /// includes resolve against `base_dir` (the working directory if empty).
    /// Throws flexpp::Error.
    std::string process(std::string_view input, std::string origin = "<input>",
                        std::filesystem::path base_dir = {});

    /// Reads and processes a file.
    std::string process_file(const std::filesystem::path& path);

    /// Installs a definition before or between runs; `eager` expands the
    /// body first (defeval). Throws flexpp::Error.
    void define(std::string name, std::string body, bool eager = false,
                Location origin = {"<cli>", 0});
    void undef(std::string_view name);

    const MacroStore& macros() const noexcept { return macros_; }
    const ModeDescriptor& mode() const noexcept { return mode_; }
    void set_mode(ModeDescriptor mode);

private:
    enum class SourceKind { File, Body, Argument, Expansion };
    enum class Phase { Taking, Skipping, Done };

    struct ArgEnv {
        std::vector<std::string> args;
        std::shared_ptr<const ArgEnv> caller;
    };

    struct Source {
        SourceKind kind = SourceKind::File;
        std::string_view text;
        std::shared_ptr<const void> owner;
        std::size_t pos = 0;
        std::shared_ptr<const ArgEnv> env;
        std::string name;
        std::filesystem::path dir;
        std::size_t frame_base = 0;
        std::size_t mark = 0;
        mutable std::size_t line_pos = 0;
        mutable std::size_t line_no = 1;
    };

    struct Frame {
        Phase phase;
        bool saw_else = false;
        Location origin;
    };

    struct DirectiveCall {
        Directive directive;
        std::vector<std::string> args;
    };

    static Source make_source(SourceKind kind, std::string_view text,
                              std::shared_ptr<const void> owner);

    void run(std::size_t base, std::string& out);
    void step_active(std::string& out);
    void step_skipping();
    bool try_directive(std::size_t line_begin, std::size_t meta_pos, bool skipping,
                       std::string& out);
    bool try_user_macro(std::string& out);
    void emit_region(const Region& region, const CommentStringSpec& spec,
                     std::string& out);
    void execute(const DirectiveCall& call, bool skipping, std::string& out);
    void execute_conditional(const DirectiveCall& call, bool skipping);
    bool evaluate_condition(const DirectiveCall& call);

    std::string expand(std::string_view text);
    std::string expand_condition(std::string_view text);
    void define_from_directive(const DirectiveCall& call, bool eager);
    void include(const std::string& requested);
    void exec(const std::string& command, std::string& out);

    void push_source(Source src);
    void pop_source();
    bool active() const;
    std::size_t current_frame(std::string_view directive);

    Source& top() { return sources_.back(); }
    Location location() const;
    Location location_at(const Source& src, std::size_t offset) const;
    void warn(const std::string& message);
    void rebuild_tables();

    EngineOptions options_;
    ModeDescriptor mode_;
    MacroStore macros_;
    std::vector<Source> sources_;
    std::vector<Frame> frames_;
    std::array<bool, 256> interesting_{};
};

} // namespace flexpp
