#include "flexpp/cli.hpp"

#include "flexpp/host_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <unistd.h>

namespace flexpp::cli {

namespace fs = std::filesystem;

namespace {

struct Parser {
    CLI::App app{"Mode-driven macro preprocessor", "flexpp"};
    CliConfig config;
    std::vector<std::string> defines;
    CLI::Option* preset_flags[4] = {};
    CLI::Option* output = nullptr;

    Parser() {
        app.set_version_flag("--version", kVersion);
        preset_flags[0] = app.add_flag("-C", "use the cpp preset");
        preset_flags[1] = app.add_flag("-T", "use the tex preset");
        preset_flags[2] = app.add_flag("-H", "use the html preset");
        preset_flags[3] = app.add_flag("-P", "use the prolog preset");
        app.add_option("--mode", config.mode_overrides, "mode overrides as key=value;...")
            ->allow_extra_args(false);
        app.add_option("-D", defines, "define name[=body]")->allow_extra_args(false);
        app.add_option("-I", config.include_dirs, "add an include directory")
            ->allow_extra_args(false);
        output = app.add_option("-o", config.output, "output file")
                     ->multi_option_policy(CLI::MultiOptionPolicy::Throw);
        app.add_flag("-x", config.exec_enabled, "enable the exec directive");
        app.add_flag("--warn-redefine", config.warn_redefine, "warn when a macro is redefined");
        app.add_option("--max-expand", config.limits.expansion_depth_max,
                       "expansion depth limit")
            ->check(CLI::PositiveNumber);
        app.add_option("--max-include", config.limits.include_depth_max, "include depth limit")
            ->check(CLI::PositiveNumber);
        app.add_option("input", config.input, "input file, '-' or absent for stdin");
    }
};

const char* preset_for(std::size_t flag) {
    static const char* names[] = {"cpp", "tex", "html", "prolog"};
    return names[flag];
}

} // namespace

CliConfig parse_args(std::span<const std::string> args) {
    Parser p;
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        p.app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        p.config.show_help = true;
        p.config.help_text = p.app.help();
        return p.config;
    } catch (const CLI::CallForVersion&) {
        p.config.show_version = true;
        return p.config;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (const CLI::Option* opt : p.app.parse_order())
        for (std::size_t i = 0; i < 4; ++i)
            if (opt == p.preset_flags[i])
                p.config.preset = preset_for(i);

    for (const auto& d : p.defines) {
        auto eq = d.find('=');
        Definition def;
        def.name = d.substr(0, eq);
        def.body = eq == std::string::npos ? "1" : d.substr(eq + 1);
        if (def.name.empty())
            throw UsageError("-D: missing macro name in '" + d + "'");
        p.config.definitions.push_back(std::move(def));
    }
    if (p.config.input == "-")
        p.config.input.clear();
    return p.config;
}

ModeDescriptor resolve_mode(const CliConfig& config) {
    try {
        ModeDescriptor mode = preset(config.preset);
        for (const auto& spec : config.mode_overrides)
            mode = parse_mode_spec(spec, mode);
        return mode;
    } catch (const ModeError& e) {
        throw UsageError(std::string("--mode: ") + e.what());
    }
}

namespace {

void write_atomically(const fs::path& target, const std::string& data) {
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw Error({target.string(), 0}, "cannot open output file for writing");
        f.write(data.data(), static_cast<std::streamsize>(data.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error({target.string(), 0}, "write to output file failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error({target.string(), 0}, "cannot replace output file: " + ec.message());
    }
}

} // namespace

int run(std::span<const std::string> args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CliConfig config;
    ModeDescriptor mode;
    try {
        config = parse_args(args);
        if (config.show_help) {
            out << config.help_text;
            return 0;
        }
        if (config.show_version) {
            out << kVersion << '\n';
            return 0;
        }
        mode = resolve_mode(config);
    } catch (const UsageError& e) {
        err << "flexpp: " << e.what() << "\nRun with --help for more information.\n";
        return 2;
    }

    EngineOptions options;
    options.mode = std::move(mode);
    for (const auto& d : config.include_dirs)
        options.include_paths.emplace_back(d);
    options.exec_enabled = config.exec_enabled;
    if (const char* shell = std::getenv("FLEXPP_SHELL"); shell && *shell)
        options.exec_shell = shell;
    options.warn_redefine = config.warn_redefine;
    options.limits = config.limits;
    options.on_diagnostic = [&err](const Diagnostic& d) { err << format_diagnostic(d) << '\n'; };

    try {
        Engine engine(std::move(options));
        for (const auto& d : config.definitions)
            engine.define(d.name, d.body);

        std::string result;
        if (config.input.empty()) {
            std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
            result = engine.process(text, "<stdin>");
        } else {
            std::string text;
            try {
                text = read_file(config.input);
            } catch (const HostError& e) {
                throw Error({config.input, 0}, e.what());
            }
            fs::path dir = fs::path(config.input).parent_path();
            if (dir.empty())
                dir = fs::current_path();
            result = engine.process(text, config.input, dir);
        }

        if (config.output.empty()) {
            out << result;
            out.flush();
        } else {
            write_atomically(config.output, result);
        }
    } catch (const Error& e) {
        err << format_diagnostic(e.diagnostic()) << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "flexpp: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace flexpp::cli
