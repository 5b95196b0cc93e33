#include "flexpp/host_io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace flexpp {

namespace fs = std::filesystem;

namespace {

bool is_readable_file(const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec) && std::ifstream(p, std::ios::binary).good();
}

std::string describe_chain(std::span<const std::string> chain, std::string_view next) {
    std::string s;
    for (const auto& f : chain) {
        s += f;
        s += " -> ";
    }
    s += next;
    return s;
}

} // namespace

IncludeResolution resolve_include(std::string_view requested, const fs::path& including_dir,
                                  std::span<const fs::path> search_paths,
                                  std::span<const std::string> chain, std::size_t max_depth) {
    if (requested.empty())
        throw HostError("include: empty file name");
    if (chain.size() >= max_depth)
        throw HostError("include depth limit (" + std::to_string(max_depth) +
                        ") exceeded: " + describe_chain(chain, requested));

    IncludeResolution r;
    r.requested = std::string(requested);
    r.depth = chain.size() + 1;

    const fs::path req(r.requested);
    if (req.is_absolute()) {
        if (!is_readable_file(req))
            throw HostError("cannot find include file '" + r.requested + "'");
        r.resolved = req.lexically_normal();
        return r;
    }

    std::string searched;
    auto try_root = [&](const fs::path& root) {
        fs::path candidate = root / req;
        if (!searched.empty()) searched += ", ";
        searched += root.empty() ? std::string(".") : root.string();
        if (!is_readable_file(candidate))
            return false;
        std::error_code ec;
        fs::path abs = fs::absolute(candidate, ec);
        r.resolved = (ec ? candidate : abs).lexically_normal();
        r.root = root;
        return true;
    };
    if (try_root(including_dir))
        return r;
    for (const auto& dir : search_paths)
        if (try_root(dir))
            return r;
    throw HostError("cannot find include file '" + r.requested + "' (searched: " + searched + ")");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw HostError("cannot open '" + path.string() + "': " + std::strerror(errno));
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

ExecResult run_exec(const std::string& command, const std::string& shell) {
    int fds[2];
    if (::pipe(fds) != 0)
        throw HostError(std::string("exec: cannot create pipe: ") + std::strerror(errno));

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addclose(&actions, fds[0]);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, fds[1]);

    std::string arg0 = "sh", flag = "-c", cmd = command;
    char* argv[] = {arg0.data(), flag.data(), cmd.data(), nullptr};
    pid_t pid = 0;
    int rc = posix_spawn(&pid, shell.c_str(), &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(fds[1]);
    if (rc != 0) {
        ::close(fds[0]);
        throw HostError("exec: cannot run '" + shell + "': " + std::strerror(rc));
    }

    ExecResult result;
    char buf[4096];
    for (;;) {
        ssize_t n = ::read(fds[0], buf, sizeof buf);
        if (n > 0) {
            result.output.append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
            break;
        }
    }
    ::close(fds[0]);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status))
        result.exit_status = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_status = 128 + WTERMSIG(status);
    return result;
}

} // namespace flexpp
