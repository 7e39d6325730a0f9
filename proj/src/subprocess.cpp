// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#include "szz/subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <map>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "szz/errors.hpp"

extern char** environ;

namespace szz {
namespace {

struct Pipe {
    int fds[2] = {-1, -1};

    Pipe() {
        if (::pipe(fds) != 0) throw IoFailure("pipe() failed: " + std::string(std::strerror(errno)));
    }
    ~Pipe() {
        close_read();
        close_write();
    }
    int read_end() const { return fds[0]; }
    int write_end() const { return fds[1]; }
    void close_read() {
        if (fds[0] >= 0) ::close(fds[0]);
        fds[0] = -1;
    }
    void close_write() {
        if (fds[1] >= 0) ::close(fds[1]);
        fds[1] = -1;
    }
};

void set_nonblocking(int fd) {
    const int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

std::vector<std::string> merged_environment(
    const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::map<std::string, std::string> env;
    for (char** e = environ; *e != nullptr; ++e) {
        const std::string entry(*e);
        const auto eq = entry.find('=');
        if (eq != std::string::npos) env[entry.substr(0, eq)] = entry.substr(eq + 1);
    }
    for (const auto& [k, v] : overrides) env[k] = v;
    std::vector<std::string> flat;
    flat.reserve(env.size());
    for (const auto& [k, v] : env) flat.push_back(k + "=" + v);
    return flat;
}

}  // namespace

CommandResult run_command(const CommandSpec& spec) {
    if (spec.argv.empty()) throw IoFailure("run_command: empty argv");

    // A child that exits before consuming its stdin must not kill us.
    static const bool sigpipe_ignored = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipe_ignored;

    Pipe in, out, err;

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.read_end(), STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out.write_end(), STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err.write_end(), STDERR_FILENO);
    posix_spawn_file_actions_addclose(&actions, in.write_end());
    posix_spawn_file_actions_addclose(&actions, out.read_end());
    posix_spawn_file_actions_addclose(&actions, err.read_end());

    std::vector<char*> argv;
    argv.reserve(spec.argv.size() + 1);
    for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);

    const std::vector<std::string> env = merged_environment(spec.env);
    std::vector<char*> envp;
    envp.reserve(env.size() + 1);
    for (const auto& e : env) envp.push_back(const_cast<char*>(e.c_str()));
    envp.push_back(nullptr);

    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), envp.data());
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) throw IoFailure("failed to spawn '" + spec.argv[0] + "': " + std::strerror(rc));

    in.close_read();
    out.close_write();
    err.close_write();
    set_nonblocking(in.write_end());
    set_nonblocking(out.read_end());
    set_nonblocking(err.read_end());

    CommandResult result;
    std::size_t written = 0;
    if (spec.stdin_data.empty()) in.close_write();

    char buf[65536];
    while (out.read_end() >= 0 || err.read_end() >= 0 || in.write_end() >= 0) {
        struct pollfd pfds[3];
        int n = 0;
        int out_idx = -1, err_idx = -1, in_idx = -1;
        if (out.read_end() >= 0) {
            out_idx = n;
            pfds[n++] = {out.read_end(), POLLIN, 0};
        }
        if (err.read_end() >= 0) {
            err_idx = n;
            pfds[n++] = {err.read_end(), POLLIN, 0};
        }
        if (in.write_end() >= 0) {
            in_idx = n;
            pfds[n++] = {in.write_end(), POLLOUT, 0};
        }
        if (::poll(pfds, static_cast<nfds_t>(n), -1) < 0) {
            if (errno == EINTR) continue;
            throw IoFailure("poll() failed: " + std::string(std::strerror(errno)));
        }
        if (out_idx >= 0 && (pfds[out_idx].revents & (POLLIN | POLLHUP))) {
            const ssize_t got = ::read(out.read_end(), buf, sizeof(buf));
            if (got > 0)
                result.out.append(buf, static_cast<std::size_t>(got));
            else if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR))
                out.close_read();
        }
        if (err_idx >= 0 && (pfds[err_idx].revents & (POLLIN | POLLHUP))) {
            const ssize_t got = ::read(err.read_end(), buf, sizeof(buf));
            if (got > 0)
                result.err.append(buf, static_cast<std::size_t>(got));
            else if (got == 0 || (got < 0 && errno != EAGAIN && errno != EINTR))
                err.close_read();
        }
        if (in_idx >= 0 && (pfds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
            if (pfds[in_idx].revents & (POLLERR | POLLHUP)) {
                in.close_write();  // child stopped reading
            } else {
                const ssize_t put = ::write(in.write_end(), spec.stdin_data.data() + written,
                                            spec.stdin_data.size() - written);
                if (put > 0) written += static_cast<std::size_t>(put);
                if (put < 0 && errno != EAGAIN && errno != EINTR) in.close_write();
                if (written == spec.stdin_data.size()) in.close_write();
            }
        }
    }

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) throw IoFailure("waitpid() failed");
    }
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    return result;
}

}  // namespace szz
