#include "faultline/support/proc.hpp"

#include "faultline/support/fs.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>
#include <thread>

extern char** environ;

namespace faultline::support {

ChildProcess::ChildProcess(ChildProcess&& other) noexcept
    : pid_(other.pid_), reaped_(other.reaped_), exit_code_(other.exit_code_) {
    other.pid_ = -1;
    other.reaped_ = true;
}

ChildProcess& ChildProcess::operator=(ChildProcess&& other) noexcept {
    if (this != &other) {
        stop();
        pid_ = other.pid_;
        reaped_ = other.reaped_;
        exit_code_ = other.exit_code_;
        other.pid_ = -1;
        other.reaped_ = true;
    }
    return *this;
}

ChildProcess::~ChildProcess() {
    stop();
}

ChildProcess ChildProcess::spawn(const std::vector<std::string>& argv,
                                 const std::vector<std::pair<std::string, std::string>>& extra_env,
                                 const std::filesystem::path& output_file) {
    if (argv.empty()) {
        throw std::invalid_argument("spawn: empty argv");
    }
    if (output_file.has_parent_path()) {
        ensure_dir(output_file.parent_path());
    }

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) {
        cargv.push_back(const_cast<char*>(a.c_str()));
    }
    cargv.push_back(nullptr);

    std::vector<std::string> env_store;
    for (char** e = environ; *e; ++e) {
        env_store.emplace_back(*e);
    }
    for (const auto& [key, value] : extra_env) {
        env_store.push_back(key + "=" + value);
    }
    std::vector<char*> cenv;
    cenv.reserve(env_store.size() + 1);
    for (auto& e : env_store) {
        cenv.push_back(e.data());
    }
    cenv.push_back(nullptr);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, output_file.c_str(),
                                     O_WRONLY | O_CREAT | O_APPEND, 0644);
    posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);

    pid_t pid = -1;
    const int rc = posix_spawn(&pid, argv[0].c_str(), &actions, nullptr,
                               cargv.data(), cenv.data());
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
        throw std::runtime_error("posix_spawn failed for " + argv[0] + ": " + std::strerror(rc));
    }

    ChildProcess child;
    child.pid_ = pid;
    child.reaped_ = false;
    return child;
}

bool ChildProcess::running() {
    if (pid_ <= 0 || reaped_) {
        return false;
    }
    int status = 0;
    const pid_t rc = waitpid(pid_, &status, WNOHANG);
    if (rc == pid_) {
        reaped_ = true;
        exit_code_ = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
        return false;
    }
    return rc == 0;
}

bool ChildProcess::wait_for(double timeout_secs, int* exit_code) {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(timeout_secs);
    while (running()) {
        if (std::chrono::steady_clock::now() >= deadline) {
            return false;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (exit_code) {
        *exit_code = exit_code_;
    }
    return true;
}

void ChildProcess::stop(double grace_secs) {
    if (pid_ <= 0 || reaped_) {
        return;
    }
    ::kill(pid_, SIGTERM);
    if (!wait_for(grace_secs)) {
        ::kill(pid_, SIGKILL);
        wait_for(5.0);
    }
}

}  // namespace faultline::support
