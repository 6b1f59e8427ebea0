#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace faultline::support {

// Thin POSIX child-process handle. Used by the orchestrator to run the
// testbed services; stdout/stderr go to files inside the sandbox.
class ChildProcess {
public:
    ChildProcess() = default;
    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;
    ChildProcess(ChildProcess&& other) noexcept;
    ChildProcess& operator=(ChildProcess&& other) noexcept;
    ~ChildProcess();

    static ChildProcess spawn(const std::vector<std::string>& argv,
                              const std::vector<std::pair<std::string, std::string>>& extra_env,
                              const std::filesystem::path& output_file);

    bool valid() const { return pid_ > 0; }
    int pid() const { return pid_; }
    bool running();

    // True if the process exited within the timeout; exit code via out param.
    bool wait_for(double timeout_secs, int* exit_code = nullptr);

    // SIGTERM, grace period, then SIGKILL. Safe to call repeatedly.
    void stop(double grace_secs = 2.0);

private:
    int pid_ = -1;
    bool reaped_ = false;
    int exit_code_ = -1;
};

}  // namespace faultline::support
