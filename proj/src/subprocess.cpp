#include "rpd/evaluators.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace rpd {

namespace {

using Kind = EvaluatorError::Kind;

void ignore_sigpipe_once() {
    static const bool done = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

std::string describe_status(int status) {
    if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
    if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
    return "stopped";
}

}  // namespace

SubprocessEvaluator::SubprocessEvaluator(SubprocessOptions options, const DesignSpace& space)
    : options_(std::move(options)), space_(space) {
    if (options_.command.empty()) throw EvaluatorError(Kind::Spawn, "exec evaluator needs a command");
    ignore_sigpipe_once();
}

SubprocessEvaluator::~SubprocessEvaluator() { stop(false); }

void SubprocessEvaluator::start() {
    int to_child[2];
    int from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0) {
        throw EvaluatorError(Kind::Spawn, std::string("pipe: ") + std::strerror(errno));
    }
    if (pipe2(from_child, O_CLOEXEC) != 0) {
        int err = errno;
        close(to_child[0]);
        close(to_child[1]);
        throw EvaluatorError(Kind::Spawn, std::string("pipe: ") + std::strerror(err));
    }
    pid_t pid = fork();
    if (pid < 0) {
        int err = errno;
        for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) close(fd);
        throw EvaluatorError(Kind::Spawn, std::string("fork: ") + std::strerror(err));
    }
    if (pid == 0) {
        setpgid(0, 0);
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        execl("/bin/sh", "sh", "-c", options_.command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    setpgid(pid, pid);
    close(to_child[0]);
    close(from_child[1]);
    pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
    buffer_.clear();
}

void SubprocessEvaluator::stop(bool force) {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    buffer_.clear();
    if (pid_ <= 0) return;
    if (!force) {
        // Closing stdin is the shutdown signal; give the child a moment.
        for (int i = 0; i < 200; ++i) {
            int status = 0;
            if (waitpid(pid_, &status, WNOHANG) == pid_) {
                pid_ = -1;
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        }
    }
    // The shell may have forked; take its whole process group down.
    kill(-pid_, SIGKILL);
    kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
}

std::string SubprocessEvaluator::read_line() {
    const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
    while (true) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            stop(true);
            throw EvaluatorError(Kind::Timeout, "child '" + options_.command + "' did not answer within " +
                                                    std::to_string(options_.timeout.count()) + " ms");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        int rc = poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1'000'000)));
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw EvaluatorError(Kind::ChildExit, std::string("poll: ") + std::strerror(errno));
        }
        if (rc == 0) continue;
        char chunk[4096];
        ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw EvaluatorError(Kind::ChildExit, std::string("read: ") + std::strerror(errno));
        }
        if (n == 0) {
            int status = 0;
            std::string how = "closed its output";
            close(to_child_);
            to_child_ = -1;
            for (int i = 0; i < 200 && pid_ > 0; ++i) {
                if (waitpid(pid_, &status, WNOHANG) == pid_) {
                    how = describe_status(status);
                    pid_ = -1;
                    break;
                }
                std::this_thread::sleep_for(std::chrono::milliseconds(5));
            }
            stop(true);
            throw EvaluatorError(Kind::ChildExit, "child '" + options_.command + "' " + how);
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

MetricSet SubprocessEvaluator::evaluate(const DesignPoint& design, double operating_value) {
    if (pid_ <= 0) start();

    const std::uint64_t id = next_id_++;
    nlohmann::ordered_json request;
    request["id"] = id;
    auto& d = request["design"] = nlohmann::ordered_json::object();
    const auto params = space_.parameters();
    if (design.values.size() != params.size()) {
        throw EvaluatorError(Kind::Domain, "design dimension does not match the space");
    }
    for (std::size_t i = 0; i < params.size(); ++i) d[params[i].name()] = design.values[i];
    request["operating"] = nlohmann::ordered_json::object();
    request["operating"][space_.operating().name()] = operating_value;
    const std::string line = request.dump() + "\n";

    std::size_t written = 0;
    while (written < line.size()) {
        ssize_t n = write(to_child_, line.data() + written, line.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            int err = errno;
            stop(true);
            throw EvaluatorError(Kind::ChildExit, "writing request to child failed: " + std::string(std::strerror(err)));
        }
        written += static_cast<std::size_t>(n);
    }

    const std::string reply = read_line();
    nlohmann::json response;
    try {
        response = nlohmann::json::parse(reply);
    } catch (const nlohmann::json::parse_error&) {
        stop(true);
        throw EvaluatorError(Kind::Malformed, "child sent a non-JSON line: " + reply.substr(0, 200));
    }
    if (!response.is_object() || !response.contains("id") || !response["id"].is_number_integer()) {
        stop(true);
        throw EvaluatorError(Kind::Malformed, "response lacks an integer id: " + reply.substr(0, 200));
    }
    if (response["id"].get<long long>() < 0 || response["id"].get<std::uint64_t>() != id) {
        stop(true);
        throw EvaluatorError(Kind::IdMismatch, "response id " + response["id"].dump() + " does not match request id " +
                                                   std::to_string(id));
    }

    MetricSet metrics;
    if (auto err = response.find("error"); err != response.end()) {
        std::string message = err->is_string() ? err->get<std::string>() : err->dump();
        if (options_.fresh_child_per_request) stop(false);
        throw EvaluatorError(Kind::ChildError, "child reported an error for request " + std::to_string(id) + ": " +
                                                   message);
    }
    auto m = response.find("metrics");
    if (m == response.end() || !m->is_object()) {
        stop(true);
        throw EvaluatorError(Kind::Malformed, "response has neither metrics nor error: " + reply.substr(0, 200));
    }
    for (const auto& item : m->items()) {
        if (!item.value().is_number()) {
            stop(true);
            throw EvaluatorError(Kind::Malformed, "metric '" + item.key() + "' is not a number");
        }
        metrics[item.key()] = item.value().get<double>();
    }
    if (options_.fresh_child_per_request) stop(false);
    for (const auto& name : options_.required_metrics) {
        if (!metrics.count(name)) {
            throw EvaluatorError(Kind::MissingMetric, "response to request " + std::to_string(id) +
                                                          " lacks metric '" + name + "'");
        }
    }
    return metrics;
}

}  // namespace rpd
