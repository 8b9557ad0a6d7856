#pragma once

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "smtmc/error.hpp"

namespace smtmc {

// One child solver speaking SMT-LIB2 text over stdin/stdout, with a single
// wall-clock deadline covering the whole conversation. The environment is
// passed through unchanged.
class SolverProcess {
public:
    SolverProcess(const std::string& command, double budget_seconds)
        : deadline_(std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(budget_seconds))) {
        std::signal(SIGPIPE, SIG_IGN);

        std::vector<std::string> args;
        std::istringstream split(command);
        for (std::string word; split >> word;) args.push_back(word);
        if (args.empty()) throw OracleFailure("empty solver command");

        int to_child[2], from_child[2];
        if (pipe(to_child) != 0) throw OracleFailure("failed to create solver pipes");
        if (pipe(from_child) != 0) {
            close(to_child[0]);
            close(to_child[1]);
            throw OracleFailure("failed to create solver pipes");
        }

        pid_ = fork();
        if (pid_ < 0) {
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            throw OracleFailure("failed to fork solver process");
        }
        if (pid_ == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            std::vector<char*> argv;
            for (std::string& a : args) argv.push_back(a.data());
            argv.push_back(nullptr);
            execvp(argv[0], argv.data());
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
    }

    SolverProcess(const SolverProcess&) = delete;
    SolverProcess& operator=(const SolverProcess&) = delete;

    ~SolverProcess() { shutdown(true); }

    void send(const std::string& text) {
        size_t off = 0;
        while (off < text.size()) {
            ssize_t n = write(in_fd_, text.data() + off, text.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw OracleFailure("solver process is not reading (" +
                                    std::string(std::strerror(errno)) + ")");
            }
            off += (size_t)n;
        }
    }

    // Next nonempty line; the sat/unsat/unknown answers come this way.
    std::string recv_verdict() {
        for (;;) {
            size_t nl = buffer_.find('\n');
            while (nl == std::string::npos) {
                fill();
                nl = buffer_.find('\n');
            }
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            size_t start = line.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            line.erase(0, start);
            if (line.rfind("(error", 0) == 0) throw OracleFailure("solver error: " + line);
            return line;
        }
    }

    // One balanced s-expression, possibly spanning lines.
    std::string recv_sexpr() {
        size_t scanned = 0;
        int depth = 0;
        bool started = false;
        for (;;) {
            while (scanned < buffer_.size()) {
                char c = buffer_[scanned++];
                if (c == '(') {
                    ++depth;
                    started = true;
                } else if (c == ')') {
                    --depth;
                    if (started && depth == 0) {
                        std::string expr = buffer_.substr(0, scanned);
                        buffer_.erase(0, scanned);
                        size_t open = expr.find('(');
                        if (expr.compare(open, 6, "(error") == 0)
                            throw OracleFailure("solver error: " + expr);
                        return expr;
                    }
                }
            }
            fill();
        }
    }

    void finish() {
        if (in_fd_ >= 0) {
            try {
                send("(exit)\n");
            } catch (const OracleFailure&) {
            }
        }
        shutdown(false);
    }

private:
    void fill() {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline_ - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            shutdown(true);
            throw OracleTimeout("solver call exceeded its wall-clock budget");
        }
        struct pollfd pfd{out_fd_, POLLIN, 0};
        int rc = poll(&pfd, 1, (int)std::min<long long>(remaining.count(), 1000));
        if (rc < 0 && errno != EINTR) throw OracleFailure("poll on solver output failed");
        if (rc <= 0) return;  // re-check the deadline
        char chunk[4096];
        ssize_t n = read(out_fd_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) return;
            throw OracleFailure("read from solver failed");
        }
        if (n == 0) {
            shutdown(false);
            throw OracleFailure("solver closed its output unexpectedly");
        }
        buffer_.append(chunk, (size_t)n);
    }

    void shutdown(bool force) {
        if (in_fd_ >= 0) {
            close(in_fd_);
            in_fd_ = -1;
        }
        if (out_fd_ >= 0) {
            close(out_fd_);
            out_fd_ = -1;
        }
        if (pid_ > 0) {
            if (force) kill(pid_, SIGKILL);
            int status = 0;
            for (int tries = 0; tries < 50; ++tries) {
                pid_t r = waitpid(pid_, &status, WNOHANG);
                if (r != 0) {
                    pid_ = -1;
                    return;
                }
                usleep(20000);
            }
            kill(pid_, SIGKILL);
            waitpid(pid_, &status, 0);
            pid_ = -1;
        }
    }

    std::chrono::steady_clock::time_point deadline_;
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

}  // namespace smtmc
