// Copyright (c) trapgen contributors.
// SPDX-License-Identifier: Apache-2.0
#include "trapgen/fuzz.hpp"

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>
#include <wordexp.h>

namespace trapgen {

std::vector<std::string> split_command(const std::string& cmd) {
    wordexp_t we;
    int rc = wordexp(cmd.c_str(), &we, WRDE_NOCMD | WRDE_UNDEF);
    if (rc != 0) {
        if (rc == WRDE_NOSPACE) {
            wordfree(&we);
        }
        throw SpawnError("cannot split target command: " + cmd);
    }
    std::vector<std::string> words(we.we_wordv, we.we_wordv + we.we_wordc);
    wordfree(&we);
    if (words.empty()) {
        throw SpawnError("empty target command");
    }
    return words;
}

namespace {

using Clock = std::chrono::steady_clock;

class LineQueue {
public:
    explicit LineQueue(std::size_t capacity) : capacity_(std::max<std::size_t>(1, capacity)) {}

    // False once the queue is closed.
    bool push(std::string line) {
        std::unique_lock lock(mu_);
        not_full_.wait(lock, [&] { return closed_ || lines_.size() < capacity_; });
        if (closed_) {
            return false;
        }
        lines_.push_back(std::move(line));
        not_empty_.notify_one();
        return true;
    }

    // Blocks until a line is available; empty result means closed and drained.
    std::vector<std::string> pop_batch(std::size_t max) {
        std::unique_lock lock(mu_);
        not_empty_.wait(lock, [&] { return closed_ || !lines_.empty(); });
        std::vector<std::string> out;
        while (!lines_.empty() && out.size() < max) {
            out.push_back(std::move(lines_.front()));
            lines_.pop_front();
        }
        not_full_.notify_all();
        return out;
    }

    void close() {
        std::lock_guard lock(mu_);
        closed_ = true;
        not_full_.notify_all();
        not_empty_.notify_all();
    }

private:
    std::size_t capacity_;
    std::deque<std::string> lines_;
    bool closed_ = false;
    std::mutex mu_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
};

class Target {
public:
    explicit Target(const std::vector<std::string>& argv) {
        std::vector<char*> args;
        for (const auto& a : argv) {
            args.push_back(const_cast<char*>(a.c_str()));
        }
        args.push_back(nullptr);

        int in[2], err[2];
        if (pipe2(in, O_CLOEXEC) != 0) {
            throw SpawnError(std::string("pipe: ") + std::strerror(errno));
        }
        if (pipe2(err, O_CLOEXEC) != 0) {
            int e = errno;
            ::close(in[0]);
            ::close(in[1]);
            throw SpawnError(std::string("pipe: ") + std::strerror(e));
        }
        pid_ = fork();
        if (pid_ < 0) {
            int e = errno;
            for (int fd : {in[0], in[1], err[0], err[1]}) {
                ::close(fd);
            }
            throw SpawnError(std::string("fork: ") + std::strerror(e));
        }
        if (pid_ == 0) {
            // Child: only async-signal-safe calls until exec.
            signal(SIGPIPE, SIG_DFL);
            dup2(in[0], STDIN_FILENO);
            int devnull = open("/dev/null", O_WRONLY);
            if (devnull >= 0) {
                dup2(devnull, STDOUT_FILENO);
            }
            execvp(args[0], args.data());
            int e = errno;
            ssize_t ignored = ::write(err[1], &e, sizeof e);
            (void)ignored;
            _exit(127);
        }
        ::close(in[0]);
        ::close(err[1]);
        fd_ = in[1];

        int e = 0;
        ssize_t n;
        do {
            n = ::read(err[0], &e, sizeof e);
        } while (n < 0 && errno == EINTR);
        ::close(err[0]);
        if (n > 0) {
            ::close(fd_);
            fd_ = -1;
            waitpid(pid_, nullptr, 0);
            pid_ = -1;
            throw SpawnError("cannot run " + argv.front() + ": " + std::strerror(e));
        }
    }

    Target(const Target&) = delete;
    Target& operator=(const Target&) = delete;

    ~Target() {
        if (pid_ > 0) {
            wait();
        }
    }

    // Bytes accepted before the pipe broke; `broken` tells whether it did.
    std::size_t write(const char* p, std::size_t n, bool& broken) {
        std::size_t done = 0;
        broken = false;
        while (done < n) {
            ssize_t w = ::write(fd_, p + done, n - done);
            if (w < 0) {
                if (errno == EINTR) {
                    continue;
                }
                broken = true;
                break;
            }
            done += static_cast<std::size_t>(w);
        }
        return done;
    }

    // Closes the target's input and reaps it. True when it crashed.
    bool wait() {
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
        int status = 0;
        while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
        }
        pid_ = -1;
        return WIFSIGNALED(status) || (WIFEXITED(status) && WEXITSTATUS(status) != 0);
    }

private:
    pid_t pid_ = -1;
    int fd_ = -1;
};

class SigpipeIgnored {
public:
    SigpipeIgnored() {
        struct sigaction ign {};
        ign.sa_handler = SIG_IGN;
        sigemptyset(&ign.sa_mask);
        sigaction(SIGPIPE, &ign, &saved_);
    }
    ~SigpipeIgnored() { sigaction(SIGPIPE, &saved_, nullptr); }

private:
    struct sigaction saved_ {};
};

class Supervisor {
public:
    Supervisor(const FuzzOptions& opts, FuzzReport& rep) : opts_(opts), rep_(rep) {}

    void record_exit(bool crashed, const std::string& last_line, bool accepted_input) {
        if (crashed) {
            ++rep_.crashes;
            if (!rep_.first_crash && !last_line.empty()) {
                rep_.first_crash = last_line;
            }
        }
        idle_ = accepted_input ? 0 : idle_ + 1;
        if (idle_ > opts_.max_idle_respawns) {
            throw SpawnError("target keeps exiting without accepting input");
        }
    }

    std::unique_ptr<Target> spawn() {
        ++rep_.spawns;
        return std::make_unique<Target>(opts_.argv);
    }

private:
    const FuzzOptions& opts_;
    FuzzReport& rep_;
    unsigned idle_ = 0;
};

bool past(const std::optional<Clock::time_point>& deadline) {
    return deadline && Clock::now() >= *deadline;
}

// One long-lived target; lines are written in batches and a line cut off by
// a dying target is sent again to its successor.
void stream(LineQueue& q, Supervisor& sup, FuzzReport& rep, const std::optional<Clock::time_point>& deadline) {
    auto target = sup.spawn();
    std::deque<std::string> pending;
    std::string last_line;
    bool accepted = false;
    std::string buf;
    for (;;) {
        if (past(deadline)) {
            break;
        }
        if (pending.empty()) {
            for (auto& line : q.pop_batch(1024)) {
                pending.push_back(std::move(line));
            }
            if (pending.empty()) {
                break;
            }
        }
        buf.clear();
        std::size_t lines = 0;
        while (lines < pending.size() && buf.size() < (1u << 16)) {
            buf += pending[lines++];
        }
        bool broken = false;
        std::size_t written = target->write(buf.data(), buf.size(), broken);
        for (std::size_t used = 0; !pending.empty() && used + pending.front().size() <= written;) {
            used += pending.front().size();
            last_line = std::move(pending.front());
            last_line.pop_back();
            pending.pop_front();
            ++rep.delivered;
            accepted = true;
        }
        if (broken) {
            sup.record_exit(target->wait(), last_line, accepted);
            target = sup.spawn();
            accepted = false;
            last_line.clear();
        }
    }
    sup.record_exit(target->wait(), last_line, true);
}

// A fresh target per line.
void per_vector(LineQueue& q, Supervisor& sup, FuzzReport& rep, const std::optional<Clock::time_point>& deadline) {
    for (;;) {
        auto batch = q.pop_batch(1);
        if (batch.empty() || past(deadline)) {
            return;
        }
        const std::string& line = batch.front();
        for (;;) {
            auto target = sup.spawn();
            bool broken = false;
            target->write(line.data(), line.size(), broken);
            std::string shown = line.substr(0, line.size() - 1);
            if (!broken) {
                ++rep.delivered;
            }
            sup.record_exit(target->wait(), shown, !broken);
            if (!broken) {
                break;
            }
        }
    }
}

} // namespace

FuzzReport run_fuzz(const std::function<std::string()>& next, const FuzzOptions& opts) {
    if (opts.count.has_value() == opts.duration.has_value()) {
        throw MalformedInput("exactly one of count and duration is required");
    }
    if (opts.argv.empty()) {
        throw SpawnError("empty target command");
    }
    SigpipeIgnored sigpipe;
    FuzzReport rep;
    const auto start = Clock::now();
    std::optional<Clock::time_point> deadline;
    if (opts.duration) {
        deadline = start + std::chrono::duration_cast<Clock::duration>(*opts.duration);
    }

    LineQueue q(opts.queue_capacity);
    std::exception_ptr gen_error;
    std::thread producer([&] {
        try {
            for (std::uint64_t i = 0; !opts.count || i < *opts.count; ++i) {
                if (past(deadline) || !q.push(next() + '\n')) {
                    break;
                }
            }
        } catch (...) {
            gen_error = std::current_exception();
        }
        q.close();
    });

    std::exception_ptr run_error;
    try {
        Supervisor sup(opts, rep);
        if (opts.per_vector) {
            per_vector(q, sup, rep, deadline);
        } else {
            stream(q, sup, rep, deadline);
        }
    } catch (...) {
        run_error = std::current_exception();
    }
    q.close();
    producer.join();
    rep.seconds = std::chrono::duration<double>(Clock::now() - start).count();

    if (run_error) {
        std::rethrow_exception(run_error);
    }
    if (gen_error) {
        std::rethrow_exception(gen_error);
    }
    return rep;
}

} // namespace trapgen
