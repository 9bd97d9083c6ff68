// Copyright 2026 The indset Authors
// SPDX-License-Identifier: Apache-2.0

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "indset/error.hpp"
#include "indset/smt.hpp"

namespace indset {

namespace fs = std::filesystem;

namespace {

// Slack granted to the process beyond the in-script timeout before it is killed.
constexpr std::chrono::milliseconds kKillGrace{2000};

std::atomic<unsigned> g_script_counter{0};

std::vector<std::string> split_command(const std::string& cmd) {
  std::istringstream in(cmd);
  std::vector<std::string> argv;
  for (std::string tok; in >> tok;) argv.push_back(tok);
  return argv;
}

class ScriptFile {
 public:
  ScriptFile(const std::string& text, const std::string& dump_dir, const std::string& tag) {
    unsigned n = g_script_counter++;
    if (!dump_dir.empty()) {
      fs::create_directories(dump_dir);
      path_ = (fs::path(dump_dir) / (tag + "-" + std::to_string(::getpid()) + "-" +
                                     std::to_string(n) + ".smt2"))
                  .string();
      keep_ = true;
    } else {
      path_ = (fs::temp_directory_path() /
               ("indset-" + std::to_string(::getpid()) + "-" + std::to_string(n) + ".smt2"))
                  .string();
    }
    std::ofstream out(path_);
    out << text;
    if (!out) throw Error("cannot write SMT script to " + path_);
  }
  ~ScriptFile() {
    if (!keep_) {
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  ScriptFile(const ScriptFile&) = delete;
  ScriptFile& operator=(const ScriptFile&) = delete;

  const std::string& path() const { return path_; }
  bool kept() const { return keep_; }

 private:
  std::string path_;
  bool keep_ = false;
};

struct ProcessOutput {
  std::string out;
  bool killed = false;
};

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

ProcessOutput run_process(const std::vector<std::string>& argv,
                          std::chrono::milliseconds deadline) {
  int out_pipe[2];
  int err_pipe[2];
  int exec_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0 || ::pipe2(err_pipe, O_CLOEXEC) != 0 ||
      ::pipe2(exec_pipe, O_CLOEXEC) != 0)
    throw Error(std::string("pipe: ") + std::strerror(errno));
  Fd out_r(out_pipe[0]), out_w(out_pipe[1]);
  Fd err_r(err_pipe[0]), err_w(err_pipe[1]);
  Fd exec_r(exec_pipe[0]), exec_w(exec_pipe[1]);

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(out_w.get(), STDOUT_FILENO);
    ::dup2(err_w.get(), STDERR_FILENO);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execvp(cargv[0], cargv.data());
    int e = errno;
    [[maybe_unused]] auto n = ::write(exec_w.get(), &e, sizeof e);
    ::_exit(127);
  }
  out_w.reset();
  err_w.reset();
  exec_w.reset();

  int exec_errno = 0;
  if (::read(exec_r.get(), &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    ::waitpid(pid, nullptr, 0);
    throw SolverNotFound("cannot execute solver '" + argv[0] + "': " + std::strerror(exec_errno));
  }

  ProcessOutput result;
  std::string err_text;
  auto start = std::chrono::steady_clock::now();
  bool out_open = true, err_open = true;
  char buf[8192];
  while (out_open || err_open) {
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    if (elapsed >= deadline) {
      ::kill(pid, SIGKILL);
      result.killed = true;
      break;
    }
    pollfd fds[2] = {{out_r.get(), POLLIN, 0}, {err_r.get(), POLLIN, 0}};
    int wait_ms = static_cast<int>((deadline - elapsed).count());
    int rc = ::poll(fds, 2, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
      throw Error(std::string("poll: ") + std::strerror(errno));
    }
    for (int i = 0; i < 2; ++i) {
      bool& open = i == 0 ? out_open : err_open;
      if (!open || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      ssize_t n = ::read(fds[i].fd, buf, sizeof buf);
      if (n <= 0) {
        open = false;
        // poll keeps reporting a closed fd; park it
        if (i == 0) out_r.reset(); else err_r.reset();
      } else {
        (i == 0 ? result.out : err_text).append(buf, static_cast<std::size_t>(n));
      }
    }
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  if (!result.killed && result.out.empty() && !err_text.empty())
    throw ProtocolError("solver wrote only to stderr", err_text);
  return result;
}

}  // namespace

std::string resolve_solver_command(const std::string& configured) {
  if (!configured.empty()) return configured;
  if (const char* env = std::getenv("INDSET_SOLVER"); env && *env) return env;
  return "z3";
}

Solver::Solver(SolverOptions opts) : opts_(std::move(opts)) {
  opts_.command = resolve_solver_command(opts_.command);
}

SolverResult Solver::run(const SmtScript& script, const std::string& tag) const {
  SmtScript s = script;
  if (!s.timeout()) s.set_timeout(opts_.timeout);
  ScriptFile file(s.render(), opts_.dump_dir, tag);

  auto argv = split_command(opts_.command);
  if (argv.empty()) throw SolverNotFound("empty solver command");
  argv.push_back(file.path());

  auto start = std::chrono::steady_clock::now();
  ProcessOutput po = run_process(argv, *s.timeout() + kKillGrace);
  auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  SolverResult r;
  try {
    r = parse_solver_output(po.out, po.killed);
  } catch (const ProtocolError&) {
    if (!po.killed) throw;
    // a kill can truncate output mid-expression
    r.status = SolverStatus::Timeout;
    r.raw_output = po.out;
  }
  r.wall_time = wall;
  if (file.kept()) r.script_path = file.path();
  return r;
}

Validity Solver::check_validity(const SmtTerm& assertion, const SecretSchema& schema,
                                const std::vector<std::string>& vars) const {
  SmtScript s;
  for (const auto& v : vars) s.declare_int(v);
  s.add_assertion(smt::bounds(schema, vars));
  s.add_assertion(smt::not_(assertion));
  SolverResult r = run(s, "validity");

  Validity v;
  switch (r.status) {
    case SolverStatus::Unsat:
      v.kind = Validity::Kind::Valid;
      break;
    case SolverStatus::Sat: {
      v.kind = Validity::Kind::CounterExample;
      SecretValue cex;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        auto it = r.model.find(vars[i]);
        // an unconstrained variable may be omitted; any in-bounds value works
        cex.values.push_back(it != r.model.end() ? it->second : schema.field(i).lower);
      }
      v.counterexample = std::move(cex);
      break;
    }
    default:
      v.kind = Validity::Kind::Unknown;
  }
  return v;
}

SolverResult run(const SmtScript& script, const std::string& solver_cmd,
                 std::chrono::milliseconds timeout) {
  return Solver({solver_cmd, timeout, {}}).run(script);
}

}  // namespace indset
