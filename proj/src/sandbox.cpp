#include "gedprog/sandbox.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>
#ifdef __linux__
#include <sys/prctl.h>
#endif

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "gedprog/error.hpp"

extern char** environ;

namespace gedprog {
namespace {

void process_wide_setup() {
  static std::once_flag once;
  std::call_once(once, [] {
    // Writes to a child that already exited must surface as EPIPE.
    ::signal(SIGPIPE, SIG_IGN);
#ifdef __linux__
    // Orphaned grandchildren get reparented here so they can be reaped.
    ::prctl(PR_SET_CHILD_SUBREAPER, 1, 0, 0, 0);
#endif
  });
}

std::string resolve_executable(const std::string& name) {
  if (name.find('/') != std::string::npos) return name;
  const char* path = std::getenv("PATH");
  std::string_view rest = path ? path : "/usr/local/bin:/usr/bin:/bin";
  while (!rest.empty()) {
    const auto colon = rest.find(':');
    std::string dir(rest.substr(0, colon));
    rest = colon == std::string_view::npos ? std::string_view{}
                                           : rest.substr(colon + 1);
    if (dir.empty()) dir = ".";
    std::string candidate = dir + "/" + name;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
  }
  throw RunnerError("sandbox: executable not found on PATH: " + name);
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  bool open() const { return fd_ >= 0; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

std::pair<Fd, Fd> make_pipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0)
    throw RunnerError(std::string("sandbox: pipe failed: ") +
                      std::strerror(errno));
  return {Fd(fds[0]), Fd(fds[1])};
}

void set_nonblocking(const Fd& fd) {
  const int flags = ::fcntl(fd.get(), F_GETFL);
  ::fcntl(fd.get(), F_SETFL, flags | O_NONBLOCK);
}

// Kills the group and reaps the direct child plus any group members that
// were reparented to us.
void kill_and_reap(pid_t pid, bool child_reaped, int* wait_status) {
  ::kill(-pid, SIGKILL);
  if (!child_reaped) {
    while (::waitpid(pid, wait_status, 0) < 0 && errno == EINTR) {
    }
  }
  int st;
  while (true) {
    const pid_t r = ::waitpid(-pid, &st, 0);
    if (r > 0) continue;
    if (r < 0 && errno == EINTR) continue;
    break;
  }
}

}  // namespace

ProcessResult run_sandboxed(const std::vector<std::string>& argv,
                            std::string_view input,
                            const SandboxLimits& limits) {
  if (argv.empty()) throw RunnerError("sandbox: empty command");
  process_wide_setup();

  const std::string exe = resolve_executable(argv.front());
  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  auto [in_r, in_w] = make_pipe();
  auto [out_r, out_w] = make_pipe();
  auto [err_r, err_w] = make_pipe();
  auto [exec_r, exec_w] = make_pipe();

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0)
    throw RunnerError(std::string("sandbox: fork failed: ") +
                      std::strerror(errno));

  if (pid == 0) {
    // Child: async-signal-safe calls only.
    ::setpgid(0, 0);
    ::dup2(in_r.get(), STDIN_FILENO);
    ::dup2(out_w.get(), STDOUT_FILENO);
    ::dup2(err_w.get(), STDERR_FILENO);
    struct rlimit no_core{0, 0};
    ::setrlimit(RLIMIT_CORE, &no_core);
    if (limits.memory_limit_bytes > 0) {
      struct rlimit mem{limits.memory_limit_bytes, limits.memory_limit_bytes};
      ::setrlimit(RLIMIT_AS, &mem);
    }
    ::execve(exe.c_str(), cargv.data(), environ);
    const int err = errno;
    [[maybe_unused]] auto w = ::write(exec_w.get(), &err, sizeof err);
    ::_exit(127);
  }

  ::setpgid(pid, pid);
  in_r.reset();
  out_w.reset();
  err_w.reset();
  exec_w.reset();

  int exec_errno = 0;
  ssize_t got;
  do {
    got = ::read(exec_r.get(), &exec_errno, sizeof exec_errno);
  } while (got < 0 && errno == EINTR);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    int st;
    kill_and_reap(pid, false, &st);
    throw RunnerError("sandbox: cannot execute " + exe + ": " +
                      std::strerror(exec_errno));
  }

  set_nonblocking(in_w);
  set_nonblocking(out_r);
  set_nonblocking(err_r);

  ProcessResult result;
  const auto deadline = start + limits.time_limit;
  std::size_t written = 0;
  if (input.empty()) in_w.reset();
  bool child_reaped = false;
  int wait_status = 0;
  bool overflow = false;
  bool timed_out = false;
  std::array<char, 65536> buf;

  auto drain = [&](Fd& fd, bool keep) {
    while (fd.open()) {
      const ssize_t r = ::read(fd.get(), buf.data(), buf.size());
      if (r > 0) {
        if (!keep) continue;
        result.stdout_data.append(buf.data(), static_cast<std::size_t>(r));
        if (result.stdout_data.size() > limits.max_output_bytes) {
          overflow = true;
          return;
        }
      } else if (r == 0) {
        fd.reset();
      } else if (errno == EINTR) {
        continue;
      } else {
        return;  // EAGAIN
      }
    }
  };

  while (true) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    std::array<pollfd, 3> pfds{};
    nfds_t count = 0;
    if (in_w.open()) pfds[count++] = {in_w.get(), POLLOUT, 0};
    if (out_r.open()) pfds[count++] = {out_r.get(), POLLIN, 0};
    if (err_r.open()) pfds[count++] = {err_r.get(), POLLIN, 0};

    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    const int tick = static_cast<int>(
        std::clamp<std::int64_t>(remaining.count() + 1, 1, 5));
    if (count > 0) {
      ::poll(pfds.data(), count, tick);
    } else {
      ::usleep(static_cast<useconds_t>(tick) * 1000);
    }

    if (in_w.open()) {
      const ssize_t w = ::write(in_w.get(), input.data() + written,
                                input.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if ((w < 0 && errno != EAGAIN && errno != EINTR) ||
          written == input.size())
        in_w.reset();
    }
    drain(out_r, true);
    if (overflow) break;
    drain(err_r, false);

    const pid_t r = ::waitpid(pid, &wait_status, WNOHANG);
    if (r == pid) {
      child_reaped = true;
      drain(out_r, true);
      break;
    }
  }

  kill_and_reap(pid, child_reaped, &wait_status);
  result.elapsed = std::chrono::steady_clock::now() - start;

  if (overflow) {
    result.status = ProcessResult::Status::output_overflow;
  } else if (timed_out) {
    result.status = ProcessResult::Status::timed_out;
  } else if (WIFSIGNALED(wait_status)) {
    result.status = ProcessResult::Status::signaled;
    result.signal = WTERMSIG(wait_status);
  } else {
    result.status = ProcessResult::Status::exited;
    result.exit_code = WEXITSTATUS(wait_status);
  }
  return result;
}

}  // namespace gedprog
