#include "perturbkit/verify/process.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <thread>

#include "perturbkit/core/error.h"

namespace pk {
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kCaptureLimit = 16u << 20;

class Limiter {
 public:
  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return running_ < limit_; });
    ++running_;
  }
  void release() {
    {
      std::lock_guard lock(mu_);
      --running_;
    }
    cv_.notify_one();
  }
  void set(int limit) {
    {
      std::lock_guard lock(mu_);
      limit_ = std::max(1, limit);
    }
    cv_.notify_all();
  }
  int get() {
    std::lock_guard lock(mu_);
    return limit_;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int running_ = 0;
  int limit_ = std::max(1u, std::thread::hardware_concurrency());
};

Limiter& limiter() {
  static Limiter l;
  return l;
}

struct Slot {
  Slot() { limiter().acquire(); }
  ~Slot() { limiter().release(); }
};

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
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

std::pair<Fd, Fd> make_pipe() {
  int p[2];
  if (::pipe2(p, O_CLOEXEC) != 0) {
    throw Error(ErrorCode::kRunnerFailure,
                std::string("pipe: ") + std::strerror(errno));
  }
  return {Fd(p[0]), Fd(p[1])};
}

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

void set_process_limit(int limit) { limiter().set(limit); }
int process_limit() { return limiter().get(); }

ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view stdin_data, double timeout_s,
                          const fs::path& cwd) {
  if (argv.empty()) {
    throw Error(ErrorCode::kToolchainUnavailable, "empty command");
  }
  ignore_sigpipe();
  Slot slot;

  auto [in_r, in_w] = make_pipe();
  auto [out_r, out_w] = make_pipe();
  auto [err_r, err_w] = make_pipe();
  auto [exec_r, exec_w] = make_pipe();

  std::vector<char*> cargv;
  for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string dir = cwd.string();

  const pid_t pid = ::fork();
  if (pid < 0) {
    throw Error(ErrorCode::kRunnerFailure,
                std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_r.get(), 0);
    ::dup2(out_w.get(), 1);
    ::dup2(err_w.get(), 2);
    int code = 0;
    if (!dir.empty() && ::chdir(dir.c_str()) != 0) {
      code = errno;
    } else {
      ::execvp(cargv[0], cargv.data());
      code = errno;
    }
    [[maybe_unused]] auto n = ::write(exec_w.get(), &code, sizeof code);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in_r.reset();
  out_w.reset();
  err_w.reset();
  exec_w.reset();

  int exec_errno = 0;
  if (::read(exec_r.get(), &exec_errno, sizeof exec_errno) ==
      static_cast<ssize_t>(sizeof exec_errno)) {
    ::waitpid(pid, nullptr, 0);
    throw Error(ErrorCode::kToolchainUnavailable,
                "cannot run '" + argv[0] + "': " + std::strerror(exec_errno));
  }

  ProcessResult result;
  const auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(timeout_s));
  std::size_t written = 0;
  if (stdin_data.empty()) {
    in_w.reset();
  } else {
    ::fcntl(in_w.get(), F_SETFL, O_NONBLOCK);
  }
  char buf[65536];
  while (out_r.get() >= 0 || err_r.get() >= 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      result.timed_out = true;
      break;
    }
    pollfd fds[3];
    int n = 0;
    auto add = [&](const Fd& fd, short events) {
      if (fd.get() >= 0) fds[n++] = {fd.get(), events, 0};
    };
    add(out_r, POLLIN);
    add(err_r, POLLIN);
    add(in_w, POLLOUT);
    const int rc = ::poll(fds, n, static_cast<int>(left.count()) + 1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < n; ++i) {
      if (fds[i].revents == 0) continue;
      if (fds[i].fd == in_w.get()) {
        const ssize_t w = ::write(in_w.get(), stdin_data.data() + written,
                                  stdin_data.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        if (w < 0 && errno != EAGAIN) in_w.reset();
        if (written == stdin_data.size()) in_w.reset();
        continue;
      }
      Fd& src = fds[i].fd == out_r.get() ? out_r : err_r;
      std::string& dst = &src == &out_r ? result.out : result.err;
      const ssize_t r = ::read(src.get(), buf, sizeof buf);
      if (r <= 0) {
        if (r < 0 && errno == EINTR) continue;
        src.reset();
        continue;
      }
      const std::size_t room = kCaptureLimit - std::min(kCaptureLimit, dst.size());
      dst.append(buf, std::min(room, static_cast<std::size_t>(r)));
    }
  }
  if (result.timed_out) ::kill(-pid, SIGKILL);
  int status = 0;
  for (;;) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid || (w < 0 && errno != EINTR)) break;
    if (w == 0 && !result.timed_out &&
        std::chrono::steady_clock::now() >= deadline) {
      result.timed_out = true;
      ::kill(-pid, SIGKILL);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  // Descendants that outlived the leader.
  ::kill(-pid, SIGKILL);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signal = WTERMSIG(status);
  }
  return result;
}

std::vector<std::string> expand_template(const std::vector<std::string>& args,
                                         const fs::path& file,
                                         const fs::path& dir) {
  auto replace_all = [](std::string s, std::string_view key,
                        const std::string& value) {
    for (std::size_t at = s.find(key); at != std::string::npos;
         at = s.find(key, at + value.size())) {
      s.replace(at, key.size(), value);
    }
    return s;
  };
  std::vector<std::string> out;
  out.reserve(args.size());
  for (const std::string& a : args) {
    out.push_back(replace_all(replace_all(a, "{file}", file.string()),
                              "{dir}", dir.string()));
  }
  return out;
}

ScratchDir::ScratchDir() {
  std::string tmpl = (fs::temp_directory_path() / "perturbkit-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr) {
    throw Error(ErrorCode::kRunnerFailure,
                std::string("mkdtemp: ") + std::strerror(errno));
  }
  path_ = tmpl;
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

}  // namespace pk
