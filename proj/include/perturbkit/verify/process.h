#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pk {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal
  int signal = 0;
  bool timed_out = false;
  std::string out;
  std::string err;

  bool ok() const { return !timed_out && signal == 0 && exit_code == 0; }
};

// Runs argv[0] (PATH lookup) in `cwd` with `stdin_data` on standard input.
// The process group is killed when `timeout_s` elapses. Captured streams are
// truncated at 16 MiB each. Throws Error(kToolchainUnavailable) when the
// program cannot be started. At most process_limit() children run at once.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view stdin_data, double timeout_s,
                          const std::filesystem::path& cwd);

void set_process_limit(int limit);
int process_limit();

// Substitutes {file} and {dir} in every argument.
std::vector<std::string> expand_template(const std::vector<std::string>& args,
                                         const std::filesystem::path& file,
                                         const std::filesystem::path& dir);

// Private temporary directory, removed on destruction.
class ScratchDir {
 public:
  ScratchDir();
  ~ScratchDir();
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace pk
