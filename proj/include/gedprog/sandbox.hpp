#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gedprog {

struct SandboxLimits {
  std::chrono::milliseconds time_limit{10'000};
  std::size_t max_output_bytes = std::size_t{64} << 20;
  /// Address-space cap applied to the child; 0 disables it.
  std::size_t memory_limit_bytes = std::size_t{2} << 30;
};

struct ProcessResult {
  enum class Status { exited, signaled, timed_out, output_overflow };

  Status status = Status::exited;
  int exit_code = 0;
  int signal = 0;
  std::string stdout_data;
  std::chrono::steady_clock::duration elapsed{};
};

/// Runs argv[0] (resolved against PATH) in its own process group, feeds
/// `input` on stdin and collects stdout. stderr is drained and discarded.
/// The whole process group is killed and reaped before returning, on every
/// path. Throws RunnerError if the process cannot be started at all.
ProcessResult run_sandboxed(const std::vector<std::string>& argv,
                            std::string_view input,
                            const SandboxLimits& limits);

}  // namespace gedprog
