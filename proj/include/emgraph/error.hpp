#pragma once

#include <stdexcept>
#include <string>

namespace emg {

// Invalid configuration or flag set. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fatal fault inside a pipeline phase. CLI maps this to exit code 1 and
// names the phase on stderr.
struct PipelineError : std::runtime_error {
  PipelineError(std::string phase_name, const std::string& what)
      : std::runtime_error(what), phase(std::move(phase_name)) {}
  std::string phase;
};

// A stream or chunk that was required to be sorted turned out not to be.
struct SortednessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Watchdog fired while blocked on transport or a barrier.
struct TimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run aborted because another worker failed first.
struct CancelledError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace emg
