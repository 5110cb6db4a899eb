#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "l2f/pipeline.hpp"
#include "l2f/signal.hpp"
#include "l2f/simlab.hpp"

namespace l2f {

/// Resolved batch configuration: model, noise, pipeline knobs, outputs.
/// Loaded from a JSON config file with flag overrides; keys mirror flags 1:1.
struct RunConfig {
  double t21_ms = 10.0, t22_ms = 50.0, a1 = 0.5, a2 = 0.5;
  std::vector<double> snrs;  // empty means noiseless
  int realizations = 100;
  uint64_t seed = 0;
  std::string method = "both";  // l2f | nlls | both
  L2FConfig l2f;
  int jobs = 0;
  bool trace = false;
  std::optional<double> shift_override;
  std::string out_dir = ".";

  SignalModel model() const;
};

// exit codes: 0 ok, 2 validation, 3 estimation failure, 4 i/o
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitEstimation = 3;
inline constexpr int kExitIo = 4;

int cmd_simulate(const RunConfig& cfg);
int cmd_expand(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_experiment(const RunConfig& cfg);

int cli_main(int argc, char** argv);

}  // namespace l2f
