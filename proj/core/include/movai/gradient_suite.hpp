#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "movai/tensor.hpp"

namespace movai {

inline constexpr double kGradCheckStep = 1e-3;
/// Step for the checks through stacked softmaxes (TSAM projections, refine
/// input), where ε² truncation on small coordinates exceeds the tolerance at
/// the default step.
inline constexpr double kGradCheckFineStep = 1e-4;
inline constexpr double kGradCheckTolerance = 1e-4;

struct GradSuiteEntry {
  std::string name;
  int instances = 0;
  double step = kGradCheckStep;
  std::size_t coordinates = 0;  // total checked
  GradCheckReport worst;        // instance with the largest relative error

  bool passed() const { return worst.max_relative_error < kGradCheckTolerance; }
};

struct GradSuiteOptions {
  std::uint64_t seed = 0;
  int instances = 50;
  /// Test hook: scales every analytic gradient by (1 + perturbation).
  double perturbation = 0.0;
};

/// Central-difference checks of every analytic gradient in the library:
/// attention backward, recon/temporal/semantic/composite losses, the TSAM
/// branches and combination, and one end-to-end refine step (parameters and
/// input) on a reduced model.
std::vector<GradSuiteEntry> run_gradient_suite(const GradSuiteOptions& options);

}  // namespace movai
