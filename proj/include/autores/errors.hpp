#pragma once

#include <stdexcept>
#include <string>

namespace autores {

// Base class for all domain errors raised by the library. The CLI maps
// these to exit code 2; numerical failures (StepUnderflow recorded in
// trajectory metadata) map to exit code 3.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Amplitude fell below the floor where the reduced model is meaningful.
struct AmplitudeSingular : ModelError {
  explicit AmplitudeSingular(double rho)
      : ModelError("amplitude below validity floor: rho = " +
                   std::to_string(rho)) {}
};

// Oscillator phase is undefined at the exact origin u = v = 0.
struct PhaseUndefined : ModelError {
  PhaseUndefined() : ModelError("phase undefined at u = v = 0") {}
};

// Reduction to the slow-flow model requires alpha > 0 (lambda > 0).
struct NonPositiveLambda : ModelError {
  explicit NonPositiveLambda(double alpha)
      : ModelError("reduced model requires alpha > 0, got alpha = " +
                   std::to_string(alpha)) {}
};

// |m| coincides with the critical pumping m_* = f / sqrt(4 lambda);
// the series coefficients are not defined there.
struct DegeneratePumping : ModelError {
  DegeneratePumping(double m, double m_star)
      : ModelError("degenerate parametric pumping: |m| = m_* (m = " +
                   std::to_string(m) + ", m_* = " + std::to_string(m_star) +
                   ")") {}
};

// The order-matching 2x2 system is numerically singular, which signals
// proximity to the degenerate case m = +-m_*.
struct SingularRecurrence : ModelError {
  SingularRecurrence(int order, double cond)
      : ModelError("singular coefficient recurrence at order " +
                   std::to_string(order) +
                   " (cond = " + std::to_string(cond) + ")") {}
};

// Requested branch is not among the phase roots for these parameters.
struct BranchAbsent : ModelError {
  explicit BranchAbsent(int branch)
      : ModelError("branch " + std::to_string(branch) +
                   " is absent for these parameters") {}
};

}  // namespace autores
