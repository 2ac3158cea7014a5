#pragma once

// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) with sampled output
// on a fixed grid and an optional termination guard.

#include <cstddef>
#include <functional>
#include <vector>

namespace autores {

using StateVec = std::vector<double>;
using VectorField = std::function<StateVec(double t, const StateVec& y)>;
using GuardFn = std::function<bool(double t, const StateVec& y)>;

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double initial_step = 1e-3;
  double max_step = 1.0;
  double sample_interval = 0.1;  // output grid spacing
};

enum class Termination { EndOfSpan, Guard, StepUnderflow };

struct Trajectory {
  struct Sample {
    double t;
    StateVec y;
  };
  std::vector<Sample> samples;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  Termination terminated_by = Termination::EndOfSpan;

  const Sample& back() const { return samples.back(); }
};

// Integrates y' = rhs(t, y) over [t0, t1], emitting samples every
// sample_interval (plus t1 itself).  If `guard` is given, integration stops
// at the first sample where it holds.  A step driven below
// 1e-14 * |t1 - t0| marks the trajectory StepUnderflow instead of throwing,
// so sweeps can record per-cell failures.  Exceptions thrown by `rhs`
// propagate to the caller.
Trajectory integrate(const VectorField& rhs, const StateVec& y0,
                     double t0, double t1, const IntegratorConfig& config,
                     const GuardFn& guard = nullptr);

}  // namespace autores
