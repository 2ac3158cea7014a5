#include "autores/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace autores {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights (error estimator).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

StateVec axpy(const StateVec& y, double h, const StateVec& k) {
  StateVec r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] + h * k[i];
  return r;
}

// Cubic Hermite interpolation inside one accepted step (4th-order dense
// output using the FSAL derivative at the step end).
StateVec hermite(double t, double t0, double h, const StateVec& y0,
                 const StateVec& f0, const StateVec& y1, const StateVec& f1) {
  const double s = (t - t0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  StateVec r(y0.size());
  for (std::size_t i = 0; i < y0.size(); ++i)
    r[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
  return r;
}

}  // namespace

Trajectory integrate(const VectorField& rhs, const StateVec& y0, double t0,
                     double t1, const IntegratorConfig& config,
                     const GuardFn& guard) {
  Trajectory traj;
  const std::size_t n = y0.size();
  const double span = t1 - t0;
  const double h_min = 1e-14 * std::abs(span);

  double t = t0;
  StateVec y = y0;
  StateVec f = rhs(t, y);
  double h = std::min(config.initial_step, config.max_step);

  traj.samples.push_back({t0, y0});
  double next_sample = t0 + config.sample_interval;

  // Emits dense-output samples on [t, t+h]; returns true if the guard fired.
  auto emit_samples = [&](double step_t, double step_h, const StateVec& ys,
                          const StateVec& fs, const StateVec& ye,
                          const StateVec& fe) {
    while (next_sample <= step_t + step_h + 1e-12 * std::abs(step_h) &&
           next_sample < t1 - 1e-12 * std::abs(span)) {
      StateVec yi = hermite(next_sample, step_t, step_h, ys, fs, ye, fe);
      traj.samples.push_back({next_sample, std::move(yi)});
      next_sample += config.sample_interval;
      if (guard && guard(traj.back().t, traj.back().y)) return true;
    }
    return false;
  };

  while (t < t1) {
    if (h < h_min) {
      traj.terminated_by = Termination::StepUnderflow;
      if (traj.back().t < t) traj.samples.push_back({t, y});
      return traj;
    }
    // Clamp to the span end without feeding the clamp back into the
    // controller (a short final step is not stiffness).
    const double hs = std::min({h, config.max_step, t1 - t});

    const StateVec& k1 = f;
    StateVec k2 = rhs(t + c2 * hs, axpy(y, hs * a21, k1));
    StateVec yt(n);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    StateVec k3 = rhs(t + c3 * hs, yt);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    StateVec k4 = rhs(t + c4 * hs, yt);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] =
          y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    StateVec k5 = rhs(t + c5 * hs, yt);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    StateVec k6 = rhs(t + hs, yt);
    StateVec y_new(n);
    for (std::size_t i = 0; i < n; ++i)
      y_new[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                              b5 * k5[i] + b6 * k6[i]);
    StateVec k7 = rhs(t + hs, y_new);  // FSAL

    // Componentwise error vs abs_tol + rel_tol * |y|.
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = config.abs_tol +
                        config.rel_tol *
                            std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(ei) / sc);
    }

    if (err <= 1.0) {
      traj.accepted_steps++;
      const bool fired = emit_samples(t, hs, y, k1, y_new, k7);
      t += hs;
      y = std::move(y_new);
      f = std::move(k7);
      if (fired) {
        traj.terminated_by = Termination::Guard;
        return traj;
      }
    } else {
      traj.rejected_steps++;
    }

    // Proportional controller, safety 0.9, growth clamped to [0.2, 5].
    double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    factor = std::clamp(factor, 0.2, 5.0);
    h = hs * factor;
  }

  traj.samples.push_back({t1, y});
  if (guard && guard(t1, y)) traj.terminated_by = Termination::Guard;
  return traj;
}

}  // namespace autores
