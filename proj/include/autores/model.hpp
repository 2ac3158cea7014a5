#pragma once

// Slow-flow amplitude/phase models of autoresonant capture and the driven
// quartic oscillator they are reduced from.  All functions here are pure.

#include <cmath>
#include <span>
#include <vector>

#include "autores/errors.hpp"

namespace autores {

inline constexpr double kRhoFloorDefault = 1e-8;

// Parameters (lambda, f, m) of the reduced amplitude-phase system.
// m = 0 recovers the purely externally pumped system.
struct ReducedParams {
  double lambda = 1.0;  // detuning sweep rate, > 0
  double f = 1.0;       // external pumping amplitude, > 0
  double m = 0.0;       // parametric pumping scale

  // critical parametric amplitude separating the stability regimes
  double m_star() const { return f / std::sqrt(4.0 * lambda); }

  bool valid() const { return lambda > 0.0 && f > 0.0; }
};

struct ReducedState {
  double rho = 0.0;  // amplitude, >= 0
  double psi = 0.0;  // phase shift, radians
  double tau = 0.0;  // slow time, >= 0
};

struct OscillatorParams {
  double eps = 1e-3;    // small parameter, > 0
  double alpha = 0.0;   // chirp rate
  double gamma = 1.0;   // quartic stiffness, > 0
  double f0 = 0.0;      // drive amplitude
  double h0 = 0.0;      // parametric amplitude
};

struct OscillatorState {
  double u = 0.0;  // displacement
  double v = 0.0;  // velocity
  double t = 0.0;  // fast time
};

// Parametric pumping envelope nu(tau) = m / sqrt(1 + tau).
inline double nu(double tau, double m) { return m / std::sqrt(1.0 + tau); }

// Right-hand side of the reduced system.  With `parametric` off the nu-terms
// are skipped entirely, so m = 0 plus flag-off agrees bit-for-bit with the
// flag-on path at m = 0 only through nu(tau, 0) == 0; both give the same
// arithmetic because the subtracted terms are exact zeros.
struct ReducedRhs {
  double drho_dtau = 0.0;
  double dpsi_dtau = 0.0;
};

ReducedRhs reduced_rhs(const ReducedState& state, const ReducedParams& params,
                       bool parametric, double rho_min = kRhoFloorDefault);

// Drive phase phi(t) = t - alpha t^2 and envelope h(t).
inline double drive_phase(double t, const OscillatorParams& p) {
  return t - p.alpha * t * t;
}
inline double parametric_envelope(double t, const OscillatorParams& p) {
  return p.h0 / std::sqrt(1.0 + std::cbrt(p.eps * p.eps) * t);
}

struct OscillatorRhs {
  double du_dt = 0.0;
  double dv_dt = 0.0;
};

OscillatorRhs oscillator_rhs(const OscillatorState& state,
                             const OscillatorParams& params);

// E = u^2/2 - gamma u^4/4 + v^2/2 (potential truncated at quartic order).
double energy(const OscillatorState& state, const OscillatorParams& params);

// Oscillator phase Phi on the principal branch; continuous unwrapping is
// applied along a trajectory by unwrap_inplace below.
double oscillator_phase(const OscillatorState& state);

// Phase mismatch Delta = phi(t) - Phi(t), principal value.
double phase_mismatch(const OscillatorState& state,
                      const OscillatorParams& params);

// Removes 2 pi jumps between consecutive samples (threshold |jump| > pi).
void unwrap_inplace(std::span<double> phases);

// Two-scale reduction: lambda = 2 alpha eps^{-4/3}, m = h0/4,
// f = f0 sqrt(3 gamma / 32).  Requires alpha > 0.
ReducedParams reduce_params(const OscillatorParams& params);

}  // namespace autores
