#include "autores/model.hpp"

#include <cmath>

namespace autores {

ReducedRhs reduced_rhs(const ReducedState& state, const ReducedParams& params,
                       bool parametric, double rho_min) {
  if (state.rho <= rho_min) throw AmplitudeSingular(state.rho);
  const double rho = state.rho;
  const double psi = state.psi;
  const double tau = state.tau;

  ReducedRhs out;
  out.drho_dtau = params.f * std::sin(psi);
  out.dpsi_dtau =
      rho * rho - params.lambda * tau + params.f * std::cos(psi) / rho;
  if (parametric) {
    const double v = nu(tau, params.m);
    out.drho_dtau -= v * rho * std::sin(2.0 * psi);
    out.dpsi_dtau -= v * std::cos(2.0 * psi);
  }
  return out;
}

OscillatorRhs oscillator_rhs(const OscillatorState& state,
                             const OscillatorParams& params) {
  const double phi = drive_phase(state.t, params);
  const double eps23 = std::cbrt(params.eps * params.eps);
  const double h = parametric_envelope(state.t, params);
  const double restoring =
      (1.0 + eps23 * h * std::cos(2.0 * phi)) *
      (state.u - params.gamma * state.u * state.u * state.u);
  OscillatorRhs out;
  out.du_dt = state.v;
  out.dv_dt = -restoring + params.eps * params.f0 * std::cos(phi);
  return out;
}

double energy(const OscillatorState& state, const OscillatorParams& params) {
  const double u2 = state.u * state.u;
  return 0.5 * u2 - 0.25 * params.gamma * u2 * u2 + 0.5 * state.v * state.v;
}

double oscillator_phase(const OscillatorState& state) {
  if (state.u == 0.0 && state.v == 0.0) throw PhaseUndefined();
  // atan2(-v, u) extends -arctan(v/u) continuously across u = 0; the
  // remaining 2 pi jumps are removed along a trajectory by unwrap_inplace.
  return std::atan2(-state.v, state.u);
}

double phase_mismatch(const OscillatorState& state,
                      const OscillatorParams& params) {
  return drive_phase(state.t, params) - oscillator_phase(state);
}

void unwrap_inplace(std::span<double> phases) {
  constexpr double two_pi = 2.0 * M_PI;
  double shift = 0.0;
  for (std::size_t i = 1; i < phases.size(); ++i) {
    const double jump = phases[i] + shift - phases[i - 1];
    if (jump > M_PI) {
      shift -= two_pi * std::floor((jump + M_PI) / two_pi);
    } else if (jump < -M_PI) {
      shift += two_pi * std::floor((-jump + M_PI) / two_pi);
    }
    phases[i] += shift;
  }
}

ReducedParams reduce_params(const OscillatorParams& params) {
  if (params.alpha <= 0.0) throw NonPositiveLambda(params.alpha);
  ReducedParams out;
  out.lambda = 2.0 * params.alpha * std::pow(params.eps, -4.0 / 3.0);
  out.m = params.h0 / 4.0;
  out.f = params.f0 * std::sqrt(3.0 * params.gamma / 32.0);
  return out;
}

}  // namespace autores
