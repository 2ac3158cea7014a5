#pragma once

// Linearization about the truncated asymptotic solutions, the leading
// eigenvalue discriminants D_0^i, and the per-branch stability verdicts.

#include <array>
#include <complex>
#include <json.hpp>
#include <vector>

#include "autores/asymptotics.hpp"
#include "autores/model.hpp"

namespace autores {

inline constexpr double kDegenerateClassifyRelTol = 1e-9;
inline const double kSigma = std::pow(1.25, 0.2);  // (5/4)^{1/5}

inline double eta_floor_default(double tau_floor = kTauFloorDefault) {
  return 0.8 * std::pow(tau_floor, 1.25);
}
inline double tau_of_eta(double eta) { return std::pow(1.25 * eta, 0.8); }
inline double eta_of_tau(double tau) { return 0.8 * std::pow(tau, 1.25); }

struct LinearizationPoint {
  int branch = 0;
  double eta = 0.0;
  std::array<std::array<double, 2>, 2> matrix{};  // A^i(eta)
  std::complex<double> mu_plus, mu_minus;
};

// Fills A^i(eta) from the slow-flow deviation system about the truncated
// solution, with (rho_*, psi_*) taken at tau = (5 eta / 4)^{4/5}.
LinearizationPoint jacobian(const AsymptoticSolution& sol, double eta);

// Leading discriminant of the linearization eigenvalues:
//   D_0^1 = 4 (m_* - m) lambda, D_0^2 = -4 (m_* + m) lambda,
//   D_0^3 = D_0^4 = 4 (m^2 - m_*^2) lambda / m.
double d0(const ReducedParams& params, int branch);

enum class Regime { Stable, Unstable, Degenerate, NotPresent };
enum class Justification {
  LinearUnstable,
  LyapunovStable,
  DegenerateBoundary,
  RootAbsent
};

struct StabilityVerdict {
  int branch = 0;
  Regime regime = Regime::NotPresent;
  double d0 = 0.0;
  double m_star = 0.0;
  Justification justification = Justification::RootAbsent;
};

// Verdicts for all four branches.  Stability is never concluded from
// D_0 < 0 alone; the relevant Lyapunov-theorem parameter condition must
// hold (branch 1: m > m_*; branch 2: m > -m_*; branches 3,4: m < -m_*).
std::vector<StabilityVerdict> classify(const ReducedParams& params);

enum class RegimeKind { AntiPhaseOnly, TwoStableModes, Degenerate };

struct OscillatorRegime {
  RegimeKind kind = RegimeKind::AntiPhaseOnly;
  double mu = 0.0;
  double mu0 = 0.0;
  std::vector<double> stable_psi0;  // phase roots of the stable modes
};

// Regime map of the driven oscillator: mu = eps alpha^{-3/4} against
// mu0 = (16 h0^2 / 3 gamma f0^2)^{3/4}.
OscillatorRegime oscillator_regime(const OscillatorParams& params,
                                   double rel_tol = kDegenerateClassifyRelTol);

const char* to_string(Regime r);
const char* to_string(Justification j);
const char* to_string(RegimeKind k);

void to_json(nlohmann::json& j, const StabilityVerdict& v);
void to_json(nlohmann::json& j, const OscillatorRegime& r);

}  // namespace autores
