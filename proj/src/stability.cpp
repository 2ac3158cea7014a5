#include "autores/stability.hpp"

#include <algorithm>
#include <cmath>

namespace autores {

LinearizationPoint jacobian(const AsymptoticSolution& sol, double eta) {
  const double tau = tau_of_eta(eta);
  const auto [rho, psi] = eval_solution(sol, tau);
  const double v = nu(tau, sol.params.m);
  const double f = sol.params.f;
  const double se1 = kSigma * std::pow(eta, 0.2);    // sigma eta^{1/5}
  const double se2 = se1 * se1;                      // sigma^2 eta^{2/5}

  LinearizationPoint lp;
  lp.branch = sol.branch;
  lp.eta = eta;
  lp.matrix[0][0] = 1.0 / (5.0 * eta) - v * std::sin(2.0 * psi) / se1;
  lp.matrix[0][1] = f * std::cos(psi) - 2.0 * v * rho * std::cos(2.0 * psi);
  lp.matrix[1][0] = 2.0 * rho / se2 - f * std::cos(psi) / (rho * rho * se2);
  lp.matrix[1][1] =
      2.0 * v * std::sin(2.0 * psi) / se1 - f * std::sin(psi) / (se1 * rho);

  const double tr = lp.matrix[0][0] + lp.matrix[1][1];
  const double det = lp.matrix[0][0] * lp.matrix[1][1] -
                     lp.matrix[0][1] * lp.matrix[1][0];
  const std::complex<double> disc =
      std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
  lp.mu_plus = tr / 2.0 + disc;
  lp.mu_minus = tr / 2.0 - disc;
  return lp;
}

double d0(const ReducedParams& params, int branch) {
  const auto roots = phase_roots(params);
  const bool present = std::any_of(roots.begin(), roots.end(),
                                   [&](const PhaseRoot& r) {
                                     return r.branch == branch;
                                   });
  if (!present) throw BranchAbsent(branch);

  const double ms = params.m_star();
  switch (branch) {
    case 1:
      return 4.0 * (ms - params.m) * params.lambda;
    case 2:
      return -4.0 * (ms + params.m) * params.lambda;
    case 3:
    case 4:
      return 4.0 * (params.m * params.m - ms * ms) * params.lambda / params.m;
    default:
      throw BranchAbsent(branch);
  }
}

std::vector<StabilityVerdict> classify(const ReducedParams& params) {
  const double ms = params.m_star();
  const double m = params.m;
  const bool degenerate =
      std::abs(std::abs(m) - ms) <=
      kDegenerateClassifyRelTol * std::max(std::abs(m), ms);
  const bool pair_present = std::abs(m) > ms;

  std::vector<StabilityVerdict> out;
  for (int branch = 1; branch <= 4; ++branch) {
    StabilityVerdict v;
    v.branch = branch;
    v.m_star = ms;

    if (degenerate) {
      v.regime = Regime::Degenerate;
      v.justification = Justification::DegenerateBoundary;
      out.push_back(v);
      continue;
    }
    if (branch >= 3 && !pair_present) {
      v.regime = Regime::NotPresent;
      v.justification = Justification::RootAbsent;
      out.push_back(v);
      continue;
    }

    v.d0 = d0(params, branch);
    const bool lyapunov_condition =
        (branch == 1) ? (m > ms)
        : (branch == 2) ? (m > -ms)
                        : (m < -ms);
    if (v.d0 > 0.0) {
      v.regime = Regime::Unstable;
      v.justification = Justification::LinearUnstable;
    } else if (lyapunov_condition) {
      v.regime = Regime::Stable;
      v.justification = Justification::LyapunovStable;
    } else {
      // D_0 < 0 alone is not a stability proof.
      v.regime = Regime::Degenerate;
      v.justification = Justification::DegenerateBoundary;
    }
    out.push_back(v);
  }
  return out;
}

OscillatorRegime oscillator_regime(const OscillatorParams& params,
                                   double rel_tol) {
  if (params.alpha <= 0.0) throw NonPositiveLambda(params.alpha);

  OscillatorRegime r;
  r.mu = params.eps * std::pow(params.alpha, -0.75);
  r.mu0 = std::pow(16.0 * params.h0 * params.h0 /
                       (3.0 * params.gamma * params.f0 * params.f0),
                   0.75);

  if (std::abs(r.mu - r.mu0) <= rel_tol * std::max(r.mu, r.mu0)) {
    r.kind = RegimeKind::Degenerate;
    return r;
  }
  if (r.mu > r.mu0) {
    r.kind = RegimeKind::AntiPhaseOnly;
    r.stable_psi0 = {M_PI};
    return r;
  }
  r.kind = RegimeKind::TwoStableModes;
  if (params.h0 > 0.0) {
    r.stable_psi0 = {0.0, M_PI};
  } else {
    // mu < mu0 with h0 < 0 puts the reduced model at m < -m_*: the stable
    // pair sits at psi0 = +-arccos(m_*/m) = +-arccos(-(mu/mu0)^{2/3}).
    const double c = -std::pow(r.mu / r.mu0, 2.0 / 3.0);
    r.stable_psi0 = {std::acos(c), -std::acos(c)};
  }
  return r;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Stable: return "stable";
    case Regime::Unstable: return "unstable";
    case Regime::Degenerate: return "degenerate";
    case Regime::NotPresent: return "absent";
  }
  return "?";
}

const char* to_string(Justification j) {
  switch (j) {
    case Justification::LinearUnstable: return "linear-unstable";
    case Justification::LyapunovStable: return "lyapunov-stable";
    case Justification::DegenerateBoundary: return "degenerate-boundary";
    case Justification::RootAbsent: return "root-absent";
  }
  return "?";
}

const char* to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::AntiPhaseOnly: return "anti-phase-only";
    case RegimeKind::TwoStableModes: return "two-stable-modes";
    case RegimeKind::Degenerate: return "degenerate";
  }
  return "?";
}

void to_json(nlohmann::json& j, const StabilityVerdict& v) {
  j = nlohmann::json{{"branch", v.branch},
                     {"regime", to_string(v.regime)},
                     {"d0", v.d0},
                     {"m_star", v.m_star},
                     {"justification", to_string(v.justification)}};
}

void to_json(nlohmann::json& j, const OscillatorRegime& r) {
  j = nlohmann::json{{"kind", to_string(r.kind)},
                     {"mu", r.mu},
                     {"mu0", r.mu0},
                     {"stable_psi0", r.stable_psi0}};
}

}  // namespace autores
