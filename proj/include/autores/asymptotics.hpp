#pragma once

// Truncated asymptotic autoresonant solutions
//   rho_*(tau) = sqrt(lambda tau) + sum_k rho_k tau^{-k/2},
//   psi_*(tau) = psi0 + sum_k psi_k tau^{-k/2},
// built by order-by-order matching in powers of x = tau^{-1/2} and certified
// by defect substitution into the reduced system.

#include <utility>
#include <vector>

#include <json.hpp>

#include "autores/model.hpp"
#include "autores/series.hpp"

namespace autores {

inline constexpr double kTauFloorDefault = 1.0;
inline constexpr double kDegenerateRelTol = 1e-12;

struct PhaseRoot {
  int branch;   // 1..4
  double psi0;  // root of (m_* - m cos psi0) sin psi0 = 0
};

// Roots present for these parameters: branches 1,2 always; 3,4 only when
// |m| > m_*.  Throws DegeneratePumping when |m| = m_* within 1e-12 relative.
std::vector<PhaseRoot> phase_roots(const ReducedParams& params);

struct AsymptoticSolution {
  int branch = 0;
  double psi0 = 0.0;
  int K = 0;                       // truncation order of the psi series
  ReducedParams params;
  std::vector<double> rho_coeffs;  // rho_0 .. rho_{K+1}
  std::vector<double> psi_coeffs;  // psi_1 .. psi_K

  // Exact tail coefficients of the two defect series beyond the matched
  // orders.  The pointwise residual rho_*^2 - lambda*tau cancels catastrophic-
  // ally at large tau (absolute noise ~ tau * eps), so the residual is
  // evaluated from these tails instead.  defect_rho_tail holds the amplitude
  // defect from x^{K+1}; defect_psi_tail holds the rho-weighted phase defect
  // from x^{K} and is divided by rho_* on evaluation.
  std::vector<double> defect_rho_tail;
  std::vector<double> defect_psi_tail;

  // Closed-form order-2/order-1 coefficients used as an oracle for the
  // order-matching solver.
  static double rho2_closed_form(const ReducedParams& p, double psi0);
  static double psi1_closed_form(const ReducedParams& p, double psi0);
};

// Solves the 2x2 linear system arising at each order of the matched
// expansion.  The amplitude is carried one order beyond K so that both
// defect components decay at the same rate O(tau^{-(K+1)/2}).
AsymptoticSolution build_series(const ReducedParams& params, int branch,
                                int K, double cond_limit = 1e12);

// (rho_*, psi_*) at slow time tau (tau >= tau_floor for a meaningful value).
std::pair<double, double> eval_solution(const AsymptoticSolution& sol,
                                        double tau);

// d/dtau of the truncated series, term by term.
std::pair<double, double> eval_solution_derivative(
    const AsymptoticSolution& sol, double tau);

// Defects of both reduced equations on the truncated solution:
//   res_rho = d rho_*/dtau - [f sin psi_* - nu rho_* sin 2 psi_*],
//   res_psi = d psi_*/dtau - [rho_*^2 - lambda tau - nu cos 2 psi_*
//                             + f cos psi_* / rho_*].
std::pair<double, double> residual(const AsymptoticSolution& sol, double tau);

void to_json(nlohmann::json& j, const AsymptoticSolution& sol);
void from_json(const nlohmann::json& j, AsymptoticSolution& sol);

}  // namespace autores
