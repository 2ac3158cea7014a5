#include "autores/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace autores {

std::vector<PhaseRoot> phase_roots(const ReducedParams& params) {
  const double ms = params.m_star();
  const double am = std::abs(params.m);
  if (std::abs(am - ms) <= kDegenerateRelTol * std::max(am, ms))
    throw DegeneratePumping(params.m, ms);

  std::vector<PhaseRoot> roots = {{1, 0.0}, {2, M_PI}};
  if (am > ms) {
    const double a = std::acos(ms / params.m);
    roots.push_back({3, a});
    roots.push_back({4, -a});
  }
  return roots;
}

double AsymptoticSolution::rho2_closed_form(const ReducedParams& p,
                                            double psi0) {
  return (p.m * std::cos(2.0 * psi0) - 2.0 * p.m_star() * std::cos(psi0)) /
         std::sqrt(4.0 * p.lambda);
}

double AsymptoticSolution::psi1_closed_form(const ReducedParams& p,
                                            double psi0) {
  return 1.0 / (4.0 * p.m_star() * std::cos(psi0) -
                4.0 * p.m * std::cos(2.0 * psi0));
}

namespace {

struct SeriesPair {
  PowerSeries rho;  // lo = -1
  PowerSeries psi;  // lo = 0
};

// Defect series of both reduced equations on the candidate expansion:
//   F1 = d rho/dtau + nu rho sin(2 psi) - f sin(psi)            (from x^0)
//   F2 = rho [d psi/dtau + nu cos(2 psi) - rho^2 + lambda tau]
//        - f cos(psi)                                           (from x^-2)
std::pair<PowerSeries, PowerSeries> defect_series(const SeriesPair& s,
                                                  const ReducedParams& prm,
                                                  int T) {
  const PowerSeries nu = nu_series(prm.m, T);
  const PowerSeries two_psi = 2.0 * s.psi;
  const PowerSeries sin2psi = two_psi.sin();
  const PowerSeries cos2psi = two_psi.cos();

  PowerSeries f1 = s.rho.derivative_tau() + nu * (s.rho * sin2psi) -
                   prm.f * s.psi.sin();

  const PowerSeries lambda_tau =
      PowerSeries::monomial(prm.lambda, -2, T + 4);
  PowerSeries bracket =
      s.psi.derivative_tau() + nu * cos2psi - s.rho * s.rho + lambda_tau;
  PowerSeries f2 = s.rho * bracket - prm.f * s.psi.cos();
  return {std::move(f1), std::move(f2)};
}

}  // namespace

AsymptoticSolution build_series(const ReducedParams& params, int branch,
                                int K, double cond_limit) {
  const auto roots = phase_roots(params);
  const auto it = std::find_if(roots.begin(), roots.end(),
                               [&](const PhaseRoot& r) {
                                 return r.branch == branch;
                               });
  if (it == roots.end()) throw BranchAbsent(branch);

  AsymptoticSolution sol;
  sol.branch = branch;
  sol.psi0 = it->psi0;
  sol.K = K;
  sol.params = params;
  sol.rho_coeffs.assign(static_cast<std::size_t>(K) + 2, 0.0);
  sol.psi_coeffs.assign(static_cast<std::size_t>(K), 0.0);

  // Working truncation: F2 is exact through T - 2 and we need its
  // coefficient at order K - 1 to pin rho_{K+1}.
  const int T = K + 3;

  SeriesPair s;
  s.rho = PowerSeries::monomial(std::sqrt(params.lambda), -1, T);
  s.psi = PowerSeries::constant(sol.psi0, T);

  auto set_candidates = [&](int k, double rk, double pk) {
    if (k <= K + 1) s.rho.set_coeff(k, rk);
    if (k >= 1 && k <= K) s.psi.set_coeff(k, pk);
  };

  // At order k the matched pair of equations is
  //   F2 coefficient at x^{k-2} (pins rho_k),
  //   F1 coefficient at x^{k}   (pins psi_k, k >= 1),
  // linear in (rho_k, psi_k) given all lower coefficients.
  for (int k = 0; k <= K + 1; ++k) {
    const bool has_psi = (k >= 1 && k <= K);
    auto resid = [&](double rk, double pk) -> std::array<double, 2> {
      set_candidates(k, rk, pk);
      const auto [f1, f2] = defect_series(s, params, T);
      return {f2.coeff(k - 2), has_psi ? f1.coeff(k) : 0.0};
    };

    const auto b = resid(0.0, 0.0);
    const auto cr = resid(1.0, 0.0);
    const auto cp = resid(0.0, 1.0);
    // 2x2 system A z = -b with columns from unit candidates.
    const double a11 = cr[0] - b[0], a12 = cp[0] - b[0];
    const double a21 = cr[1] - b[1], a22 = cp[1] - b[1];

    double rk = 0.0, pk = 0.0;
    if (has_psi) {
      const double det = a11 * a22 - a12 * a21;
      const double norm = std::max({std::abs(a11) + std::abs(a12),
                                    std::abs(a21) + std::abs(a22)});
      if (std::abs(det) <= norm * norm / cond_limit)
        throw SingularRecurrence(k, norm * norm / std::abs(det));
      rk = (-b[0] * a22 + b[1] * a12) / det;
      pk = (-b[1] * a11 + b[0] * a21) / det;
    } else {
      if (std::abs(a11) <= std::abs(b[0]) / cond_limit &&
          !(a11 == 0.0 && b[0] == 0.0))
        throw SingularRecurrence(k, std::abs(b[0] / a11));
      rk = (a11 == 0.0) ? 0.0 : -b[0] / a11;
    }
    set_candidates(k, rk, pk);
    sol.rho_coeffs[static_cast<std::size_t>(k)] = rk;
    if (has_psi) sol.psi_coeffs[static_cast<std::size_t>(k - 1)] = pk;
  }

  // Freeze the defect tails; the matched orders are identically zero.  The
  // candidate is a fixed polynomial, so its defect series can be carried to
  // higher order than the matching required.
  const int T2 = K + 16;
  SeriesPair wide;
  wide.rho = PowerSeries(-1, T2);
  wide.psi = PowerSeries(0, T2);
  wide.rho.set_coeff(-1, std::sqrt(params.lambda));
  for (int k = 0; k <= K + 1; ++k)
    wide.rho.set_coeff(k, sol.rho_coeffs[static_cast<std::size_t>(k)]);
  wide.psi.set_coeff(0, sol.psi0);
  for (int k = 1; k <= K; ++k)
    wide.psi.set_coeff(k, sol.psi_coeffs[static_cast<std::size_t>(k - 1)]);
  const auto [f1, f2] = defect_series(wide, params, T2);
  for (int k = K + 1; k <= f1.order(); ++k)
    sol.defect_rho_tail.push_back(f1.coeff(k));
  for (int k = K; k <= f2.order(); ++k)
    sol.defect_psi_tail.push_back(f2.coeff(k));
  return sol;
}

std::pair<double, double> eval_solution(const AsymptoticSolution& sol,
                                        double tau) {
  const double x = 1.0 / std::sqrt(tau);
  double rho = std::sqrt(sol.params.lambda * tau);
  double xp = 1.0;
  for (std::size_t k = 0; k < sol.rho_coeffs.size(); ++k) {
    rho += sol.rho_coeffs[k] * xp;
    xp *= x;
  }
  double psi = sol.psi0;
  xp = x;
  for (std::size_t k = 0; k < sol.psi_coeffs.size(); ++k) {
    psi += sol.psi_coeffs[k] * xp;
    xp *= x;
  }
  return {rho, psi};
}

std::pair<double, double> eval_solution_derivative(
    const AsymptoticSolution& sol, double tau) {
  // d/dtau tau^{-k/2} = -(k/2) tau^{-k/2 - 1}
  const double x = 1.0 / std::sqrt(tau);
  double drho = 0.5 * std::sqrt(sol.params.lambda / tau);
  double xp = 1.0;
  for (std::size_t k = 0; k < sol.rho_coeffs.size(); ++k) {
    drho -= 0.5 * static_cast<double>(k) * sol.rho_coeffs[k] * xp / tau;
    xp *= x;
  }
  double dpsi = 0.0;
  xp = x;
  for (std::size_t k = 0; k < sol.psi_coeffs.size(); ++k) {
    dpsi -= 0.5 * static_cast<double>(k + 1) * sol.psi_coeffs[k] * xp / tau;
    xp *= x;
  }
  return {drho, dpsi};
}

std::pair<double, double> residual(const AsymptoticSolution& sol,
                                   double tau) {
  // Below the crossover the pointwise subtraction is accurate (roundoff
  // ~ tau * eps is far below the defect); above it the tail series takes
  // over before the rho_*^2 - lambda*tau cancellation swamps the defect.
  constexpr double kTailTau = 1e3;
  if (tau >= kTailTau &&
      (!sol.defect_rho_tail.empty() || !sol.defect_psi_tail.empty())) {
    const double x = 1.0 / std::sqrt(tau);
    double f1 = 0.0;
    double xp = std::pow(x, sol.K + 1);
    for (const double c : sol.defect_rho_tail) {
      f1 += c * xp;
      xp *= x;
    }
    double f2 = 0.0;
    xp = std::pow(x, sol.K);
    for (const double c : sol.defect_psi_tail) {
      f2 += c * xp;
      xp *= x;
    }
    return {f1, f2 / eval_solution(sol, tau).first};
  }
  // Hand-assembled solutions without tails: pointwise subtraction.
  const auto [rho, psi] = eval_solution(sol, tau);
  const auto [drho, dpsi] = eval_solution_derivative(sol, tau);
  const ReducedState st{rho, psi, tau};
  const auto rhs = reduced_rhs(st, sol.params, true);
  return {drho - rhs.drho_dtau, dpsi - rhs.dpsi_dtau};
}

void to_json(nlohmann::json& j, const AsymptoticSolution& sol) {
  j = nlohmann::json{{"branch", sol.branch},
                     {"psi0", sol.psi0},
                     {"K", sol.K},
                     {"params",
                      {{"lambda", sol.params.lambda},
                       {"f", sol.params.f},
                       {"m", sol.params.m}}},
                     {"rho_coeffs", sol.rho_coeffs},
                     {"psi_coeffs", sol.psi_coeffs},
                     {"defect_rho_tail", sol.defect_rho_tail},
                     {"defect_psi_tail", sol.defect_psi_tail}};
}

void from_json(const nlohmann::json& j, AsymptoticSolution& sol) {
  j.at("branch").get_to(sol.branch);
  j.at("psi0").get_to(sol.psi0);
  j.at("K").get_to(sol.K);
  j.at("params").at("lambda").get_to(sol.params.lambda);
  j.at("params").at("f").get_to(sol.params.f);
  j.at("params").at("m").get_to(sol.params.m);
  j.at("rho_coeffs").get_to(sol.rho_coeffs);
  j.at("psi_coeffs").get_to(sol.psi_coeffs);
  sol.defect_rho_tail = j.value("defect_rho_tail", std::vector<double>{});
  sol.defect_psi_tail = j.value("defect_psi_tail", std::vector<double>{});
}

}  // namespace autores
