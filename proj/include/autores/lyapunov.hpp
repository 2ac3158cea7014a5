#pragma once

// (r, p, eta) deviation variables about a truncated autoresonant solution,
// the Hamiltonian/remainder split of the deviation system, the Lyapunov
// candidate L = H + V1 + V2, and sampled verification of its sign bounds.

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "autores/asymptotics.hpp"
#include "autores/stability.hpp"

namespace autores {

struct TransformedState {
  double r = 0.0;    // scaled amplitude deviation
  double p = 0.0;    // phase deviation
  double eta = 0.0;  // eta = (4/5) tau^{5/4}
};

// r = (rho - rho_*) tau^{1/4}, p = psi - psi_*, eta = (4/5) tau^{5/4}.
TransformedState to_transformed(double rho, double psi, double tau,
                                const AsymptoticSolution& sol);
ReducedState from_transformed(const TransformedState& st,
                              const AsymptoticSolution& sol);

enum class EnergyPart { H, V1, V2, L };

double hamiltonian(const TransformedState& st, const AsymptoticSolution& sol,
                   EnergyPart which);

// g^i(p) with the branch's phase root as parameter; reduces to the
// (m/2)(1 - cos 2p) - 2 m_* cos(psi0) (1 - cos p) form when sin(psi0) = 0.
double g_correction(double p, const AsymptoticSolution& sol);

// Exact pushforward of the reduced vector field: the Hamiltonian partials
// in closed form plus the remainder G plus the truncation-defect terms, so
// the flow agrees with reduced_rhs through the change of variables to
// roundoff.  The origin is a fixed point only up to the series defect.
struct TransformedRhs {
  double dr_deta = 0.0;
  double dp_deta = 0.0;
};
TransformedRhs transformed_rhs(const TransformedState& st,
                               const AsymptoticSolution& sol,
                               double rho_min = kRhoFloorDefault);

// Total derivative of L along the deviation flow: spatial gradient in
// closed form, d/d eta by central differences with one Richardson step.
double lyapunov_rate(const TransformedState& st,
                     const AsymptoticSolution& sol);

// Coefficient of p^2 in the comparison quadratic form
// Q = sqrt(lambda) r^2 + c p^2.
double quadratic_p_coefficient(const ReducedParams& params, int branch,
                               double psi0);

// Whether the branch satisfies its stability theorem's parameter condition.
bool lyapunov_applicable(const ReducedParams& params, int branch);

struct LyapunovDomain {
  double d_star = 0.05;
  double eta_star = 1e4;
  double eps1 = 0.5;
  double eps2 = 0.5;
};

struct LyapunovReport {
  int branch = 0;
  LyapunovDomain domain;
  bool applicable = true;
  std::uint64_t samples = 0;
  std::uint64_t bound_violations = 0;
  std::uint64_t derivative_violations = 0;
  double min_margin = 0.0;
};

// Samples n points with (r, p) uniform in the disk d < d_star and eta
// log-uniform in [eta_star, 1e3 eta_star], counting violations of the
// two-sided bound (1 -+ eps1) Q and of the derivative bound
// dL/deta <= -(1 - eps2) Q / (5 eta).  Sample i is derived from (seed, i)
// alone, so any partitioning across workers reproduces the same sequence.
LyapunovReport check_bounds(const AsymptoticSolution& sol,
                            const LyapunovDomain& domain,
                            std::uint64_t n_samples, std::uint64_t seed);

// Coarse grid search for a passing domain; nullopt if none passes.
std::optional<LyapunovDomain> search_domain(const AsymptoticSolution& sol,
                                            std::uint64_t n_samples,
                                            std::uint64_t seed);

void to_json(nlohmann::json& j, const LyapunovDomain& d);
void from_json(const nlohmann::json& j, LyapunovDomain& d);
void to_json(nlohmann::json& j, const LyapunovReport& r);

// Counter-based uniform variate in [0, 1): sample i, lane k, keyed by seed.
double counter_uniform(std::uint64_t seed, std::uint64_t index,
                       std::uint64_t lane);

}  // namespace autores
