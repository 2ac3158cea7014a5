#include "autores/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace autores {

TransformedState to_transformed(double rho, double psi, double tau,
                                const AsymptoticSolution& sol) {
  const auto [rs, ps] = eval_solution(sol, tau);
  TransformedState st;
  st.r = (rho - rs) * std::pow(tau, 0.25);
  st.p = psi - ps;
  st.eta = eta_of_tau(tau);
  return st;
}

ReducedState from_transformed(const TransformedState& st,
                              const AsymptoticSolution& sol) {
  const double tau = tau_of_eta(st.eta);
  const auto [rs, ps] = eval_solution(sol, tau);
  ReducedState out;
  out.tau = tau;
  out.rho = rs + st.r * std::pow(tau, -0.25);
  out.psi = ps + st.p;
  return out;
}

double g_correction(double p, const AsymptoticSolution& sol) {
  const double m = sol.params.m;
  const double ms = sol.params.m_star();
  const double psi0 = sol.psi0;
  return 0.5 * m * (std::cos(2.0 * psi0) - std::cos(2.0 * p + 2.0 * psi0)) -
         2.0 * ms * (std::cos(psi0) - std::cos(p + psi0));
}

namespace {

double g_correction_derivative(double p, const AsymptoticSolution& sol) {
  const double m = sol.params.m;
  const double ms = sol.params.m_star();
  const double psi0 = sol.psi0;
  return m * std::sin(2.0 * p + 2.0 * psi0) - 2.0 * ms * std::sin(p + psi0);
}

// Frequently used local quantities at (r, p, eta).
struct Frame {
  double tau, rho_s, psi_s, v, f, se1, se2, se3;
};

Frame make_frame(double eta, const AsymptoticSolution& sol) {
  Frame fr;
  fr.tau = tau_of_eta(eta);
  const auto [rs, ps] = eval_solution(sol, fr.tau);
  fr.rho_s = rs;
  fr.psi_s = ps;
  fr.v = nu(fr.tau, sol.params.m);
  fr.f = sol.params.f;
  fr.se1 = kSigma * std::pow(eta, 0.2);
  fr.se2 = fr.se1 * fr.se1;
  fr.se3 = fr.se2 * fr.se1;
  return fr;
}

double hamiltonian_h(const TransformedState& st, const Frame& fr) {
  const double r = st.r, p = st.p, eta = st.eta;
  const double cp = std::cos(p + fr.psi_s), cs = std::cos(fr.psi_s);
  const double c2p = std::cos(2.0 * p + 2.0 * fr.psi_s),
               c2s = std::cos(2.0 * fr.psi_s);
  return r * r * fr.rho_s / fr.se2 + r * r * r / (3.0 * fr.se3) +
         fr.f * (cp - cs + p * std::sin(fr.psi_s)) - r * p / (5.0 * eta) -
         0.5 * fr.v * fr.rho_s *
             (c2p - c2s + 2.0 * p * std::sin(2.0 * fr.psi_s)) -
         0.5 * fr.v * r / fr.se1 * (c2p - c2s);
}

double dH_dp(const TransformedState& st, const Frame& fr) {
  const double r = st.r, p = st.p, eta = st.eta;
  return fr.f * (-std::sin(p + fr.psi_s) + std::sin(fr.psi_s)) -
         r / (5.0 * eta) +
         fr.v * fr.rho_s *
             (std::sin(2.0 * p + 2.0 * fr.psi_s) -
              std::sin(2.0 * fr.psi_s)) +
         fr.v * r / fr.se1 * std::sin(2.0 * p + 2.0 * fr.psi_s);
}

double dH_dr(const TransformedState& st, const Frame& fr) {
  const double r = st.r, p = st.p, eta = st.eta;
  return 2.0 * r * fr.rho_s / fr.se2 + r * r / fr.se3 - p / (5.0 * eta) -
         0.5 * fr.v / fr.se1 *
             (std::cos(2.0 * p + 2.0 * fr.psi_s) -
              std::cos(2.0 * fr.psi_s));
}

double remainder_g(const TransformedState& st, const Frame& fr,
                   double rho_min) {
  const double r = st.r, p = st.p, eta = st.eta;
  const double rho = fr.rho_s + r / fr.se1;
  if (rho <= rho_min) throw AmplitudeSingular(rho);
  return -0.5 * fr.v / fr.se1 *
             (std::cos(2.0 * p + 2.0 * fr.psi_s) -
              std::cos(2.0 * fr.psi_s)) +
         fr.f / fr.se1 *
             (std::cos(p + fr.psi_s) / rho -
              std::cos(fr.psi_s) / fr.rho_s) +
         p / (5.0 * eta);
}

// Defects of the truncated solution in the two reduced equations, pulled
// into the deviation flow so that it is the exact pushforward of the
// reduced vector field.
struct Defect {
  double d_rho, d_psi;
};

Defect series_defect(const AsymptoticSolution& sol, double tau) {
  const auto [res_rho, res_psi] = residual(sol, tau);
  return {-res_rho, -res_psi};
}

double lyapunov_l(const TransformedState& st, const AsymptoticSolution& sol,
                  const Frame& fr) {
  const double r = st.r, p = st.p;
  const double v1 =
      (r * g_correction(p, sol) +
       4.0 * std::sqrt(sol.params.lambda) * sol.params.m_star() * r * r * r /
           (3.0 * fr.f)) /
      fr.se3;
  const double v2 = -r * p / (10.0 * st.eta);
  return hamiltonian_h(st, fr) + v1 + v2;
}

}  // namespace

double hamiltonian(const TransformedState& st, const AsymptoticSolution& sol,
                   EnergyPart which) {
  const Frame fr = make_frame(st.eta, sol);
  switch (which) {
    case EnergyPart::H:
      return hamiltonian_h(st, fr);
    case EnergyPart::V1:
      return (st.r * g_correction(st.p, sol) +
              4.0 * std::sqrt(sol.params.lambda) * sol.params.m_star() *
                  st.r * st.r * st.r / (3.0 * fr.f)) /
             fr.se3;
    case EnergyPart::V2:
      return -st.r * st.p / (10.0 * st.eta);
    case EnergyPart::L:
      return lyapunov_l(st, sol, fr);
  }
  return 0.0;
}

TransformedRhs transformed_rhs(const TransformedState& st,
                               const AsymptoticSolution& sol,
                               double rho_min) {
  const Frame fr = make_frame(st.eta, sol);
  const Defect d = series_defect(sol, fr.tau);
  TransformedRhs out;
  out.dr_deta = -dH_dp(st, fr) + d.d_rho;
  out.dp_deta = dH_dr(st, fr) + remainder_g(st, fr, rho_min) +
                d.d_psi / fr.se1;
  return out;
}

double lyapunov_rate(const TransformedState& st,
                     const AsymptoticSolution& sol) {
  const Frame fr = make_frame(st.eta, sol);
  const TransformedRhs flow = transformed_rhs(st, sol);

  const double sqrt_lambda = std::sqrt(sol.params.lambda);
  const double ms = sol.params.m_star();
  const double dL_dr = dH_dr(st, fr) +
                       (g_correction(st.p, sol) +
                        4.0 * sqrt_lambda * ms * st.r * st.r / fr.f) /
                           fr.se3 -
                       st.p / (10.0 * st.eta);
  const double dL_dp = dH_dp(st, fr) +
                       st.r * g_correction_derivative(st.p, sol) / fr.se3 -
                       st.r / (10.0 * st.eta);

  // d/d eta at fixed (r, p): central difference, one Richardson refinement.
  auto l_at = [&](double eta) {
    TransformedState s2{st.r, st.p, eta};
    const Frame f2 = make_frame(eta, sol);
    return lyapunov_l(s2, sol, f2);
  };
  const double h = st.eta * 1e-6;
  const double d1 = (l_at(st.eta + h) - l_at(st.eta - h)) / (2.0 * h);
  const double d2 =
      (l_at(st.eta + 0.5 * h) - l_at(st.eta - 0.5 * h)) / h;
  const double dL_deta = (4.0 * d2 - d1) / 3.0;

  return dL_deta + dL_dr * flow.dr_deta + dL_dp * flow.dp_deta;
}

double quadratic_p_coefficient(const ReducedParams& params, int branch,
                               double psi0) {
  const double ms = params.m_star();
  if (branch <= 2)
    return (params.m - ms * std::cos(psi0)) * params.f / (2.0 * ms);
  return (ms * ms - params.m * params.m) * params.f / (2.0 * params.m * ms);
}

bool lyapunov_applicable(const ReducedParams& params, int branch) {
  const double ms = params.m_star();
  const double m = params.m;
  if (std::abs(std::abs(m) - ms) <=
      kDegenerateClassifyRelTol * std::max(std::abs(m), ms))
    return false;
  switch (branch) {
    case 1: return m > ms;
    case 2: return m > -ms;
    case 3:
    case 4: return m < -ms;
    default: return false;
  }
}

double counter_uniform(std::uint64_t seed, std::uint64_t index,
                       std::uint64_t lane) {
  // splitmix64 on a combined counter
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index * 4ULL + lane + 1ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

LyapunovReport check_bounds(const AsymptoticSolution& sol,
                            const LyapunovDomain& domain,
                            std::uint64_t n_samples, std::uint64_t seed) {
  LyapunovReport rep;
  rep.branch = sol.branch;
  rep.domain = domain;
  rep.applicable = lyapunov_applicable(sol.params, sol.branch);
  rep.samples = n_samples;
  rep.min_margin = std::numeric_limits<double>::infinity();

  const double sqrt_lambda = std::sqrt(sol.params.lambda);
  const double c =
      quadratic_p_coefficient(sol.params, sol.branch, sol.psi0);

  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const double u1 = counter_uniform(seed, i, 0);
    const double u2 = counter_uniform(seed, i, 1);
    const double u3 = counter_uniform(seed, i, 2);
    const double d = domain.d_star * std::sqrt(u1);
    const double theta = 2.0 * M_PI * u2;
    TransformedState st;
    st.r = d * std::cos(theta);
    st.p = d * std::sin(theta);
    st.eta = domain.eta_star * std::pow(10.0, 3.0 * u3);

    const double q = sqrt_lambda * st.r * st.r + c * st.p * st.p;
    const double l = hamiltonian(st, sol, EnergyPart::L);
    const double rate = lyapunov_rate(st, sol);

    const double lower = l - (1.0 - domain.eps1) * q;
    const double upper = (1.0 + domain.eps1) * q - l;
    const double decay =
        -(1.0 - domain.eps2) * q / (5.0 * st.eta) - rate;

    if (lower < 0.0 || upper < 0.0) rep.bound_violations++;
    if (decay < 0.0) rep.derivative_violations++;
    rep.min_margin = std::min({rep.min_margin, lower, upper, decay});
  }
  return rep;
}

std::optional<LyapunovDomain> search_domain(const AsymptoticSolution& sol,
                                            std::uint64_t n_samples,
                                            std::uint64_t seed) {
  for (double eta_star : {1e3, 1e4, 1e5}) {
    for (double d_star : {0.05, 0.02, 0.01, 0.005}) {
      LyapunovDomain dom{d_star, eta_star, 0.5, 0.5};
      const LyapunovReport rep = check_bounds(sol, dom, n_samples, seed);
      if (rep.bound_violations == 0 && rep.derivative_violations == 0 &&
          rep.min_margin > 0.0)
        return dom;
    }
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const LyapunovDomain& d) {
  j = nlohmann::json{{"d_star", d.d_star},
                     {"eta_star", d.eta_star},
                     {"eps1", d.eps1},
                     {"eps2", d.eps2}};
}

void from_json(const nlohmann::json& j, LyapunovDomain& d) {
  j.at("d_star").get_to(d.d_star);
  j.at("eta_star").get_to(d.eta_star);
  j.at("eps1").get_to(d.eps1);
  j.at("eps2").get_to(d.eps2);
}

void to_json(nlohmann::json& j, const LyapunovReport& r) {
  j = nlohmann::json{{"branch", r.branch},
                     {"domain", r.domain},
                     {"applicable", r.applicable},
                     {"samples", r.samples},
                     {"bound_violations", r.bound_violations},
                     {"derivative_violations", r.derivative_violations},
                     {"min_margin", r.min_margin}};
}

}  // namespace autores
