#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>

#include "autores/integrate.hpp"
#include "autores/lyapunov.hpp"

using namespace autores;

namespace {

AsymptoticSolution branch1_m4(int K = 6) {
  return build_series(ReducedParams{1.0, 1.0, 4.0}, 1, K);
}

nlohmann::json load_fixtures() {
  const char* dir = std::getenv("AUTORES_FIXTURES");
  REQUIRE(dir != nullptr);
  std::ifstream in(std::string(dir) + "/lyapunov_domains.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("transform round trip and origin mapping") {
  auto sol = branch1_m4();
  auto st = to_transformed(3.0, 0.2, 16.0, sol);
  CHECK(st.eta == doctest::Approx(25.6).epsilon(1e-14));

  auto back = from_transformed(st, sol);
  CHECK(back.rho == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(back.psi == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(back.tau == doctest::Approx(16.0).epsilon(1e-12));

  const auto [rs, ps] = eval_solution(sol, 16.0);
  auto origin = to_transformed(rs, ps, 16.0, sol);
  CHECK(origin.r == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(origin.p == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("energy parts vanish at the origin") {
  auto sol = branch1_m4();
  TransformedState st{0.0, 0.0, 1e4};
  for (auto part :
       {EnergyPart::H, EnergyPart::V1, EnergyPart::V2, EnergyPart::L})
    CHECK(hamiltonian(st, sol, part) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("small-deviation quadratic form of L") {
  auto sol = branch1_m4();
  TransformedState st{0.01, 0.01, 1e6};
  // sqrt(lambda) r^2 + (m - m_* cos psi0) f / (2 m_*) p^2 = 4.5e-4
  const double quad = 1e-4 + 3.5e-4;
  CHECK(hamiltonian(st, sol, EnergyPart::L) ==
        doctest::Approx(quad).epsilon(0.05));

  // branches 3,4: coefficient (m_*^2 - m^2) f / (2 m m_*), positive at
  // m < -m_*
  ReducedParams neg{1.0, 1.0, -4.0};
  CHECK(quadratic_p_coefficient(neg, 3, std::acos(-0.125)) > 0.0);
  auto s3 = build_series(neg, 3, 6);
  TransformedState st3{0.01, 0.01, 1e6};
  const double q3 = 1e-4 + quadratic_p_coefficient(neg, 3, s3.psi0) * 1e-4;
  CHECK(hamiltonian(st3, s3, EnergyPart::L) ==
        doctest::Approx(q3).epsilon(0.05));
}

TEST_CASE("unified g reduces to the (1 - cos) form on branches 1, 2") {
  for (int branch : {1, 2}) {
    auto sol = build_series(ReducedParams{1.0, 1.0, 4.0}, branch, 4);
    const double c0 = std::cos(sol.psi0);
    for (double p : {-0.4, -0.1, 0.2, 0.5}) {
      const double direct = 0.5 * 4.0 * (1.0 - std::cos(2.0 * p)) -
                            2.0 * 0.5 * c0 * (1.0 - std::cos(p));
      CHECK(g_correction(p, sol) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("pushforward consistency with the reduced vector field") {
  auto sol = branch1_m4();
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> utau(2.0, 200.0), du(-0.5, 0.5),
      dpsi(-1.0, 1.0);
  double max_rel = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double tau = utau(rng);
    const auto [rs, ps] = eval_solution(sol, tau);
    const double rho = rs + du(rng);
    const double psi = ps + dpsi(rng);

    const auto st = to_transformed(rho, psi, tau, sol);
    const auto fl = transformed_rhs(st, sol);

    const auto rhs = reduced_rhs({rho, psi, tau}, sol.params, true);
    const auto [drs, dps] = eval_solution_derivative(sol, tau);
    const double t14 = std::pow(tau, 0.25);
    const double dr_deta =
        (rhs.drho_dtau - drs) + 0.25 * (rho - rs) / std::pow(tau, 1.25) * t14;
    const double dp_deta = (rhs.dpsi_dtau - dps) / t14;

    max_rel = std::max(
        max_rel, std::abs(fl.dr_deta - dr_deta) /
                     std::max(1.0, std::abs(dr_deta)));
    max_rel = std::max(
        max_rel, std::abs(fl.dp_deta - dp_deta) /
                     std::max(1.0, std::abs(dp_deta)));
  }
  CHECK(max_rel <= 1e-8);
}

TEST_CASE("origin is fixed up to the truncation defect") {
  for (int K : {2, 4}) {
    auto sol = branch1_m4(K);
    double prev = 1e300;
    for (double eta : {1e3, 1e4, 1e5}) {
      auto fl = transformed_rhs({0.0, 0.0, eta}, sol);
      const double norm = std::hypot(fl.dr_deta, fl.dp_deta);
      // decay exponent 2 (K + 1) / 5 per decade, with slack factor 3
      CHECK(norm < 3.0 * prev * std::pow(10.0, -2.0 * (K + 1) / 5.0));
      prev = norm;
    }
  }
}

TEST_CASE("linearization of the flow matches the jacobian entries") {
  auto sol = branch1_m4();
  for (double eta : {1e3, 1e5}) {
    auto lp = jacobian(sol, eta);
    const double h = 1e-6;
    auto col = [&](double dr, double dp) {
      auto plus = transformed_rhs({dr * h, dp * h, eta}, sol);
      auto minus = transformed_rhs({-dr * h, -dp * h, eta}, sol);
      return std::array<double, 2>{(plus.dr_deta - minus.dr_deta) / (2 * h),
                                   (plus.dp_deta - minus.dp_deta) / (2 * h)};
    };
    auto c1 = col(1.0, 0.0);
    auto c2 = col(0.0, 1.0);
    CHECK(std::abs(c1[0] - lp.matrix[0][0]) < 1e-6);
    CHECK(std::abs(c2[0] - lp.matrix[0][1]) < 1e-6);
    CHECK(std::abs(c1[1] - lp.matrix[1][0]) < 1e-6);
    CHECK(std::abs(c2[1] - lp.matrix[1][1]) < 1e-6);
  }
}

TEST_CASE("rate is negative near the solution and matches the leading term") {
  auto sol = branch1_m4();
  TransformedState st{0.05, 0.05, 1e5};
  const double rate = lyapunov_rate(st, sol);
  CHECK(rate < 0.0);
  const double lead = (1.0 * 0.05 * 0.05 + 3.5 * 0.05 * 0.05) / (5.0 * 1e5);
  CHECK(std::abs(rate) > lead / 3.0);
  CHECK(std::abs(rate) < lead * 3.0);

  const double at_origin = lyapunov_rate({0.0, 0.0, 1e5}, sol);
  CHECK(std::abs(at_origin) < 1e-12);
}

TEST_CASE("unstable regime shows sign-indefinite sampled rates") {
  auto sol = build_series(ReducedParams{1.0, 1.0, 0.0}, 1, 6);
  int positive = 0, negative = 0;
  for (int i = 0; i < 200; ++i) {
    TransformedState st;
    const double d = 0.05 * std::sqrt(counter_uniform(5, i, 0));
    const double th = 2.0 * M_PI * counter_uniform(5, i, 1);
    st.r = d * std::cos(th);
    st.p = d * std::sin(th);
    st.eta = 1e4 * std::pow(10.0, counter_uniform(5, i, 2));
    (lyapunov_rate(st, sol) > 0.0 ? positive : negative)++;
  }
  CHECK(positive > 0);
  CHECK(negative > 0);
}

TEST_CASE("frozen fixture domains verify with zero violations") {
  const auto fixtures = load_fixtures();
  for (const auto& fx : fixtures) {
    ReducedParams prm;
    prm.lambda = fx["params"]["lambda"];
    prm.f = fx["params"]["f"];
    prm.m = fx["params"]["m"];
    auto sol = build_series(prm, fx["branch"], fx["K"]);
    LyapunovDomain dom = fx["domain"];
    auto rep = check_bounds(sol, dom, 2000, fx["seed"]);
    CHECK(rep.applicable);
    CHECK(rep.bound_violations == 0);
    CHECK(rep.derivative_violations == 0);
    CHECK(rep.min_margin > 0.0);
  }
}

TEST_CASE("margins shrink to zero as the domain radius shrinks") {
  auto sol = branch1_m4();
  double prev = 1e300;
  for (double d_star : {0.04, 0.02, 0.01, 0.005}) {
    LyapunovDomain dom{d_star, 1e7, 0.5, 0.5};
    auto rep = check_bounds(sol, dom, 500, 7);
    CHECK(rep.min_margin > 0.0);
    CHECK(rep.min_margin < prev);
    prev = rep.min_margin;
  }
}

TEST_CASE("sample sequence is a pure function of seed and index") {
  CHECK(counter_uniform(1, 10, 0) == counter_uniform(1, 10, 0));
  CHECK(counter_uniform(1, 10, 0) != counter_uniform(2, 10, 0));
  CHECK(counter_uniform(1, 10, 1) != counter_uniform(1, 11, 1));
}

TEST_CASE("L decays along integrated deviation trajectories") {
  auto sol = branch1_m4();
  VectorField field = [&](double eta, const StateVec& y) {
    auto fl = transformed_rhs({y[0], y[1], eta}, sol);
    return StateVec{fl.dr_deta, fl.dp_deta};
  };
  const double eta0 = 1e4;
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-9;
  cfg.initial_step = 0.05;
  cfg.max_step = 1.0;
  cfg.sample_interval = 100.0;
  const double amp = 0.02 / std::sqrt(2.0);
  auto traj = integrate(field, {amp, amp}, eta0, 2e5, cfg);
  REQUIRE(traj.terminated_by == Termination::EndOfSpan);

  std::vector<double> ell, etas;
  for (const auto& s : traj.samples) {
    ell.push_back(
        hamiltonian({s.y[0], s.y[1], s.t}, sol, EnergyPart::L));
    etas.push_back(s.t);
  }
  // non-increasing after transient (skip the first few samples)
  for (std::size_t i = 6; i < ell.size(); ++i)
    CHECK(ell[i] <= ell[i - 1] * (1.0 + 1e-9));

  // fitted decay exponent beta' in (0, 1/5] up to fit error
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 5; i < ell.size(); ++i) {
    const double lx = std::log(etas[i]), ly = std::log(ell[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  const double beta = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(beta > 0.0);
  CHECK(beta <= 0.25);
}

TEST_CASE("back-transformed phase converges to the root at a positive rate") {
  auto sol = branch1_m4();
  ReducedParams prm = sol.params;
  VectorField field = [&](double tau, const StateVec& y) {
    auto d = reduced_rhs({y[0], y[1], tau}, prm, true);
    return StateVec{d.drho_dtau, d.dpsi_dtau};
  };
  const double tau0 = 50.0;
  const auto [rs, ps] = eval_solution(sol, tau0);
  IntegratorConfig cfg;
  cfg.rel_tol = cfg.abs_tol = 1e-10;
  cfg.initial_step = 0.01;
  cfg.max_step = 0.5;
  cfg.sample_interval = 1.0;
  auto traj = integrate(field, {rs + 0.01, ps + 0.01}, tau0, 2000.0, cfg);
  REQUIRE(traj.terminated_by == Termination::EndOfSpan);

  // envelope of |psi - psi_*| over windows; fit its decay exponent
  std::vector<double> lx, ly;
  const std::size_t window = 100;
  for (std::size_t start = 0; start + window <= traj.samples.size();
       start += window) {
    double peak = 0.0, tmid = 0.0;
    for (std::size_t i = start; i < start + window; ++i) {
      const auto& s = traj.samples[i];
      const auto [r2, p2] = eval_solution(sol, s.t);
      (void)r2;
      peak = std::max(peak, std::abs(s.y[1] - p2));
      tmid = s.t;
    }
    lx.push_back(std::log(tmid));
    ly.push_back(std::log(peak));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = static_cast<int>(lx.size());
  for (int i = 0; i < n; ++i) {
    sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(-slope > 0.0);  // fitted s' > 0
}
