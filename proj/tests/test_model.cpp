#include <doctest.h>

#include <cmath>
#include <vector>

#include "autores/model.hpp"

using namespace autores;

TEST_CASE("nu envelope") {
  CHECK(nu(0.0, 4.0) == doctest::Approx(4.0));
  CHECK(nu(3.0, 4.0) == doctest::Approx(2.0));
  for (double tau : {0.0, 1.0, 17.5}) CHECK(nu(tau, 0.0) == 0.0);
}

TEST_CASE("reduced vector field by hand substitution") {
  ReducedParams prm{1.0, 1.0, 0.0};
  auto r1 = reduced_rhs({1.0, 0.0, 0.0}, prm, false);
  CHECK(r1.drho_dtau == doctest::Approx(0.0));
  CHECK(r1.dpsi_dtau == doctest::Approx(2.0));

  auto r2 = reduced_rhs({1.0, M_PI, 1.0}, prm, false);
  CHECK(r2.drho_dtau == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r2.dpsi_dtau == doctest::Approx(-1.0));
}

TEST_CASE("f -> -f, psi -> psi + pi symmetry of the vector field") {
  ReducedParams prm{1.3, 0.7, 2.1};
  ReducedParams neg = prm;
  neg.f = -prm.f;
  for (double psi : {0.1, 1.9, -2.4}) {
    ReducedState s{1.7, psi, 3.0};
    ReducedState shifted{1.7, psi + M_PI, 3.0};
    auto a = reduced_rhs(s, prm, true);
    auto b = reduced_rhs(shifted, neg, true);
    CHECK(a.drho_dtau == doctest::Approx(b.drho_dtau).epsilon(1e-12));
    CHECK(a.dpsi_dtau == doctest::Approx(b.dpsi_dtau).epsilon(1e-12));
  }
}

TEST_CASE("amplitude floor guards the psi equation") {
  ReducedParams prm{1.0, 1.0, 0.0};
  CHECK_THROWS_AS(reduced_rhs({1e-9, 0.0, 0.0}, prm, false),
                  AmplitudeSingular);
}

TEST_CASE("parametric flag off agrees bitwise with m = 0") {
  ReducedParams prm{1.0, 1.0, 0.0};
  ReducedState s{0.9, 0.4, 2.0};
  auto a = reduced_rhs(s, prm, false);
  auto b = reduced_rhs(s, prm, true);
  CHECK(a.drho_dtau == b.drho_dtau);
  CHECK(a.dpsi_dtau == b.dpsi_dtau);
}

TEST_CASE("oscillator right-hand side") {
  OscillatorParams prm{1e-3, 5e-5, 1.0 / 6.0, 4.0, 0.0};
  auto a = oscillator_rhs({0.0, 0.0, 0.0}, prm);
  CHECK(a.du_dt == 0.0);
  CHECK(a.dv_dt == doctest::Approx(prm.eps * prm.f0));

  // zero of the drive: phi(t) = pi/2
  double t = (1.0 - std::sqrt(1.0 - 4.0 * prm.alpha * M_PI_2)) /
             (2.0 * prm.alpha);
  auto b = oscillator_rhs({0.0, 0.0, t}, prm);
  CHECK(b.du_dt == 0.0);
  CHECK(b.dv_dt == doctest::Approx(0.0).epsilon(1e-10));

  // eps = 0 keeps the origin fixed
  OscillatorParams frozen{0.0, 0.1, 1.0, 3.0, 2.0};
  // eps = 0 is outside the params invariant but the field must still vanish
  auto c = oscillator_rhs({0.0, 0.0, 7.0}, frozen);
  CHECK(c.du_dt == 0.0);
  CHECK(c.dv_dt == 0.0);
}

TEST_CASE("energy") {
  OscillatorParams prm;
  prm.gamma = 1.0 / 6.0;
  CHECK(energy({0.0, 0.0, 0.0}, prm) == 0.0);
  CHECK(energy({0.0, 1.0, 0.0}, prm) == doctest::Approx(0.5));
  CHECK(energy({1.0, 0.0, 0.0}, prm) == doctest::Approx(11.0 / 24.0));
}

TEST_CASE("oscillator phase and mismatch") {
  OscillatorParams prm{1e-3, 5e-5, 1.0 / 6.0, 4.0, 0.0};
  CHECK(phase_mismatch({1.0, 0.0, 0.0}, prm) == doctest::Approx(0.0));
  // limit u -> 0+ with v = -1: Phi -> pi/2
  CHECK(oscillator_phase({1e-300, -1.0, 0.0}) == doctest::Approx(M_PI_2));
  CHECK_THROWS_AS(oscillator_phase({0.0, 0.0, 0.0}), PhaseUndefined);
}

TEST_CASE("phase unwrapping removes 2 pi jumps") {
  std::vector<double> ph = {3.0, -3.1, -2.9, 3.1, 3.0};
  unwrap_inplace(ph);
  for (std::size_t i = 1; i < ph.size(); ++i)
    CHECK(std::abs(ph[i] - ph[i - 1]) < M_PI);
}

TEST_CASE("two-scale reduction formulas") {
  OscillatorParams a{1e-3, 0.5e-4, 1.0 / 6.0, 4.0, 0.0};
  auto ra = reduce_params(a);
  CHECK(ra.lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ra.m == 0.0);
  CHECK(ra.f == doctest::Approx(0.5).epsilon(1e-12));

  OscillatorParams b{1e-3, 0.5e-4, 1.0 / 6.0, 1.0, 5.0};
  auto rb = reduce_params(b);
  CHECK(rb.lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rb.m == doctest::Approx(1.25));
  CHECK(rb.f == doctest::Approx(0.125).epsilon(1e-12));

  // doubling h0 doubles m, leaves lambda and f fixed
  OscillatorParams c = b;
  c.h0 *= 2.0;
  auto rc = reduce_params(c);
  CHECK(rc.m == doctest::Approx(2.0 * rb.m));
  CHECK(rc.lambda == rb.lambda);
  CHECK(rc.f == rb.f);

  OscillatorParams bad = b;
  bad.alpha = -1e-4;
  CHECK_THROWS_AS(reduce_params(bad), NonPositiveLambda);
}
