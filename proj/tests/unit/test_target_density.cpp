#include <doctest.h>

#include <cmath>
#include <limits>

#include "qsample/target_density.hpp"
#include "test_util.hpp"

using namespace qsample;
using qsample::test::random_params;

namespace {

Vector central_difference(const PullbackDensity& pd, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (pd.log_density(xp) - pd.log_density(xm)) / (2 * h);
  }
  return g;
}

// Richardson-extrapolated central differences, O(h^4)
Vector fd_gradient(const PullbackDensity& pd, const Vector& x, double h = 1e-6) {
  return (4 * central_difference(pd, x, h / 2) - central_difference(pd, x, h)) / 3;
}

double normwise_rel(const Vector& a, const Vector& ref) {
  return (a - ref).cwiseAbs().maxCoeff() / std::max(ref.cwiseAbs().maxCoeff(), 1e-8);
}

TargetDensity prior_named(const std::string& which, int k) {
  if (which == "jeff") return TargetDensity::jeffreys();
  if (which == "conj") return TargetDensity::conjugate_unit(k);
  return TargetDensity::primitive();
}

}  // namespace

TEST_SUITE("target-density") {

TEST_CASE("log_prior examples") {
  const ProbVector q = ProbVector::Constant(4, 0.25);
  CHECK(log_prior(TargetDensity::primitive(), q) == 0);
  CHECK(log_prior(TargetDensity::jeffreys(), q) == doctest::Approx(4 * std::log(2.0)).epsilon(1e-15));
  CHECK(log_prior(TargetDensity::jeffreys(), q) == doctest::Approx(2.7725887222397811).epsilon(1e-15));
  CHECK(log_prior(TargetDensity::conjugate_unit(4), q) == doctest::Approx(4 * std::log(0.25)).epsilon(1e-15));
  ProbVector edge(4);
  edge << 0.5, 0.5, 0, 0;
  CHECK(log_prior(TargetDensity::jeffreys(), edge) == -std::numeric_limits<double>::infinity());
  CHECK(log_prior(TargetDensity::conjugate_unit(4), edge) == -std::numeric_limits<double>::infinity());
  Vector beta(4);
  beta << 2, 1, 0, 0;
  CHECK(std::isfinite(log_prior(TargetDensity::conjugate(beta), edge)));
  CHECK(log_prior(TargetDensity::primitive(), edge) == 0);
  CHECK_THROWS_AS(log_prior(TargetDensity::conjugate_unit(3), q), DimensionError);
  CHECK_THROWS_AS(TargetDensity::conjugate(Vector::Constant(3, -1.0)), std::invalid_argument);
}

TEST_CASE("grad_log_prior examples and finite differences") {
  const ProbVector half = ProbVector::Constant(2, 0.5);
  CHECK(grad_log_prior(TargetDensity::primitive(), half).isZero(0));
  CHECK(grad_log_prior(TargetDensity::jeffreys(), half)(0) == doctest::Approx(-1.0));
  CHECK(grad_log_prior(TargetDensity::conjugate_unit(2), half)(1) == doctest::Approx(2.0));
  ProbVector zero(2);
  zero << 1, 0;
  CHECK_THROWS_AS(grad_log_prior(TargetDensity::jeffreys(), zero), NumericalError);

  Rng rng(7);
  Vector beta(5);
  beta << 1, 0.5, 2, 0, 3;
  const TargetDensity priors[] = {TargetDensity::jeffreys(), TargetDensity::conjugate(beta)};
  for (const TargetDensity& t : priors) {
    for (int i = 0; i < 100; ++i) {
      Vector p(5);
      for (int k = 0; k < 5; ++k) p(k) = 0.05 + rng.uniform();
      const Vector g = grad_log_prior(t, p);
      for (int k = 0; k < 5; ++k) {
        Vector pp = p, pm = p;
        const double h = 1e-6 * p(k);
        pp(k) += h;
        pm(k) -= h;
        const double fd = (log_prior(t, pp) - log_prior(t, pm)) / (2 * h);
        CHECK(std::abs(fd - g(k)) <= 1e-6 * std::max(1.0, std::abs(g(k))));
      }
    }
  }
}

TEST_CASE("pull-back construction rules") {
  CHECK_THROWS_AS(PullbackDensity(make_trine(), TargetDensity::primitive(), PullbackMode::ic_exact),
                  std::invalid_argument);
  CHECK_THROWS_AS(PullbackDensity::for_povm(make_tetrahedron(), TargetDensity::conjugate_unit(3)), DimensionError);
  CHECK(PullbackDensity::for_povm(make_trine(), TargetDensity::primitive()).mode() == PullbackMode::nic_state_space);
  CHECK(PullbackDensity::for_povm(make_pauli(), TargetDensity::primitive()).mode() == PullbackMode::ic_exact);
}

TEST_CASE("closed-form and QR log volumes agree") {
  Rng rng(17);
  for (const char* name : {"tetrahedron", "pauli", "trine", "crosshair", "qutrit-sic", "2tthd", "tat", "bb84"}) {
    const PullbackDensity pd = PullbackDensity::for_povm(make_povm(name), TargetDensity::primitive());
    for (int i = 0; i < 20; ++i) {
      const StateParams x = random_params(pd.dim(), rng);
      INFO(name);
      CHECK(std::abs(pd.log_volume_qr(x) - pd.log_volume_closed_form(x)) < 1e-9);
    }
  }
}

TEST_CASE("log-domain value matches the direct product at d=2") {
  Rng rng(19);
  for (const char* name : {"tetrahedron", "pauli"}) {
    const Povm povm = make_povm(name);
    for (const char* prior : {"prim", "jeff", "conj"}) {
      const PullbackDensity pd =
          PullbackDensity::for_povm(povm, prior_named(prior, povm.outcome_count()), JacobianRoute::qr);
      for (int i = 0; i < 50; ++i) {
        const StateParams x = random_params(2, rng);
        const ProbVector p = born_probabilities(povm, params_to_state(x));
        double w = 1;
        const Vector e = prior_exponents(pd.target(), povm.outcome_count());
        for (int k = 0; k < p.size(); ++k) w *= std::pow(p(k), e(k));
        const double direct = w * std::abs(pd.jacobian(x).determinant());
        CHECK(std::abs(std::exp(log_pullback(pd, x)) - direct) <= 1e-10 * direct);
      }
    }
  }
}

TEST_CASE("gradients match full central finite differences") {
  Rng rng(23);
  struct Case {
    const char* povm;
    int points;
  };
  const Case cases[] = {{"tetrahedron", 40}, {"pauli", 20}, {"trine", 20}, {"crosshair", 20},
                        {"qutrit-sic", 20},  {"2tthd", 8},  {"tat", 8},    {"bb84", 8}};
  for (const Case& c : cases) {
    const Povm povm = make_povm(c.povm);
    for (const char* prior : {"prim", "jeff", "conj"}) {
      const PullbackDensity cf = PullbackDensity::for_povm(povm, prior_named(prior, povm.outcome_count()));
      const PullbackDensity qr = cf.with_route(JacobianRoute::qr);
      double worst_cf = 0, worst_qr = 0;
      for (int i = 0; i < c.points; ++i) {
        const StateParams x = random_params(povm.dim(), rng, 1.0);
        const Vector fd = fd_gradient(cf, x.flat());
        worst_cf = std::max(worst_cf, normwise_rel(grad_log_pullback(cf, x), fd));
        if (i < c.points / 2) worst_qr = std::max(worst_qr, normwise_rel(grad_log_pullback(qr, x), fd));
      }
      INFO(c.povm << " " << prior << " closed-form " << worst_cf << " qr " << worst_qr);
      CHECK(worst_cf <= 1e-5);
      CHECK(worst_qr <= 1e-5);
    }
  }
}

TEST_CASE("primitive prior gradient is the log-det gradient alone") {
  Rng rng(29);
  const PullbackDensity pd = PullbackDensity::for_povm(make_tetrahedron(), TargetDensity::primitive());
  for (int i = 0; i < 20; ++i) {
    const StateParams x = random_params(2, rng);
    CHECK((grad_log_pullback(pd, x) - grad_log_state_volume(x)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("linearly related POVMs differ by a constant") {
  Rng rng(31);
  const PullbackDensity tet =
      PullbackDensity::for_povm(make_tetrahedron(), TargetDensity::primitive(), JacobianRoute::qr);
  const PullbackDensity pau = PullbackDensity::for_povm(make_pauli(), TargetDensity::primitive(), JacobianRoute::qr);
  const StateParams ref = default_initial_params(2);
  const double c0 = log_pullback(tet, ref) - log_pullback(pau, ref);
  for (int i = 0; i < 100; ++i) {
    const StateParams x = random_params(2, rng);
    CHECK(std::abs(log_pullback(tet, x) - log_pullback(pau, x) - c0) <= 1e-9);
    if (i < 20) CHECK((grad_log_pullback(tet, x) - grad_log_pullback(pau, x)).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("phase periodicity") {
  Rng rng(37);
  const PullbackDensity pd = PullbackDensity::for_povm(make_qutrit_sic(), TargetDensity::jeffreys());
  for (int i = 0; i < 20; ++i) {
    StateParams x = random_params(3, rng);
    const double a = log_pullback(pd, x);
    x.phi(i % 3) += 2 * M_PI;
    CHECK(std::abs(log_pullback(pd, x) - a) < 1e-9);
  }
}

TEST_CASE("d=8 values stay finite in the log domain") {
  const Povm three = tensor_povm(make_povm("2tthd"), make_tetrahedron(), "3tthd");
  REQUIRE(three.is_ic());
  Rng rng(41);
  for (const char* prior : {"prim", "jeff"}) {
    const PullbackDensity pd = PullbackDensity::for_povm(three, prior_named(prior, 64));
    for (int i = 0; i < 20; ++i) {
      const StateParams x = random_params(8, rng, 1.0);
      const PullbackDensity::Evaluation e = pd.evaluate(x.flat());
      CHECK(std::isfinite(e.log_density));
      CHECK(e.gradient.allFinite());
      // the same volume as a plain product underflows to zero
      if (i == 0) CHECK(std::abs(pd.log_volume_qr(x) - pd.log_volume_closed_form(x)) < 1e-8);
    }
  }
}

TEST_CASE("singular points report -inf and gradient failure") {
  const PullbackDensity pd = PullbackDensity::for_povm(make_tetrahedron(), TargetDensity::primitive());
  const StateParams pole(2, Vector::Zero(2), Vector::Zero(1));
  CHECK(log_pullback(pd, pole) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(grad_log_pullback(pd, pole), NumericalError);
  CHECK(pd.with_route(JacobianRoute::qr).log_density(pole.flat()) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("default initial point is interior") {
  for (int d : {2, 3, 4, 8}) {
    const StateParams x = default_initial_params(d);
    const DensityMatrix rho = params_to_state(x);
    CHECK(check_density(rho.matrix()).min_eigenvalue > 1e-6);
    CHECK(std::isfinite(log_state_volume(x)));
  }
}

}  // TEST_SUITE
