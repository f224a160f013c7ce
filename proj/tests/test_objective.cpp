#include <doctest.h>

#include <random>

#include "arp/errors.hpp"
#include "arp/objective.hpp"
#include "support/oracles.hpp"

using arp::Real;

TEST_CASE("example A values") {
  const auto f = arp::builtin_example_A();
  CHECK(f.value(Real(1)) == Real(-1));
  CHECK(f.derivative(1, Real(1)).is_zero());
  CHECK(f.derivative(2, Real(1)) == Real(12));
  CHECK(f.derivative(3, Real(1)) == Real(48));
  CHECK(f.derivative(4, Real(-3)) == Real(72));
  CHECK(f.derivative(9, Real(2)).is_zero());
  const auto& m = f.require_meta();
  CHECK(m.x_star == Real(1));
  CHECK(m.f_star == Real(-1));
  CHECK(m.q == 2);
  CHECK(m.L_p == Real(72));
  CHECK(m.lipschitz_order == 3);
  CHECK_THROWS_AS((void)f.derivative(-1, Real(0)), arp::DomainError);
}

TEST_CASE("example A factorization identity") {
  const auto f = arp::builtin_example_A();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Real x = oracle::random_real(rng, -3, 3);
    const Real rhs = (x - Real(1)) * (x - Real(1)) * (Real(3) * x * x + Real(2) * x + Real(1));
    CHECK(arp::abs(f.value(x) + Real(1) - rhs) <= Real::pow2(-490));
  }
}

TEST_CASE("example B values and preconditions") {
  const auto f = arp::builtin_example_B(4, 4);
  CHECK(f.value(Real(1)) == Real(9) / Real(20));
  CHECK(f.derivative(1, Real(1)) == Real(2));
  CHECK(f.derivative(5, Real::from_string("0.37")) == Real(24));
  CHECK(f.derivative(6, Real(2)).is_zero());
  CHECK(f.require_meta().L_p == Real(24));
  CHECK(f.require_meta().x_star.is_zero());
  CHECK(f.id == "exampleB(4,4)");
  CHECK_THROWS_AS((void)arp::builtin_example_B(4, 3), arp::DomainError);
  CHECK_THROWS_AS((void)arp::builtin_example_B(3, 4), arp::DomainError);
  CHECK_THROWS_AS((void)arp::builtin_example_B(4, 0), arp::DomainError);
  CHECK_NOTHROW((void)arp::builtin_example_B(2, 2));
  CHECK_NOTHROW((void)arp::builtin_example_B(6, 6));
}

TEST_CASE("polynomial oracles match binomial expansion") {
  std::mt19937_64 rng(8);
  for (const auto& f : {arp::builtin_example_A(), arp::builtin_example_B(4, 4), arp::builtin_example_B(5, 4)}) {
    const auto& a = f.polynomial->coefficients();
    for (int i = 0; i < 20; ++i) {
      const Real x = oracle::random_real(rng, -1.5, 1.5);
      const auto shifted = oracle::shifted_coefficients(a, x);
      for (std::size_t j = 0; j < shifted.size(); ++j) {
        const Real want = shifted[j] * Real::factorial(static_cast<int>(j));
        CHECK(arp::abs(f.derivative(static_cast<int>(j), x) - want) <= Real::pow2(-490) * (Real(1) + arp::abs(want)));
      }
    }
  }
}

TEST_CASE("finite difference agreement") {
  const auto a = arp::builtin_example_A();
  const auto b = arp::builtin_example_B(4, 4);
  CHECK(arp::finite_difference_check(a, 1, Real::from_string("0.5"), Real::from_string("1e-20")) <
        Real::from_string("1e-35"));
  CHECK(arp::finite_difference_check(b, 3, Real::from_string("0.2"), Real::from_string("1e-20")) <
        Real::from_string("1e-35"));
  CHECK(arp::finite_difference_check(a, 6, Real::from_string("0.3"), Real::from_string("1e-3")) <=
        Real::pow2(-500));

  // Second-order rate: shrinking h tenfold shrinks the discrepancy about a hundredfold.
  // Central differences of f'' are exact for example A, so only orders with a nonzero error term count.
  for (const auto& [f, top] : {std::pair{&a, 2}, std::pair{&b, 3}}) {
    for (int order = 1; order <= top; ++order) {
      const Real x = Real::from_string("0.3");
      const Real e1 = arp::finite_difference_check(*f, order, x, Real::from_string("1e-4"));
      const Real e2 = arp::finite_difference_check(*f, order, x, Real::from_string("1e-5"));
      const Real rate = e1 / e2;
      CHECK(rate > Real(90));
      CHECK(rate < Real(110));
    }
  }
}

TEST_CASE("uniform convexity audit of the built-ins") {
  const auto a = arp::audit_uniform_convexity(arp::builtin_example_A(), 101);
  CHECK(a.consistent());
  CHECK(a.points == 101);
  for (int q : {2, 4, 6}) {
    for (int p : {q, q + 1, q + 2}) {
      if (q == 2 && p < 2) continue;
      const auto rep = arp::audit_uniform_convexity(arp::builtin_example_B(p, q), 101);
      INFO("p=" << p << " q=" << q);
      CHECK(rep.consistent());
    }
  }
}

TEST_CASE("inconsistent metadata is flagged") {
  auto f = arp::builtin_example_A();
  f.meta->mu_q = Real(100);
  const auto rep = arp::audit_uniform_convexity(f, 51);
  CHECK_FALSE(rep.consistent());
  CHECK(rep.growth < Real(0));
}

TEST_CASE("example B with modulus 1/2 satisfies growth but not gradient monotonicity") {
  auto f = arp::builtin_example_B(4, 4);
  f.meta->mu_q = Real::rational(1, 2);
  f.meta->r_q = Real::rational(1, 2);
  const auto rep = arp::audit_uniform_convexity(f, 101);
  CHECK(rep.growth >= Real(0));
  CHECK(rep.gradient_monotonicity < Real(0));
  CHECK_FALSE(rep.consistent());
}

TEST_CASE("metadata validation") {
  arp::ConvexityMeta m = arp::builtin_example_A().require_meta();
  CHECK_NOTHROW(m.validate());
  m.q = 1;
  CHECK_THROWS_AS(m.validate(), arp::DomainError);
  m.q = 2;
  m.nu = Real(0);
  CHECK_THROWS_AS(m.validate(), arp::DomainError);
  const auto g = arp::make_polynomial_objective("cubic", arp::Polynomial1D::from_strings({"1", "2", "3", "4"}));
  CHECK_THROWS_AS((void)g.require_meta(), arp::DomainError);
  CHECK_THROWS_AS((void)arp::audit_uniform_convexity(g, 10), arp::DomainError);
}

TEST_CASE("decrease and taylor remainder are exact for polynomials") {
  const auto f = arp::builtin_example_A();
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const Real x = oracle::random_real(rng, -2, 2);
    const Real y = oracle::random_real(rng, -2, 2);
    CHECK(arp::abs(f.decrease(x, y) - (f.value(x) - f.value(y))) <= Real::pow2(-490));
    // f - t_x^3 = 3 (y - x)^4.
    const Real d = y - x;
    CHECK(arp::abs(f.taylor_remainder(0, x, y, 3) - Real(3) * arp::pow(d, 4L)) <= Real::pow2(-490));
    CHECK(arp::abs(f.taylor_remainder(1, x, y, 3) - Real(12) * arp::pow(d, 3L)) <= Real::pow2(-490));
    CHECK(arp::abs(f.taylor_remainder(2, x, y, 3) - Real(36) * d * d) <= Real::pow2(-490));
  }
  // Near the minimizer the difference keeps full relative accuracy.
  const Real x = Real(1) + Real::from_string("1e-60");
  const Real y = Real(1) + Real::from_string("1e-61");
  auto shifted = [](const Real& a) { return Real(6) * a * a + Real(8) * arp::pow(a, 3L) + Real(3) * arp::pow(a, 4L); };
  const Real want = shifted(x - Real(1)) - shifted(y - Real(1));
  CHECK(arp::abs(f.decrease(x, y) - want) <= Real::pow2(-400) * want);
}
