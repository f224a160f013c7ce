#include <doctest.h>

#include <random>

#include "arp/analysis.hpp"
#include "arp/driver.hpp"
#include "arp/errors.hpp"
#include "arp/newton.hpp"
#include "support/oracles.hpp"

using arp::ArpConfig;
using arp::IterationStatus;
using arp::Real;
using arp::RegularizedModel;

namespace {

ArpConfig example_2_1_config() {
  ArpConfig c;
  c.p = 3;
  c.sigma0 = Real(6);
  c.gamma1 = Real::rational(1, 3);
  c.gamma2 = Real(3);
  c.policy = arp::GlobalMin{};
  c.max_iterations = 200;
  c.stop.dist_tol = Real::from_string("1e-100");
  return c;
}

ArpConfig top_config(arp::SelectionPolicy policy) {
  ArpConfig c;
  c.policy = std::move(policy);
  c.stop.dist_tol = Real::from_string("1e-100");
  return c;
}

}  // namespace

TEST_CASE("rho equals one for exact models") {
  const auto cubic = arp::make_polynomial_objective("cubic", arp::Polynomial1D::from_strings({"0", "1", "-2", "1"}));
  const RegularizedModel m(arp::build_taylor(cubic, Real(2), 3), Real(1));
  for (const auto& c : arp::critical_points_1d(m)) {
    if (c.model_change.sign() < 0) CHECK(arp::compute_rho(cubic, m, c.point) == Real(1));
  }
}

TEST_CASE("rho near one once sigma reaches six") {
  const auto f = arp::builtin_example_A();
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const Real x = oracle::random_real(rng, -1.5, 2);
    const Real sigma = Real(6) + oracle::random_real(rng, 0, 30);
    const RegularizedModel m(arp::build_taylor(f, x, 3), sigma);
    if (m.gradient(x).is_zero()) continue;
    const auto sel = arp::select(arp::GlobalMin{}, m, Real(0));
    CHECK(arp::abs(arp::compute_rho(f, m, sel.y) - Real(1)) <= Real::rational(1, 2));
  }
}

TEST_CASE("rho is negative for the far global minimizer") {
  const auto f = arp::builtin_example_A();
  for (const char* xs : {"1.05", "0.95", "1.1"}) {
    const Real x = Real::from_string(xs);
    REQUIRE(f.value(x) <= Real::from_string("-0.9"));
    for (const char* ss : {"2", "1", "0.5"}) {
      const RegularizedModel m(arp::build_taylor(f, x, 3), Real::from_string(ss));
      const auto sel = arp::select(arp::GlobalMin{}, m, Real(0));
      CHECK(arp::compute_rho(f, m, sel.y).sign() < 0);
    }
  }
}

TEST_CASE("rho rejects a nonpositive predicted decrease") {
  const auto f = arp::builtin_example_A();
  const RegularizedModel m(arp::build_taylor(f, Real(2), 3), Real(1));
  CHECK_THROWS_AS((void)arp::compute_rho(f, m, Real(2)), arp::NumericContractError);
  CHECK_THROWS_AS((void)arp::compute_rho(f, m, Real(3)), arp::NumericContractError);
}

TEST_CASE("single steps of the oscillating example") {
  const auto f = arp::builtin_example_A();
  const auto cfg = example_2_1_config();
  const auto ok = arp::arp_step({Real::from_string("1.05"), Real(6)}, cfg, f);
  CHECK(arp::accepted(ok.record.status));
  CHECK(ok.next.sigma == Real(2));
  CHECK(ok.next.x == ok.record.y);
  CHECK(ok.record.taylor_decrease.sign() > 0);

  const auto bad = arp::arp_step({Real::from_string("1.05"), Real(2)}, cfg, f);
  CHECK(bad.record.status == IterationStatus::unsuccessful);
  CHECK(bad.next.x == Real::from_string("1.05"));
  CHECK(bad.next.sigma == Real(6));
  CHECK(bad.record.rho.sign() < 0);
}

TEST_CASE("status thresholds with distinct eta") {
  const auto f = arp::builtin_example_A();
  ArpConfig cfg;
  cfg.eta1 = Real::rational(1, 10);
  cfg.eta2 = Real::rational(9, 10);
  cfg.policy = arp::GlobalMin{};
  std::mt19937_64 rng(13);
  int seen[3] = {0, 0, 0};
  for (int i = 0; i < 200; ++i) {
    const Real x = oracle::random_real(rng, -1, 2);
    const Real sigma = oracle::random_real(rng, 0.05, 8);
    if (f.derivative(1, x).is_zero()) continue;
    const auto r = arp::arp_step({x, sigma}, cfg, f).record;
    switch (r.status) {
      case IterationStatus::very_successful:
        CHECK(r.rho >= cfg.eta2);
        ++seen[0];
        break;
      case IterationStatus::successful:
        CHECK(r.rho >= cfg.eta1);
        CHECK(r.rho < cfg.eta2);
        ++seen[1];
        break;
      case IterationStatus::unsuccessful:
        CHECK(r.rho < cfg.eta1);
        ++seen[2];
        break;
    }
    CHECK(r.taylor_decrease.sign() > 0);
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}

TEST_CASE("exact models are always very successful") {
  const auto quartic = arp::make_polynomial_objective("q", arp::Polynomial1D::from_strings({"1", "-3", "0", "2", "1"}));
  ArpConfig cfg;
  cfg.p = 4;
  cfg.policy = arp::GlobalMin{};
  cfg.max_iterations = 20;
  cfg.stop.grad_tol = Real::from_string("1e-100");
  const auto t = arp::run(cfg, quartic, Real(3));
  REQUIRE(!t.records.empty());
  for (const auto& r : t.records) {
    CHECK(r.status == IterationStatus::very_successful);
    CHECK(r.rho == Real(1));
  }
}

TEST_CASE("top panel configuration converges quickly") {
  const auto f = arp::builtin_example_A();
  const auto t = arp::run(top_config(arp::LocalComponent{}), f, Real::from_string("1.1"));
  CHECK(t.termination != arp::Termination::max_iterations);
  CHECK(arp::abs(t.final_x - Real(1)) < Real::from_string("1e-100"));
  CHECK(t.records.size() < 15);
}

TEST_CASE("oscillating example alternates after the first iteration") {
  const auto f = arp::builtin_example_A();
  const auto t = arp::run(example_2_1_config(), f, Real::from_string("1.05"));
  REQUIRE(t.records.size() >= 4);
  CHECK(arp::accepted(t.records[0].status));
  for (std::size_t k = 1; k < t.records.size(); ++k) {
    CHECK(arp::accepted(t.records[k].status) == (k % 2 == 0));
    CHECK(t.records[k].sigma == (k % 2 == 1 ? Real(2) : Real(6)));
  }
}

TEST_CASE("starting at the minimizer stops at once") {
  const auto f = arp::builtin_example_B(4, 4);
  ArpConfig cfg;
  cfg.p = 4;
  const auto t = arp::run(cfg, f, Real(0));
  CHECK(t.records.empty());
  CHECK(t.termination == arp::Termination::exact_zero_gradient);
  CHECK(t.final_x.is_zero());
}

TEST_CASE("stop rules") {
  const auto f = arp::builtin_example_A();
  ArpConfig cfg;
  cfg.max_iterations = 2;
  auto t = arp::run(cfg, f, Real::from_string("1.1"));
  CHECK(t.termination == arp::Termination::max_iterations);
  CHECK(t.records.size() == 2);

  cfg.max_iterations = 100;
  cfg.stop.grad_tol = Real::from_string("1e-20");
  t = arp::run(cfg, f, Real::from_string("1.1"));
  CHECK(t.termination == arp::Termination::grad_tol);
  CHECK(arp::abs(f.derivative(1, t.final_x)) < Real::from_string("1e-20"));

  const auto plain = arp::make_polynomial_objective("plain", f.polynomial.value());
  cfg.stop.dist_tol = Real::from_string("1e-10");
  CHECK_THROWS_AS((void)arp::run(cfg, plain, Real(2)), arp::DomainError);
}

TEST_CASE("configuration validation") {
  const auto f = arp::builtin_example_A();
  auto bad = [&](auto mutate) {
    ArpConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), arp::DomainError);
  };
  bad([](ArpConfig& c) { c.p = 1; });
  bad([](ArpConfig& c) { c.eta1 = Real(0); });
  bad([](ArpConfig& c) { c.eta1 = Real::rational(3, 4); });
  bad([](ArpConfig& c) { c.eta2 = Real(1); });
  bad([](ArpConfig& c) { c.gamma1 = Real(0); });
  bad([](ArpConfig& c) { c.gamma1 = Real(2); });
  bad([](ArpConfig& c) { c.gamma2 = Real(1); });
  bad([](ArpConfig& c) { c.theta = Real(-1); });
  bad([](ArpConfig& c) { c.sigma0 = Real(0); });
  bad([](ArpConfig& c) { c.max_iterations = -1; });
  CHECK_NOTHROW(ArpConfig{}.validate());

  ArpConfig c;
  c.policy = arp::ClosedFormExampleB{4, 4};
  CHECK_THROWS_AS((void)arp::run(c, f, Real(2)), arp::DomainError);
}

TEST_CASE("sigma ceiling formula") {
  auto c = example_2_1_config();
  CHECK(arp::sigma_max_bound(c, Real(72)) == Real(18));
  CHECK(arp::success_threshold(c, Real(72)) == Real(6));
  c.sigma0 = Real::from_string("1e6");
  CHECK(arp::sigma_max_bound(c, Real(72)) == Real::from_string("1e6"));
  c.sigma0 = Real(1);
  Real prev(0);
  for (int i = 1; i < 20; ++i) {
    c.eta1 = Real::rational(i, 20);
    const Real b = arp::sigma_max_bound(c, Real(72));
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("driver invariants over randomized runs") {
  std::mt19937_64 rng(55);
  const auto f = arp::builtin_example_A();
  const Real L = f.require_meta().L_p;
  for (int i = 0; i < 30; ++i) {
    ArpConfig c;
    c.policy = i % 2 ? arp::SelectionPolicy{arp::GlobalMin{}} : arp::SelectionPolicy{arp::LocalComponent{}};
    c.sigma0 = oracle::random_real(rng, 0.05, 20);
    c.gamma1 = Real::rational(1, 1 + static_cast<long>(rng() % 4));
    c.gamma2 = Real(2 + static_cast<long>(rng() % 3));
    c.theta = i % 3 == 0 ? Real(0) : oracle::random_real(rng, 0, 2);
    c.max_iterations = 60;
    c.stop.dist_tol = Real::from_string("1e-60");
    const Real x0 = Real(1) + oracle::random_real(rng, -0.3, 0.3);
    const auto t = arp::run(c, f, x0);
    const Real ceiling = arp::sigma_max_bound(c, L);
    const Real threshold = arp::success_threshold(c, L);
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      const auto& r = t.records[k];
      CHECK(r.sigma <= ceiling);
      if (r.sigma >= threshold) CHECK(arp::accepted(r.status));
      const Real& next = k + 1 < t.records.size() ? t.records[k + 1].x : t.final_x;
      if (arp::accepted(r.status)) {
        CHECK(f.decrease(r.x, next).sign() >= 0);
        const Real R = L / Real::factorial(3) + c.theta + Real(4) * r.sigma;
        const Real lhs = arp::abs(f.derivative(1, next));
        const Real rhs = R * arp::pow(arp::abs(next - r.x), 3L);
        CHECK(lhs <= rhs + Real::pow2(-240) * arp::max(Real(1), rhs));
      } else {
        CHECK(next == r.x);
      }
    }
  }
}

TEST_CASE("semi-adaptive runs succeed once sigma passes the threshold") {
  const auto f = arp::builtin_example_A();
  ArpConfig c;
  c.gamma1 = Real(1);
  c.policy = arp::GlobalMin{};
  c.sigma0 = Real::rational(1, 10);
  c.max_iterations = 100;
  c.stop.dist_tol = Real::from_string("1e-100");
  const auto t = arp::run(c, f, Real::from_string("1.1"));
  const Real threshold = arp::success_threshold(c, f.require_meta().L_p);
  bool passed = false;
  for (const auto& r : t.records) {
    if (r.sigma >= threshold) passed = true;
    if (passed) CHECK(arp::accepted(r.status));
  }
  CHECK(arp::abs(t.final_x - Real(1)) < Real::from_string("1e-100"));
}

TEST_CASE("sigma floor") {
  const auto f = arp::builtin_example_A();
  auto c = top_config(arp::LocalComponent{});
  c.sigma_min = Real::rational(1, 4);
  const auto t = arp::run(c, f, Real::from_string("1.1"));
  for (const auto& r : t.records) CHECK(r.sigma >= Real::rational(1, 4));
  CHECK(t.final_sigma >= Real::rational(1, 4));
}

TEST_CASE("newton is exact on a quadratic") {
  const auto sq = arp::make_polynomial_objective("square", arp::Polynomial1D::from_strings({"0", "0", "1"}));
  const auto t = arp::newton_run(sq, Real(1), arp::NewtonConfig{});
  REQUIRE(t.records.size() == 1);
  CHECK(t.final_x.is_zero());
  CHECK(t.termination == arp::Termination::exact_zero_gradient);
  CHECK(t.solver == "newton");
}

TEST_CASE("newton converges quadratically on example A") {
  const auto f = arp::builtin_example_A();
  arp::NewtonConfig c;
  c.stop.dist_tol = Real::from_string("1e-100");
  const auto t = arp::newton_run(f, Real::from_string("1.1"), c);
  CHECK(arp::abs(t.final_x - Real(1)) < Real::from_string("1e-100"));
  const auto est = arp::estimate_order(arp::trace_errors(t, f, arp::ErrorMetric::distance), arp::OrderMode::all_iterations);
  CHECK(est.tail_q_order > Real::from_string("1.9"));
  CHECK(est.tail_q_order < Real::from_string("2.1"));
}

TEST_CASE("newton is linear with ratio two thirds on example B") {
  const auto f = arp::builtin_example_B(4, 4);
  arp::NewtonConfig c;
  c.max_iterations = 200;
  const auto t = arp::newton_run(f, Real::from_string("0.1"), c);
  REQUIRE(t.records.size() == 200);
  std::vector<Real> xs;
  for (const auto& r : t.records) xs.push_back(r.x);
  xs.push_back(t.final_x);
  for (std::size_t k = xs.size() - 20; k < xs.size(); ++k) {
    const Real ratio = arp::abs(xs[k]) / arp::abs(xs[k - 1]);
    CHECK(arp::abs(ratio - Real(2) / Real(3)) < Real::from_string("1e-3"));
    // Closed form x (2 + 3x) / (3 + 4x).
    const Real& x = xs[k - 1];
    CHECK(arp::abs(xs[k] - x * (Real(2) + Real(3) * x) / (Real(3) + Real(4) * x)) <= Real(8) * arp::abs(xs[k]).ulp());
  }
}

TEST_CASE("newton stops on a singular second derivative") {
  const auto g = arp::make_polynomial_objective("flat", arp::Polynomial1D::from_strings({"0", "1", "0", "1"}));
  CHECK_THROWS_AS((void)arp::newton_run(g, Real(0), arp::NewtonConfig{}), arp::NumericContractError);
}
