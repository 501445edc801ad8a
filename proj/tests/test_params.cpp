#include <doctest.h>

#include <random>

#include "cavitycool/error.hpp"
#include "cavitycool/params.hpp"

using namespace cavitycool;

TEST_CASE("gamma_n examples") {
  CHECK(gamma_n(0, 1.0, 1.0) == 1.0);
  CHECK(gamma_n(1, 2.0, 0.5) == 2.5);
  CHECK(gamma_n(-1, 1.0, 2.0) == -1.0);
  CHECK(gamma_n(4, 1.0, 1.0) == 5.0);
}

TEST_CASE("gamma_n is affine in n") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n(-10, 10);
  std::uniform_real_distribution<double> rate(0.0, 20.0);
  for (int i = 0; i < 500; ++i) {
    const int a = n(rng), b = n(rng);
    const double k = rate(rng), G = rate(rng);
    CHECK(gamma_n(a + b, k, G) - gamma_n(a, k, G) == doctest::Approx(b * G).epsilon(1e-12));
  }
}

TEST_CASE("xi_pm") {
  const auto [p, m] = xi_pm(6.0, 1.0);
  CHECK(p == 14.0);
  CHECK(m == 10.0);
  CHECK(xi_pm(2.5, 2.5).plus == 10.0);
  CHECK(xi_pm(2.5, 2.5).minus == 0.0);
  CHECK(xi_pm(-2.5, 2.5).plus == 0.0);
  CHECK(xi_pm(-2.5, 2.5).minus == -10.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const double d = u(rng), nu = std::abs(u(rng));
    CHECK(xi_pm(d, nu).plus == -xi_pm(-d, nu).minus);
  }
}

TEST_CASE("validate") {
  SystemParams p{.nu = 1, .delta = 3, .omega = 1, .kappa = 1, .gamma_atom = 1, .eta = 0.02, .g = 5};
  auto r = validate(p);
  CHECK(r.ratio == doctest::Approx(0.1 / 3.0));
  CHECK(r.ok);

  p = {.nu = 1, .delta = 1, .omega = 1, .kappa = 1, .gamma_atom = 1, .eta = 0.5, .g = 10};
  r = validate(p);
  CHECK(r.ratio == doctest::Approx(5.0));
  CHECK_FALSE(r.ok);

  p.eta = 0.0;
  r = validate(p);
  CHECK(r.ratio == 0.0);
  CHECK(r.ok);

  SUBCASE("ok iff ratio below threshold") {
    p = {.nu = 1, .delta = 0, .omega = 1, .kappa = 1, .gamma_atom = 1, .eta = 0.1, .g = 1};
    CHECK_FALSE(validate(p).ok);  // ratio exactly 0.1
    CHECK(validate(p, 0.11).ok);
  }
}

TEST_CASE("validate is monotone in eta and g") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    SystemParams p{.nu = 0.1 + 5 * u(rng), .delta = 10 * (u(rng) - 0.5), .omega = 1,
                   .kappa = 5 * u(rng), .gamma_atom = 1, .eta = 0.3 * u(rng), .g = 5 * u(rng)};
    SystemParams q = p;
    q.eta *= 1.0 + u(rng);
    q.g *= 1.0 + u(rng);
    if (!validate(p).ok) CHECK_FALSE(validate(q).ok);
  }
}

TEST_CASE("parameter invariants") {
  SystemParams p;
  CHECK_NOTHROW(check_invariants(p));
  p.delta = -100.0;
  CHECK_NOTHROW(check_invariants(p));
  for (auto bad : {&SystemParams::nu, &SystemParams::gamma_atom}) {
    SystemParams q;
    q.*bad = 0.0;
    CHECK_THROWS_AS(check_invariants(q), InvalidInput);
  }
  for (auto bad : {&SystemParams::omega, &SystemParams::kappa, &SystemParams::eta, &SystemParams::g}) {
    SystemParams q;
    q.*bad = -1e-3;
    CHECK_THROWS_AS(check_invariants(q), InvalidInput);
  }
  p = {};
  p.delta = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(check_invariants(p), InvalidInput);
}

TEST_CASE("Lamb-Dicke warning") {
  SystemParams p;
  p.eta = 0.29;
  CHECK_FALSE(lamb_dicke_warning(p));
  p.eta = 0.3;
  CHECK(lamb_dicke_warning(p));
}

TEST_CASE("JSON parameters") {
  const auto p = params_from_json(R"({"nu": 2, "delta": -1.5, "omega": 3, "kappa": 10,
                                      "gamma_atom": 1, "eta": 0.05, "g": 2})");
  CHECK(p.nu == 2.0);
  CHECK(p.delta == -1.5);
  CHECK(p.kappa == 10.0);
  CHECK(p.g == 2.0);

  SUBCASE("missing keys keep the base") {
    SystemParams base;
    base.kappa = 7.0;
    const auto q = params_from_json(R"({"nu": 3})", base);
    CHECK(q.nu == 3.0);
    CHECK(q.kappa == 7.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(params_from_json("{"), InvalidInput);
    CHECK_THROWS_AS(params_from_json("[1, 2]"), InvalidInput);
    CHECK_THROWS_AS(params_from_json(R"({"mu": 1})"), InvalidInput);
    CHECK_THROWS_AS(params_from_json(R"({"nu": "one"})"), InvalidInput);
    CHECK_THROWS_AS(load_params("/nonexistent/params.json"), InvalidInput);
  }
}

TEST_CASE("params JSON round-trips exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    SystemParams p{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng) * 1e-7, u(rng) / 3.0};
    CHECK(params_from_json(params_to_json(p)) == p);
  }
}
