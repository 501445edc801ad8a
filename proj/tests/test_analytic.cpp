#include <doctest.h>

#include <cmath>
#include <random>

#include "cavitycool/analytic.hpp"
#include "cavitycool/error.hpp"

using namespace cavitycool;

namespace {

// Reference integration of the zeroth-order Bloch equations, independent of
// the closed-form propagator.
BlochState bloch_rk4(double W, double G, BlochState z, double t, int steps) {
  auto f = [&](const BlochState& s) {
    return BlochState{0.5 * W * s.z3 - G * s.z1, -0.5 * G * s.z2, W * (1.0 - 2.0 * s.z1) - 0.5 * G * s.z3};
  };
  auto axpy = [](const BlochState& a, double h, const BlochState& k) {
    return BlochState{a.z1 + h * k.z1, a.z2 + h * k.z2, a.z3 + h * k.z3};
  };
  const double h = t / steps;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = f(z), k2 = f(axpy(z, h / 2, k1)), k3 = f(axpy(z, h / 2, k2)), k4 = f(axpy(z, h, k3));
    z = {z.z1 + h / 6 * (k1.z1 + 2 * k2.z1 + 2 * k3.z1 + k4.z1),
         z.z2 + h / 6 * (k1.z2 + 2 * k2.z2 + 2 * k3.z2 + k4.z2),
         z.z3 + h / 6 * (k1.z3 + 2 * k2.z3 + 2 * k3.z3 + k4.z3)};
  }
  return z;
}

SystemParams draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SystemParams p;
  p.nu = 0.2 + 19.8 * u(rng);
  p.kappa = 0.2 + 19.8 * u(rng);
  p.omega = 0.5 + 49.5 * u(rng);
  p.delta = (2.0 * u(rng) - 1.0) * 2.0 * (p.nu + p.omega);
  p.eta = 0.05;
  p.g = 1.0;
  return p;
}

}  // namespace

TEST_CASE("bloch_steady") {
  auto z = bloch_steady(1.0, 1.0);
  CHECK(z.z1 == doctest::Approx(1.0 / 3.0));
  CHECK(z.z2 == 0.0);
  CHECK(z.z3 == doctest::Approx(2.0 / 3.0));

  z = bloch_steady(0.0, 1.0);
  CHECK(z.z1 == 0.0);
  CHECK(z.z3 == 0.0);

  z = bloch_steady(1e6, 1.0);
  CHECK(z.z1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(z.z3) < 1e-5);

  CHECK_THROWS_AS(bloch_steady(0.0, 0.0), InvalidInput);
}

TEST_CASE("bloch_trajectory") {
  SUBCASE("fixed point") {
    const auto zs = bloch_steady(2.0, 1.0);
    for (double t : {0.0, 0.3, 5.0, 100.0}) {
      const auto z = bloch_trajectory(2.0, 1.0, zs, t);
      CHECK(z.z1 == doctest::Approx(zs.z1).epsilon(1e-12));
      CHECK(z.z3 == doctest::Approx(zs.z3).epsilon(1e-12));
    }
  }
  SUBCASE("pure decay without drive") {
    for (double t : {0.0, 0.5, 2.0, 7.0}) {
      const auto z = bloch_trajectory(0.0, 1.0, {1.0, 0.0, 0.0}, t);
      CHECK(z.z1 == doctest::Approx(std::exp(-t)).epsilon(1e-12));
    }
  }
  SUBCASE("z2 decays at half the atomic rate") {
    const auto z = bloch_trajectory(3.0, 1.0, {0.0, 1.0, 0.0}, 2.0);
    CHECK(z.z2 == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(z.z2 == doctest::Approx(0.3679).epsilon(1e-4));
  }
  SUBCASE("agrees with direct integration") {
    // Covers the overdamped (W small), critically near and underdamped branches.
    for (double W : {0.05, 0.25, 1.0, 7.0}) {
      const BlochState z0{0.2, 0.4, -0.3};
      for (double t : {0.7, 3.0}) {
        const auto exact = bloch_trajectory(W, 1.0, z0, t);
        const auto ref = bloch_rk4(W, 1.0, z0, t, 20000);
        CHECK(exact.z1 == doctest::Approx(ref.z1).epsilon(1e-10));
        CHECK(exact.z2 == doctest::Approx(ref.z2).epsilon(1e-10));
        CHECK(exact.z3 == doctest::Approx(ref.z3).epsilon(1e-10));
      }
    }
  }
  SUBCASE("converges to the stationary state") {
    const auto zs = bloch_steady(1.0, 1.0);
    for (double t : {40.0, 60.0, 200.0}) {
      const auto z = bloch_trajectory(1.0, 1.0, {0.0, 0.0, 0.0}, t);
      CHECK(std::abs(z.z1 - zs.z1) < 1e-8);
      CHECK(std::abs(z.z3 - zs.z3) < 1e-8);
    }
  }
  CHECK_THROWS_AS(bloch_trajectory(1.0, 1.0, {}, -1.0), InvalidInput);
}

TEST_CASE("closed cooling law basics") {
  SystemParams p{.nu = 1, .delta = 6, .omega = 5, .kappa = 1, .gamma_atom = 1, .eta = 0.1, .g = 1};
  const auto law = cooling_law_closed(p);
  CHECK(law.status == CoolingStatus::Cooling);
  CHECK(law.gamma_c > 0.0);
  CHECK(law.m_ss == doctest::Approx(law.c_source / law.gamma_c).epsilon(1e-14));

  SUBCASE("no drive") {
    p.omega = 0.0;
    const auto none = cooling_law_closed(p);
    CHECK(none.status == CoolingStatus::NoDrive);
    CHECK(std::isnan(none.m_ss));
  }
  SUBCASE("heating is a status") {
    p.delta = -p.nu;
    const auto h = cooling_law_closed(p);
    CHECK(h.status == CoolingStatus::Heating);
    CHECK(h.gamma_c <= 0.0);
    CHECK(std::isnan(h.m_ss));
  }
  SUBCASE("m_ss independent of how eta*g is split") {
    SystemParams q = p;
    q.eta = 0.01;
    q.g = 10.0;
    CHECK(cooling_law_closed(q).m_ss == doctest::Approx(law.m_ss).epsilon(1e-14));
  }
}

TEST_CASE("closed cooling law: odd symmetry and scaling over random draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> s(0.1, 10.0);
  for (int i = 0; i < 1000; ++i) {
    SystemParams p = draw(rng);
    SystemParams q = p;
    q.delta = -p.delta;
    const auto a = cooling_law_closed(p), b = cooling_law_closed(q);
    CHECK(std::abs(a.gamma_c + b.gamma_c) <= 1e-12 * std::abs(a.gamma_c));

    const double k = s(rng);
    SystemParams r = p;
    r.eta /= k;
    r.g *= k;
    const auto c = cooling_law_closed(r);
    if (a.status == CoolingStatus::Cooling) {
      CHECK(c.m_ss == doctest::Approx(a.m_ss).epsilon(1e-12));
    }
    SystemParams twice = p;
    twice.eta *= 2.0;
    CHECK(cooling_law_closed(twice).gamma_c == doctest::Approx(4.0 * a.gamma_c).epsilon(1e-12));
  }
}

TEST_CASE("weak-drive limit") {
  auto w = weak_drive_mss(1.0, 1.0, 1.0);
  CHECK(w.m_ss == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK_FALSE(w.heating);
  CHECK(weak_drive_mss(2.0, 2.0, 1e-9).m_ss < 1e-18);
  CHECK(weak_drive_mss(-1.0, 1.0, 1.0).heating);
  CHECK_THROWS_AS(weak_drive_mss(0.0, 1.0, 1.0), NumericalError);

  SUBCASE("full law reduces to it when omega and gamma_atom are negligible") {
    for (double nu : {0.5, 1.0, 3.0}) {
      for (double kappa : {0.3, 1.0, 4.0}) {
        for (double factor : {0.5, 1.0, 2.0}) {
          SystemParams p{.nu = nu, .delta = factor * nu, .omega = 1e-3 * kappa, .kappa = kappa,
                         .gamma_atom = 1e-3 * kappa, .eta = 0.01, .g = 1};
          const auto law = cooling_law_closed(p);
          const auto ref = weak_drive_mss(p.delta, nu, kappa);
          REQUIRE(law.status == CoolingStatus::Cooling);
          CHECK(std::abs(law.m_ss - ref.m_ss) / ref.m_ss < 1e-2);
        }
      }
    }
  }
}

TEST_CASE("strong-drive cooling law") {
  SUBCASE("agrees with the full law in its regime") {
    // Exactly at delta_plus the simplified law sits on its pole, so compare
    // ten units away, where xi_-^2 - 4 omega^2 >> omega (kappa, gamma_atom).
    SystemParams p{.nu = 20, .delta = 130, .omega = 100, .kappa = 1, .gamma_atom = 1, .eta = 0.01, .g = 1};
    const auto full = cooling_law_closed(p);
    const auto strong = strong_drive_cooling_law(p);
    REQUIRE(full.status == CoolingStatus::Cooling);
    REQUIRE(strong.status == CoolingStatus::Cooling);
    CHECK(std::abs(strong.gamma_c / full.gamma_c - 1.0) < 0.05);
    CHECK(std::abs(strong.c_source / full.c_source - 1.0) < 0.05);
    CHECK(std::abs(strong.m_ss / full.m_ss - 1.0) < 0.05);
  }
  SUBCASE("m_ss vanishes towards delta_plus") {
    SystemParams p{.nu = 20, .delta = 0, .omega = 100, .kappa = 1, .gamma_atom = 1, .eta = 0.01, .g = 1};
    double previous = std::numeric_limits<double>::infinity();
    for (double offset : {10.0, 1.0, 0.1, 1e-3}) {
      p.delta = 120.0 + offset;
      const auto law = strong_drive_cooling_law(p);
      REQUIRE(law.status == CoolingStatus::Cooling);
      CHECK(law.m_ss < previous);
      previous = law.m_ss;
    }
    CHECK(previous < 1e-6);
  }
  SUBCASE("poles") {
    SystemParams p{.nu = 20, .delta = 120, .omega = 100, .kappa = 1, .gamma_atom = 1, .eta = 0.01, .g = 1};
    CHECK_THROWS_AS(strong_drive_cooling_law(p), NumericalError);
    p.delta = 20;  // xi_- = 0
    CHECK_THROWS_AS(strong_drive_cooling_law(p), NumericalError);
  }
  SUBCASE("odd symmetry") {
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
      SystemParams p = draw(rng);
      SystemParams q = p;
      q.delta = -p.delta;
      try {
        const auto a = strong_drive_cooling_law(p), b = strong_drive_cooling_law(q);
        CHECK(std::abs(a.gamma_c + b.gamma_c) <= 1e-12 * std::abs(a.gamma_c));
        ++checked;
      } catch (const NumericalError&) {
      }
    }
    CHECK(checked > 990);
  }
}

TEST_CASE("resonance catalogue") {
  auto cat = resonance_catalogue(1.0, 5.0);
  CHECK(cat.cooling == std::array<double, 3>{1.0, -4.0, 6.0});
  CHECK(cat.heating == std::array<double, 3>{-1.0, -6.0, 4.0});

  cat = resonance_catalogue(1.0, 0.0);
  CHECK(cat.cooling == std::array<double, 3>{1.0, 1.0, 1.0});
  CHECK(cat.heating == std::array<double, 3>{-1.0, -1.0, -1.0});

  cat = resonance_catalogue(0.0, 2.0);
  CHECK(cat.cooling == std::array<double, 3>{0.0, -2.0, 2.0});

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double nu = u(rng), W = u(rng);
    cat = resonance_catalogue(nu, W);
    CHECK(cat.cooling[0] - cat.cooling[1] == doctest::Approx(W));
    CHECK(cat.cooling[2] - cat.cooling[0] == doctest::Approx(W));
    CHECK(cat.heating[0] - cat.heating[1] == doctest::Approx(W));
    CHECK(cat.heating[2] - cat.heating[0] == doctest::Approx(W));
  }
}
