#include "cavitycool/rateeq.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "cavitycool/error.hpp"

namespace cavitycool::rateeq {

namespace {

using Block = Eigen::Matrix<double, kCoherences, kCoherences>;
using BlockVec = Eigen::Matrix<double, kCoherences, 1>;

constexpr double kSingularRcond = 64.0 * std::numeric_limits<double>::epsilon();

struct Builder {
  RateSystem& sys;
  void add(Slot row, Slot col, double v) { sys.M(row, col) += v; }
  void src(Slot row, double v) { sys.b(row) += v; }
};

}  // namespace

RateSystem assemble(const SystemParams& p, const BlochState& z) {
  RateSystem sys;
  sys.omega_max = max_frequency(p);
  Builder e{sys};

  const double nu = p.nu;
  const double d = p.delta;
  const double W = p.omega;
  const double eg = p.eta * p.g;
  const double g0 = gamma_n(0, p.kappa, p.gamma_atom);
  const double g1 = gamma_n(1, p.kappa, p.gamma_atom);
  const double g2 = gamma_n(2, p.kappa, p.gamma_atom);

  // dm/dt = eta g (x322 + x333) / 2
  e.add(kM, kX322, 0.5 * eg);
  e.add(kM, kX333, 0.5 * eg);

  // Each source term eta g (1 + 2m) z splits into a constant and a part
  // proportional to m.

  // j = 0: no electronic operator.
  e.add(kX202, kX302, -nu);
  e.add(kX202, kX203, -d);
  e.src(kX202, -eg * z.z3);
  e.add(kX202, kM, -2.0 * eg * z.z3);
  e.add(kX202, kX202, -0.5 * g0);

  e.add(kX203, kX303, -nu);
  e.add(kX203, kX202, d);
  e.src(kX203, eg * z.z2);
  e.add(kX203, kM, 2.0 * eg * z.z2);
  e.add(kX203, kX203, -0.5 * g0);

  e.add(kX302, kX202, nu);
  e.add(kX302, kX303, -d);
  e.src(kX302, eg * z.z2);
  e.add(kX302, kX302, -0.5 * g0);

  e.add(kX303, kX203, nu);
  e.add(kX303, kX302, d);
  e.src(kX303, eg * z.z3);
  e.add(kX303, kX303, -0.5 * g0);

  // j = 1: excited-state projector.
  e.add(kX212, kX312, -nu);
  e.add(kX212, kX213, -d);
  e.add(kX212, kX232, 0.5 * W);
  e.add(kX212, kX212, -0.5 * g2);

  e.add(kX213, kX313, -nu);
  e.add(kX213, kX212, d);
  e.add(kX213, kX233, 0.5 * W);
  e.add(kX213, kX213, -0.5 * g2);

  e.add(kX312, kX212, nu);
  e.add(kX312, kX313, -d);
  e.add(kX312, kX332, 0.5 * W);
  e.add(kX312, kX312, -0.5 * g2);

  e.add(kX313, kX213, nu);
  e.add(kX313, kX312, d);
  e.add(kX313, kX333, 0.5 * W);
  e.add(kX313, kX313, -0.5 * g2);

  // j = 2: sigma_x. This block only talks to itself and to m.
  e.add(kX222, kX322, -nu);
  e.add(kX222, kX223, -d);
  e.add(kX222, kX222, -0.5 * g1);

  e.add(kX223, kX323, -nu);
  e.add(kX223, kX222, d);
  e.src(kX223, 2.0 * eg * z.z1);
  e.add(kX223, kM, 4.0 * eg * z.z1);
  e.add(kX223, kX223, -0.5 * g1);

  e.add(kX322, kX222, nu);
  e.add(kX322, kX323, -d);
  e.src(kX322, 2.0 * eg * z.z1);
  e.add(kX322, kX322, -0.5 * g1);

  e.add(kX323, kX223, nu);
  e.add(kX323, kX322, d);
  e.add(kX323, kX323, -0.5 * g1);

  // j = 3: sigma_y, driven by the j = 0 and j = 1 blocks.
  e.add(kX232, kX332, -nu);
  e.add(kX232, kX233, -d);
  e.add(kX232, kX202, W);
  e.add(kX232, kX212, -2.0 * W);
  e.src(kX232, -2.0 * eg * z.z1);
  e.add(kX232, kM, -4.0 * eg * z.z1);
  e.add(kX232, kX232, -0.5 * g1);

  e.add(kX233, kX333, -nu);
  e.add(kX233, kX232, d);
  e.add(kX233, kX203, W);
  e.add(kX233, kX213, -2.0 * W);
  e.add(kX233, kX233, -0.5 * g1);

  e.add(kX332, kX232, nu);
  e.add(kX332, kX333, -d);
  e.add(kX332, kX302, W);
  e.add(kX332, kX312, -2.0 * W);
  e.add(kX332, kX332, -0.5 * g1);

  e.add(kX333, kX233, nu);
  e.add(kX333, kX332, d);
  e.add(kX333, kX303, W);
  e.add(kX333, kX313, -2.0 * W);
  e.src(kX333, 2.0 * eg * z.z1);
  e.add(kX333, kX333, -0.5 * g1);

  return sys;
}

RateSystem assemble(const SystemParams& p) {
  return assemble(p, bloch_steady(p.omega, p.gamma_atom));
}

std::vector<Sample> integrate(const RateSystem& sys, const RateState& y0, double t_final,
                              double dt, int sample_every) {
  if (!(t_final > 0.0)) throw InvalidInput("t_final must be positive");
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (sample_every < 1) throw InvalidInput("sample_every must be >= 1");
  if (sys.omega_max > 0.0 && dt > 0.01 / sys.omega_max * (1.0 + 1e-12))
    throw InvalidInput("step too large");

  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  const double h = t_final / static_cast<double>(steps);

  const RateMatrix& M = sys.M;
  const RateState& b = sys.b;
  auto rhs = [&](const RateState& y) -> RateState { return M * y + b; };

  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(steps / sample_every + 2));
  out.push_back({0.0, y0});

  RateState y = y0;
  for (long i = 1; i <= steps; ++i) {
    const RateState k1 = rhs(y);
    const RateState k2 = rhs(y + 0.5 * h * k1);
    const RateState k3 = rhs(y + 0.5 * h * k2);
    const RateState k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (i % sample_every == 0 || i == steps) out.push_back({static_cast<double>(i) * h, y});
  }
  if (!y.allFinite()) throw NumericalError("integration unstable");
  return out;
}

RateState steady_state(const RateSystem& sys) {
  const Eigen::PartialPivLU<RateMatrix> lu(sys.M);
  if (!(lu.rcond() > kSingularRcond)) throw NumericalError("no unique steady state");
  RateState y = lu.solve(-sys.b);
  if (!y.allFinite()) throw NumericalError("no unique steady state");
  return y;
}

namespace {

// Responses of the coherences to the constant sources and to a unit m.
struct Responses {
  BlockVec constant;
  BlockVec per_phonon;
};

Responses solve_block(const Block& A, const BlockVec& source, const BlockVec& m_column) {
  const Eigen::PartialPivLU<Block> lu(A);
  if (!(lu.rcond() > kSingularRcond)) throw NumericalError("elimination singular");
  return {lu.solve(-source), lu.solve(-m_column)};
}

CoolingLaw package(const RateSystem& sys, double x0_322, double x0_333, double xm_322,
                   double xm_333) {
  const double w322 = sys.M(kM, kX322);
  const double w333 = sys.M(kM, kX333);
  const double c_source = w322 * x0_322 + w333 * x0_333;
  const double gamma_c = -(w322 * xm_322 + w333 * xm_333);
  return make_cooling_law(gamma_c, c_source);
}

}  // namespace

CoolingLaw eliminate(const SystemParams& p) {
  if (p.omega == 0.0) return {};
  const RateSystem sys = assemble(p);
  const Block A = sys.M.bottomRightCorner<kCoherences, kCoherences>();
  const BlockVec source = sys.b.tail<kCoherences>();
  const BlockVec m_column = sys.M.col(kM).tail<kCoherences>();
  const Responses r = solve_block(A, source, m_column);
  // Block index = slot - 1.
  return package(sys, r.constant(kX322 - 1), r.constant(kX333 - 1), r.per_phonon(kX322 - 1),
                 r.per_phonon(kX333 - 1));
}

CoolingLaw eliminate_staged(const SystemParams& p) {
  if (p.omega == 0.0) return {};
  const RateSystem sys = assemble(p);

  constexpr std::array<Slot, 4> kFirst = {kX222, kX223, kX322, kX323};
  constexpr std::array<Slot, 12> kRest = {kX202, kX203, kX302, kX303, kX212, kX213,
                                          kX312, kX313, kX232, kX233, kX332, kX333};

  auto stage = [&](const auto& slots, Slot target) {
    constexpr int n = static_cast<int>(std::tuple_size_v<std::decay_t<decltype(slots)>>);
    Eigen::Matrix<double, n, n> A;
    Eigen::Matrix<double, n, 1> source, m_column;
    int target_index = -1;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A(i, j) = sys.M(slots[i], slots[j]);
      source(i) = sys.b(slots[i]);
      m_column(i) = sys.M(slots[i], kM);
      if (slots[i] == target) target_index = i;
    }
    const Eigen::PartialPivLU<Eigen::Matrix<double, n, n>> lu(A);
    if (!(lu.rcond() > kSingularRcond)) throw NumericalError("elimination singular");
    const Eigen::Matrix<double, n, 1> x0 = lu.solve(-source);
    const Eigen::Matrix<double, n, 1> xm = lu.solve(-m_column);
    return std::pair{x0(target_index), xm(target_index)};
  };

  const auto [x0_322, xm_322] = stage(kFirst, kX322);
  const auto [x0_333, xm_333] = stage(kRest, kX333);
  return package(sys, x0_322, x0_333, xm_322, xm_333);
}

}  // namespace cavitycool::rateeq
