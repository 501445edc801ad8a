#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "cavitycool/analytic.hpp"
#include "cavitycool/params.hpp"

namespace cavitycool::rateeq {

inline constexpr int kDim = 17;
inline constexpr int kCoherences = 16;

/// Slot of each expectation value in the state vector. x_ijk is the mean of
/// B_i Sigma_j C_k with index 2 = quadrature (a + a^dag) and
/// 3 = i(a - a^dag); Sigma_0 = 1, Sigma_1 = sigma+ sigma-.
enum Slot : int {
  kM = 0,
  kX202, kX203, kX302, kX303,
  kX212, kX213, kX312, kX313,
  kX222, kX223, kX322, kX323,
  kX232, kX233, kX332, kX333,
};

inline constexpr std::array<std::string_view, kDim> kSlotNames = {
    "m",    "x202", "x203", "x302", "x303", "x212", "x213", "x312", "x313",
    "x222", "x223", "x322", "x323", "x232", "x233", "x332", "x333"};

using RateState = Eigen::Matrix<double, kDim, 1>;
using RateMatrix = Eigen::Matrix<double, kDim, kDim>;

/// dy/dt = M y + b for y = (m, sixteen first-order coherences).
struct RateSystem {
  RateMatrix M = RateMatrix::Zero();
  RateState b = RateState::Zero();
  double omega_max = 0.0;  ///< largest frequency scale, bounds the time step
};

/// Assembles the closed first-order system. `z` is normally the stationary
/// Bloch state; terms proportional to z2 are kept for general inputs.
RateSystem assemble(const SystemParams& p, const BlochState& z);
RateSystem assemble(const SystemParams& p);

struct Sample {
  double t = 0.0;
  RateState y = RateState::Zero();
};

/// Fixed-step RK4. The step is shrunk so that an integer number of steps
/// lands on t_final; every `sample_every`-th step is recorded, plus the
/// initial and the final state. Throws InvalidInput when dt exceeds
/// 0.01 / omega_max ("step too large").
std::vector<Sample> integrate(const RateSystem& sys, const RateState& y0, double t_final,
                              double dt, int sample_every = 1);

/// Solves M y = -b by LU with partial pivoting.
RateState steady_state(const RateSystem& sys);

/// Adiabatic elimination of all sixteen coherences at once.
CoolingLaw eliminate(const SystemParams& p);

/// Two-stage elimination: the j = 2 block (which alone feeds x322) first,
/// then the remaining twelve coherences that determine x333.
CoolingLaw eliminate_staged(const SystemParams& p);

}  // namespace cavitycool::rateeq
