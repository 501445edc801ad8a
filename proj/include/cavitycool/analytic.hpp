#pragma once

#include <array>
#include <limits>
#include <string_view>

#include "cavitycool/params.hpp"

namespace cavitycool {

/// Zeroth-order electronic expectation values:
/// z1 = <sigma+ sigma->, z2 = <sigma- + sigma+>, z3 = <i(sigma- - sigma+)>.
struct BlochState {
  double z1 = 0.0;
  double z2 = 0.0;
  double z3 = 0.0;
};

enum class CoolingStatus { Cooling, Heating, NoDrive };

std::string_view to_string(CoolingStatus s);

/// Effective cooling equation dm/dt = -gamma_c * m + c_source.
///
/// m_ss is NaN unless status == Cooling.
struct CoolingLaw {
  double gamma_c = 0.0;
  double c_source = 0.0;
  double m_ss = std::numeric_limits<double>::quiet_NaN();
  CoolingStatus status = CoolingStatus::NoDrive;
};

/// Packages (gamma_c, c) into a CoolingLaw, deriving status and m_ss.
CoolingLaw make_cooling_law(double gamma_c, double c_source);

/// Three cooling and three heating detunings. Arrays are ordered
/// {center, minus, plus}.
struct ResonanceCatalogue {
  std::array<double, 3> cooling{};
  std::array<double, 3> heating{};

  double delta0() const { return cooling[0]; }
  double delta_minus() const { return cooling[1]; }
  double delta_plus() const { return cooling[2]; }
};

BlochState bloch_steady(double omega, double gamma_atom);

/// Exact solution of the zeroth-order Bloch equations at time t.
BlochState bloch_trajectory(double omega, double gamma_atom, const BlochState& z0, double t);

/// Second-order cooling law in closed form (full expression, any drive strength).
CoolingLaw cooling_law_closed(const SystemParams& p);

/// Simplified cooling law valid for omega, |xi_pm| >> kappa, gamma_atom.
/// Throws NumericalError on the resonance poles xi^2 = 4 omega^2 or xi = 0.
CoolingLaw strong_drive_cooling_law(const SystemParams& p);

struct SidebandLimit {
  double m_ss = 0.0;
  bool heating = false;
};

/// Weak-drive limit (kappa^2 + 4(delta - nu)^2) / (16 delta nu). Recovered
/// from the full law when both omega and gamma_atom are negligible next to
/// kappa. Throws NumericalError at delta == 0.
SidebandLimit weak_drive_mss(double delta, double nu, double kappa);

ResonanceCatalogue resonance_catalogue(double nu, double omega);

}  // namespace cavitycool
