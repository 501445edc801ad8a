#include "cavitycool/analytic.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "cavitycool/error.hpp"

namespace cavitycool {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sq(double x) { return x * x; }

// Brace expression multiplying (1 + m) for xi = xi_plus, or m for xi = xi_minus.
double full_brace(double xi, double omega, double kappa, double gamma) {
  const double gm1 = gamma_n(-1, kappa, gamma);
  const double g0 = gamma_n(0, kappa, gamma);
  const double g1 = gamma_n(1, kappa, gamma);
  const double g2 = gamma_n(2, kappa, gamma);
  const double g4 = gamma_n(4, kappa, gamma);
  const double xi2 = sq(xi);
  const double om2 = sq(omega);

  const double first = g1 / (sq(g1) + xi2);
  const double num = (g0 * g1 * g2 + gm1 * xi2) * (sq(g2) + xi2) +
                     4.0 * om2 * (g0 * sq(g2) + g4 * xi2);
  const double den = (sq(g0) + xi2) * ((sq(g1) + xi2) * (sq(g2) + xi2) +
                                       8.0 * om2 * (g1 * g2 - xi2) + 16.0 * sq(om2));
  return first + num / den;
}

double strong_brace(double xi, double omega, double kappa, double gamma) {
  const double gm1 = gamma_n(-1, kappa, gamma);
  const double g1 = gamma_n(1, kappa, gamma);
  const double g4 = gamma_n(4, kappa, gamma);
  const double xi2 = sq(xi);
  const double om2 = sq(omega);
  const double den = sq(xi2) - 8.0 * om2 * xi2 + 16.0 * sq(om2);
  if (xi2 == 0.0 || den == 0.0) throw NumericalError("resonance pole");
  return g1 / xi2 + (gm1 * xi2 + 4.0 * g4 * om2) / den;
}

}  // namespace

std::string_view to_string(CoolingStatus s) {
  switch (s) {
    case CoolingStatus::Cooling: return "cooling";
    case CoolingStatus::Heating: return "heating";
    case CoolingStatus::NoDrive: return "no_drive";
  }
  return "unknown";
}

CoolingLaw make_cooling_law(double gamma_c, double c_source) {
  CoolingLaw law;
  law.gamma_c = gamma_c;
  law.c_source = c_source;
  if (gamma_c > 0.0) {
    law.status = CoolingStatus::Cooling;
    law.m_ss = c_source / gamma_c;
  } else {
    law.status = CoolingStatus::Heating;
    law.m_ss = kNaN;
  }
  return law;
}

BlochState bloch_steady(double omega, double gamma_atom) {
  if (omega == 0.0 && gamma_atom == 0.0) throw InvalidInput("undefined stationary state");
  const double den = sq(gamma_atom) + 2.0 * sq(omega);
  return {sq(omega) / den, 0.0, 2.0 * gamma_atom * omega / den};
}

BlochState bloch_trajectory(double omega, double gamma_atom, const BlochState& z0, double t) {
  if (t < 0.0) throw InvalidInput("negative time");
  BlochState out;
  out.z2 = z0.z2 * std::exp(-0.5 * gamma_atom * t);

  // (z1, z3) obey u' = A u + f with A = [[-G, W/2], [-2W, -G/2]], f = (0, W).
  // Deviations from the fixed point evolve with exp(A t), evaluated through
  // the 2x2 identity exp(At) = e^{tr t/2} [cosh(s t) I + sinh(s t)/s (A - tr/2 I)].
  const double G = gamma_atom;
  const double W = omega;
  const double a11 = -G, a12 = 0.5 * W, a21 = -2.0 * W, a22 = -0.5 * G;
  const double half_tr = 0.5 * (a11 + a22);
  const double det = a11 * a22 - a12 * a21;
  const std::complex<double> s = std::sqrt(std::complex<double>(sq(half_tr) - det));
  const std::complex<double> st = s * t;
  const std::complex<double> ch = std::cosh(st);
  const std::complex<double> sh_over_s =
      std::abs(s) < 1e-300 ? std::complex<double>(t) : std::sinh(st) / s;
  const double decay = std::exp(half_tr * t);
  const double e11 = decay * (ch + sh_over_s * (a11 - half_tr)).real();
  const double e12 = decay * (sh_over_s * a12).real();
  const double e21 = decay * (sh_over_s * a21).real();
  const double e22 = decay * (ch + sh_over_s * (a22 - half_tr)).real();

  BlochState fixed{0.0, 0.0, 0.0};
  if (det != 0.0) {
    // Solve A u* = -f.
    fixed.z1 = (a12 * W) / det;
    fixed.z3 = (-a11 * W) / det;
  }
  const double d1 = z0.z1 - fixed.z1;
  const double d3 = z0.z3 - fixed.z3;
  out.z1 = fixed.z1 + e11 * d1 + e12 * d3;
  out.z3 = fixed.z3 + e21 * d1 + e22 * d3;
  return out;
}

CoolingLaw cooling_law_closed(const SystemParams& p) {
  if (p.omega == 0.0) return {};
  const auto [xi_plus, xi_minus] = xi_pm(p.delta, p.nu);
  const double prefactor = 2.0 * sq(p.eta * p.g) * sq(p.omega) /
                           (sq(p.gamma_atom) + 2.0 * sq(p.omega));
  const double a_plus = full_brace(xi_plus, p.omega, p.kappa, p.gamma_atom);
  const double a_minus = full_brace(xi_minus, p.omega, p.kappa, p.gamma_atom);
  CoolingLaw law = make_cooling_law(prefactor * (a_minus - a_plus), prefactor * a_plus);
  // The ratio is independent of eta*g; computing it without the prefactor
  // keeps it exact under (eta, g) rescaling.
  if (law.status == CoolingStatus::Cooling) law.m_ss = a_plus / (a_minus - a_plus);
  return law;
}

CoolingLaw strong_drive_cooling_law(const SystemParams& p) {
  const auto [xi_plus, xi_minus] = xi_pm(p.delta, p.nu);
  const double prefactor = sq(p.eta * p.g);
  const double a_plus = strong_brace(xi_plus, p.omega, p.kappa, p.gamma_atom);
  const double a_minus = strong_brace(xi_minus, p.omega, p.kappa, p.gamma_atom);
  CoolingLaw law = make_cooling_law(prefactor * (a_minus - a_plus), prefactor * a_plus);
  if (law.status == CoolingStatus::Cooling) law.m_ss = a_plus / (a_minus - a_plus);
  return law;
}

SidebandLimit weak_drive_mss(double delta, double nu, double kappa) {
  if (delta == 0.0) throw NumericalError("divergent sideband formula");
  const double value = (sq(kappa) + 4.0 * sq(delta - nu)) / (16.0 * delta * nu);
  return {value, value < 0.0};
}

ResonanceCatalogue resonance_catalogue(double nu, double omega) {
  ResonanceCatalogue cat;
  cat.cooling = {nu, nu - omega, nu + omega};
  cat.heating = {-nu, -nu - omega, -nu + omega};
  return cat;
}

}  // namespace cavitycool
