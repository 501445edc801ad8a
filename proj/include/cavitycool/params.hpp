#pragma once

#include <string>
#include <utility>

namespace cavitycool {

/// Physical parameters of the cavity cooling setup.
///
/// All rates and frequencies are expressed in units of the atomic decay
/// rate; `gamma_atom` therefore defaults to 1. The atom-cavity detuning is
/// the cavity frequency minus the atomic transition frequency.
struct SystemParams {
  double nu = 1.0;          ///< trap (phonon) frequency
  double delta = 1.0;       ///< atom-cavity detuning
  double omega = 1.0;       ///< laser Rabi frequency
  double kappa = 1.0;       ///< cavity decay rate
  double gamma_atom = 1.0;  ///< atomic spontaneous decay rate
  double eta = 0.02;        ///< Lamb-Dicke parameter
  double g = 1.0;           ///< atom-cavity coupling

  bool operator==(const SystemParams&) const = default;
};

/// Throws InvalidInput if any field is non-finite or out of range
/// (nu > 0, gamma_atom > 0, omega/kappa/eta/g >= 0).
void check_invariants(const SystemParams& p);

/// Lamb-Dicke parameters at or above this value are outside the regime the
/// first-order node expansion describes well.
inline constexpr double kLambDickeWarning = 0.3;

bool lamb_dicke_warning(const SystemParams& p);

/// Largest frequency scale of the problem, max(nu, |delta|, omega, kappa, gamma_atom).
double max_frequency(const SystemParams& p);

/// Effective decay rate kappa + n * gamma_atom. Negative values for n < 0 are
/// legitimate and appear in the cooling law.
constexpr double gamma_n(int n, double kappa, double gamma_atom) {
  return kappa + n * gamma_atom;
}

struct XiPair {
  double plus;
  double minus;
};

/// (2(delta + nu), 2(delta - nu)).
constexpr XiPair xi_pm(double delta, double nu) {
  return {2.0 * (delta + nu), 2.0 * (delta - nu)};
}

struct ValidityReport {
  double ratio = 0.0;
  double threshold = 0.1;
  bool ok = true;
};

inline constexpr double kDefaultValidityThreshold = 0.1;

/// Separation-of-timescales check: eta*g must be small compared with the
/// largest of |delta|, kappa and nu.
ValidityReport validate(const SystemParams& p,
                        double threshold = kDefaultValidityThreshold);

/// Parses a flat JSON object with keys nu, delta, omega, kappa, gamma_atom,
/// eta, g. Missing keys keep the values already in `base`. Unknown keys and
/// non-numeric values raise InvalidInput.
SystemParams params_from_json(const std::string& text, SystemParams base = {});
SystemParams load_params(const std::string& path, SystemParams base = {});

/// Serializes with round-trip precision on a single line.
std::string params_to_json(const SystemParams& p);

}  // namespace cavitycool
