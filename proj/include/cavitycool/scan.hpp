#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavitycool/analytic.hpp"
#include "cavitycool/params.hpp"

namespace cavitycool::scan {

enum class Axis { Delta, Omega, Nu, Kappa };
enum class Law { Closed, Eliminated };
/// Keeps delta pinned to one of the cooling resonances while another axis varies.
enum class DeltaLock { None, Delta0, DeltaMinus, DeltaPlus };

std::string_view to_string(Axis a);
std::string_view to_string(Law l);
std::string_view to_string(DeltaLock l);
Axis parse_axis(std::string_view s);
Law parse_law(std::string_view s);
DeltaLock parse_lock(std::string_view s);

struct SweepSpec {
  Axis axis = Axis::Delta;
  std::vector<double> grid;
  SystemParams base;
  Law law = Law::Closed;
  DeltaLock lock = DeltaLock::None;
  bool refine_minima = true;
};

/// Throws InvalidInput unless the grid has >= 2 strictly increasing entries
/// and locking is not combined with a delta axis.
void check_spec(const SweepSpec& spec);

/// n = round((hi - lo)/step) + 1 points, computed as a convex combination of
/// the endpoints so that a symmetric range yields exactly mirrored values.
std::vector<double> make_grid(double lo, double hi, double step);

/// n equally spaced points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Parses "lo:hi:step".
std::vector<double> parse_grid(std::string_view text);

struct Row {
  double value = 0.0;
  double m_ss = 0.0;  ///< NaN unless status is cooling
  double gamma_c = 0.0;
  std::string status;  ///< cooling | heating | no_drive | error
};

struct Minimum {
  double location = 0.0;
  double value = 0.0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<Row> rows;
  std::vector<Minimum> minima;
};

/// Parameters at one sweep point, with the delta lock applied.
SystemParams point_params(const SweepSpec& spec, double value);

CoolingLaw evaluate(const SystemParams& p, Law law);

/// Evaluates every grid point (in parallel, merged in grid order) and
/// locates local minima of m_ss. Backend failures are recorded per row.
SweepResult sweep(const SweepSpec& spec);

using Objective = std::function<double(double)>;

/// Interior local minima of sampled data. NaN entries never form or bracket
/// a minimum; on exact plateaus the leftmost point is reported. If
/// `objective` is given each minimum is refined by golden-section search
/// inside its bracketing grid cell to 1e-4 relative.
std::vector<Minimum> find_minima(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const Objective& objective = {});

/// Golden-section minimization of f on [lo, hi]; stops when the bracket is
/// below rel_tol * max(|x|, hi - lo initial).
Minimum golden_section(const Objective& f, double lo, double hi, double rel_tol = 1e-4);

struct ResonanceRow {
  std::string name;  ///< delta0 | delta_minus | delta_plus
  double delta = 0.0;
  CoolingLaw law;
};

/// Cooling law at the three cooling resonances, ordered delta0, delta-, delta+.
std::vector<ResonanceRow> compare_resonances(const SystemParams& p, Law law = Law::Closed);

/// Name of the row with the lowest m_ss among those that cool, if any.
std::optional<std::string> best_resonance(const std::vector<ResonanceRow>& rows);

/// CSV with header axis,value,m_ss,gamma_c,status. The run is echoed in two
/// leading comment lines ("# params:" and "# sweep:") and located minima in
/// trailing "# minimum:" lines.
std::string to_csv(const SweepResult& result);

/// Rebuilds the spec of a run from the comment lines written by to_csv.
SweepSpec spec_from_csv(std::string_view csv);

}  // namespace cavitycool::scan
