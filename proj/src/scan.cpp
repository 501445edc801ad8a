#include "cavitycool/scan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "cavitycool/csv.hpp"
#include "cavitycool/error.hpp"
#include "cavitycool/rateeq.hpp"

namespace cavitycool::scan {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<std::string_view, E>, N>& table,
             const char* what) {
  for (const auto& [name, value] : table)
    if (name == s) return value;
  throw InvalidInput(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<std::string_view, Axis>, 4> kAxes = {{
    {"delta", Axis::Delta}, {"omega", Axis::Omega}, {"nu", Axis::Nu}, {"kappa", Axis::Kappa}}};
constexpr std::array<std::pair<std::string_view, Law>, 2> kLaws = {{
    {"closed", Law::Closed}, {"eliminated", Law::Eliminated}}};
constexpr std::array<std::pair<std::string_view, DeltaLock>, 4> kLocks = {{
    {"none", DeltaLock::None}, {"delta0", DeltaLock::Delta0},
    {"delta_minus", DeltaLock::DeltaMinus}, {"delta_plus", DeltaLock::DeltaPlus}}};

template <typename E, std::size_t N>
std::string_view name_of(E v, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, value] : table)
    if (value == v) return name;
  return "unknown";
}

double parse_double(std::string_view s) {
  // std::from_chars for double is unavailable on older libstdc++.
  const std::string str(s);
  char* end = nullptr;
  const double v = std::strtod(str.c_str(), &end);
  if (str.empty() || end != str.c_str() + str.size() || !std::isfinite(v))
    throw InvalidInput("not a number: '" + str + "'");
  return v;
}

Row make_row(double value, const CoolingLaw& law) {
  return {value, law.m_ss, law.gamma_c, std::string(to_string(law.status))};
}

}  // namespace

std::string_view to_string(Axis a) { return name_of(a, kAxes); }
std::string_view to_string(Law l) { return name_of(l, kLaws); }
std::string_view to_string(DeltaLock l) { return name_of(l, kLocks); }
Axis parse_axis(std::string_view s) { return parse_enum(s, kAxes, "axis"); }
Law parse_law(std::string_view s) { return parse_enum(s, kLaws, "law"); }
DeltaLock parse_lock(std::string_view s) { return parse_enum(s, kLocks, "delta lock"); }

void check_spec(const SweepSpec& spec) {
  if (spec.grid.size() < 2) throw InvalidInput("sweep grid needs at least two points");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    if (!std::isfinite(spec.grid[i])) throw InvalidInput("sweep grid must be finite");
    if (i > 0 && !(spec.grid[i] > spec.grid[i - 1]))
      throw InvalidInput("sweep grid must be strictly increasing");
  }
  if (spec.axis == Axis::Delta && spec.lock != DeltaLock::None)
    throw InvalidInput("a delta sweep cannot lock delta to a resonance");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw InvalidInput("grid needs at least two points");
  std::vector<double> out(n);
  const double last = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i);
    out[i] = (lo * (last - k) + hi * k) / last;
  }
  return out;
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi > lo)) throw InvalidInput("grid requires lo < hi and step > 0");
  const double count = std::round((hi - lo) / step);
  if (count > 1e8) throw InvalidInput("grid too large");
  return linspace(lo, hi, static_cast<std::size_t>(count) + 1);
}

std::vector<double> parse_grid(std::string_view text) {
  const auto first = text.find(':');
  const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
  if (second == std::string_view::npos) throw InvalidInput("grid must be given as lo:hi:step");
  return make_grid(parse_double(text.substr(0, first)),
                   parse_double(text.substr(first + 1, second - first - 1)),
                   parse_double(text.substr(second + 1)));
}

SystemParams point_params(const SweepSpec& spec, double value) {
  SystemParams p = spec.base;
  switch (spec.axis) {
    case Axis::Delta: p.delta = value; break;
    case Axis::Omega: p.omega = value; break;
    case Axis::Nu: p.nu = value; break;
    case Axis::Kappa: p.kappa = value; break;
  }
  const ResonanceCatalogue cat = resonance_catalogue(p.nu, p.omega);
  switch (spec.lock) {
    case DeltaLock::None: break;
    case DeltaLock::Delta0: p.delta = cat.delta0(); break;
    case DeltaLock::DeltaMinus: p.delta = cat.delta_minus(); break;
    case DeltaLock::DeltaPlus: p.delta = cat.delta_plus(); break;
  }
  return p;
}

CoolingLaw evaluate(const SystemParams& p, Law law) {
  return law == Law::Closed ? cooling_law_closed(p) : rateeq::eliminate(p);
}

SweepResult sweep(const SweepSpec& spec) {
  check_spec(spec);
  SweepResult result;
  result.spec = spec;
  result.rows.resize(spec.grid.size());

  auto eval_point = [&](std::size_t i) {
    const double x = spec.grid[i];
    try {
      const SystemParams p = point_params(spec, x);
      check_invariants(p);
      result.rows[i] = make_row(x, evaluate(p, spec.law));
    } catch (const std::exception&) {
      result.rows[i] = {x, kNaN, kNaN, "error"};
    }
  };

  // Rows are written to disjoint slots, so the output does not depend on
  // the number of workers.
  const std::size_t n = spec.grid.size();
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, n / 256));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) eval_point(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) eval_point(i);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i)
    ys[i] = result.rows[i].status == "cooling" ? result.rows[i].m_ss : kNaN;

  Objective objective;
  if (spec.refine_minima) {
    objective = [&spec](double x) {
      try {
        const CoolingLaw law = evaluate(point_params(spec, x), spec.law);
        return law.status == CoolingStatus::Cooling ? law.m_ss : kNaN;
      } catch (const std::exception&) {
        return kNaN;
      }
    };
  }
  result.minima = find_minima(spec.grid, ys, objective);
  return result;
}

Minimum golden_section(const Objective& f, double lo, double hi, double rel_tol) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto value = [&](double x) {
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = value(c), fd = value(d);
  for (int iter = 0; iter < 200; ++iter) {
    if (b - a <= rel_tol * std::max({std::abs(a), std::abs(b), 1.0})) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = value(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = value(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, value(x)};
}

std::vector<Minimum> find_minima(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const Objective& objective) {
  if (xs.size() != ys.size()) throw InvalidInput("find_minima: size mismatch");
  std::vector<Minimum> out;
  const std::size_t n = ys.size();
  if (n < 3) return out;

  std::size_t i = 1;
  while (i + 1 < n) {
    const double y = ys[i];
    if (!std::isfinite(y) || !std::isfinite(ys[i - 1]) || !(y < ys[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;  // extend over an exact plateau
    while (j + 1 < n && ys[j + 1] == y) ++j;
    if (j + 1 < n && std::isfinite(ys[j + 1]) && ys[j + 1] > y) {
      Minimum m{xs[i], y};
      if (objective) {
        const Minimum refined = golden_section(objective, xs[i - 1], xs[j + 1]);
        if (refined.value < m.value) m = refined;
      }
      out.push_back(m);
    }
    i = j + 1;
  }
  return out;
}

std::vector<ResonanceRow> compare_resonances(const SystemParams& p, Law law) {
  if (!(p.omega > 0.0)) throw InvalidInput("compare_resonances requires omega > 0");
  const ResonanceCatalogue cat = resonance_catalogue(p.nu, p.omega);
  const std::array<std::pair<const char*, double>, 3> points = {{
      {"delta0", cat.delta0()}, {"delta_minus", cat.delta_minus()}, {"delta_plus", cat.delta_plus()}}};
  std::vector<ResonanceRow> rows;
  for (const auto& [name, delta] : points) {
    SystemParams q = p;
    q.delta = delta;
    rows.push_back({name, delta, evaluate(q, law)});
  }
  return rows;
}

std::optional<std::string> best_resonance(const std::vector<ResonanceRow>& rows) {
  const ResonanceRow* best = nullptr;
  for (const auto& r : rows)
    if (r.law.status == CoolingStatus::Cooling && (!best || r.law.m_ss < best->law.m_ss)) best = &r;
  if (!best) return std::nullopt;
  return best->name;
}

std::string to_csv(const SweepResult& result) {
  const SweepSpec& spec = result.spec;
  std::ostringstream out;
  out << "# params: " << params_to_json(spec.base) << '\n';
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "{\"axis\":\"%s\",\"law\":\"%s\",\"lock\":\"%s\",\"grid_lo\":%.17g,"
                "\"grid_hi\":%.17g,\"grid_n\":%zu,\"refine\":%s}",
                std::string(to_string(spec.axis)).c_str(), std::string(to_string(spec.law)).c_str(),
                std::string(to_string(spec.lock)).c_str(), spec.grid.front(), spec.grid.back(),
                spec.grid.size(), spec.refine_minima ? "true" : "false");
  out << "# sweep: " << buf << '\n';
  out << "axis,value,m_ss,gamma_c,status\n";
  const std::string axis(to_string(spec.axis));
  for (const Row& r : result.rows)
    out << axis << ',' << csv::number(r.value) << ',' << csv::number(r.m_ss) << ','
        << csv::number(r.gamma_c) << ',' << r.status << '\n';
  for (const Minimum& m : result.minima)
    out << "# minimum: " << csv::number(m.location) << ',' << csv::number(m.value) << '\n';
  return out.str();
}

SweepSpec spec_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<SystemParams> params;
  std::optional<nlohmann::json> sweep_info;
  while (std::getline(in, line)) {
    if (line.rfind("# params: ", 0) == 0) params = params_from_json(line.substr(10));
    else if (line.rfind("# sweep: ", 0) == 0) {
      try {
        sweep_info = nlohmann::json::parse(line.substr(9));
      } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed sweep header: ") + e.what());
      }
    }
  }
  if (!params || !sweep_info) throw InvalidInput("CSV lacks '# params:' or '# sweep:' header");
  try {
    const auto& j = *sweep_info;
    SweepSpec spec;
    spec.base = *params;
    spec.axis = parse_axis(j.at("axis").get<std::string>());
    spec.law = parse_law(j.at("law").get<std::string>());
    spec.lock = parse_lock(j.at("lock").get<std::string>());
    spec.refine_minima = j.at("refine").get<bool>();
    spec.grid = linspace(j.at("grid_lo").get<double>(), j.at("grid_hi").get<double>(),
                         j.at("grid_n").get<std::size_t>());
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed sweep header: ") + e.what());
  }
}

}  // namespace cavitycool::scan
