#include "cavitycool/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cavitycool/analytic.hpp"
#include "cavitycool/csv.hpp"
#include "cavitycool/error.hpp"
#include "cavitycool/lindblad.hpp"
#include "cavitycool/params.hpp"
#include "cavitycool/rateeq.hpp"
#include "cavitycool/scan.hpp"

namespace cavitycool::cli {

namespace {

// Below this drive strength (in units of gamma_atom) the cooling rate, which
// vanishes as omega^2, is treated as zero.
constexpr double kMinDrive = 1e-6;

struct ParamFlags {
  std::string file;
  std::optional<double> nu, delta, omega, kappa, gamma_atom, eta, g;
  bool strict = false;
  double threshold = kDefaultValidityThreshold;
};

void add_param_flags(CLI::App* app, ParamFlags& f) {
  app->add_option("--params", f.file, "JSON parameter file");
  app->add_option("--nu", f.nu, "trap frequency");
  app->add_option("--delta", f.delta, "atom-cavity detuning");
  app->add_option("--omega", f.omega, "laser Rabi frequency");
  app->add_option("--kappa", f.kappa, "cavity decay rate");
  app->add_option("--gamma-atom", f.gamma_atom, "atomic decay rate (unit of all rates)");
  app->add_option("--eta", f.eta, "Lamb-Dicke parameter");
  app->add_option("--g", f.g, "atom-cavity coupling");
  app->add_flag("--strict", f.strict, "exit 3 when the separation-of-timescales check fails");
  app->add_option("--threshold", f.threshold, "validity threshold for eta*g / max(|delta|, kappa, nu)");
}

SystemParams resolve(const ParamFlags& f) {
  SystemParams p;
  if (!f.file.empty()) p = load_params(f.file, p);
  if (f.nu) p.nu = *f.nu;
  if (f.delta) p.delta = *f.delta;
  if (f.omega) p.omega = *f.omega;
  if (f.kappa) p.kappa = *f.kappa;
  if (f.gamma_atom) p.gamma_atom = *f.gamma_atom;
  if (f.eta) p.eta = *f.eta;
  if (f.g) p.g = *f.g;
  check_invariants(p);
  return p;
}

void print_law(std::ostream& out, const CoolingLaw& law, std::string_view backend, bool rate_first) {
  out << "backend=" << backend << '\n' << "status=" << to_string(law.status) << '\n';
  if (rate_first) {
    out << "gamma_c=" << csv::number(law.gamma_c) << '\n' << "c=" << csv::number(law.c_source) << '\n'
        << "m_ss=" << csv::number(law.m_ss) << '\n';
  } else {
    out << "m_ss=" << csv::number(law.m_ss) << '\n' << "gamma_c=" << csv::number(law.gamma_c) << '\n'
        << "c=" << csv::number(law.c_source) << '\n';
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot write '" + path + "'");
  file << text;
}

void require_drive(const SystemParams& p) {
  if (p.omega <= kMinDrive * p.gamma_atom) {
    std::ostringstream msg;
    msg << "no drive: omega = " << p.omega
        << " is too small; the cooling rate vanishes as omega^2 and there is no effective cooling";
    throw InvalidInput(msg.str());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cavity-mediated laser cooling: cooling laws, rate equations and master-equation oracle", "cavitycool"};
  app.require_subcommand(1, 1);

  ParamFlags flags;

  auto* resonances = app.add_subcommand("resonances", "print the cooling and heating detunings");
  auto* mss = app.add_subcommand("mss", "stationary phonon number");
  auto* coolrate = app.add_subcommand("coolrate", "effective cooling rate, optional rate-equation trajectory");
  auto* sweep = app.add_subcommand("sweep", "single-axis parameter sweep as CSV");
  auto* oracle = app.add_subcommand("oracle", "master-equation trajectory or steady state");
  auto* compare = app.add_subcommand("compare", "compare the three cooling resonances");
  auto* validate_cmd = app.add_subcommand("validate", "separation-of-timescales check");
  for (auto* sub : {resonances, mss, coolrate, sweep, oracle, compare, validate_cmd})
    add_param_flags(sub, flags);

  bool eliminate = false, strong = false;
  for (auto* sub : {mss, coolrate, compare})
    sub->add_flag("--eliminate", eliminate, "use numerical adiabatic elimination");
  mss->add_flag("--strong", strong, "use the strong-drive simplification");

  std::string out_path;
  double dt = 0.0, t_final = 0.0;
  int sample_every = 1;
  for (auto* sub : {coolrate, sweep, oracle}) sub->add_option("--out", out_path, "write CSV to file");
  for (auto* sub : {coolrate, oracle}) {
    sub->add_option("--dt", dt, "time step (default 0.01 / max frequency)");
    sub->add_option("--tfinal", t_final, "final time (default 100)");
    sub->add_option("--sample-every", sample_every, "record every k-th step")->check(CLI::PositiveNumber);
  }

  bool trajectory = false;
  double m0 = 0.0;
  coolrate->add_flag("--trajectory", trajectory, "integrate the rate equations and emit CSV");
  coolrate->add_option("--m0", m0, "initial phonon number");

  std::string axis = "delta", grid, law_name = "closed", lock = "none";
  bool no_refine = false;
  sweep->add_option("--axis", axis, "delta | omega | nu | kappa");
  sweep->add_option("--grid", grid, "lo:hi:step")->required();
  sweep->add_option("--law", law_name, "closed | eliminated");
  sweep->add_option("--lock", lock, "none | delta0 | delta_minus | delta_plus");
  sweep->add_flag("--no-refine", no_refine, "report grid minima without golden-section refinement");

  int nb = 6, nc = 6, fock = -1;
  double thermal = -1.0;
  bool steady = false, coherences = false;
  oracle->add_option("--nb", nb, "phonon Fock dimension");
  oracle->add_option("--nc", nc, "cavity Fock dimension");
  oracle->add_option("--fock", fock, "initial phonon Fock level");
  oracle->add_option("--thermal", thermal, "initial thermal mean phonon number");
  oracle->add_flag("--steady", steady, "compute the stationary state instead of a trajectory");
  oracle->add_flag("--coherences", coherences, "add x_ijk columns to the trajectory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    const SystemParams p = resolve(flags);
    if (lamb_dicke_warning(p))
      err << "warning: eta = " << p.eta << " is outside the Lamb-Dicke regime (eta << 1)\n";
    const ValidityReport report = validate(p, flags.threshold);

    if (validate_cmd->parsed()) {
      out << "ratio=" << csv::number(report.ratio) << '\n'
          << "threshold=" << csv::number(report.threshold) << '\n'
          << "ok=" << (report.ok ? "true" : "false") << '\n';
    }
    if (flags.strict && !report.ok) {
      err << "validity check failed: eta*g / max(|delta|, kappa, nu) = " << report.ratio
          << " >= " << report.threshold << '\n';
      return kValidityViolation;
    }
    if (validate_cmd->parsed()) return kOk;

    if (resonances->parsed()) {
      const ResonanceCatalogue cat = resonance_catalogue(p.nu, p.omega);
      out << "cooling " << csv::number(cat.cooling[0]) << ' ' << csv::number(cat.cooling[1]) << ' '
          << csv::number(cat.cooling[2]) << '\n';
      out << "heating " << csv::number(cat.heating[0]) << ' ' << csv::number(cat.heating[1]) << ' '
          << csv::number(cat.heating[2]) << '\n';
      return kOk;
    }

    if (mss->parsed() || (coolrate->parsed() && !trajectory)) {
      require_drive(p);
      CoolingLaw law;
      std::string_view backend = "closed";
      if (strong) {
        law = strong_drive_cooling_law(p);
        backend = "strong_drive";
      } else if (eliminate) {
        law = rateeq::eliminate(p);
        backend = "eliminated";
      } else {
        law = cooling_law_closed(p);
      }
      print_law(out, law, backend, coolrate->parsed());
      return kOk;
    }

    if (coolrate->parsed()) {
      const rateeq::RateSystem sys = rateeq::assemble(p);
      rateeq::RateState y0 = rateeq::RateState::Zero();
      y0(rateeq::kM) = m0;
      const double step = dt > 0.0 ? dt : 0.01 / sys.omega_max;
      const double horizon = t_final > 0.0 ? t_final : 100.0;
      const auto samples = rateeq::integrate(sys, y0, horizon, step, sample_every);
      emit("# params: " + params_to_json(p) + "\n" + csv::rate_trajectory(samples), out_path, out);
      return kOk;
    }

    if (sweep->parsed()) {
      scan::SweepSpec spec;
      spec.axis = scan::parse_axis(axis);
      spec.law = scan::parse_law(law_name);
      spec.lock = scan::parse_lock(lock);
      spec.grid = scan::parse_grid(grid);
      spec.base = p;
      spec.refine_minima = !no_refine;
      emit(scan::to_csv(scan::sweep(spec)), out_path, out);
      return kOk;
    }

    if (compare->parsed()) {
      require_drive(p);
      const auto rows = scan::compare_resonances(p, eliminate ? scan::Law::Eliminated : scan::Law::Closed);
      out << "resonance,delta,m_ss,gamma_c,status\n";
      for (const auto& r : rows)
        out << r.name << ',' << csv::number(r.delta) << ',' << csv::number(r.law.m_ss) << ','
            << csv::number(r.law.gamma_c) << ',' << to_string(r.law.status) << '\n';
      const auto best = scan::best_resonance(rows);
      out << "# best: " << (best ? *best : std::string("none")) << '\n';
      return kOk;
    }

    if (oracle->parsed()) {
      lindblad::FockConfig cfg;
      cfg.n_b = nb;
      cfg.n_c = nc;
      const lindblad::FockModel model = lindblad::build_model(p, cfg);
      if (steady) {
        const auto ss = lindblad::steady_state(model);
        if (ss.degenerate) {
          err << "no unique steady state: phonon number is conserved when eta*g = 0\n";
          return kNumericalFailure;
        }
        const auto trunc = lindblad::truncation_check(model, ss.rho);
        out << "m=" << csv::number(lindblad::expectation(model.phonon_number, ss.rho)) << '\n'
            << "pop_e=" << csv::number(lindblad::expectation(model.excited_population, ss.rho)) << '\n'
            << "n_cav=" << csv::number(lindblad::expectation(model.photon_number, ss.rho)) << '\n'
            << "residual=" << csv::number(ss.residual) << '\n'
            << "min_eigenvalue=" << csv::number(ss.min_eigenvalue) << '\n'
            << "top_phonon_population=" << csv::number(trunc.top_phonon_population) << '\n'
            << "top_cavity_population=" << csv::number(trunc.top_cavity_population) << '\n'
            << "truncation_ok=" << (trunc.ok ? "true" : "false") << '\n';
        return kOk;
      }
      lindblad::DenseOp rho0;
      if (thermal >= 0.0 && fock >= 0) throw InvalidInput("--fock and --thermal are exclusive");
      if (thermal >= 0.0) rho0 = lindblad::thermal_phonon_state(cfg, thermal);
      else rho0 = lindblad::product_state(cfg, 0, fock >= 0 ? fock : 0, 0);
      lindblad::EvolveOptions opts;
      opts.sample_every = sample_every;
      opts.record_coherences = coherences;
      const double step = dt > 0.0 ? dt : 0.01 / max_frequency(p);
      const double horizon = t_final > 0.0 ? t_final : 100.0;
      const auto records = lindblad::evolve(model, rho0, horizon, step, opts);
      emit("# params: " + params_to_json(p) + "\n" + csv::oracle_trajectory(records), out_path, out);
      return kOk;
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kInvalidInput;
}

}  // namespace cavitycool::cli
