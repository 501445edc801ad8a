#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "cavitycool/params.hpp"
#include "cavitycool/rateeq.hpp"

namespace cavitycool::lindblad {

using cplx = std::complex<double>;
using DenseOp = Eigen::MatrixXcd;
using SparseOp = Eigen::SparseMatrix<cplx>;

/// Fock truncation of the phonon and cavity modes. The composite space is
/// ordered atom (x) phonon (x) cavity with dimension 2 * n_b * n_c.
struct FockConfig {
  int n_b = 6;
  int n_c = 6;
  long max_liouville_size = 16384;  ///< cap on D^2

  int dim() const { return 2 * n_b * n_c; }
};

/// Operators of the truncated model. The sixteen `coherences` follow the
/// rate-equation slot order (without m).
struct FockModel {
  SystemParams params;
  FockConfig cfg;
  double node_sign = 1.0;

  SparseOp hamiltonian;
  SparseOp b, c, sigma_minus;
  SparseOp jump_cavity;  ///< sqrt(kappa) c
  SparseOp jump_atom;    ///< sqrt(gamma_atom) sigma-
  SparseOp phonon_number, excited_population, photon_number;
  std::array<SparseOp, rateeq::kCoherences> coherences;

  /// H - (i/2) sum_k L_k^dag L_k
  SparseOp effective_hamiltonian;

  int dim() const { return cfg.dim(); }
};

/// Builds all operators. Unlike the rest of the library, gamma_atom == 0 is
/// accepted here. `node_sign` selects the sign of the node expansion
/// of the coupling (+1 or -1). Throws InvalidInput when the configuration is
/// invalid or the Liouville-space size exceeds the cap.
FockModel build_model(const SystemParams& p, const FockConfig& cfg, double node_sign = 1.0);

/// L(rho).
DenseOp apply_liouvillian(const FockModel& model, const DenseOp& rho);

/// Heisenberg-picture generator acting on an observable, L^dag(A).
DenseOp apply_adjoint(const FockModel& model, const DenseOp& op);

double expectation(const SparseOp& op, const DenseOp& rho);

/// atom (x) Fock(n_phonon) (x) vacuum, or with the atom in its excited state.
DenseOp product_state(const FockConfig& cfg, int atom_level, int phonon_level, int cavity_level);

/// atom ground (x) thermal phonon state with the given mean (x) cavity vacuum.
DenseOp thermal_phonon_state(const FockConfig& cfg, double mean_phonons);

struct Record {
  double t = 0.0;
  double m = 0.0;
  double pop_e = 0.0;
  double n_cav = 0.0;
  double trace = 1.0;
  double purity = 1.0;
  double hermiticity_defect = 0.0;
  std::vector<double> coherences;  ///< empty unless requested
};

struct EvolveOptions {
  int sample_every = 1;
  bool record_coherences = false;
  /// Optional per-step hook receiving (t, rho) at each recorded sample.
  std::function<void(double, const DenseOp&)> observer;
};

/// RK4 propagation of the master equation. Requires a Hermitian, unit-trace
/// rho0 and dt <= 0.01 / omega_max. Throws NumericalError
/// ("integration unstable") if the trace drifts by more than 1e-6.
std::vector<Record> evolve(const FockModel& model, const DenseOp& rho0, double t_final,
                           double dt, const EvolveOptions& opts = {});

struct SteadyState {
  bool degenerate = false;  ///< stationary subspace is more than one-dimensional
  DenseOp rho;              ///< empty when degenerate
  double residual = 0.0;    ///< max-norm of L(rho)
  double min_eigenvalue = 0.0;
};

/// Null vector of the Liouvillian with the trace condition replacing one
/// equation. Requires kappa > 0 and gamma_atom > 0.
SteadyState steady_state(const FockModel& model);

struct TruncationReport {
  double top_phonon_population = 0.0;
  double top_cavity_population = 0.0;
  double threshold = 1e-4;
  bool ok = true;
};

TruncationReport truncation_check(const FockModel& model, const DenseOp& rho,
                                  double threshold = 1e-4);

}  // namespace cavitycool::lindblad
