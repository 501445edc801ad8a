#include "cavitycool/lindblad.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "cavitycool/error.hpp"

namespace cavitycool::lindblad {

namespace {

const cplx kI(0.0, 1.0);

SparseOp identity(int n) {
  SparseOp id(n, n);
  id.setIdentity();
  return id;
}

SparseOp lowering(int n) {
  SparseOp a(n, n);
  std::vector<Eigen::Triplet<cplx>> t;
  for (int k = 1; k < n; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SparseOp kron3(const SparseOp& atom, const SparseOp& phonon, const SparseOp& cavity) {
  SparseOp ab = Eigen::kroneckerProduct(atom, phonon);
  SparseOp abc = Eigen::kroneckerProduct(ab, cavity);
  abc.makeCompressed();
  return abc;
}

SparseOp adj(const SparseOp& op) { return SparseOp(op.adjoint()); }

double max_abs(const DenseOp& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const SparseOp& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

// Quadrature pair (a + a^dag, i(a - a^dag)) for index 2 and 3; index 0 and 1
// are the identity and the number operator.
SparseOp mode_basis(int index, const SparseOp& a) {
  const int n = static_cast<int>(a.rows());
  const SparseOp ad = adj(a);
  switch (index) {
    case 0: return identity(n);
    case 1: return SparseOp(ad * a);
    case 2: return SparseOp(a + ad);
    case 3: return SparseOp(kI * (a - ad));
  }
  throw InvalidInput("operator index out of range");
}

// Row-compressed operator with split real/imaginary storage. The products
// below avoid std::complex multiplication, whose NaN-recovery path dominates
// the cost of small sparse-dense products.
struct RowKernel {
  int n = 0;
  std::vector<int> row_ptr, col;
  std::vector<double> re, im;

  explicit RowKernel(const SparseOp& op) : n(static_cast<int>(op.rows())) {
    const Eigen::SparseMatrix<cplx, Eigen::RowMajor> rm(op);
    row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int r = 0; r < n; ++r) {
      for (decltype(rm)::InnerIterator it(rm, r); it; ++it) {
        if (it.value() == cplx(0.0)) continue;
        col.push_back(static_cast<int>(it.col()));
        re.push_back(it.value().real());
        im.push_back(it.value().imag());
      }
      row_ptr[static_cast<std::size_t>(r) + 1] = static_cast<int>(col.size());
    }
  }

  bool empty() const { return col.empty(); }

  // out = scale * op * x (scale is +-1 or +-i, passed as a complex factor),
  // accumulated into out when `accumulate` is set.
  void apply(const DenseOp& x, DenseOp& out, cplx scale, bool accumulate) const {
    const double sr = scale.real(), si = scale.imag();
    for (int j = 0; j < n; ++j) {
      const double* xj = reinterpret_cast<const double*>(x.col(j).data());
      double* oj = reinterpret_cast<double*>(out.col(j).data());
      for (int r = 0; r < n; ++r) {
        double ar = 0.0, ai = 0.0;
        for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
          const double vr = re[k], vi = im[k];
          const double xr = xj[2 * col[k]], xi = xj[2 * col[k] + 1];
          ar += vr * xr - vi * xi;
          ai += vr * xi + vi * xr;
        }
        const double yr = sr * ar - si * ai;
        const double yi = sr * ai + si * ar;
        if (accumulate) {
          oj[2 * r] += yr;
          oj[2 * r + 1] += yi;
        } else {
          oj[2 * r] = yr;
          oj[2 * r + 1] = yi;
        }
      }
    }
  }
};

struct LiouvillianKernel {
  RowKernel heff;
  std::vector<RowKernel> jumps;
  DenseOp scratch, scratch_adj;

  explicit LiouvillianKernel(const FockModel& model)
      : heff(model.effective_hamiltonian),
        scratch(model.dim(), model.dim()),
        scratch_adj(model.dim(), model.dim()) {
    for (const SparseOp* jump : {&model.jump_cavity, &model.jump_atom}) {
      RowKernel k(*jump);
      if (!k.empty()) jumps.push_back(std::move(k));
    }
  }

  // L(rho) for Hermitian rho: -i H_eff rho + h.c. + sum_k L_k rho L_k^dag.
  void apply(const DenseOp& rho, DenseOp& out) {
    heff.apply(rho, scratch, -kI, false);
    out = scratch;
    out += scratch.adjoint();
    for (const RowKernel& jump : jumps) {
      jump.apply(rho, scratch, 1.0, false);  // L rho
      scratch_adj = scratch.adjoint();       // rho L^dag
      jump.apply(scratch_adj, out, 1.0, true);
    }
  }
};

double real_trace(const DenseOp& rho) { return rho.diagonal().real().sum(); }

double hermiticity_defect(const DenseOp& rho) { return max_abs(DenseOp(rho - rho.adjoint())); }

double min_eigenvalue(const DenseOp& rho) {
  const DenseOp herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOp> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

FockModel build_model(const SystemParams& p, const FockConfig& cfg, double node_sign) {
  {
    // gamma_atom == 0 is allowed here.
    SystemParams checked = p;
    if (checked.gamma_atom == 0.0) checked.gamma_atom = 1.0;
    check_invariants(checked);
  }
  if (cfg.n_b < 2 || cfg.n_c < 2) throw InvalidInput("Fock truncation must keep at least two levels");
  if (node_sign != 1.0 && node_sign != -1.0) throw InvalidInput("node sign must be +1 or -1");
  const long d = cfg.dim();
  if (d * d > cfg.max_liouville_size)
    throw InvalidInput("dimension cap exceeded: D^2 = " + std::to_string(d * d) + " > " +
                       std::to_string(cfg.max_liouville_size));

  FockModel m;
  m.params = p;
  m.cfg = cfg;
  m.node_sign = node_sign;

  const SparseOp id_atom = identity(2);
  const SparseOp id_b = identity(cfg.n_b);
  const SparseOp id_c = identity(cfg.n_c);
  const SparseOp atom_lower = lowering(2);  // |0><1|
  const SparseOp b_local = lowering(cfg.n_b);
  const SparseOp c_local = lowering(cfg.n_c);

  m.sigma_minus = kron3(atom_lower, id_b, id_c);
  m.b = kron3(id_atom, b_local, id_c);
  m.c = kron3(id_atom, id_b, c_local);
  const SparseOp sigma_plus = adj(m.sigma_minus);
  const SparseOp bd = adj(m.b);
  const SparseOp cd = adj(m.c);

  m.phonon_number = bd * m.b;
  m.photon_number = cd * m.c;
  m.excited_population = sigma_plus * m.sigma_minus;

  const double eg = node_sign * p.eta * p.g;
  SparseOp h = cplx(p.nu) * m.phonon_number + cplx(p.delta) * m.photon_number;
  h += cplx(0.5 * p.omega) * SparseOp(m.sigma_minus + sigma_plus);
  if (eg != 0.0) {
    const SparseOp exchange = sigma_plus * m.c + m.sigma_minus * cd;
    h += cplx(eg) * SparseOp(SparseOp(m.b + bd) * exchange);
  }
  h.prune(cplx(0.0));
  h.makeCompressed();
  if (max_abs(SparseOp(h - adj(h))) > 1e-12) throw NumericalError("Hamiltonian is not Hermitian");
  m.hamiltonian = h;

  m.jump_cavity = cplx(std::sqrt(p.kappa)) * m.c;
  m.jump_atom = cplx(std::sqrt(p.gamma_atom)) * m.sigma_minus;
  m.jump_cavity.prune(cplx(0.0));
  m.jump_atom.prune(cplx(0.0));

  SparseOp decay = adj(m.jump_cavity) * m.jump_cavity;
  decay += adj(m.jump_atom) * m.jump_atom;
  m.effective_hamiltonian = h - cplx(0.0, 0.5) * decay;
  m.effective_hamiltonian.makeCompressed();

  static constexpr std::array<std::array<int, 3>, rateeq::kCoherences> kIndices = {{
      {2, 0, 2}, {2, 0, 3}, {3, 0, 2}, {3, 0, 3},
      {2, 1, 2}, {2, 1, 3}, {3, 1, 2}, {3, 1, 3},
      {2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {3, 2, 3},
      {2, 3, 2}, {2, 3, 3}, {3, 3, 2}, {3, 3, 3},
  }};
  for (std::size_t s = 0; s < kIndices.size(); ++s) {
    const auto [i, j, k] = kIndices[s];
    m.coherences[s] = kron3(mode_basis(j, atom_lower), mode_basis(i, b_local),
                            mode_basis(k, c_local));
  }
  return m;
}

DenseOp apply_liouvillian(const FockModel& model, const DenseOp& rho) {
  const SparseOp& heff = model.effective_hamiltonian;
  DenseOp out = -kI * (heff * rho);
  out += kI * (rho * DenseOp(heff.adjoint()));
  for (const SparseOp* jump : {&model.jump_cavity, &model.jump_atom}) {
    const DenseOp left = *jump * rho;
    out += left * DenseOp(jump->adjoint());
  }
  return out;
}

DenseOp apply_adjoint(const FockModel& model, const DenseOp& op) {
  const DenseOp h = DenseOp(model.hamiltonian);
  DenseOp out = kI * (h * op - op * h);
  for (const SparseOp* jump : {&model.jump_cavity, &model.jump_atom}) {
    const DenseOp l = DenseOp(*jump);
    const DenseOp ld = l.adjoint();
    const DenseOp ldl = ld * l;
    out += ld * op * l - 0.5 * (op * ldl + ldl * op);
  }
  return out;
}

double expectation(const SparseOp& op, const DenseOp& rho) {
  cplx acc = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseOp::InnerIterator it(op, k); it; ++it)
      acc += it.value() * rho(it.col(), it.row());
  return acc.real();
}

DenseOp product_state(const FockConfig& cfg, int atom_level, int phonon_level, int cavity_level) {
  if (atom_level < 0 || atom_level > 1 || phonon_level < 0 || phonon_level >= cfg.n_b ||
      cavity_level < 0 || cavity_level >= cfg.n_c)
    throw InvalidInput("product state level outside the truncated space");
  const int idx = atom_level * cfg.n_b * cfg.n_c + phonon_level * cfg.n_c + cavity_level;
  DenseOp rho = DenseOp::Zero(cfg.dim(), cfg.dim());
  rho(idx, idx) = 1.0;
  return rho;
}

DenseOp thermal_phonon_state(const FockConfig& cfg, double mean_phonons) {
  if (!(mean_phonons >= 0.0)) throw InvalidInput("mean phonon number must be non-negative");
  std::vector<double> pops(static_cast<std::size_t>(cfg.n_b));
  const double ratio = mean_phonons / (1.0 + mean_phonons);
  double norm = 0.0;
  for (int n = 0; n < cfg.n_b; ++n) norm += pops[n] = std::pow(ratio, n);
  DenseOp rho = DenseOp::Zero(cfg.dim(), cfg.dim());
  for (int n = 0; n < cfg.n_b; ++n) {
    const int idx = n * cfg.n_c;  // atom ground, cavity vacuum
    rho(idx, idx) = pops[n] / norm;
  }
  return rho;
}

std::vector<Record> evolve(const FockModel& model, const DenseOp& rho0, double t_final,
                           double dt, const EvolveOptions& opts) {
  const int d = model.dim();
  if (rho0.rows() != d || rho0.cols() != d) throw InvalidInput("rho0 has the wrong dimension");
  if (hermiticity_defect(rho0) > 1e-10) throw InvalidInput("rho0 is not Hermitian");
  if (std::abs(real_trace(rho0) - 1.0) > 1e-10) throw InvalidInput("rho0 must have unit trace");
  if (min_eigenvalue(rho0) < -1e-10) throw InvalidInput("rho0 is not positive semidefinite");
  if (!(t_final > 0.0) || !(dt > 0.0)) throw InvalidInput("t_final and dt must be positive");
  if (opts.sample_every < 1) throw InvalidInput("sample_every must be >= 1");
  if (dt > 0.01 / max_frequency(model.params) * (1.0 + 1e-12)) throw InvalidInput("step too large");

  const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-9));
  const double h = t_final / static_cast<double>(steps);

  auto record = [&](double t, const DenseOp& rho) {
    Record r;
    r.t = t;
    r.m = expectation(model.phonon_number, rho);
    r.pop_e = expectation(model.excited_population, rho);
    r.n_cav = expectation(model.photon_number, rho);
    r.trace = real_trace(rho);
    r.purity = rho.cwiseProduct(rho.transpose()).sum().real();
    r.hermiticity_defect = hermiticity_defect(rho);
    if (opts.record_coherences) {
      r.coherences.reserve(model.coherences.size());
      for (const auto& op : model.coherences) r.coherences.push_back(expectation(op, rho));
    }
    if (opts.observer) opts.observer(t, rho);
    return r;
  };

  std::vector<Record> out;
  out.reserve(static_cast<std::size_t>(steps / opts.sample_every + 2));
  DenseOp rho = 0.5 * (rho0 + rho0.adjoint());
  out.push_back(record(0.0, rho));

  LiouvillianKernel kernel(model);
  DenseOp k1(d, d), k2(d, d), k3(d, d), k4(d, d), stage(d, d);
  for (long i = 1; i <= steps; ++i) {
    kernel.apply(rho, k1);
    stage.noalias() = rho + (0.5 * h) * k1;
    kernel.apply(stage, k2);
    stage.noalias() = rho + (0.5 * h) * k2;
    kernel.apply(stage, k3);
    stage.noalias() = rho + h * k3;
    kernel.apply(stage, k4);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double tr = real_trace(rho);
    if (!std::isfinite(tr) || std::abs(tr - 1.0) > 1e-6) throw NumericalError("integration unstable");
    if (i % opts.sample_every == 0 || i == steps) out.push_back(record(static_cast<double>(i) * h, rho));
  }
  return out;
}

SteadyState steady_state(const FockModel& model) {
  const SystemParams& p = model.params;
  if (!(p.kappa > 0.0) || !(p.gamma_atom > 0.0))
    throw InvalidInput("steady state requires kappa > 0 and gamma_atom > 0");

  SteadyState result;
  // Without the three-body coupling the phonon number is conserved and has no
  // dissipator, so every phonon sector carries its own stationary state.
  if (p.eta * p.g == 0.0) {
    result.degenerate = true;
    return result;
  }

  const int d = model.dim();
  const long n = static_cast<long>(d) * d;
  // Column-major vec: vec(A X B) = (B^T kron A) vec(X).
  const SparseOp id = identity(d);
  const SparseOp& heff = model.effective_hamiltonian;
  SparseOp super = Eigen::kroneckerProduct(id, SparseOp(-kI * heff));
  super += SparseOp(Eigen::kroneckerProduct(SparseOp(kI * SparseOp(heff.conjugate())), id));
  for (const SparseOp* jump : {&model.jump_cavity, &model.jump_atom})
    super += SparseOp(Eigen::kroneckerProduct(SparseOp(jump->conjugate()), *jump));

  // Replace the equation for rho(0,0) by the trace condition.
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(super.nonZeros() + d));
  for (int k = 0; k < super.outerSize(); ++k)
    for (SparseOp::InnerIterator it(super, k); it; ++it)
      if (it.row() != 0) triplets.emplace_back(it.row(), it.col(), it.value());
  for (int k = 0; k < d; ++k) triplets.emplace_back(0, k * d + k, 1.0);
  SparseOp system(n, n);
  system.setFromTriplets(triplets.begin(), triplets.end());
  system.makeCompressed();

  Eigen::SparseLU<SparseOp, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) throw NumericalError("steady state not found");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(0) = 1.0;
  const Eigen::VectorXcd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw NumericalError("steady state not found");

  DenseOp rho = Eigen::Map<const DenseOp>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= real_trace(rho);

  result.residual = max_abs(apply_liouvillian(model, rho));
  if (!(result.residual < 1e-10)) throw NumericalError("steady state not found");
  result.min_eigenvalue = min_eigenvalue(rho);
  if (result.min_eigenvalue < -1e-8) throw NumericalError("steady state not found");
  result.rho = std::move(rho);
  return result;
}

TruncationReport truncation_check(const FockModel& model, const DenseOp& rho, double threshold) {
  const int nb = model.cfg.n_b;
  const int nc = model.cfg.n_c;
  TruncationReport r;
  r.threshold = threshold;
  for (int a = 0; a < 2; ++a) {
    for (int k = 0; k < nc; ++k) r.top_phonon_population += rho(a * nb * nc + (nb - 1) * nc + k, a * nb * nc + (nb - 1) * nc + k).real();
    for (int n = 0; n < nb; ++n) r.top_cavity_population += rho(a * nb * nc + n * nc + nc - 1, a * nb * nc + n * nc + nc - 1).real();
  }
  r.ok = r.top_phonon_population <= threshold && r.top_cavity_population <= threshold;
  return r;
}

}  // namespace cavitycool::lindblad
