#include "discofield/field_solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "discofield/hermite.hpp"
#include "discofield/rng.hpp"

namespace discofield {

namespace {

const Complex kI{0.0, 1.0};

// Combined per-axis coefficients. Every quantity that would be singular at
// zero dispersion (sigma_x = 1/(2 sigma_p), dtau = 1/(2 dm)) enters only in
// products that stay finite, so B = 0 / dm = 0 are valid degenerate inputs.
struct RawModel {
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  std::array<double, 4> sigma_p{};   // sqrt(B_mumu)
  Eigen::Matrix4d coupling;          // C(mu, alpha) = B(mu, alpha)/(2 sqrt(B_aa))
  double dm = 0.0;
  std::array<double, 4> mean_x{}, mean_p{};
  double mean_m = 0.0, mean_tau = 0.0;
};

RawModel make_raw(const Eigen::Matrix4d& b, double dm, const FourMeans& means,
                  double mean_m, double mean_tau) {
  RawModel raw;
  raw.b = b;
  raw.dm = dm;
  raw.mean_x = means.x_up;
  raw.mean_p = means.p_dn;
  raw.mean_m = mean_m;
  raw.mean_tau = mean_tau;
  raw.coupling = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 4; ++a) {
    raw.sigma_p[a] = std::sqrt(std::max(b(a, a), 0.0));
    for (int mu = 0; mu < 4; ++mu) {
      if (raw.sigma_p[a] > 0.0)
        raw.coupling(mu, a) = b(mu, a) / (2.0 * raw.sigma_p[a]);
      else if (b(mu, a) != 0.0)
        throw ValidationError(
            "degenerate axis with nonzero codispersion is not representable");
    }
  }
  return raw;
}

RawModel raw_from_config(const ModelConfig& cfg) {
  return make_raw(cfg.b.matrix(), cfg.mass.sigma_m, cfg.means, cfg.mass.mean_m,
                  cfg.mass.mean_tau);
}

Matrix ladder_plus(int n) {  // a + a*
  const Matrix a = ladder_lowering(n);
  return a + Matrix(a.adjoint());
}

Matrix ladder_minus(int n) {  // a - a*
  const Matrix a = ladder_lowering(n);
  return a - Matrix(a.adjoint());
}

// Dense g^{mu nu} Sigma_munu on the four spatial axes of `cutoffs5`.
Matrix contract_sigma_raw(const RawModel& raw, const std::vector<int>& cutoffs4) {
  std::vector<Matrix> x_raw, p_shift;
  for (int a = 0; a < 4; ++a) {
    x_raw.push_back(embed_axis(ladder_plus(cutoffs4[a]), a, cutoffs4));
    p_shift.push_back(
        embed_axis(Matrix(kI * raw.sigma_p[a] * ladder_minus(cutoffs4[a])), a,
                   cutoffs4));
  }
  long dim = 1;
  for (int c : cutoffs4) dim *= c;
  Matrix out = Matrix::Zero(dim, dim);
  for (int mu = 0; mu < 4; ++mu) {
    const double g = Metric::kDiag[mu];
    out += g * 0.5 * (p_shift[mu] * p_shift[mu]);
    for (int alpha = 0; alpha < 4; ++alpha) {
      for (int beta = alpha; beta < 4; ++beta) {
        double coeff = raw.coupling(mu, alpha) * raw.coupling(mu, beta);
        if (alpha != beta) coeff *= 2.0;
        if (coeff == 0.0) continue;
        out += g * 2.0 * coeff * (x_raw[alpha] * x_raw[beta]);
      }
    }
  }
  return out;
}

// Dense m2_mean - M^2 on the tau axis: 1/2 dm^2 [(a+a*)^2 - (a-a*)^2].
Matrix m2_shift_raw(const RawModel& raw, int n_tau) {
  const Matrix plus = ladder_plus(n_tau);
  const Matrix minus = ladder_minus(n_tau);
  return 0.5 * raw.dm * raw.dm * (plus * plus - minus * minus);
}

Matrix scalar_operator_raw(const RawModel& raw, const std::vector<int>& cutoffs5) {
  const std::vector<int> cutoffs4(cutoffs5.begin(), cutoffs5.begin() + 4);
  const int n_tau = cutoffs5[4];
  const Matrix contract = contract_sigma_raw(raw, cutoffs4);
  const Matrix mass = m2_shift_raw(raw, n_tau);
  return kron(contract, Matrix::Identity(n_tau, n_tau)) -
         kron(Matrix::Identity(contract.rows(), contract.cols()), mass);
}

struct SpinorNnz {
  std::vector<Eigen::Triplet<Complex>> entries;  // (row, col) within 32x32
};

SpinorNnz nonzeros(const Matrix& m) {
  SpinorNnz out;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (m(r, c) != Complex{0.0, 0.0}) out.entries.emplace_back(r, c, m(r, c));
  return out;
}

// sign = -1 gives the field operator (the -zeta/-vartheta bracket),
// sign = +1 its factorization partner.
SparseMatrix fermion_sparse_raw(const RawModel& raw,
                                const std::vector<int>& cutoffs5,
                                const FactorMatrices& f, double sign) {
  long basis_dim = 1;
  for (int c : cutoffs5) basis_dim *= c;

  std::array<SpinorNnz, 4> alpha_nnz, beta_coupled_nnz;
  for (int a = 0; a < 4; ++a) {
    alpha_nnz[a] = nonzeros(f.alpha[a]);
    Matrix combined = Matrix::Zero(32, 32);
    for (int mu = 0; mu < 4; ++mu)
      if (raw.coupling(mu, a) != 0.0) combined += raw.coupling(mu, a) * f.beta[mu];
    beta_coupled_nnz[a] = nonzeros(combined);
  }
  const SpinorNnz zeta_nnz = nonzeros(f.zeta);
  const SpinorNnz vartheta_nnz = nonzeros(f.vartheta);

  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(basis_dim) * 24);

  for (long jb = 0; jb < basis_dim; ++jb) {
    const auto tuple = unflatten_index(jb, cutoffs5);
    for (int axis = 0; axis < 5; ++axis) {
      for (int delta : {-1, +1}) {
        const int target = tuple[axis] + delta;
        if (target < 0 || target >= cutoffs5[axis]) continue;
        auto neighbor = tuple;
        neighbor[axis] = target;
        const long ib = flatten_index(neighbor, cutoffs5);
        // (a + a*) and (a - a*) entries at (column excitation n, row n+-1).
        const double root =
            delta > 0 ? std::sqrt(double(tuple[axis] + 1)) : std::sqrt(double(tuple[axis]));
        const double plus_entry = root;
        const double minus_entry = delta > 0 ? -root : root;

        if (axis < 4) {
          const Complex p_coeff = kI * raw.sigma_p[axis] * minus_entry;
          const double x_coeff = 2.0 * plus_entry;
          for (const auto& t : alpha_nnz[axis].entries)
            if (p_coeff != Complex{0.0, 0.0})
              trips.emplace_back(ib * 32 + t.row(), jb * 32 + t.col(),
                                 p_coeff * t.value());
          for (const auto& t : beta_coupled_nnz[axis].entries)
            trips.emplace_back(ib * 32 + t.row(), jb * 32 + t.col(),
                               x_coeff * t.value());
        } else {
          const Complex m_coeff = sign * kI * raw.dm * minus_entry;
          const double t_coeff = sign * raw.dm * plus_entry;  // 2 dm^2 dtau = dm
          if (m_coeff != Complex{0.0, 0.0})
            for (const auto& t : zeta_nnz.entries)
              trips.emplace_back(ib * 32 + t.row(), jb * 32 + t.col(),
                                 m_coeff * t.value());
          if (t_coeff != 0.0)
            for (const auto& t : vartheta_nnz.entries)
              trips.emplace_back(ib * 32 + t.row(), jb * 32 + t.col(),
                                 t_coeff * t.value());
        }
      }
    }
  }

  SparseMatrix d(basis_dim * 32, basis_dim * 32);
  d.setFromTriplets(trips.begin(), trips.end());
  d.makeCompressed();
  return d;
}

}  // namespace

ModelConfig::ModelConfig(const DispersionTensor& b_, const FourMeans& means_,
                         const MassSectorParams& mass_)
    : b(b_), means(means_), mass(mass_) {
  mass.validate();
  if (momentum_invariant_square(means) < 0.0)
    throw SpacelikeMomentum(
        "ModelConfig: mean momentum is spacelike, no on-shell mass exists");
  const double residual = validate_mass_shell(means, mass.mean_m);
  if (std::abs(residual) > kShellTolerance)
    throw ValidationError("ModelConfig: mass-shell residual exceeds 1e-10");
}

double ModelConfig::residual_scale() const {
  double scale = dm2();
  for (int mu = 0; mu < 4; ++mu) scale += b.entry(mu, mu);
  return scale;
}

double resonance_lhs(const ModelConfig& cfg, const std::array<int, 4>& n) {
  if (!cfg.b.is_diagonal())
    throw NonDiagonalUnsupported(
        "resonance_lhs: closed-form spectra require diagonal B");
  double lhs = (2.0 * n[0] + 1.0) * cfg.b.entry(0, 0);
  for (int j = 1; j < 4; ++j) lhs -= (2.0 * n[j] + 1.0) * cfg.b.entry(j, j);
  return lhs;
}

std::vector<QuantumTuple> resonance_enumerate(const ModelConfig& cfg, int max_n,
                                              double tol) {
  if (!cfg.b.is_diagonal())
    throw NonDiagonalUnsupported(
        "resonance_enumerate: closed-form spectra require diagonal B");
  if (max_n < 0) throw std::invalid_argument("resonance_enumerate: max_n < 0");

  const double dm2 = cfg.dm2();
  std::vector<QuantumTuple> out;
  std::array<int, 4> n{};
  for (n[0] = 0; n[0] <= max_n; ++n[0])
    for (n[1] = 0; n[1] <= max_n; ++n[1])
      for (n[2] = 0; n[2] <= max_n; ++n[2])
        for (n[3] = 0; n[3] <= max_n; ++n[3]) {
          const double lhs = resonance_lhs(cfg, n);
          if (lhs <= 0.0) continue;
          const long k = std::lround((lhs / dm2 - 1.0) / 2.0);
          if (k < 0) continue;
          const double residual = std::abs(lhs - (2.0 * k + 1.0) * dm2);
          if (residual <= tol)
            out.push_back({n, static_cast<int>(k), residual});
        }
  return out;
}

long FiveAxisBasis::dimension() const {
  long d = 1;
  for (int c : cutoff) d *= c;
  return d;
}

std::vector<int> FiveAxisBasis::cutoffs_vec() const {
  return {cutoff[0], cutoff[1], cutoff[2], cutoff[3], cutoff[4]};
}

void FiveAxisBasis::validate() const {
  for (int c : cutoff)
    if (c < 2) throw ValidationError("FiveAxisBasis: every cutoff must be >= 2");
  if (dimension() > dimension_cap)
    throw DimensionCapExceeded("FiveAxisBasis: basis dimension exceeds cap");
}

OperatorMatrix assemble_scalar_operator(const ModelConfig& cfg,
                                        const FiveAxisBasis& basis) {
  basis.validate();
  OperatorMatrix out;
  out.mat = scalar_operator_raw(raw_from_config(cfg), basis.cutoffs_vec());
  out.label = "scalar-field-operator";
  out.representation = "ladder-product-5axis";
  return out;
}

ScalarNullspaceReport scalar_interior_nullspace(const ModelConfig& cfg,
                                                const FiveAxisBasis& basis,
                                                double null_tol) {
  const OperatorMatrix op = assemble_scalar_operator(cfg, basis);
  const auto interior = interior_indices(basis.cutoffs_vec());
  OperatorMatrix block;
  block.mat = restrict_to(op.mat, interior);
  block.label = op.label + "-interior";

  const auto pairs = eigensolve(block, static_cast<int>(interior.size()));
  ScalarNullspaceReport report;
  report.min_nonnull_abs = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) {
    if (std::abs(p.value) <= null_tol) {
      ++report.interior_null_count;
      report.max_null_abs = std::max(report.max_null_abs, std::abs(p.value));
    } else {
      report.min_nonnull_abs = std::min(report.min_nonnull_abs, std::abs(p.value));
    }
  }
  return report;
}

namespace {

HermiteState axis_state(const ModelConfig& cfg, int axis, int excitation) {
  if (axis < 4)
    return {excitation,
            {cfg.means.x_up[axis], cfg.means.p_dn[axis], cfg.b.sigma_p(axis)}};
  return {excitation, {cfg.mass.mean_tau, cfg.mass.mean_m, cfg.mass.sigma_m}};
}

void require_five(std::span<const double> coords) {
  if (coords.size() != 5)
    throw NotEvaluable("field candidates are functions of exactly five variables");
}

}  // namespace

Complex ScalarSolution::evaluate(std::span<const double> coords) const {
  require_five(coords);
  Complex value = 1.0;
  for (int axis = 0; axis < 4; ++axis)
    value *= eval_wave(axis_state(cfg, axis, tuple.n[axis]), coords[axis],
                       PairConvention::kCovariant)
                 .value;
  value *= eval_wave(axis_state(cfg, 4, tuple.k), coords[4],
                     PairConvention::kCovariant)
               .value;
  return value;
}

double scalar_residual_pointwise(const ScalarSolution& sol,
                                 const std::vector<std::array<double, 5>>& points) {
  const ModelConfig& cfg = sol.cfg;
  const Eigen::Matrix4d& b = cfg.b.matrix();
  const double dm = cfg.mass.sigma_m;

  double max_lhs = 0.0;
  double max_phi = 0.0;
  for (const auto& pt : points) {
    std::array<WaveSample, 5> s;
    for (int axis = 0; axis < 4; ++axis)
      s[axis] = eval_wave(axis_state(cfg, axis, sol.tuple.n[axis]), pt[axis],
                          PairConvention::kCovariant);
    s[4] = eval_wave(axis_state(cfg, 4, sol.tuple.k), pt[4],
                     PairConvention::kCovariant);

    // (i d - K)^2 f = -f'' - 2iK f' + K^2 f per axis.
    std::array<Complex, 5> second;
    for (int axis = 0; axis < 5; ++axis) {
      const double mean =
          axis < 4 ? cfg.means.p_dn[axis] : cfg.mass.mean_m;
      second[axis] =
          -s[axis].d2 - 2.0 * kI * mean * s[axis].d1 + mean * mean * s[axis].value;
    }

    const Complex phi =
        s[0].value * s[1].value * s[2].value * s[3].value * s[4].value;

    Complex lhs = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
      Complex term = Metric::kDiag[mu] * second[mu];
      for (int nu = 0; nu < 5; ++nu)
        if (nu != mu) term *= s[nu].value;
      lhs += term;
    }
    // 4 (B d)^T g (B d) with d^alpha = x^alpha - X^alpha.
    Eigen::Vector4d d;
    for (int a = 0; a < 4; ++a) d(a) = pt[a] - cfg.means.x_up[a];
    const Eigen::Vector4d bd = b * d;
    double quad = 0.0;
    for (int mu = 0; mu < 4; ++mu) quad += Metric::kDiag[mu] * bd(mu) * bd(mu);
    lhs += 4.0 * quad * phi;

    Complex tau_part = second[4] +
                       4.0 * std::pow(dm, 4) * (pt[4] - cfg.mass.mean_tau) *
                           (pt[4] - cfg.mass.mean_tau) * s[4].value;
    for (int mu = 0; mu < 4; ++mu) tau_part *= s[mu].value;
    lhs -= tau_part;

    max_lhs = std::max(max_lhs, std::abs(lhs));
    max_phi = std::max(max_phi, std::abs(phi));
  }
  if (!(max_phi > 1e-250))
    throw NotEvaluable("scalar_residual_pointwise: field vanishes at every point");
  return max_lhs / (max_phi * cfg.residual_scale());
}

FermionAssembly assemble_fermion_operator(const ModelConfig& cfg,
                                          const FiveAxisBasis& basis) {
  basis.validate();
  const FactorMatrices f = build_factor_matrices(build_gammas());
  FermionAssembly out;
  out.cutoff = basis.cutoff;
  out.basis_dim = basis.dimension();
  out.d = fermion_sparse_raw(raw_from_config(cfg), basis.cutoffs_vec(), f, -1.0);
  const SparseMatrix adj = SparseMatrix(out.d.adjoint());
  const double dnorm = out.d.norm();
  out.nonhermiticity = dnorm > 0.0 ? SparseMatrix(out.d - adj).norm() / dnorm : 0.0;
  return out;
}

int fermion_sparsity_violations(const FermionAssembly& assembly) {
  const std::vector<int> cutoffs(assembly.cutoff.begin(), assembly.cutoff.end());
  int violations = 0;
  for (int outer = 0; outer < assembly.d.outerSize(); ++outer) {
    for (SparseMatrix::InnerIterator it(assembly.d, outer); it; ++it) {
      if (it.value() == Complex{0.0, 0.0}) continue;
      const auto row_tuple = unflatten_index(it.row() / 32, cutoffs);
      const auto col_tuple = unflatten_index(it.col() / 32, cutoffs);
      int moved = 0;
      bool unit = true;
      for (std::size_t a = 0; a < cutoffs.size(); ++a) {
        const int step = std::abs(row_tuple[a] - col_tuple[a]);
        if (step == 1) ++moved;
        else if (step != 0) unit = false;
      }
      if (!(unit && moved == 1)) ++violations;
    }
  }
  return violations;
}

FermionSvdResult fermion_smallest_singulars(const FermionAssembly& assembly,
                                            int count, EigensolveOptions opts) {
  const Eigen::Index total = assembly.d.rows();
  if (count < 1 || count > total)
    throw std::invalid_argument("fermion_smallest_singulars: count out of range");

  FermionSvdResult out;
  if (total <= opts.dense_cap) {
    Eigen::BDCSVD<Matrix> svd(Matrix(assembly.d), Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();  // descending
    out.vectors.resize(total, count);
    for (int j = 0; j < count; ++j) {
      out.values.push_back(sv(total - 1 - j));
      out.vectors.col(j) = svd.matrixV().col(total - 1 - j);
    }
    return out;
  }

  const SparseMatrix& d = assembly.d;
  const SparseMatrix adj = SparseMatrix(d.adjoint());
  const auto pairs = lanczos_smallest(
      [&](const Vector& v) { return Vector(adj * (d * v)); }, total, count,
      opts.tol, opts.max_iterations);
  out.vectors.resize(total, count);
  for (int j = 0; j < count; ++j) {
    out.values.push_back(std::sqrt(std::max(pairs[j].value, 0.0)));
    out.vectors.col(j) = pairs[j].vector;
  }
  return out;
}

double fermion_candidate_l2_bound(const ModelConfig& cfg,
                                  const SpinorCandidate& cand) {
  cand.basis.validate();
  const long basis_dim = cand.basis.dimension();
  if (cand.coeffs.size() != basis_dim * 32)
    throw NotEvaluable("SpinorCandidate: coefficient size does not match cutoffs");

  std::vector<int> padded = cand.basis.cutoffs_vec();
  for (int& c : padded) c += 1;
  long padded_dim = 1;
  for (int c : padded) padded_dim *= c;

  const FactorMatrices f = build_factor_matrices(build_gammas());
  const SparseMatrix d_pad =
      fermion_sparse_raw(raw_from_config(cfg), padded, f, -1.0);

  Vector embedded = Vector::Zero(padded_dim * 32);
  const auto cutoffs = cand.basis.cutoffs_vec();
  for (long t = 0; t < basis_dim; ++t) {
    const long pt = flatten_index(unflatten_index(t, cutoffs), padded);
    embedded.segment(pt * 32, 32) = cand.coeffs.segment(t * 32, 32);
  }
  return (d_pad * embedded).norm();
}

Eigen::VectorXcd evaluate_spinor(const ModelConfig& cfg,
                                 const SpinorCandidate& cand,
                                 std::span<const double> coords) {
  require_five(coords);
  cand.basis.validate();
  const long basis_dim = cand.basis.dimension();
  if (cand.coeffs.size() != basis_dim * 32)
    throw NotEvaluable("SpinorCandidate: coefficient size does not match cutoffs");

  const auto cutoffs = cand.basis.cutoffs_vec();
  std::array<std::vector<Complex>, 5> values;
  for (int axis = 0; axis < 5; ++axis) {
    values[axis].resize(cutoffs[axis]);
    for (int n = 0; n < cutoffs[axis]; ++n)
      values[axis][n] = eval_wave(axis_state(cfg, axis, n), coords[axis],
                                  PairConvention::kCovariant)
                            .value;
  }

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(32);
  for (long t = 0; t < basis_dim; ++t) {
    const auto tuple = unflatten_index(t, cutoffs);
    Complex factor = 1.0;
    for (int axis = 0; axis < 5; ++axis) factor *= values[axis][tuple[axis]];
    psi += factor * cand.coeffs.segment(t * 32, 32);
  }
  return psi;
}

FermionPointwiseResult fermion_residual_pointwise(
    const ModelConfig& cfg, const SpinorCandidate& cand,
    const std::vector<std::array<double, 5>>& points) {
  cand.basis.validate();
  const long basis_dim = cand.basis.dimension();
  if (cand.coeffs.size() != basis_dim * 32)
    throw NotEvaluable("SpinorCandidate: coefficient size does not match cutoffs");
  if (cand.coeffs.norm() == 0.0) return {0.0, true};

  const auto cutoffs = cand.basis.cutoffs_vec();
  const FactorMatrices f = build_factor_matrices(build_gammas());
  const Eigen::Matrix4d& b = cfg.b.matrix();
  const double dm2 = cfg.dm2();

  double max_residual = 0.0;
  double max_psi = 0.0;
  for (const auto& pt : points) {
    // Per-axis samples for every excitation below the cutoff.
    std::array<std::vector<WaveSample>, 5> s;
    for (int axis = 0; axis < 5; ++axis) {
      s[axis].resize(cutoffs[axis]);
      for (int n = 0; n < cutoffs[axis]; ++n)
        s[axis][n] = eval_wave(axis_state(cfg, axis, n), pt[axis],
                               PairConvention::kCovariant);
    }

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(32);
    std::array<Eigen::VectorXcd, 5> derived;
    for (auto& v : derived) v = Eigen::VectorXcd::Zero(32);

    for (long t = 0; t < basis_dim; ++t) {
      const auto tuple = unflatten_index(t, cutoffs);
      std::array<Complex, 5> vals;
      Complex product = 1.0;
      for (int axis = 0; axis < 5; ++axis) {
        vals[axis] = s[axis][tuple[axis]].value;
        product *= vals[axis];
      }
      const auto block = cand.coeffs.segment(t * 32, 32);
      psi += product * block;
      for (int axis = 0; axis < 5; ++axis) {
        const double mean = axis < 4 ? cfg.means.p_dn[axis] : cfg.mass.mean_m;
        // (i d - K) applied on one axis, values on the rest.
        Complex g = kI * s[axis][tuple[axis]].d1 - mean * vals[axis];
        for (int other = 0; other < 5; ++other)
          if (other != axis) g *= vals[other];
        derived[axis] += g * block;
      }
    }

    Eigen::VectorXcd applied = Eigen::VectorXcd::Zero(32);
    for (int mu = 0; mu < 4; ++mu) applied += f.alpha[mu] * derived[mu];
    Eigen::Vector4d d;
    for (int a = 0; a < 4; ++a) d(a) = pt[a] - cfg.means.x_up[a];
    const Eigen::Vector4d bd = b * d;
    for (int mu = 0; mu < 4; ++mu) applied += 2.0 * bd(mu) * (f.beta[mu] * psi);
    applied -= f.zeta * derived[4];
    applied -= 2.0 * dm2 * (pt[4] - cfg.mass.mean_tau) * (f.vartheta * psi);

    max_residual = std::max(max_residual, applied.norm());
    max_psi = std::max(max_psi, psi.norm());
  }
  if (!(max_psi > 1e-250))
    throw NotEvaluable("fermion_residual_pointwise: candidate vanishes everywhere");
  return {max_residual / (max_psi * cfg.residual_scale()), false};
}

namespace {

FactorizationReport factorization_check_raw(const RawModel& raw,
                                            const FiveAxisBasis& basis,
                                            bool pad, double* degenerate_max) {
  basis.validate();
  std::vector<int> padded = basis.cutoffs_vec();
  if (pad)
    for (int& c : padded) c += 2;
  long padded_dim = 1;
  for (int c : padded) padded_dim *= c;
  if (padded_dim > 4096)
    throw DimensionCapExceeded(
        "factorization: padded basis exceeds the dense cap (4096)");

  const FactorMatrices f = build_factor_matrices(build_gammas());
  const SparseMatrix d1 = fermion_sparse_raw(raw, padded, f, +1.0);
  const SparseMatrix d2 = fermion_sparse_raw(raw, padded, f, -1.0);
  const Matrix scalar_pad = scalar_operator_raw(raw, padded);

  // Requested block = interior of the padded basis (the whole padded block
  // in the unpadded degenerate mode, where both sides vanish identically).
  std::vector<long> block;
  if (!pad) {
    for (long i = 0; i < padded_dim; ++i) block.push_back(i);
  } else {
    block = interior_indices(padded, 2);
  }
  const long nb = static_cast<long>(block.size());
  std::vector<long> position(padded_dim, -1);
  for (long i = 0; i < nb; ++i) position[block[i]] = i;

  Matrix e = Matrix::Zero(nb * 32, nb * 32);
  for (long j = 0; j < nb; ++j) {
    for (int spin = 0; spin < 32; ++spin) {
      const Eigen::SparseVector<Complex> col = d2.col(block[j] * 32 + spin);
      const Eigen::SparseVector<Complex> prod = d1 * col;
      for (Eigen::SparseVector<Complex>::InnerIterator it(prod); it; ++it) {
        const long bi = it.index() / 32;
        if (position[bi] >= 0)
          e(position[bi] * 32 + it.index() % 32, j * 32 + spin) +=
              0.5 * it.value();
      }
      for (long i = 0; i < nb; ++i)
        e(i * 32 + spin, j * 32 + spin) -= scalar_pad(block[i], block[j]);
    }
  }

  if (degenerate_max != nullptr) {
    *degenerate_max = e.cwiseAbs().maxCoeff();
    return {};
  }

  const Matrix expected = -kI * constraint_matrix(f, raw.b, raw.dm * raw.dm);
  FactorizationReport report;
  const Matrix first = e.block(0, 0, 32, 32);
  for (long i = 0; i < nb; ++i) {
    for (long j = 0; j < nb; ++j) {
      const Matrix blk = e.block(i * 32, j * 32, 32, 32);
      if (i == j) {
        report.block_constancy_max = std::max(
            report.block_constancy_max, (blk - first).cwiseAbs().maxCoeff());
      } else {
        report.offdiagonal_block_max =
            std::max(report.offdiagonal_block_max, blk.cwiseAbs().maxCoeff());
      }
    }
  }
  report.constant_match_max = (first - expected).cwiseAbs().maxCoeff();
  return report;
}

}  // namespace

FactorizationReport factorization_product_check(const ModelConfig& cfg,
                                                const FiveAxisBasis& basis) {
  return factorization_check_raw(raw_from_config(cfg), basis, true, nullptr);
}

double factorization_degenerate_zero_residual(const FiveAxisBasis& basis) {
  const RawModel zero = make_raw(Eigen::Matrix4d::Zero(), 0.0, FourMeans{}, 0.0, 0.0);
  double max_abs = 0.0;
  factorization_check_raw(zero, basis, false, &max_abs);
  return max_abs;
}

double kg_baseline_residual(const std::array<double, 4>& p_cov, double m) {
  double psq = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    psq += Metric::kDiag[mu] * p_cov[mu] * p_cov[mu];
  return std::abs(m * m - psq);
}

std::vector<std::array<double, 5>> sample_envelope_points(const ModelConfig& cfg,
                                                          int count,
                                                          std::uint64_t seed) {
  const CounterRng rng(seed);
  std::array<double, 5> center;
  std::array<double, 5> spread;
  for (int a = 0; a < 4; ++a) {
    center[a] = cfg.means.x_up[a];
    spread[a] = 1.0 / (2.0 * cfg.b.sigma_p(a));
  }
  center[4] = cfg.mass.mean_tau;
  spread[4] = cfg.mass.sigma_tau();

  std::vector<std::array<double, 5>> points;
  points.reserve(count + 32);
  for (int i = 0; i < count; ++i) {
    std::array<double, 5> pt;
    for (int a = 0; a < 5; ++a)
      pt[a] = center[a] + spread[a] * rng.normal(a, static_cast<std::uint64_t>(i));
    points.push_back(pt);
  }
  for (int corner = 0; corner < 32; ++corner) {
    std::array<double, 5> pt;
    for (int a = 0; a < 5; ++a) {
      const double sign = (corner >> a) & 1 ? 1.0 : -1.0;
      pt[a] = center[a] + sign * 2.0 * spread[a];
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace discofield
