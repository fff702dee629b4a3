#include "lrf/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lrf/eig.hpp"

namespace lrf {

double Spectrum::min_eval() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks)
    if (b.evals.size() > 0) m = std::min(m, b.evals.minCoeff());
  return m;
}

std::vector<double> Spectrum::sorted_evals() const {
  std::vector<double> all;
  all.reserve(dim);
  for (const auto& b : blocks)
    for (long i = 0; i < b.evals.size(); ++i) all.push_back(b.evals[i]);
  std::sort(all.begin(), all.end());
  return all;
}

namespace {

struct UnionFind {
  std::vector<long> parent;
  explicit UnionFind(long n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  long find(long x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(long a, long b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

}  // namespace

Spectrum diagonalize_blocked(const SparseMatrix& u, bool want_vectors) {
  const long n = u.rows();
  UnionFind uf(n);
  bool all_real = true;
  for (int k = 0; k < u.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(u, k); it; ++it) {
      uf.unite(it.row(), it.col());
      if (it.value().imag() != 0.0) all_real = false;
    }

  std::vector<std::vector<long>> groups;
  {
    std::vector<long> root_slot(n, -1);
    for (long i = 0; i < n; ++i) {
      long r = uf.find(i);
      if (root_slot[r] < 0) {
        root_slot[r] = long(groups.size());
        groups.emplace_back();
      }
      groups[root_slot[r]].push_back(i);
    }
  }

  // map basis state -> (block, position)
  std::vector<long> block_of(n), pos_of(n);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t p = 0; p < groups[g].size(); ++p) {
      block_of[groups[g][p]] = long(g);
      pos_of[groups[g][p]] = long(p);
    }

  Spectrum spec;
  spec.dim = n;
  spec.blocks.resize(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    spec.blocks[g].index = std::move(groups[g]);
    spec.blocks[g].real = all_real;
  }

  // gather dense sub-matrices
  std::vector<Eigen::MatrixXcd> dense_c;
  std::vector<Eigen::MatrixXd> dense_r;
  if (all_real)
    dense_r.resize(spec.blocks.size());
  else
    dense_c.resize(spec.blocks.size());
  for (std::size_t g = 0; g < spec.blocks.size(); ++g) {
    long m = long(spec.blocks[g].index.size());
    if (all_real)
      dense_r[g] = Eigen::MatrixXd::Zero(m, m);
    else
      dense_c[g] = Eigen::MatrixXcd::Zero(m, m);
  }
  for (int k = 0; k < u.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(u, k); it; ++it) {
      long g = block_of[it.row()];
      if (all_real)
        dense_r[g](pos_of[it.row()], pos_of[it.col()]) = it.value().real();
      else
        dense_c[g](pos_of[it.row()], pos_of[it.col()]) = it.value();
    }

  for (std::size_t g = 0; g < spec.blocks.size(); ++g) {
    auto& blk = spec.blocks[g];
    if (all_real) {
      eig_symmetric(dense_r[g], blk.evals, want_vectors);
      if (want_vectors) blk.vecs_r = std::move(dense_r[g]);
    } else {
      eig_hermitian(dense_c[g], blk.evals, want_vectors);
      if (want_vectors) blk.vecs_c = std::move(dense_c[g]);
    }
    blk.has_vectors = want_vectors;
  }
  return spec;
}

double log_trace_exp(const Spectrum& spec, double beta) {
  double emin = spec.min_eval();
  double s = 0.0, comp = 0.0;  // Kahan
  for (const auto& b : spec.blocks)
    for (long i = 0; i < b.evals.size(); ++i) {
      double term = std::exp(-beta * (b.evals[i] - emin));
      double y = term - comp;
      double t = s + y;
      comp = (t - s) - y;
      s = t;
    }
  return -beta * emin + std::log(s);
}

double pressure_ed(const FockOperator& u, double beta, double volume) {
  if (!u.hermitian && !is_hermitian(u.mat)) throw std::invalid_argument("pressure_ed requires a hermitian operator");
  Spectrum spec = diagonalize_blocked(u.mat, false);
  return log_trace_exp(spec, beta) / (beta * volume);
}

GibbsState::GibbsState(const FockOperator& u, double beta) : beta_(beta) {
  if (!u.hermitian && !is_hermitian(u.mat)) throw std::invalid_argument("gibbs_state requires a hermitian operator");
  spec_ = std::make_shared<Spectrum>(diagonalize_blocked(u.mat, true));
  emin_ = spec_->min_eval();
  logz_ = log_trace_exp(*spec_, beta_);
}

double GibbsState::entropy() const {
  // S = sum_i p_i (beta E_i + ln Z) with p_i = e^{-beta E_i}/Z
  double s = 0;
  for (const auto& b : spec_->blocks)
    for (long i = 0; i < b.evals.size(); ++i) {
      double logp = -beta_ * b.evals[i] - logz_;
      double p = std::exp(logp);
      if (p > 1e-300) s -= p * logp;
    }
  return s;
}

Complex GibbsState::expectation(const SparseMatrix& a) const {
  SparseMatrix ops[1] = {a};
  return expectations(std::span<const SparseMatrix>(ops, 1))[0];
}

std::vector<Complex> GibbsState::expectations(std::span<const SparseMatrix> ops) const {
  const long n = spec_->dim;
  std::vector<long> block_of(n), pos_of(n);
  for (std::size_t g = 0; g < spec_->blocks.size(); ++g)
    for (std::size_t p = 0; p < spec_->blocks[g].index.size(); ++p) {
      block_of[spec_->blocks[g].index[p]] = long(g);
      pos_of[spec_->blocks[g].index[p]] = long(p);
    }

  std::vector<Complex> out(ops.size(), Complex(0, 0));
  for (std::size_t io = 0; io < ops.size(); ++io) {
    const SparseMatrix& a = ops[io];
    if (a.rows() != n) throw std::invalid_argument("operator dimension mismatch");
    Complex acc(0, 0);
    for (std::size_t g = 0; g < spec_->blocks.size(); ++g) {
      const auto& blk = spec_->blocks[g];
      if (!blk.has_vectors) throw std::logic_error("spectral blocks lack eigenvectors");
      const long m = long(blk.index.size());
      // A restricted to this diagonal block (off-block parts trace to zero
      // against the block-diagonal density matrix)
      Eigen::MatrixXcd ab = Eigen::MatrixXcd::Zero(m, m);
      bool any = false;
      for (long p = 0; p < m; ++p) {
        long col = blk.index[p];
        for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
          if (block_of[it.row()] == long(g)) {
            ab(pos_of[it.row()], p) = it.value();
            any = true;
          }
        }
      }
      if (!any) continue;
      Eigen::VectorXd w(m);
      for (long i = 0; i < m; ++i) w[i] = std::exp(-beta_ * blk.evals[i] - logz_);
      if (blk.real) {
        Eigen::MatrixXcd av = ab * blk.vecs_r;
        for (long i = 0; i < m; ++i) acc += w[i] * blk.vecs_r.col(i).cast<Complex>().dot(av.col(i));
      } else {
        Eigen::MatrixXcd av = ab * blk.vecs_c;
        for (long i = 0; i < m; ++i) acc += w[i] * blk.vecs_c.col(i).dot(av.col(i));
      }
    }
    out[io] = acc;
  }
  return out;
}

Eigen::MatrixXcd GibbsState::dense_matrix() const {
  const long n = spec_->dim;
  if (n > 4096) throw std::runtime_error("dense Gibbs matrix requested for a large space");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& blk : spec_->blocks) {
    const long m = long(blk.index.size());
    Eigen::VectorXd w(m);
    for (long i = 0; i < m; ++i) w[i] = std::exp(-beta_ * blk.evals[i] - logz_);
    Eigen::MatrixXcd local;
    if (blk.real)
      local = (blk.vecs_r * w.asDiagonal() * blk.vecs_r.transpose()).cast<Complex>();
    else
      local = blk.vecs_c * w.asDiagonal() * blk.vecs_c.adjoint();
    for (long p = 0; p < m; ++p)
      for (long q = 0; q < m; ++q) rho(blk.index[p], blk.index[q]) = local(p, q);
  }
  return rho;
}

Eigen::MatrixXcd GibbsState::site_reduced(const FockBasis& basis, long site) const {
  const int spins = basis.lattice().spins();
  const int local_dim = 1 << spins;
  const int base_mode = basis.mode(site, 0);
  const unsigned long site_mask = ((1UL << spins) - 1UL) << base_mode;

  Eigen::MatrixXcd red = Eigen::MatrixXcd::Zero(local_dim, local_dim);
  // Tr_rest rho: entries pair basis states that agree outside the site.
  // The Jordan-Wigner sign of reordering modes is the same for bra and ket
  // (they share the rest-configuration), so signs cancel.
  for (const auto& blk : spec_->blocks) {
    const long m = long(blk.index.size());
    Eigen::VectorXd w(m);
    for (long i = 0; i < m; ++i) w[i] = std::exp(-beta_ * blk.evals[i] - logz_);
    for (long p = 0; p < m; ++p) {
      unsigned long sp = static_cast<unsigned long>(blk.index[p]);
      int a = int((sp & site_mask) >> base_mode);
      for (long q = 0; q < m; ++q) {
        unsigned long sq = static_cast<unsigned long>(blk.index[q]);
        if ((sp & ~site_mask) != (sq & ~site_mask)) continue;
        int b = int((sq & site_mask) >> base_mode);
        Complex v(0, 0);
        if (blk.real) {
          double acc = 0;
          for (long i = 0; i < m; ++i) acc += w[i] * blk.vecs_r(p, i) * blk.vecs_r(q, i);
          v = Complex(acc, 0);
        } else {
          for (long i = 0; i < m; ++i) v += w[i] * blk.vecs_c(p, i) * std::conj(blk.vecs_c(q, i));
        }
        red(a, b) += v;
      }
    }
  }
  return red;
}

double entropy_density(const GibbsState& rho, double volume) { return rho.entropy() / volume; }

double free_energy_of_state(const Eigen::MatrixXcd& rho, const FockOperator& u, double beta, double volume) {
  Eigen::MatrixXcd m = rho;
  Eigen::VectorXd evals;
  eig_hermitian(m, evals, false);
  double s = 0;
  for (long i = 0; i < evals.size(); ++i)
    if (evals[i] > 1e-15) s -= evals[i] * std::log(evals[i]);
  double energy = (rho * Eigen::MatrixXcd(u.mat)).trace().real();
  return energy / volume - s / (beta * volume);
}

PassivityReport passivity_check(const FockOperator& u, double beta, double volume,
                                std::span<const Eigen::MatrixXcd> trials, double tol) {
  PassivityReport rep;
  rep.pressure = pressure_ed(u, beta, volume);
  GibbsState gibbs(u, beta);
  rep.gibbs_margin = free_energy_of_state(gibbs.dense_matrix(), u, beta, volume) + rep.pressure;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& rho : trials) {
    double margin = free_energy_of_state(rho, u, beta, volume) + rep.pressure;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -tol) ++rep.violations;
  }
  rep.ok = rep.violations == 0 && std::abs(rep.gibbs_margin) <= tol;
  return rep;
}

std::vector<Eigen::MatrixXcd> random_density_matrices(long dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    Eigen::MatrixXcd x(dim, dim);
    for (long i = 0; i < dim; ++i)
      for (long j = 0; j < dim; ++j) x(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::MatrixXcd rho = x * x.adjoint();
    rho /= rho.trace().real();
    out.push_back(std::move(rho));
  }
  return out;
}

double lro_estimator(const GibbsState& rho, const FockBasis& basis, const LocalOperator& b) {
  SparseMatrix total = local_operator_sum(b, basis);
  SparseMatrix sq = SparseMatrix(total.adjoint()) * total;
  double v = double(basis.lattice().volume());
  return rho.expectation(sq).real() / (v * v);
}

PbcReport pbc_consistency(const LongRangeModel& m, int l_min, int l_max) {
  PbcReport rep;
  double range = m.local().range();
  for (const auto& ch : m.channels()) range = std::max({range, ch.phi.range(), ch.phi_prime.range()});
  rep.range_l = int(std::ceil(range));

  for (int l = l_min; l <= l_max; ++l) {
    LongRangeModel boxed = m.with_box(2 * l + 1);
    FockBasis basis(boxed.lattice());
    double vol = double(boxed.lattice().volume());
    FockOperator u_pbc = build_internal_energy(boxed, basis, true);
    FockOperator u_open = build_internal_energy(boxed, basis, false);
    rep.ls.push_back(l);
    rep.p_pbc.push_back(pressure_ed(u_pbc, m.beta(), vol));
    rep.p_open.push_back(pressure_ed(u_open, m.beta(), vol));
    rep.diff.push_back(std::abs(rep.p_pbc.back() - rep.p_open.back()));
  }

  // power-law fit of |p_pbc - p_open| against the side, zero differences skipped
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < rep.ls.size(); ++i)
    if (rep.diff[i] > 0) {
      lx.push_back(std::log(double(2 * rep.ls[i] + 1)));
      ly.push_back(std::log(rep.diff[i]));
    }
  if (lx.size() >= 2) {
    double n = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    rep.fit_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  rep.shrinking = true;
  for (std::size_t i = 1; i < rep.ls.size(); ++i)
    if (rep.ls[i] > rep.range_l && rep.ls[i - 1] >= rep.range_l && rep.diff[i] > rep.diff[i - 1] + 1e-15)
      rep.shrinking = false;
  return rep;
}

}  // namespace lrf
