#include "lrf/quadratic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrf/fock.hpp"

namespace lrf {

namespace {

inline Offset neg(const Offset& z) { return Offset{-z[0], -z[1], -z[2]}; }

inline double ln_2cosh(double x) {
  double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a));
}

inline double fermi_minus(double beta, double eps) {
  // f(-eps) = 1/(1 + e^{-beta eps})
  if (beta * eps > 0) {
    double e = std::exp(-beta * eps);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(beta * eps);
  return e / (1.0 + e);
}

}  // namespace

Eigen::MatrixXcd& QuadraticForm::slot(std::map<Offset, Eigen::MatrixXcd>& m, const Offset& z) {
  auto it = m.find(z);
  if (it == m.end()) it = m.emplace(z, Eigen::MatrixXcd::Zero(nspin_, nspin_)).first;
  return it->second;
}

void QuadraticForm::add_hopping(const Offset& z, int s, int s2, Complex v) {
  // v stands for v a+a plus its hermitian partner; for z=0, s=s2 both land
  // on the same slot and add up to 2 Re v
  if (v == Complex(0, 0)) return;
  slot(hop_, z)(s, s2) += v;
  slot(hop_, neg(z))(s2, s) += std::conj(v);
}

void QuadraticForm::add_pairing(const Offset& z, int s, int s2, Complex v) {
  if (v == Complex(0, 0)) return;
  slot(pair_, z)(s, s2) += v;
  slot(pair_, neg(z))(s2, s) -= v;
}

Eigen::MatrixXcd QuadraticForm::h_symbol(const std::array<double, 3>& k) const {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(nspin_, nspin_);
  for (const auto& [z, m] : hop_) {
    double phase = k[0] * z[0] + k[1] * z[1] + k[2] * z[2];
    h += std::exp(Complex(0, phase)) * m;
  }
  return h;
}

Eigen::MatrixXcd QuadraticForm::g_symbol(const std::array<double, 3>& k) const {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(nspin_, nspin_);
  for (const auto& [z, m] : pair_) {
    double phase = k[0] * z[0] + k[1] * z[1] + k[2] * z[2];
    g += std::exp(Complex(0, -phase)) * m;
  }
  return g;
}

Eigen::MatrixXcd QuadraticForm::nambu(const std::array<double, 3>& k) const {
  const int m = nspin_;
  Eigen::MatrixXcd kk = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  Eigen::MatrixXcd h = h_symbol(k);
  Eigen::MatrixXcd hm = h_symbol({-k[0], -k[1], -k[2]});
  Eigen::MatrixXcd g = g_symbol(k);
  kk.topLeftCorner(m, m) = h;
  kk.bottomRightCorner(m, m) = -hm.transpose();
  kk.topRightCorner(m, m) = -g.conjugate();
  kk.bottomLeftCorner(m, m) = -g.transpose();
  // H = 1/2 A+ K A + 1/2 sum_k tr h(k) + C |Lambda| over Nambu spinors
  // A_k = (a_k, a+_{-k}); symmetrize against roundoff
  kk = 0.5 * (kk + Eigen::MatrixXcd(kk.adjoint()));
  return kk;
}

QuadraticForm quadratic_from_kernel(const InteractionKernel& k, int dim, int nspin) {
  if (k.max_body() > 2) throw std::invalid_argument("not quadratic: kernel has higher-body terms");
  QuadraticForm q(dim, nspin);
  for (const auto& t : k.terms()) {
    if (t.ops.empty()) {
      if (std::abs(t.coef.imag()) > 1e-14) throw std::invalid_argument("constant kernel term must be real");
      q.add_const(t.coef.real());
      continue;
    }
    const KernelOp& x1 = t.ops[0];
    const KernelOp& x2 = t.ops[1];
    Offset z = x2.off;  // canonical terms anchor the first factor at the origin
    if (x1.nu == Nu::Create && x2.nu == Nu::Annihilate) {
      q.add_hopping(z, x1.spin, x2.spin, 0.5 * t.coef);  // hermitian partner is inserted by add_hopping
    } else if (x1.nu == Nu::Annihilate && x2.nu == Nu::Create) {
      // :a a+: = -a+ a
      q.add_hopping(neg(z), x2.spin, x1.spin, -0.5 * t.coef);
    } else if (x1.nu == Nu::Annihilate && x2.nu == Nu::Annihilate) {
      q.add_pairing(z, x1.spin, x2.spin, 0.5 * t.coef);
    } else {
      // creation pair: the hermitian conjugate of an annihilation pair; the
      // form regenerates it from G, so fold it into the same block
      q.add_pairing(neg(z), x2.spin, x1.spin, 0.5 * std::conj(t.coef));
    }
  }
  return q;
}

InteractionKernel kernel_from_quadratic(const QuadraticForm& q) {
  InteractionKernel k;
  if (q.onsite_const() != 0.0) k.add_constant(q.onsite_const());
  for (const auto& [z, m] : q.hopping())
    for (int s = 0; s < q.nspin(); ++s)
      for (int s2 = 0; s2 < q.nspin(); ++s2)
        if (m(s, s2) != Complex(0, 0)) k.add_monomial(m(s, s2), {cr({0, 0, 0}, s), an(z, s2)});
  for (const auto& [z, m] : q.pairing())
    for (int s = 0; s < q.nspin(); ++s)
      for (int s2 = 0; s2 < q.nspin(); ++s2)
        if (m(s, s2) != Complex(0, 0)) {
          k.add_monomial(0.5 * m(s, s2), {an({0, 0, 0}, s), an(z, s2)});
          k.add_monomial(0.5 * std::conj(m(s, s2)), {cr(z, s2), cr({0, 0, 0}, s)});
        }
  return k;
}

namespace {

std::vector<std::array<double, 3>> momentum_grid(int dim, int side) {
  Lattice lat(dim, 1, side);
  std::vector<std::array<double, 3>> ks(lat.volume());
  const double step = 2.0 * std::numbers::pi / side;
  for (long s = 0; s < lat.volume(); ++s) {
    Offset x = lat.coord(s);
    ks[s] = {step * x[0], step * x[1], step * x[2]};
  }
  return ks;
}

}  // namespace

Eigen::VectorXd bdg_eigenvalues(const QuadraticForm& q, const std::array<double, 3>& k) {
  Eigen::MatrixXcd kk = q.nambu(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kk, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

BdgPoint bdg_spectrum(const QuadraticForm& q, const std::array<double, 3>& k) {
  Eigen::VectorXd all = bdg_eigenvalues(q, k);
  const int m = q.nspin();
  BdgPoint out;
  out.energies = all.tail(m);
  if (out.energies.size() > 0 && out.energies[0] < -1e-12)
    throw std::runtime_error("BdG nonnegative branch came out negative; Nambu block is inconsistent");
  double tr_h = q.h_symbol(k).trace().real();
  out.offset = -0.5 * tr_h + 0.5 * out.energies.sum();
  return out;
}

double pressure_quasifree_grid(const QuadraticForm& q, double beta, int side) {
  if (beta <= 0) throw std::invalid_argument("beta must be positive");
  auto ks = momentum_grid(q.dim(), side);
  double sum = 0, comp = 0;  // Kahan, deterministic across runs
  for (const auto& k : ks) {
    Eigen::VectorXd eps = bdg_eigenvalues(q, k);
    double pk = -0.5 * q.h_symbol(k).trace().real();
    for (long j = 0; j < eps.size(); ++j) pk += ln_2cosh(0.5 * beta * eps[j]) / (2.0 * beta);
    double y = pk - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / double(ks.size()) - q.onsite_const();
}

double pressure_quasifree(const QuadraticForm& q, double beta, const GridControl& grid) {
  if (grid.fixed_side > 0) return pressure_quasifree_grid(q, beta, grid.fixed_side);
  double prev = 0;
  bool have_prev = false;
  for (int side = 3; side <= grid.max_side; side = 2 * side + 1) {
    double p = pressure_quasifree_grid(q, beta, side);
    if (have_prev && std::abs(p - prev) <= grid.rel_tol * std::max(1.0, std::abs(p))) return p;
    prev = p;
    have_prev = true;
  }
  throw std::runtime_error("quasifree pressure did not converge within the grid cap");
}

QuasifreeCorrelator::QuasifreeCorrelator(const QuadraticForm& q, double beta, int side)
    : dim_(q.dim()), nspin_(q.nspin()), side_(side) {
  ks_ = momentum_grid(dim_, side);
  npoints_ = long(ks_.size());
  nmat_.reserve(npoints_);
  fmat_.reserve(npoints_);
  const int m = nspin_;
  for (const auto& k : ks_) {
    Eigen::MatrixXcd kk = q.nambu(k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kk);
    const Eigen::VectorXd& eps = es.eigenvalues();
    const Eigen::MatrixXcd& w = es.eigenvectors();
    Eigen::VectorXd occ(eps.size());
    for (long j = 0; j < eps.size(); ++j) occ[j] = fermi_minus(beta, eps[j]);
    // C = <A A+> = W f(-eps) W+
    Eigen::MatrixXcd c = w * occ.asDiagonal() * w.adjoint();
    Eigen::MatrixXcd n(m, m), f(m, m);
    for (int s = 0; s < m; ++s)
      for (int s2 = 0; s2 < m; ++s2) {
        n(s, s2) = (s == s2 ? Complex(1, 0) : Complex(0, 0)) - c(s2, s);  // <a+_{k,s} a_{k,s'}>
        f(s, s2) = c(s, m + s2);                                          // <a_{k,s} a_{-k,s'}>
      }
    nmat_.push_back(std::move(n));
    fmat_.push_back(std::move(f));
  }
}

Complex QuasifreeCorrelator::normal(const Offset& z, int s, int s2) const {
  Complex acc(0, 0);
  for (long i = 0; i < npoints_; ++i) {
    double phase = ks_[i][0] * z[0] + ks_[i][1] * z[1] + ks_[i][2] * z[2];
    acc += std::exp(Complex(0, phase)) * nmat_[i](s, s2);
  }
  return acc / double(npoints_);
}

Complex QuasifreeCorrelator::anomalous(const Offset& z, int s, int s2) const {
  Complex acc(0, 0);
  for (long i = 0; i < npoints_; ++i) {
    double phase = ks_[i][0] * z[0] + ks_[i][1] * z[1] + ks_[i][2] * z[2];
    acc += std::exp(Complex(0, -phase)) * fmat_[i](s, s2);
  }
  return acc / double(npoints_);
}

Complex QuasifreeCorrelator::term_value(const KernelTerm& t) const {
  if (t.ops.empty()) return t.coef;
  if (t.ops.size() != 2) throw std::invalid_argument("correlator handles <=2-body terms");
  std::vector<KernelOp> ordered;
  int sign = normal_order_sign(t.ops, ordered);
  const KernelOp& x1 = ordered[0];
  const KernelOp& x2 = ordered[1];
  Offset z = x2.off - x1.off;
  Complex v;
  if (x1.nu == Nu::Create && x2.nu == Nu::Annihilate) {
    v = normal(z, x1.spin, x2.spin);
  } else if (x1.nu == Nu::Annihilate && x2.nu == Nu::Annihilate) {
    v = anomalous(z, x1.spin, x2.spin);
  } else if (x1.nu == Nu::Create && x2.nu == Nu::Create) {
    // <a+_{x1} a+_{x2}> = conj <a_{x2} a_{x1}>
    v = std::conj(anomalous(neg(z), x2.spin, x1.spin));
  } else {
    throw std::logic_error("normal ordering cannot end annihilator-first");
  }
  return double(sign) * t.coef * v;
}

Complex QuasifreeCorrelator::energy_density(const InteractionKernel& k) const {
  Complex acc(0, 0);
  for (const auto& t : k.terms()) acc += term_value(t);
  return acc;
}

double pressure_model(const LongRangeModel& m, const ChannelVector& c, double beta, const GridControl& grid) {
  InteractionKernel phi_c = build_approximating_interaction(m, c);
  QuadraticForm q = quadratic_from_kernel(phi_c, m.lattice().dim(), m.lattice().spins());
  return pressure_quasifree(q, beta, grid);
}

ChannelVector channel_expectation_grid(const LongRangeModel& m, const ChannelVector& c, double beta, int side) {
  InteractionKernel phi_c = build_approximating_interaction(m, c);
  QuadraticForm q = quadratic_from_kernel(phi_c, m.lattice().dim(), m.lattice().spins());
  QuasifreeCorrelator corr(q, beta, side);
  ChannelVector d(m.n_channels(), Sector::Full);
  for (std::size_t k = 0; k < m.n_channels(); ++k) {
    Complex e_re = corr.energy_density(m.channels()[k].phi);
    Complex e_im = corr.energy_density(m.channels()[k].phi_prime);
    // e_Phi of a self-adjoint kernel is real; keep the real parts
    d[k] = Complex(e_re.real(), e_im.real());
  }
  return d;
}

ChannelVector channel_expectation(const LongRangeModel& m, const ChannelVector& c, double beta,
                                  const GridControl& grid) {
  if (grid.fixed_side > 0) return channel_expectation_grid(m, c, beta, grid.fixed_side);
  ChannelVector prev;
  bool have_prev = false;
  for (int side = 3; side <= grid.max_side; side = 2 * side + 1) {
    ChannelVector d = channel_expectation_grid(m, c, beta, side);
    if (have_prev) {
      double delta = 0, scale = 1;
      for (std::size_t k = 0; k < d.size(); ++k) {
        delta = std::max(delta, std::abs(d[k] - prev[k]));
        scale = std::max(scale, std::abs(d[k]));
      }
      if (delta <= grid.rel_tol * scale) return d;
    }
    prev = d;
    have_prev = true;
  }
  throw std::runtime_error("channel expectation did not converge within the grid cap");
}

}  // namespace lrf
