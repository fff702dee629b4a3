#include "lrf/perminv.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "lrf/eig.hpp"
#include "lrf/fock.hpp"
#include "lrf/gibbs.hpp"
#include "lrf/optim.hpp"

namespace lrf {

namespace {

struct OneSiteProblem {
  long dim = 0;
  Eigen::MatrixXcd e_phi;                 // local one-site energy observable
  std::vector<Eigen::MatrixXcd> a_ops;    // e_{Phi_k} + i e_{Phi_k'}
  std::vector<double> weights;
  std::vector<int> gammas;
  std::vector<int> parity;                // (-1)^popcount per basis state
  double beta = 0;
};

OneSiteProblem build_problem(const LongRangeModel& m) {
  if (!m.permutation_invariant())
    throw std::invalid_argument("perminv_pressure needs a permutation-invariant model (single-site kernels)");
  Lattice site(m.lattice().dim(), m.lattice().spins(), 1);
  FockBasis basis(site);
  OneSiteProblem prob;
  prob.dim = basis.dim();
  prob.beta = m.beta();
  prob.e_phi = Eigen::MatrixXcd(kernel_internal_energy(m.local(), basis, false));
  for (const auto& ch : m.channels()) {
    prob.a_ops.push_back(Eigen::MatrixXcd(channel_operator(ch, basis, false)));
    prob.weights.push_back(ch.weight);
    prob.gammas.push_back(ch.gamma);
  }
  prob.parity.resize(prob.dim);
  for (long b = 0; b < prob.dim; ++b)
    prob.parity[b] = (std::popcount(static_cast<unsigned long>(b)) & 1) ? -1 : 1;
  return prob;
}

double entropy_of(const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd a = rho;
  Eigen::VectorXd evals;
  eig_hermitian(a, evals, false);
  double s = 0;
  for (long i = 0; i < evals.size(); ++i)
    if (evals[i] > 1e-15) s -= evals[i] * std::log(evals[i]);
  return s;
}

double objective(const OneSiteProblem& prob, const Eigen::MatrixXcd& rho) {
  double val = (rho * prob.e_phi).trace().real();
  for (std::size_t k = 0; k < prob.a_ops.size(); ++k) {
    Complex z = (rho * prob.a_ops[k]).trace();
    val += prob.weights[k] * prob.gammas[k] * std::norm(z);
  }
  return val - entropy_of(rho) / prob.beta;
}

// Euler-Lagrange fixed point: rho = Gibbs(H_eff(rho)) with the linearized
// channel terms folded into the effective one-site Hamiltonian
Eigen::MatrixXcd effective_hamiltonian(const OneSiteProblem& prob, const Eigen::MatrixXcd& rho) {
  Eigen::MatrixXcd h = prob.e_phi;
  for (std::size_t k = 0; k < prob.a_ops.size(); ++k) {
    Complex z = (rho * prob.a_ops[k]).trace();
    h += prob.weights[k] * double(prob.gammas[k]) *
         (std::conj(z) * prob.a_ops[k] + z * prob.a_ops[k].adjoint());
  }
  return h;
}

Eigen::MatrixXcd gibbs_of(const Eigen::MatrixXcd& h, double beta) {
  Eigen::MatrixXcd v = h;
  Eigen::VectorXd evals;
  eig_hermitian(v, evals, true);
  double emin = evals.minCoeff();
  Eigen::VectorXd w(evals.size());
  double z = 0;
  for (long i = 0; i < evals.size(); ++i) {
    w[i] = std::exp(-beta * (evals[i] - emin));
    z += w[i];
  }
  w /= z;
  return v * w.asDiagonal() * v.adjoint();
}

Eigen::MatrixXcd project_even(const OneSiteProblem& prob, Eigen::MatrixXcd rho) {
  for (long i = 0; i < prob.dim; ++i)
    for (long j = 0; j < prob.dim; ++j)
      if (prob.parity[i] != prob.parity[j]) rho(i, j) = Complex(0, 0);
  double tr = rho.trace().real();
  return rho / tr;
}

double odd_sector_weight(const OneSiteProblem& prob, const Eigen::MatrixXcd& rho) {
  double w = 0;
  for (long i = 0; i < prob.dim; ++i)
    for (long j = 0; j < prob.dim; ++j)
      if (prob.parity[i] != prob.parity[j]) w = std::max(w, std::abs(rho(i, j)));
  return w;
}

}  // namespace

PerminvResult perminv_pressure(const LongRangeModel& m, const PerminvControl& control) {
  OneSiteProblem prob = build_problem(m);
  std::mt19937_64 rng(control.seed * 0x9E3779B97F4A7C15ULL + 17);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto random_even_state = [&]() {
    Eigen::MatrixXcd x(prob.dim, prob.dim);
    for (long i = 0; i < prob.dim; ++i)
      for (long j = 0; j < prob.dim; ++j) x(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::MatrixXcd rho = x * x.adjoint();
    rho /= rho.trace().real();
    return project_even(prob, rho);
  };

  PerminvResult result;
  double best = std::numeric_limits<double>::infinity();

  for (int s = 0; s < std::max(1, control.starts); ++s) {
    Eigen::MatrixXcd rho =
        (s == 0) ? project_even(prob, Eigen::MatrixXcd::Identity(prob.dim, prob.dim) / double(prob.dim))
                 : random_even_state();
    // damped self-consistency loop; the effective Hamiltonian is even, so the
    // iteration never leaves the even sector
    double alpha = 0.6;
    double prev = objective(prob, rho);
    for (int it = 0; it < control.max_iter; ++it) {
      Eigen::MatrixXcd target = gibbs_of(effective_hamiltonian(prob, rho), prob.beta);
      Eigen::MatrixXcd next = (1 - alpha) * rho + alpha * target;
      double diff = (next - rho).cwiseAbs().maxCoeff();
      rho = next;
      double val = objective(prob, rho);
      if (val > prev + 1e-13) alpha = std::max(0.05, alpha * 0.7);
      prev = val;
      if (diff < control.tol) break;
    }
    double val = objective(prob, rho);
    result.minima.emplace_back(val, rho);
    if (val < best) {
      best = val;
      result.state.rho = rho;
    }
  }

  std::sort(result.minima.begin(), result.minima.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  result.pressure = -best;
  result.state.even = odd_sector_weight(prob, result.state.rho) <= 1e-12;
  return result;
}

PerminvLimitReport perminv_gibbs_limit_check(const LongRangeModel& m, int l_min, int l_max,
                                             const PerminvControl& control) {
  PerminvResult one_site = perminv_pressure(m, control);
  PerminvLimitReport rep;
  for (int l = l_min; l <= l_max; ++l) {
    LongRangeModel boxed = m.with_box(2 * l + 1);
    FockBasis basis(boxed.lattice());
    FockOperator u = build_internal_energy(boxed, basis, true);
    GibbsState gibbs(u, m.beta());
    long center = basis.lattice().site({0, 0, 0});
    Eigen::MatrixXcd red = gibbs.site_reduced(basis, center);
    Eigen::MatrixXcd diff = red - one_site.state.rho;
    Eigen::MatrixXcd herm = diff;
    Eigen::VectorXd evals;
    eig_hermitian(herm, evals, false);
    double td = 0.5 * evals.cwiseAbs().sum();
    rep.rows.push_back({l, td});
  }
  rep.decaying = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].trace_distance > rep.rows[i - 1].trace_distance + 1e-12) rep.decaying = false;
  return rep;
}

}  // namespace lrf
