#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lrf/fock.hpp"

namespace lrf {

// Spectral decomposition of a hermitian Fock operator, split along the
// connected components of its sparsity pattern (symmetry sectors fall out of
// this automatically, e.g. particle-number blocks of gauge-invariant models).
struct SpectralBlock {
  std::vector<long> index;  // basis states of this block
  Eigen::VectorXd evals;
  Eigen::MatrixXcd vecs_c;  // one of the two is filled when vectors are kept
  Eigen::MatrixXd vecs_r;
  bool real = false;
  bool has_vectors = false;
};

struct Spectrum {
  std::vector<SpectralBlock> blocks;
  long dim = 0;
  double min_eval() const;
  std::vector<double> sorted_evals() const;
};

Spectrum diagonalize_blocked(const SparseMatrix& u, bool want_vectors);

// log Tr exp(-beta U) with the largest -beta*E factored out
double log_trace_exp(const Spectrum& spec, double beta);

// p = (beta * volume)^{-1} ln Tr e^{-beta U}
double pressure_ed(const FockOperator& u, double beta, double volume);

// Gibbs state d = exp(-beta U)/Tr exp(-beta U), kept in spectral form.
class GibbsState {
 public:
  GibbsState(const FockOperator& u, double beta);

  double beta() const { return beta_; }
  long dim() const { return spec_->dim; }
  double log_z() const { return logz_; }
  const Spectrum& spectrum() const { return *spec_; }

  double entropy() const;  // von Neumann entropy S = -Tr d ln d
  Complex expectation(const SparseMatrix& a) const;
  std::vector<Complex> expectations(std::span<const SparseMatrix> ops) const;

  Eigen::MatrixXcd dense_matrix() const;  // density matrix; small dims only
  // one-site reduced density matrix (partial trace over all other sites)
  Eigen::MatrixXcd site_reduced(const FockBasis& basis, long site) const;

 private:
  std::shared_ptr<Spectrum> spec_;
  double beta_;
  double logz_;
  double emin_;
};

double entropy_density(const GibbsState& rho, double volume);

// passivity: f(rho) = v^{-1} Tr(rho U) - (beta v)^{-1} S(rho) >= -p for every
// state, with equality exactly at the Gibbs state
struct PassivityReport {
  double pressure = 0;
  double gibbs_margin = 0;    // f(gibbs) + p
  double worst_margin = 0;    // min over trials of f(rho) + p
  long violations = 0;        // trials with margin < -tol
  bool ok = false;
};
PassivityReport passivity_check(const FockOperator& u, double beta, double volume,
                                std::span<const Eigen::MatrixXcd> trials, double tol = 1e-10);

double free_energy_of_state(const Eigen::MatrixXcd& rho, const FockOperator& u, double beta, double volume);

// random trial density matrices (Ginibre), deterministic in the seed
std::vector<Eigen::MatrixXcd> random_density_matrices(long dim, int count, std::uint64_t seed);

// finite-volume double space average |Lambda|^-2 sum_{x,y} <alpha_x(B)^* alpha_y(B)>
double lro_estimator(const GibbsState& rho, const FockBasis& basis, const LocalOperator& b);

struct PbcReport {
  std::vector<int> ls;
  std::vector<double> p_pbc, p_open, diff;
  double fit_exponent = 0;      // slope of log|diff| vs log(side)
  bool shrinking = false;       // monotone decrease beyond the kernel range
  int range_l = 0;              // first l with side/2 >= kernel range
};
PbcReport pbc_consistency(const LongRangeModel& m, int l_min, int l_max);

}  // namespace lrf
