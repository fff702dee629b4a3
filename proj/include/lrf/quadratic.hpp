#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <vector>

#include "lrf/model.hpp"

namespace lrf {

// Quadratic form over the infinite lattice:
//   H = sum_{z,s,s'} (H_z)_{ss'} sum_x a+_{x,s} a_{x+z,s'}
//     + 1/2 [ sum_{z,s,s'} (G_z)_{ss'} sum_x a_{x,s} a_{x+z,s'} + h.c. ]
//     + C per site,
// with H_{-z} = H_z^dag and the pairing block antisymmetrized so that
// (G_{-z})_{s's} = -(G_z)_{ss'}.
class QuadraticForm {
 public:
  QuadraticForm(int dim, int nspin) : dim_(dim), nspin_(nspin) {}

  int dim() const { return dim_; }
  int nspin() const { return nspin_; }
  double onsite_const() const { return const_; }
  void add_const(double c) { const_ += c; }

  void add_hopping(const Offset& z, int s, int s2, Complex v);  // inserts the hermitian partner too
  void add_pairing(const Offset& z, int s, int s2, Complex v);  // antisymmetrized insertion

  const std::map<Offset, Eigen::MatrixXcd>& hopping() const { return hop_; }
  const std::map<Offset, Eigen::MatrixXcd>& pairing() const { return pair_; }

  // momentum-space symbols on [-pi, pi]^d
  Eigen::MatrixXcd h_symbol(const std::array<double, 3>& k) const;  // sum_z H_z e^{i k z}
  Eigen::MatrixXcd g_symbol(const std::array<double, 3>& k) const;  // sum_z G_z e^{-i k z}
  // Nambu block over (a_k, a+_{-k})
  Eigen::MatrixXcd nambu(const std::array<double, 3>& k) const;

 private:
  int dim_, nspin_;
  double const_ = 0;
  std::map<Offset, Eigen::MatrixXcd> hop_, pair_;
  Eigen::MatrixXcd& slot(std::map<Offset, Eigen::MatrixXcd>& m, const Offset& z);
};

// extraction from a <=2-body self-adjoint kernel; throws "not quadratic"
QuadraticForm quadratic_from_kernel(const InteractionKernel& k, int dim, int nspin);
// inverse embedding (round-trips with quadratic_from_kernel)
InteractionKernel kernel_from_quadratic(const QuadraticForm& q);

struct GridControl {
  double rel_tol = 1e-9;
  int max_side = 65535;  // 2^16 - 1 points per dimension
  int fixed_side = 0;    // > 0: evaluate on this one grid, no refinement
};

// all 2M Nambu eigenvalues, ascending (symmetric around zero)
Eigen::VectorXd bdg_eigenvalues(const QuadraticForm& q, const std::array<double, 3>& k);

// nonnegative quasiparticle branch and the scalar offset making the grand
// potential exact: p_k = offset + (1/beta) sum_j ln(1 + e^{-beta E_j})
struct BdgPoint {
  Eigen::VectorXd energies;  // M values, ascending, >= -1e-12
  double offset;
};
BdgPoint bdg_spectrum(const QuadraticForm& q, const std::array<double, 3>& k);

double pressure_quasifree_grid(const QuadraticForm& q, double beta, int side);
double pressure_quasifree(const QuadraticForm& q, double beta, const GridControl& grid = {});

// thermal 2-point functions of the quasi-free Gibbs state on a fixed grid
class QuasifreeCorrelator {
 public:
  QuasifreeCorrelator(const QuadraticForm& q, double beta, int side);
  // <a+_{0,s} a_{z,s'}>
  Complex normal(const Offset& z, int s, int s2) const;
  // <a_{0,s} a_{z,s'}>
  Complex anomalous(const Offset& z, int s, int s2) const;
  // expectation of one canonical kernel term (normal-ordered monomial)
  Complex term_value(const KernelTerm& t) const;
  // energy density per site of a <=2-body kernel in this state
  Complex energy_density(const InteractionKernel& k) const;

 private:
  int dim_, nspin_, side_;
  long npoints_;
  std::vector<std::array<double, 3>> ks_;
  std::vector<Eigen::MatrixXcd> nmat_;  // N(k)_{ss'} = <a+_{k,s} a_{k,s'}>
  std::vector<Eigen::MatrixXcd> fmat_;  // F(k)_{ss'} = <a_{k,s} a_{-k,s'}>
};

// P_m(c): infinite-volume pressure of the approximating interaction Phi(c)
double pressure_model(const LongRangeModel& m, const ChannelVector& c, double beta, const GridControl& grid = {});

// gap-equation right-hand side d_k = e_{Phi_k}(omega) + i e_{Phi_k'}(omega)
// in the quasi-free Gibbs state of Phi(c)
ChannelVector channel_expectation(const LongRangeModel& m, const ChannelVector& c, double beta,
                                  const GridControl& grid = {});
ChannelVector channel_expectation_grid(const LongRangeModel& m, const ChannelVector& c, double beta, int side);

// Hubbard-type pressure: channels carry profiles over [-1/2,1/2]^d; the
// zeta-integral of free-gas pressures is evaluated by fixed-order Gauss
// quadrature nested inside the channel min-max (solved by the game module)
struct HTControl {
  int quad_order = 32;  // Gauss-Legendre points per dimension
  GridControl grid;
};
double pressure_hubbard_type(const QuadraticForm& hopping, int dim,
                             const std::vector<std::function<double(const std::array<double, 3>&)>>& profiles,
                             const std::vector<int>& gammas, const std::vector<double>& weights, double beta,
                             const HTControl& control);

}  // namespace lrf
