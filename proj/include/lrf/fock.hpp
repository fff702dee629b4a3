#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "lrf/model.hpp"

namespace lrf {

inline constexpr long kDefaultFockCap = 1L << 14;

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

// Occupation-bitstring basis of the fermionic Fock space over a finite box.
// Bit m of a basis index is the occupation of mode m; modes are site-major,
// spin-minor, and Jordan-Wigner signs count set bits below the acted mode.
class FockBasis {
 public:
  explicit FockBasis(const Lattice& lattice, long dim_cap = kDefaultFockCap);

  const Lattice& lattice() const { return lattice_; }
  int n_modes() const { return lattice_.modes(); }
  long dim() const { return dim_; }
  int mode(long site, int spin) const { return lattice_.mode(site, spin); }

 private:
  Lattice lattice_;
  long dim_;
};

struct FockOperator {
  SparseMatrix mat;
  bool hermitian = false;
  long dim() const { return mat.rows(); }
};

struct BuildStats {
  long dropped_terms = 0;  // open-boundary loss counter
};

// mode-resolved operator factor
struct ModeOp {
  bool dagger;
  int mode;
};

SparseMatrix annihilator(const FockBasis& basis, int mode);
SparseMatrix creator(const FockBasis& basis, int mode);

// accumulate coef * (ordered product of ops, rightmost acting first)
void accumulate_monomial(std::vector<Triplet>& trips, const FockBasis& basis, Complex coef,
                         const std::vector<ModeOp>& ops);

// normal-order a kernel signature: creations first, stable; returns the sign
int normal_order_sign(const std::vector<KernelOp>& ops, std::vector<KernelOp>& ordered);

// U_Lambda^Phi of one kernel on the box. With pbc every translate is wrapped
// through the torus map and coefficients of coinciding images add up; with
// open boundaries the out-of-box translates are dropped and counted.
SparseMatrix kernel_internal_energy(const InteractionKernel& kernel, const FockBasis& basis, bool pbc,
                                    BuildStats* stats = nullptr);

// A_k = U^{Phi_k} + i U^{Phi_k'}
SparseMatrix channel_operator(const Channel& ch, const FockBasis& basis, bool pbc, BuildStats* stats = nullptr);

// U_l = U^Phi + |Lambda|^{-1} sum_k w_k gamma_k A_k^* A_k
FockOperator build_internal_energy(const LongRangeModel& m, const FockBasis& basis, bool pbc,
                                   BuildStats* stats = nullptr);

bool is_hermitian(const SparseMatrix& a, double tol = 1e-12);

// local observable: sum of monomials anchored at offsets around a base site
struct LocalOperator {
  struct Mono {
    Complex coef;
    std::vector<KernelOp> ops;
  };
  std::vector<Mono> monos;
};

// energy observable e_Phi + i e_Phi' of a channel (per-site density of the
// channel's internal energy; offsets may reach outside the base site)
LocalOperator channel_site_observable(const Channel& ch);

// operator of a local observable translated to base site x (torus wrap)
SparseMatrix local_operator_at(const LocalOperator& b, const FockBasis& basis, const Offset& x);
// sum over all base sites
SparseMatrix local_operator_sum(const LocalOperator& b, const FockBasis& basis);

}  // namespace lrf
