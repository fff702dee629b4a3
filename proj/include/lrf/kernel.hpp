#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "lrf/lattice.hpp"

namespace lrf {

using Complex = std::complex<double>;

enum class Nu : std::uint8_t { Create = 0, Annihilate = 1 };

// One factor of a normal-ordered monomial. Member order fixes the canonical
// sort: offset (lexicographic), then spin, then creation before annihilation.
struct KernelOp {
  Offset off;
  int spin;
  Nu nu;
  auto operator<=>(const KernelOp&) const = default;
};

inline KernelOp cr(Offset off, int spin = 0) { return KernelOp{off, spin, Nu::Create}; }
inline KernelOp an(Offset off, int spin = 0) { return KernelOp{off, spin, Nu::Annihilate}; }

struct KernelTerm {
  std::vector<KernelOp> ops;  // canonical: sorted, first offset at the origin
  Complex coef;               // multiplies the normal-ordered product :a(X1)...a(Xn):
};

// Translation-invariant finite-range interaction kernel, stored as one
// canonical representative per translation class. Signatures are sorted with
// fermionic sign bookkeeping and the first offset is pinned to the origin;
// even length is enforced at insertion. An empty signature is the constant
// (per-site identity) part.
class InteractionKernel {
 public:
  InteractionKernel() = default;

  // coef * :a(X1)...a(Xn): in the order given; canonicalized on insertion
  void add_monomial(Complex coef, std::vector<KernelOp> ops);
  void add_constant(double c) { add_monomial(c, {}); }

  const std::vector<KernelTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  int max_body() const;
  double range() const;
  bool gauge_invariant() const;
  bool self_adjoint(double tol = 1e-12) const;
  bool quadratic() const { return max_body() <= 2; }
  bool single_site() const;  // all offsets at the origin

  InteractionKernel& operator+=(const InteractionKernel& other);
  InteractionKernel& axpy(double a, const InteractionKernel& other);
  friend InteractionKernel operator*(double a, const InteractionKernel& k);
  friend InteractionKernel operator+(InteractionKernel a, const InteractionKernel& b);

  void prune(double eps);
  std::string dump() const;  // canonical text form

  // canonicalize a raw signature; returns the fermionic sign, 0 for a
  // vanishing (repeated-operator) signature
  static int canonicalize(std::vector<KernelOp>& ops);

 private:
  void insert(Complex coef, std::vector<KernelOp> ops);
  std::vector<KernelTerm> terms_;  // kept sorted by signature
};

// common building blocks
InteractionKernel kernel_chemical_potential(double mu, int spins);
InteractionKernel kernel_hopping(double t, int spins, int dim);  // -t sum over nn bonds
InteractionKernel kernel_density(int spins, double shift = 0.0);  // n - shift per site
InteractionKernel kernel_density_density(double v, int spins, const Offset& off);
InteractionKernel kernel_hubbard_u(double u);  // spins=2 on-site pair density

// split a (generally non-self-adjoint) local observable A into the pair
// (Phi, Phi') with Phi + i Phi' = A; both parts are self-adjoint kernels
struct ObservableMonomial {
  Complex coef;
  std::vector<KernelOp> ops;
};
std::pair<InteractionKernel, InteractionKernel> channel_pair_from_observable(
    const std::vector<ObservableMonomial>& monomials);

// singlet on-site pairing observable b = a_{down} a_{up} (spins = 2)
std::vector<ObservableMonomial> pairing_observable_onsite();

}  // namespace lrf
