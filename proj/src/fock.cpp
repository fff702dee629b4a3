#include "lrf/fock.hpp"

#include <bit>
#include <stdexcept>

namespace lrf {

FockBasis::FockBasis(const Lattice& lattice, long dim_cap) : lattice_(lattice) {
  int m = lattice_.modes();
  if (m >= 63 || (1L << m) > dim_cap)
    throw std::runtime_error("Fock dimension 2^" + std::to_string(m) + " exceeds the configured cap " +
                             std::to_string(dim_cap));
  dim_ = 1L << m;
}

namespace {

inline int jw_sign(unsigned long state, int mode) {
  unsigned long below = state & ((1UL << mode) - 1UL);
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

SparseMatrix annihilator(const FockBasis& basis, int mode) {
  std::vector<Triplet> trips;
  trips.reserve(basis.dim() / 2);
  for (long b = 0; b < basis.dim(); ++b) {
    unsigned long s = static_cast<unsigned long>(b);
    if (s & (1UL << mode)) {
      unsigned long t = s & ~(1UL << mode);
      trips.emplace_back(long(t), b, Complex(jw_sign(s, mode), 0));
    }
  }
  SparseMatrix a(basis.dim(), basis.dim());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

SparseMatrix creator(const FockBasis& basis, int mode) {
  SparseMatrix a = annihilator(basis, mode);
  return SparseMatrix(a.adjoint());
}

void accumulate_monomial(std::vector<Triplet>& trips, const FockBasis& basis, Complex coef,
                         const std::vector<ModeOp>& ops) {
  if (coef == Complex(0, 0)) return;
  for (long b = 0; b < basis.dim(); ++b) {
    unsigned long s = static_cast<unsigned long>(b);
    int sign = 1;
    bool dead = false;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {  // rightmost acts first
      unsigned long bit = 1UL << it->mode;
      if (it->dagger) {
        if (s & bit) {
          dead = true;
          break;
        }
        sign *= jw_sign(s, it->mode);
        s |= bit;
      } else {
        if (!(s & bit)) {
          dead = true;
          break;
        }
        sign *= jw_sign(s, it->mode);
        s &= ~bit;
      }
    }
    if (!dead) trips.emplace_back(long(s), b, coef * double(sign));
  }
}

int normal_order_sign(const std::vector<KernelOp>& ops, std::vector<KernelOp>& ordered) {
  // stable partition: creations keep relative order, then annihilations;
  // the sign is the parity of (annihilator before creator) inversions
  ordered.clear();
  ordered.reserve(ops.size());
  long inversions = 0;
  int ann_before = 0;
  for (const auto& op : ops) {
    if (op.nu == Nu::Create) {
      inversions += ann_before;
      ordered.push_back(op);
    } else {
      ++ann_before;
    }
  }
  for (const auto& op : ops)
    if (op.nu == Nu::Annihilate) ordered.push_back(op);
  return (inversions & 1) ? -1 : 1;
}

SparseMatrix kernel_internal_energy(const InteractionKernel& kernel, const FockBasis& basis, bool pbc,
                                    BuildStats* stats) {
  const Lattice& lat = basis.lattice();
  std::vector<Triplet> trips;
  std::vector<ModeOp> modes;
  std::vector<KernelOp> ordered;
  for (const auto& term : kernel.terms()) {
    if (term.ops.empty()) {
      // constant per site
      for (long b = 0; b < basis.dim(); ++b) trips.emplace_back(b, b, term.coef * double(lat.volume()));
      continue;
    }
    int nsign = normal_order_sign(term.ops, ordered);
    for (long site = 0; site < lat.volume(); ++site) {
      Offset x = lat.coord(site);
      modes.clear();
      bool ok = true;
      for (const auto& op : ordered) {
        Offset y = x + op.off;
        if (pbc) {
          y = lat.wrap(y);
        } else if (!lat.in_window(y)) {
          ok = false;
          break;
        }
        modes.push_back(ModeOp{op.nu == Nu::Create, basis.mode(lat.site(y), op.spin)});
      }
      if (!ok) {
        if (stats) ++stats->dropped_terms;
        continue;
      }
      accumulate_monomial(trips, basis, term.coef * double(nsign), modes);
    }
  }
  SparseMatrix u(basis.dim(), basis.dim());
  u.setFromTriplets(trips.begin(), trips.end());
  u.prune([](long, long, const Complex& v) { return v != Complex(0, 0); });
  return u;
}

SparseMatrix channel_operator(const Channel& ch, const FockBasis& basis, bool pbc, BuildStats* stats) {
  SparseMatrix a = kernel_internal_energy(ch.phi, basis, pbc, stats);
  SparseMatrix b = kernel_internal_energy(ch.phi_prime, basis, pbc, stats);
  return a + Complex(0, 1) * b;
}

FockOperator build_internal_energy(const LongRangeModel& m, const FockBasis& basis, bool pbc, BuildStats* stats) {
  SparseMatrix u = kernel_internal_energy(m.local(), basis, pbc, stats);
  double inv_vol = 1.0 / double(basis.lattice().volume());
  for (const auto& ch : m.channels()) {
    SparseMatrix a = channel_operator(ch, basis, pbc, stats);
    SparseMatrix sq = SparseMatrix(a.adjoint()) * a;
    u = u + Complex(ch.weight * ch.gamma * inv_vol, 0) * sq;
  }
  u.prune([](long, long, const Complex& v) { return v != Complex(0, 0); });
  FockOperator op{std::move(u), false};
  op.hermitian = is_hermitian(op.mat);
  if (!op.hermitian) throw std::runtime_error("internal energy failed the hermiticity check");
  return op;
}

bool is_hermitian(const SparseMatrix& a, double tol) {
  SparseMatrix d = SparseMatrix(a.adjoint()) - a;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(d, k); it; ++it)
      if (std::abs(it.value()) > tol) return false;
  return true;
}

LocalOperator channel_site_observable(const Channel& ch) {
  LocalOperator out;
  auto absorb = [&out](const InteractionKernel& k, Complex scale) {
    for (const auto& term : k.terms()) {
      if (term.ops.empty()) {
        out.monos.push_back({scale * term.coef, {}});
        continue;
      }
      // e_Phi = sum_{Lambda containing 0} Phi_Lambda / |Lambda|: every translate
      // of the canonical term that covers the origin contributes once
      std::vector<Offset> support;
      for (const auto& op : term.ops) {
        bool seen = false;
        for (const auto& s : support) seen = seen || (s == op.off);
        if (!seen) support.push_back(op.off);
      }
      double inv = 1.0 / double(support.size());
      for (const auto& s : support) {
        std::vector<KernelOp> ops = term.ops;
        for (auto& op : ops) op.off = op.off - s;
        out.monos.push_back({scale * term.coef * inv, std::move(ops)});
      }
    }
  };
  absorb(ch.phi, Complex(1, 0));
  absorb(ch.phi_prime, Complex(0, 1));
  return out;
}

SparseMatrix local_operator_at(const LocalOperator& b, const FockBasis& basis, const Offset& x) {
  const Lattice& lat = basis.lattice();
  std::vector<Triplet> trips;
  std::vector<ModeOp> modes;
  std::vector<KernelOp> ordered;
  for (const auto& mono : b.monos) {
    if (mono.ops.empty()) {
      for (long i = 0; i < basis.dim(); ++i) trips.emplace_back(i, i, mono.coef);
      continue;
    }
    int nsign = normal_order_sign(mono.ops, ordered);
    modes.clear();
    for (const auto& op : ordered) {
      Offset y = lat.wrap(x + op.off);
      modes.push_back(ModeOp{op.nu == Nu::Create, basis.mode(lat.site(y), op.spin)});
    }
    accumulate_monomial(trips, basis, mono.coef * double(nsign), modes);
  }
  SparseMatrix a(basis.dim(), basis.dim());
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

SparseMatrix local_operator_sum(const LocalOperator& b, const FockBasis& basis) {
  SparseMatrix total(basis.dim(), basis.dim());
  for (long site = 0; site < basis.lattice().volume(); ++site)
    total = total + local_operator_at(b, basis, basis.lattice().coord(site));
  return total;
}

}  // namespace lrf
