#include <algorithm>
#include <map>
#include <stdexcept>

#include "lrf/eig.hpp"
#include "lrf/fock.hpp"
#include "lrf/model.hpp"

namespace lrf {

namespace {

// canonical translate of a support set: minimal element moved to the origin
std::vector<Offset> shape_of(const KernelTerm& t, Offset& base) {
  std::vector<Offset> support;
  for (const auto& op : t.ops) {
    bool seen = false;
    for (const auto& s : support) seen = seen || (s == op.off);
    if (!seen) support.push_back(op.off);
  }
  std::sort(support.begin(), support.end());
  base = support.front();
  for (auto& s : support) s = s - base;
  return support;
}

}  // namespace

double interaction_norm(const InteractionKernel& k, const Lattice& lattice, long fock_dim_cap) {
  // Group canonical terms by the translation class of their support. Each
  // cluster shape S containing the origin appears once per element of S among
  // the translates, so sum_{Lambda ni 0} |Phi_Lambda|/|Lambda| collapses to
  // one exact operator norm per shape.
  struct ShapeData {
    std::vector<Offset> shape;
    std::vector<std::pair<Complex, std::vector<KernelOp>>> terms;  // offsets relative to shape base
  };
  std::map<std::vector<Offset>, ShapeData> shapes;

  double const_part = 0;
  for (const auto& t : k.terms()) {
    if (t.ops.empty()) {
      const_part += std::abs(t.coef);
      continue;
    }
    Offset base{0, 0, 0};
    auto shape = shape_of(t, base);
    auto& data = shapes[shape];
    data.shape = shape;
    std::vector<KernelOp> ops = t.ops;
    for (auto& op : ops) op.off = op.off - base;
    data.terms.emplace_back(t.coef, std::move(ops));
  }

  double total = const_part;
  for (auto& [key, data] : shapes) {
    const long nsites = long(data.shape.size());
    const long nmodes = nsites * lattice.spins();
    if (nmodes >= 62 || (1L << nmodes) > fock_dim_cap) {
      std::string desc;
      for (const auto& s : data.shape)
        desc += "(" + std::to_string(s[0]) + "," + std::to_string(s[1]) + "," + std::to_string(s[2]) + ")";
      throw std::runtime_error("cluster too large for the norm diagonalization: " + desc);
    }
    // map shape sites to a compact mode set and assemble the cluster operator
    std::map<Offset, long> site_of;
    for (long i = 0; i < nsites; ++i) site_of[data.shape[i]] = i;
    long dim = 1L << nmodes;
    Eigen::MatrixXcd op_dense = Eigen::MatrixXcd::Zero(dim, dim);
    Lattice cluster(1, lattice.spins(), int(nsites));
    FockBasis basis(cluster, fock_dim_cap);
    std::vector<Triplet> trips;
    std::vector<KernelOp> ordered;
    std::vector<ModeOp> modes;
    for (const auto& [coef, ops] : data.terms) {
      int nsign = normal_order_sign(ops, ordered);
      modes.clear();
      for (const auto& o : ordered) modes.push_back(ModeOp{o.nu == Nu::Create, int(site_of.at(o.off)) * lattice.spins() + o.spin});
      accumulate_monomial(trips, basis, coef * double(nsign), modes);
    }
    for (const auto& t : trips) op_dense(t.row(), t.col()) += t.value();
    Eigen::VectorXd evals;
    eig_hermitian(op_dense, evals, false);
    double norm = std::max(std::abs(evals.minCoeff()), std::abs(evals.maxCoeff()));
    total += norm;
  }
  return total;
}

}  // namespace lrf
