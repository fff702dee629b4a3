#include "lrf/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrf {

namespace {

bool sig_less(const std::vector<KernelOp>& a, const std::vector<KernelOp>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// reversed and dagger-flipped signature; self-adjointness pairs each term
// with this partner carrying the conjugate coefficient
std::vector<KernelOp> reverse_conjugate(const std::vector<KernelOp>& ops) {
  std::vector<KernelOp> out(ops.rbegin(), ops.rend());
  for (auto& op : out) op.nu = (op.nu == Nu::Create) ? Nu::Annihilate : Nu::Create;
  return out;
}

}  // namespace

int InteractionKernel::canonicalize(std::vector<KernelOp>& ops) {
  // insertion sort, counting transpositions
  int sign = 1;
  for (std::size_t i = 1; i < ops.size(); ++i) {
    KernelOp key = ops[i];
    std::size_t j = i;
    while (j > 0 && key < ops[j - 1]) {
      ops[j] = ops[j - 1];
      sign = -sign;
      --j;
    }
    ops[j] = key;
  }
  for (std::size_t i = 1; i < ops.size(); ++i)
    if (ops[i] == ops[i - 1]) return 0;  // a^2 = 0
  if (!ops.empty()) {
    Offset base = ops[0].off;
    for (auto& op : ops) op.off = op.off - base;
  }
  return sign;
}

void InteractionKernel::add_monomial(Complex coef, std::vector<KernelOp> ops) {
  if (ops.size() % 2 != 0) throw std::invalid_argument("interaction kernels are even: odd signature rejected");
  if (coef == Complex(0.0, 0.0)) return;
  int sign = canonicalize(ops);
  if (sign == 0) return;
  insert(double(sign) * coef, std::move(ops));
}

void InteractionKernel::insert(Complex coef, std::vector<KernelOp> ops) {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), ops,
                             [](const KernelTerm& t, const std::vector<KernelOp>& s) { return sig_less(t.ops, s); });
  if (it != terms_.end() && it->ops == ops) {
    it->coef += coef;
    if (it->coef == Complex(0.0, 0.0)) terms_.erase(it);
  } else {
    terms_.insert(it, KernelTerm{std::move(ops), coef});
  }
}

int InteractionKernel::max_body() const {
  std::size_t m = 0;
  for (const auto& t : terms_) m = std::max(m, t.ops.size());
  return int(m);
}

double InteractionKernel::range() const {
  double r = 0;
  for (const auto& t : terms_)
    for (const auto& op : t.ops) r = std::max(r, offset_norm(op.off));
  return r;
}

bool InteractionKernel::gauge_invariant() const {
  for (const auto& t : terms_) {
    int net = 0;
    for (const auto& op : t.ops) net += (op.nu == Nu::Create) ? 1 : -1;
    if (net != 0) return false;
  }
  return true;
}

bool InteractionKernel::self_adjoint(double tol) const {
  for (const auto& t : terms_) {
    auto conj_ops = reverse_conjugate(t.ops);
    int sign = canonicalize(conj_ops);
    if (sign == 0) return false;  // cannot happen for a valid term
    Complex want = double(sign) * std::conj(t.coef);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), conj_ops,
                               [](const KernelTerm& a, const std::vector<KernelOp>& s) { return sig_less(a.ops, s); });
    Complex have = (it != terms_.end() && it->ops == conj_ops) ? it->coef : Complex(0.0, 0.0);
    if (std::abs(have - want) > tol * std::max(1.0, std::abs(t.coef))) return false;
  }
  return true;
}

bool InteractionKernel::single_site() const {
  for (const auto& t : terms_)
    for (const auto& op : t.ops)
      if (op.off != Offset{0, 0, 0}) return false;
  return true;
}

InteractionKernel& InteractionKernel::operator+=(const InteractionKernel& other) {
  for (const auto& t : other.terms_) insert(t.coef, t.ops);
  return *this;
}

InteractionKernel& InteractionKernel::axpy(double a, const InteractionKernel& other) {
  if (a == 0.0) return *this;
  for (const auto& t : other.terms_) insert(a * t.coef, t.ops);
  return *this;
}

InteractionKernel operator*(double a, const InteractionKernel& k) {
  InteractionKernel out;
  out.axpy(a, k);
  return out;
}

InteractionKernel operator+(InteractionKernel a, const InteractionKernel& b) {
  a += b;
  return a;
}

void InteractionKernel::prune(double eps) {
  std::erase_if(terms_, [eps](const KernelTerm& t) { return std::abs(t.coef) <= eps; });
}

std::string InteractionKernel::dump() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& t : terms_) {
    os << t.coef.real() << ' ' << t.coef.imag();
    for (const auto& op : t.ops) {
      os << ' ' << (op.nu == Nu::Create ? '+' : '-') << ' ' << op.spin;
      for (int i = 0; i < kMaxDim; ++i) os << ' ' << op.off[i];
    }
    os << '\n';
  }
  return os.str();
}

InteractionKernel kernel_chemical_potential(double mu, int spins) {
  InteractionKernel k;
  for (int s = 0; s < spins; ++s) k.add_monomial(-mu, {cr({0, 0, 0}, s), an({0, 0, 0}, s)});
  return k;
}

InteractionKernel kernel_hopping(double t, int spins, int dim) {
  InteractionKernel k;
  for (int axis = 0; axis < dim; ++axis) {
    Offset e{0, 0, 0};
    e[axis] = 1;
    for (int s = 0; s < spins; ++s) {
      k.add_monomial(-t, {cr({0, 0, 0}, s), an(e, s)});
      k.add_monomial(-t, {cr(e, s), an({0, 0, 0}, s)});
    }
  }
  return k;
}

InteractionKernel kernel_density(int spins, double shift) {
  InteractionKernel k;
  for (int s = 0; s < spins; ++s) k.add_monomial(1.0, {cr({0, 0, 0}, s), an({0, 0, 0}, s)});
  if (shift != 0.0) k.add_constant(-shift);
  return k;
}

InteractionKernel kernel_density_density(double v, int spins, const Offset& off) {
  InteractionKernel k;
  for (int s = 0; s < spins; ++s)
    for (int s2 = 0; s2 < spins; ++s2)
      k.add_monomial(v, {cr({0, 0, 0}, s), an({0, 0, 0}, s), cr(off, s2), an(off, s2)});
  return k;
}

InteractionKernel kernel_hubbard_u(double u) {
  InteractionKernel k;
  k.add_monomial(u, {cr({0, 0, 0}, 0), an({0, 0, 0}, 0), cr({0, 0, 0}, 1), an({0, 0, 0}, 1)});
  return k;
}

std::pair<InteractionKernel, InteractionKernel> channel_pair_from_observable(
    const std::vector<ObservableMonomial>& monomials) {
  InteractionKernel re, im;
  const Complex half(0.5, 0.0);
  const Complex half_i(0.0, -0.5);  // 1/(2i)
  for (const auto& m : monomials) {
    auto adj_ops = [&m]() {
      std::vector<KernelOp> out(m.ops.rbegin(), m.ops.rend());
      for (auto& op : out) op.nu = (op.nu == Nu::Create) ? Nu::Annihilate : Nu::Create;
      return out;
    }();
    re.add_monomial(half * m.coef, m.ops);
    re.add_monomial(half * std::conj(m.coef), adj_ops);
    im.add_monomial(half_i * m.coef, m.ops);
    im.add_monomial(-half_i * std::conj(m.coef), adj_ops);
  }
  return {std::move(re), std::move(im)};
}

std::vector<ObservableMonomial> pairing_observable_onsite() {
  // b = a_{0,down} a_{0,up} with spin labels (0=up, 1=down)
  return {ObservableMonomial{1.0, {an({0, 0, 0}, 1), an({0, 0, 0}, 0)}}};
}

}  // namespace lrf
