#include "lrf/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lrf {

LongRangeModel::LongRangeModel(Lattice lattice, double beta, InteractionKernel local,
                               std::vector<Channel> channels)
    : lattice_(std::move(lattice)), beta_(beta), local_(std::move(local)), channels_(std::move(channels)) {
  if (beta_ <= 0) throw std::invalid_argument("beta must be positive");
  for (const auto& ch : channels_) {
    if (ch.gamma != -1 && ch.gamma != 1) throw std::invalid_argument("channel gamma must be -1 or +1");
    if (!(ch.weight > 0)) throw std::invalid_argument("channel weight must be positive");
  }
}

LongRangeModel LongRangeModel::with_beta(double beta) const {
  return LongRangeModel(lattice_, beta, local_, channels_);
}

LongRangeModel LongRangeModel::with_channel_weight(std::size_t k, double w) const {
  auto ch = channels_;
  ch.at(k).weight = w;
  return LongRangeModel(lattice_, beta_, local_, std::move(ch));
}

LongRangeModel LongRangeModel::with_box(int side) const {
  return LongRangeModel(Lattice(lattice_.dim(), lattice_.spins(), side), beta_, local_, channels_);
}

void LongRangeModel::validate() const {
  auto check_kernel = [](const InteractionKernel& k, const std::string& name) {
    if (!k.self_adjoint())
      throw std::runtime_error("kernel '" + name + "' violates self-adjointness; offending dump:\n" + k.dump());
  };
  check_kernel(local_, "local");
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    check_kernel(channels_[k].phi, "channel[" + std::to_string(k) + "]");
    check_kernel(channels_[k].phi_prime, "channel[" + std::to_string(k) + "]'");
  }
}

bool LongRangeModel::purely_attractive() const {
  for (const auto& ch : channels_)
    if (ch.gamma == 1) return false;
  return true;
}

bool LongRangeModel::purely_repulsive() const {
  for (const auto& ch : channels_)
    if (ch.gamma == -1) return false;
  return true;
}

bool LongRangeModel::permutation_invariant() const {
  if (!local_.single_site()) return false;
  for (const auto& ch : channels_)
    if (!ch.phi.single_site() || !ch.phi_prime.single_site()) return false;
  return true;
}

bool LongRangeModel::quadratic() const {
  if (local_.max_body() > 2) return false;
  for (const auto& ch : channels_)
    if (ch.phi.max_body() > 2 || ch.phi_prime.max_body() > 2) return false;
  return true;
}

bool LongRangeModel::gauge_invariant() const {
  if (!local_.gauge_invariant()) return false;
  for (const auto& ch : channels_)
    if (!ch.phi.gauge_invariant() || !ch.phi_prime.gauge_invariant()) return false;
  return true;
}

std::size_t LongRangeModel::n_minus() const {
  std::size_t n = 0;
  for (const auto& ch : channels_) n += (ch.gamma == -1);
  return n;
}

std::size_t LongRangeModel::n_plus() const { return channels_.size() - n_minus(); }

double LongRangeModel::seminorm(long cap) const {
  double s = interaction_norm(local_, lattice_, cap);
  for (const auto& ch : channels_) {
    double a = interaction_norm(ch.phi, lattice_, cap);
    double b = interaction_norm(ch.phi_prime, lattice_, cap);
    s += ch.weight * std::sqrt(a * a + b * b);
  }
  return s;
}

std::string LongRangeModel::canonical_dump() const {
  std::ostringstream os;
  os.precision(17);
  os << "d " << lattice_.dim() << " spins " << lattice_.spins() << " side " << lattice_.side() << '\n';
  os << "beta " << beta_ << '\n';
  os << "local\n" << local_.dump();
  for (const auto& ch : channels_) {
    os << "channel gamma " << ch.gamma << " weight " << ch.weight << '\n';
    os << ch.phi.dump() << "prime\n" << ch.phi_prime.dump();
  }
  return os.str();
}

std::uint64_t LongRangeModel::hash() const {
  // FNV-1a over the canonical serialization
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical_dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string LongRangeModel::hash_hex() const {
  std::ostringstream os;
  os << std::hex << hash();
  return os.str();
}

InteractionKernel build_approximating_interaction(const LongRangeModel& m, const ChannelVector& c) {
  if (c.size() != m.n_channels()) throw std::invalid_argument("channel vector size mismatch");
  if (c.sector() != Sector::Full) throw std::invalid_argument("approximating interaction expects a full-sector vector");
  InteractionKernel out = m.local();
  for (std::size_t k = 0; k < m.n_channels(); ++k) {
    const Channel& ch = m.channels()[k];
    double a = 2.0 * ch.weight * ch.gamma;
    out.axpy(a * c[k].real(), ch.phi);
    out.axpy(a * c[k].imag(), ch.phi_prime);
  }
  return out;
}

std::pair<ChannelVector, ChannelVector> split_channel_vector(const ChannelVector& c, const LongRangeModel& m) {
  if (c.size() != m.n_channels()) throw std::invalid_argument("channel vector size mismatch");
  ChannelVector minus(c.size(), Sector::Minus), plus(c.size(), Sector::Plus);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (m.channels()[k].gamma == -1)
      minus[k] = c[k];
    else
      plus[k] = c[k];
  }
  return {minus, plus};
}

ChannelVector recombine(const ChannelVector& minus, const ChannelVector& plus) {
  if (minus.size() != plus.size()) throw std::invalid_argument("sector size mismatch");
  ChannelVector full(minus.size(), Sector::Full);
  for (std::size_t k = 0; k < full.size(); ++k) full[k] = minus[k] + plus[k];
  return full;
}

double weighted_norm2_sq(const ChannelVector& c, const LongRangeModel& m) {
  double s = 0;
  for (std::size_t k = 0; k < c.size(); ++k) s += m.channels()[k].weight * std::norm(c[k]);
  return s;
}

Complex weighted_dot(const ChannelVector& a, const ChannelVector& b, const LongRangeModel& m) {
  Complex s(0, 0);
  for (std::size_t k = 0; k < a.size(); ++k) s += m.channels()[k].weight * std::conj(a[k]) * b[k];
  return s;
}

double weighted_dist(const ChannelVector& a, const ChannelVector& b, const LongRangeModel& m) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += m.channels()[k].weight * std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace lrf
