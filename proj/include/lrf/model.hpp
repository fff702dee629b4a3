#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrf/kernel.hpp"
#include "lrf/lattice.hpp"

namespace lrf {

enum class Sector { Minus, Plus, Full };

// Channel amplitudes c_k, one complex entry per long-range channel.
// Minus-sector vectors vanish on repulsive channels and vice versa.
class ChannelVector {
 public:
  ChannelVector() : sector_(Sector::Full) {}
  ChannelVector(std::size_t n, Sector sector) : v_(n, Complex(0, 0)), sector_(sector) {}

  std::size_t size() const { return v_.size(); }
  Sector sector() const { return sector_; }
  void set_sector(Sector s) { sector_ = s; }
  Complex& operator[](std::size_t k) { return v_[k]; }
  const Complex& operator[](std::size_t k) const { return v_[k]; }
  const std::vector<Complex>& entries() const { return v_; }

 private:
  std::vector<Complex> v_;
  Sector sector_;
};

// One long-range channel: the pair (Phi_k, Phi_k'), its sign gamma_k and the
// atom weight w_k of the discrete channel measure.
struct Channel {
  InteractionKernel phi;
  InteractionKernel phi_prime;
  int gamma = -1;     // -1 attraction, +1 repulsion
  double weight = 1;  // > 0
};

// A local translation-invariant interaction plus finitely many long-range
// channels, with the inverse temperature carried on the model.
class LongRangeModel {
 public:
  LongRangeModel(Lattice lattice, double beta, InteractionKernel local, std::vector<Channel> channels);

  const Lattice& lattice() const { return lattice_; }
  double beta() const { return beta_; }
  const InteractionKernel& local() const { return local_; }
  const std::vector<Channel>& channels() const { return channels_; }
  std::size_t n_channels() const { return channels_.size(); }

  LongRangeModel with_beta(double beta) const;
  LongRangeModel with_channel_weight(std::size_t k, double w) const;
  LongRangeModel with_box(int side) const;

  void validate() const;  // throws on any violated invariant

  bool purely_attractive() const;
  bool purely_repulsive() const;
  bool permutation_invariant() const;  // all kernels single-site
  bool quadratic() const;              // local and all channels are <= 2-body
  bool gauge_invariant() const;

  std::size_t n_minus() const;  // number of attractive channels
  std::size_t n_plus() const;

  // ||m|| = ||Phi|| + sum_k w_k (||Phi_k||^2 + ||Phi_k'||^2)^(1/2)
  double seminorm(long fock_dim_cap = 1L << 14) const;

  std::string canonical_dump() const;
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  Lattice lattice_;
  double beta_;
  InteractionKernel local_;
  std::vector<Channel> channels_;
};

// W_1 norm: sum over cluster shapes containing the origin of |Phi_Lambda|/|Lambda|
// with the exact operator norm from small-cluster diagonalization.
double interaction_norm(const InteractionKernel& k, const Lattice& lattice, long fock_dim_cap = 1L << 14);

// Phi(c) = Phi + 2 Re sum_k w_k gamma_k conj(c_k) (Phi_k + i Phi_k')
InteractionKernel build_approximating_interaction(const LongRangeModel& m, const ChannelVector& c);

std::pair<ChannelVector, ChannelVector> split_channel_vector(const ChannelVector& c, const LongRangeModel& m);
ChannelVector recombine(const ChannelVector& minus, const ChannelVector& plus);

// weighted l2 geometry on channel space
double weighted_norm2_sq(const ChannelVector& c, const LongRangeModel& m);
Complex weighted_dot(const ChannelVector& a, const ChannelVector& b, const LongRangeModel& m);
double weighted_dist(const ChannelVector& a, const ChannelVector& b, const LongRangeModel& m);

}  // namespace lrf
