#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lrf {

// Offsets and coordinates live in Z^d with d <= 3; unused components are 0.
constexpr int kMaxDim = 3;
using Offset = std::array<int, kMaxDim>;

inline Offset make_offset(int x, int y = 0, int z = 0) { return Offset{x, y, z}; }

double offset_norm(const Offset& x);
Offset operator+(const Offset& a, const Offset& b);
Offset operator-(const Offset& a, const Offset& b);

// Cubic box of the lattice Z^d seen as the torus Z^d/(side Z)^d.
// The canonical boxes Lambda_l have side 2l+1 and centered coordinates
// [-l, l]^d; boxes with even side use the window [0, side)^d instead.
// Sites are indexed row-major over the window; modes are site-major,
// spin-minor.
class Lattice {
 public:
  Lattice(int dim, int spins, int side);
  static Lattice box(int dim, int spins, int l) { return Lattice(dim, spins, 2 * l + 1); }

  int dim() const { return dim_; }
  int spins() const { return spins_; }
  int side() const { return side_; }
  long volume() const { return volume_; }
  int modes() const { return int(volume_) * spins_; }

  bool odd_side() const { return side_ % 2 == 1; }
  int box_l() const;  // (side-1)/2, odd sides only

  Offset coord(long site) const;
  long site(const Offset& x) const;
  bool in_window(const Offset& x) const;

  // torus map xi_l: componentwise mod side, recentred into the window
  Offset wrap(const Offset& x) const;
  long wrap_site(const Offset& x) const { return site(wrap(x)); }

  int mode(long site_index, int spin) const { return int(site_index) * spins_ + spin; }

 private:
  int dim_;
  int spins_;
  int side_;
  long volume_;
  int lo_;  // window lower bound per axis
};

}  // namespace lrf
