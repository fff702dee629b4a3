#include "lrf/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace lrf {

double offset_norm(const Offset& x) {
  double s = 0;
  for (int c : x) s += double(c) * double(c);
  return std::sqrt(s);
}

Offset operator+(const Offset& a, const Offset& b) {
  return Offset{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

Offset operator-(const Offset& a, const Offset& b) {
  return Offset{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Lattice::Lattice(int dim, int spins, int side) : dim_(dim), spins_(spins), side_(side) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("lattice dimension must be 1..3");
  if (spins < 1) throw std::invalid_argument("lattice needs at least one spin state");
  if (side < 1) throw std::invalid_argument("box side must be >= 1");
  volume_ = 1;
  for (int i = 0; i < dim; ++i) volume_ *= side;
  lo_ = (side % 2 == 1) ? -(side - 1) / 2 : 0;
}

int Lattice::box_l() const {
  if (!odd_side()) throw std::logic_error("box_l requires an odd side");
  return (side_ - 1) / 2;
}

Offset Lattice::coord(long s) const {
  Offset x{0, 0, 0};
  for (int i = dim_ - 1; i >= 0; --i) {
    x[i] = int(s % side_) + lo_;
    s /= side_;
  }
  return x;
}

long Lattice::site(const Offset& x) const {
  long s = 0;
  for (int i = 0; i < dim_; ++i) {
    int c = x[i] - lo_;
    if (c < 0 || c >= side_) throw std::out_of_range("coordinate outside box window");
    s = s * side_ + c;
  }
  return s;
}

bool Lattice::in_window(const Offset& x) const {
  for (int i = 0; i < dim_; ++i)
    if (x[i] < lo_ || x[i] >= lo_ + side_) return false;
  for (int i = dim_; i < kMaxDim; ++i)
    if (x[i] != 0) return false;
  return true;
}

Offset Lattice::wrap(const Offset& x) const {
  Offset y{0, 0, 0};
  for (int i = 0; i < dim_; ++i) {
    int c = (x[i] - lo_) % side_;
    if (c < 0) c += side_;
    y[i] = c + lo_;
  }
  return y;
}

}  // namespace lrf
