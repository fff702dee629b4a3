#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lrf/game.hpp"

namespace lrf {

namespace {

// Gauss-Legendre nodes/weights on [-1/2, 1/2] by Newton iteration on P_n
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1, p1 = x;
    for (int j = 2; j <= n; ++j) {
      double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1);
    nodes[i] = 0.5 * x;  // scale [-1,1] -> [-1/2,1/2]
    weights[i] = 0.5 * 2.0 / ((1 - x * x) * dp * dp);
  }
}

}  // namespace

double pressure_hubbard_type(const QuadraticForm& hopping, int dim,
                             const std::vector<std::function<double(const std::array<double, 3>&)>>& profiles,
                             const std::vector<int>& gammas, const std::vector<double>& weights, double beta,
                             const HTControl& control) {
  const std::size_t nch = profiles.size();
  if (gammas.size() != nch || weights.size() != nch) throw std::invalid_argument("channel arrays disagree in size");

  std::vector<double> nodes1, w1;
  gauss_legendre(control.quad_order, nodes1, w1);

  // tensorized quadrature points over [-1/2,1/2]^dim
  std::vector<std::array<double, 3>> zetas;
  std::vector<double> qw;
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= control.quad_order;
  zetas.reserve(total);
  qw.reserve(total);
  for (long idx = 0; idx < total; ++idx) {
    long rest = idx;
    std::array<double, 3> z{0, 0, 0};
    double w = 1;
    for (int i = 0; i < dim; ++i) {
      int j = int(rest % control.quad_order);
      rest /= control.quad_order;
      z[i] = nodes1[j];
      w *= w1[j];
    }
    zetas.push_back(z);
    qw.push_back(w);
  }

  // free-gas pressure of the zeta-slice with its linearized onsite shift
  auto slice_pressure = [&](const std::array<double, 3>& zeta, const ChannelVector& c) {
    double shift = 0;
    for (std::size_t k = 0; k < nch; ++k)
      shift += 2.0 * weights[k] * gammas[k] * c[k].real() * profiles[k](zeta);
    QuadraticForm q = hopping;
    for (int s = 0; s < q.nspin(); ++s) q.add_hopping({0, 0, 0}, s, s, 0.5 * shift);
    return pressure_quasifree(q, beta, control.grid);
  };
  auto slice_density = [&](const std::array<double, 3>& zeta, const ChannelVector& c) {
    double shift = 0;
    for (std::size_t k = 0; k < nch; ++k)
      shift += 2.0 * weights[k] * gammas[k] * c[k].real() * profiles[k](zeta);
    QuadraticForm q = hopping;
    for (int s = 0; s < q.nspin(); ++s) q.add_hopping({0, 0, 0}, s, s, 0.5 * shift);
    int side = control.grid.fixed_side > 0 ? control.grid.fixed_side : 255;
    QuasifreeCorrelator corr(q, beta, side);
    double dens = 0;
    for (int s = 0; s < q.nspin(); ++s) dens += corr.normal({0, 0, 0}, s, s).real();
    return dens;
  };

  GameProblem prob;
  prob.gamma = gammas;
  prob.weight = weights;
  prob.pressure = [&](const ChannelVector& c) {
    double acc = 0;
    for (long i = 0; i < total; ++i) acc += qw[i] * slice_pressure(zetas[i], c);
    return acc;
  };
  prob.expectation = [&](const ChannelVector& c) {
    ChannelVector d(nch, Sector::Full);
    for (std::size_t k = 0; k < nch; ++k) {
      double acc = 0;
      for (long i = 0; i < total; ++i) acc += qw[i] * profiles[k](zetas[i]) * slice_density(zetas[i], c);
      d[k] = Complex(acc, 0);
    }
    return d;
  };

  // search ball from the profile bound: |dP/dc| <= 2 w sup|f| nspin
  double s2 = 0;
  for (std::size_t k = 0; k < nch; ++k) {
    double fmax = 0;
    for (long i = 0; i < total; ++i) fmax = std::max(fmax, std::abs(profiles[k](zetas[i])));
    s2 += weights[k] * fmax * fmax * hopping.nspin() * hopping.nspin();
  }
  prob.radius_minus = prob.radius_plus = 2.0 * std::sqrt(s2) + 1.0;

  GameControl control_game;
  control_game.compute_flat = false;
  GameSolution sol = solve_game(prob, control_game);
  return -sol.F_sharp;
}

}  // namespace lrf
