#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lrf/optim.hpp"
#include "lrf/quadratic.hpp"

namespace lrf {

class GameError : public std::runtime_error {
 public:
  GameError(const std::string& what, double residual = 0) : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Channel geometry plus the two model-dependent callbacks the thermodynamic
// game needs: the pressure of the approximating interaction and the
// gap-equation right-hand side (channel energy densities in its Gibbs state).
struct GameProblem {
  std::vector<int> gamma;
  std::vector<double> weight;
  std::function<double(const ChannelVector&)> pressure;
  std::function<ChannelVector(const ChannelVector&)> expectation;
  double radius_minus = 8.0;
  double radius_plus = 8.0;
  bool approximate = false;  // finite-volume pressure fallback in use

  std::size_t n_channels() const { return gamma.size(); }
  double norm2_sq(const ChannelVector& c) const;
  Complex dot(const ChannelVector& a, const ChannelVector& b) const;
  double dist(const ChannelVector& a, const ChannelVector& b) const;
  std::pair<ChannelVector, ChannelVector> split(const ChannelVector& c) const;
};

GameProblem make_quasifree_game(const LongRangeModel& m, const GridControl& grid = {});
// finite-volume exact-diagonalization fallback (also used by the gap demo)
GameProblem make_ed_game(const LongRangeModel& m, bool pbc = true);

struct GameControl {
  int starts = 16;
  std::uint64_t seed = 0;
  double tol = 1e-8;            // gap-equation residual target
  double cluster_radius = 1e-4;
  FixedPointOptions inner;      // repulsive best-response iteration
  FixedPointOptions outer;      // attractive gap-equation pre-iteration
  NelderMeadOptions polish;
  bool compute_flat = true;
  GameControl() {
    inner.tol = 1e-10;
    outer.tol = 1e-10;
    outer.max_iter = 300;
  }
};

struct GameSolution {
  ChannelVector d_minus;  // reported conservative strategy of the attractive player
  ChannelVector r_plus;   // the repulsive best response r_+(d_minus)
  double F_sharp = 0;
  double F_flat = 0;
  double pressure = 0;  // = -F_sharp
  double gap_residual = 0;
  double duality_gap = 0;
  bool flat_valid = false;
  bool approximate = false;
  int starts_converged = 0;
  std::vector<std::pair<ChannelVector, double>> multistart_minima;  // clustered (d_minus, value)
};

// f(c-, c+) = ||c-||^2 - ||c+||^2 - P(c- + c+)
double approx_free_energy(const GameProblem& prob, const ChannelVector& c_minus, const ChannelVector& c_plus);
double approx_free_energy(const LongRangeModel& m, const ChannelVector& c_minus, const ChannelVector& c_plus,
                          double beta, const GridControl& grid = {});

// unique maximizer r_+(c_-) of c+ |-> f(c-, c+), by damped fixed point on the
// repulsive gap equations with Anderson acceleration
ChannelVector inner_sup(const GameProblem& prob, const ChannelVector& c_minus, double tol = 1e-10,
                        std::optional<ChannelVector> warm = std::nullopt);

GameSolution solve_game(const GameProblem& prob, const GameControl& control = {});
GameSolution solve_game(const LongRangeModel& m, const GameControl& control = {}, const GridControl& grid = {});

// lower bound on the ODLRO space average for the probe direction c
double odlro_bound(const GameSolution& sol, const ChannelVector& probe, const GameProblem& prob);

struct DualityGapReport {
  double F_sharp = 0, F_flat = 0, gap = 0;
  double beta = 0;
  int side = 0;
};
// the no-saddle-point construction: one kernel used as both attraction and
// repulsion, evaluated with the finite-volume exact pressure
DualityGapReport duality_gap_demo(const InteractionKernel& local, const InteractionKernel& probe_channel,
                                  double beta, const Lattice& box, const GameControl& control = {});

struct ConvergenceRow {
  int l = 0;
  double p_ed = 0;
  double err = 0;  // |p_l + F_sharp|
  std::vector<double> ed_channel_abs;
  std::vector<double> d_abs;
};
struct ConvergenceReport {
  double F_sharp = 0;
  std::vector<ConvergenceRow> rows;
  bool monotone = false;
  double fit_exponent = 0;
};
ConvergenceReport convergence_study(const LongRangeModel& m, int l_min, int l_max,
                                    const GameControl& control = {}, const GridControl& grid = {});

}  // namespace lrf
