#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lrf/model.hpp"

namespace lrf {

// One-site density matrix on the 2^|S|-dimensional site Fock space. States
// inherited from permutation-invariant models are even: they commute with the
// site parity operator, so odd-sector matrix elements vanish.
struct OneSiteState {
  Eigen::MatrixXcd rho;
  bool even = false;
};

struct PerminvControl {
  int starts = 8;
  std::uint64_t seed = 0;
  double tol = 1e-11;
  int max_iter = 4000;
};

struct PerminvResult {
  double pressure = 0;
  OneSiteState state;
  std::vector<std::pair<double, Eigen::MatrixXcd>> minima;  // (objective value, rho)
};

// one-site variational problem for the pressure of a permutation-invariant
// model: minimize sum_k w_k gamma_k |rho(e_k + i e_k')|^2 + rho(e_Phi)
//                 - beta^{-1} S(rho) over even one-site states
PerminvResult perminv_pressure(const LongRangeModel& m, const PerminvControl& control = {});

struct PerminvLimitRow {
  int l = 0;
  double trace_distance = 0;
};
struct PerminvLimitReport {
  std::vector<PerminvLimitRow> rows;
  bool decaying = false;
};
// compares one-site reductions of finite-volume Gibbs states against the
// one-site minimizer
PerminvLimitReport perminv_gibbs_limit_check(const LongRangeModel& m, int l_min, int l_max,
                                             const PerminvControl& control = {});

}  // namespace lrf
