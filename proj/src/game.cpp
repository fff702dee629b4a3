#include "lrf/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "lrf/fock.hpp"
#include "lrf/gibbs.hpp"

namespace lrf {

double GameProblem::norm2_sq(const ChannelVector& c) const {
  double s = 0;
  for (std::size_t k = 0; k < c.size(); ++k) s += weight[k] * std::norm(c[k]);
  return s;
}

Complex GameProblem::dot(const ChannelVector& a, const ChannelVector& b) const {
  Complex s(0, 0);
  for (std::size_t k = 0; k < a.size(); ++k) s += weight[k] * std::conj(a[k]) * b[k];
  return s;
}

double GameProblem::dist(const ChannelVector& a, const ChannelVector& b) const {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += weight[k] * std::norm(a[k] - b[k]);
  return std::sqrt(s);
}

std::pair<ChannelVector, ChannelVector> GameProblem::split(const ChannelVector& c) const {
  ChannelVector minus(c.size(), Sector::Minus), plus(c.size(), Sector::Plus);
  for (std::size_t k = 0; k < c.size(); ++k)
    (gamma[k] == -1 ? minus[k] : plus[k]) = c[k];
  return {minus, plus};
}

namespace {

std::vector<std::size_t> sector_indices(const GameProblem& prob, int sign) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < prob.n_channels(); ++k)
    if (prob.gamma[k] == sign) idx.push_back(k);
  return idx;
}

Eigen::VectorXd pack(const ChannelVector& c, const std::vector<std::size_t>& idx) {
  Eigen::VectorXd x(2 * idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    x[2 * i] = c[idx[i]].real();
    x[2 * i + 1] = c[idx[i]].imag();
  }
  return x;
}

ChannelVector unpack(const Eigen::VectorXd& x, const std::vector<std::size_t>& idx, std::size_t n, Sector sec) {
  ChannelVector c(n, sec);
  for (std::size_t i = 0; i < idx.size(); ++i) c[idx[i]] = Complex(x[2 * i], x[2 * i + 1]);
  return c;
}

ChannelVector combine(const ChannelVector& minus, const ChannelVector& plus) {
  ChannelVector full(minus.size(), Sector::Full);
  for (std::size_t k = 0; k < full.size(); ++k) full[k] = minus[k] + plus[k];
  return full;
}

double ball_norm(const GameProblem& prob, const ChannelVector& c) { return std::sqrt(prob.norm2_sq(c)); }

}  // namespace

double approx_free_energy(const GameProblem& prob, const ChannelVector& c_minus, const ChannelVector& c_plus) {
  if (c_minus.sector() != Sector::Minus || c_plus.sector() != Sector::Plus)
    throw std::invalid_argument("approx_free_energy wants (minus, plus) sector arguments");
  return prob.norm2_sq(c_minus) - prob.norm2_sq(c_plus) - prob.pressure(combine(c_minus, c_plus));
}

double approx_free_energy(const LongRangeModel& m, const ChannelVector& c_minus, const ChannelVector& c_plus,
                          double beta, const GridControl& grid) {
  GameProblem prob = make_quasifree_game(m.with_beta(beta), grid);
  return approx_free_energy(prob, c_minus, c_plus);
}

ChannelVector inner_sup(const GameProblem& prob, const ChannelVector& c_minus, double tol,
                        std::optional<ChannelVector> warm) {
  auto plus_idx = sector_indices(prob, +1);
  const std::size_t n = prob.n_channels();
  if (plus_idx.empty()) return ChannelVector(n, Sector::Plus);

  auto g = [&](const Eigen::VectorXd& x) {
    ChannelVector plus = unpack(x, plus_idx, n, Sector::Plus);
    ChannelVector e = prob.expectation(combine(c_minus, plus));
    ChannelVector masked(n, Sector::Plus);
    for (std::size_t k : plus_idx) masked[k] = e[k];
    return pack(masked, plus_idx);
  };

  FixedPointOptions opt;
  opt.tol = tol;
  opt.max_iter = 800;
  Eigen::VectorXd x0 = warm ? pack(*warm, plus_idx) : Eigen::VectorXd::Zero(2 * plus_idx.size());
  FixedPointResult res = anderson_fixed_point(g, x0, opt);
  if (!res.converged) {
    // strict concavity guarantees a unique maximizer; fall back to a direct
    // search before giving up
    auto plus_obj = [&](const Eigen::VectorXd& x) {
      ChannelVector plus = unpack(x, plus_idx, n, Sector::Plus);
      return -(prob.norm2_sq(c_minus) - prob.norm2_sq(plus) - prob.pressure(combine(c_minus, plus)));
    };
    NelderMeadOptions nm;
    nm.init_step = 0.25;
    NelderMeadResult best = nelder_mead(plus_obj, res.x, nm);
    res = anderson_fixed_point(g, best.x, opt);
    if (!res.converged)
      throw GameError("repulsive best response did not converge; last residual " + std::to_string(res.residual),
                      res.residual);
  }
  return unpack(res.x, plus_idx, n, Sector::Plus);
}

namespace {

struct SharpEval {
  ChannelVector r_plus;
  double value;
};

class SharpObjective {
 public:
  SharpObjective(const GameProblem& prob, double inner_tol) : prob_(prob), inner_tol_(inner_tol) {}

  SharpEval eval(const ChannelVector& c_minus) {
    ChannelVector r = inner_sup(prob_, c_minus, inner_tol_, warm_);
    warm_ = r;
    return {r, approx_free_energy(prob_, c_minus, r)};
  }

 private:
  const GameProblem& prob_;
  double inner_tol_;
  std::optional<ChannelVector> warm_;
};

}  // namespace

GameSolution solve_game(const GameProblem& prob, const GameControl& control) {
  const std::size_t n = prob.n_channels();
  auto minus_idx = sector_indices(prob, -1);
  auto plus_idx = sector_indices(prob, +1);

  GameSolution sol;
  sol.approximate = prob.approximate;
  double radius_minus = prob.radius_minus;

  // ---- sharp problem: inf over c_- of sup over c_+ ------------------------
  struct Candidate {
    ChannelVector c;  // minus sector
    double value = 0;
    double residual = 0;
    bool polished = false;
  };
  std::vector<Candidate> candidates;

  auto full_residual = [&](const ChannelVector& c_minus, const ChannelVector& r_plus) {
    ChannelVector full = combine(c_minus, r_plus);
    ChannelVector e = prob.expectation(full);
    double r = 0;
    for (std::size_t k = 0; k < n; ++k) r = std::max(r, std::abs(full[k] - e[k]));
    return r;
  };

  auto polish_candidate = [&](ChannelVector start) -> Candidate {
    SharpObjective sharp(prob, std::min(control.inner.tol, control.tol * 0.1));
    // damped gap-equation pre-iteration on the attractive amplitudes
    auto gap_map = [&](const Eigen::VectorXd& x) {
      ChannelVector cm = unpack(x, minus_idx, n, Sector::Minus);
      ChannelVector r = inner_sup(prob, cm, control.tol * 0.1);
      ChannelVector e = prob.expectation(combine(cm, r));
      ChannelVector masked(n, Sector::Minus);
      for (std::size_t k : minus_idx) masked[k] = e[k];
      return pack(masked, minus_idx);
    };
    FixedPointOptions outer = control.outer;
    outer.tol = control.tol * 0.1;
    FixedPointResult pre = anderson_fixed_point(gap_map, pack(start, minus_idx), outer);
    ChannelVector cm = unpack(pre.x, minus_idx, n, Sector::Minus);

    // derivative-free polish of the worst-loss functional
    auto obj = [&](const Eigen::VectorXd& x) {
      ChannelVector c = unpack(x, minus_idx, n, Sector::Minus);
      if (ball_norm(prob, c) > radius_minus) return 1e9 + prob.norm2_sq(c);
      return sharp.eval(c).value;
    };
    NelderMeadOptions nm = control.polish;
    nm.init_step = pre.converged ? 1e-3 : 0.2;
    NelderMeadResult best = nelder_mead(obj, pack(cm, minus_idx), nm);

    // final fixed-point pass to drive the gap residual below tolerance
    FixedPointOptions fin = control.outer;
    fin.tol = control.tol * 0.25;
    fin.plain_iters = 2;
    FixedPointResult post = anderson_fixed_point(gap_map, best.x, fin);
    ChannelVector cand = unpack(post.converged ? post.x : best.x, minus_idx, n, Sector::Minus);

    Candidate out;
    out.c = cand;
    SharpObjective fresh(prob, std::min(control.inner.tol, control.tol * 0.01));
    SharpEval ev = fresh.eval(cand);
    out.value = ev.value;
    out.residual = full_residual(cand, ev.r_plus);
    out.polished = out.residual <= control.tol;
    return out;
  };

  // structured and random starts
  std::vector<ChannelVector> starts;
  starts.emplace_back(n, Sector::Minus);  // zero
  for (std::size_t k : minus_idx) {
    ChannelVector axis(n, Sector::Minus);
    axis[k] = Complex(0.5 * radius_minus / std::sqrt(std::max(prob.weight[k], 1e-12)), 0);
    starts.push_back(axis);
    ChannelVector small = axis;
    small[k] *= 0.1;
    starts.push_back(small);
  }
  std::mt19937_64 rng(control.seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  while (starts.size() < std::size_t(std::max(control.starts, 1))) {
    ChannelVector c(n, Sector::Minus);
    for (std::size_t k : minus_idx) c[k] = Complex(gauss(rng), gauss(rng));
    double nn = ball_norm(prob, c);
    double target = radius_minus * 0.8 * std::pow(unif(rng), 0.5);
    if (nn > 1e-12)
      for (std::size_t k : minus_idx) c[k] *= target / nn;
    starts.push_back(c);
  }
  if (minus_idx.empty()) starts.resize(1);

  for (const auto& s : starts) {
    candidates.push_back(polish_candidate(s));
    if (candidates.back().polished) ++sol.starts_converged;
  }

  // ball exclusion: retry once with a larger search ball if the best
  // converged candidate sits on the boundary
  {
    const Candidate* best = nullptr;
    for (const auto& c : candidates)
      if (c.polished && (!best || c.value < best->value)) best = &c;
    if (best && ball_norm(prob, best->c) > 0.95 * radius_minus) {
      radius_minus *= 2.0;
      auto more = polish_candidate(best->c);
      if (ball_norm(prob, more.c) > 0.95 * radius_minus)
        throw GameError("attractive minimizer escaped the enlarged a-priori ball");
      candidates.push_back(more);
    }
  }

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.value < b.value;
  });
  const Candidate* best = nullptr;
  for (const auto& c : candidates)
    if (c.polished) {
      best = &c;
      break;
    }
  if (!best)
    throw GameError("no multistart branch reached the gap-equation tolerance",
                    candidates.empty() ? 0.0 : candidates.front().residual);

  // detect a U(1) phase orbit through the best minimizer and gauge-fix
  auto gauge_fix = [&](ChannelVector c) {
    SharpObjective s(prob, control.tol * 0.01);
    double v0 = s.eval(c).value;
    ChannelVector rot = c;
    for (std::size_t k : minus_idx) rot[k] *= std::exp(Complex(0, 0.9));
    bool orbit = !minus_idx.empty() && std::abs(s.eval(rot).value - v0) <= 1e-10 * (1.0 + std::abs(v0));
    if (!orbit) return c;
    Complex first(0, 0);
    for (std::size_t k : minus_idx)
      if (std::abs(c[k]) > 1e-12) {
        first = c[k];
        break;
      }
    if (first == Complex(0, 0)) return c;
    Complex phase = std::conj(first) / std::abs(first);
    for (std::size_t k : minus_idx) c[k] *= phase;
    return c;
  };

  // cluster converged minima by weighted distance
  std::vector<Candidate> reps;
  for (auto& c : candidates) {
    if (!c.polished) continue;
    c.c = gauge_fix(c.c);
    bool merged = false;
    for (auto& r : reps)
      if (prob.dist(r.c, c.c) < control.cluster_radius) {
        if (c.value < r.value) r = c;
        merged = true;
        break;
      }
    if (!merged) reps.push_back(c);
  }
  std::sort(reps.begin(), reps.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  sol.F_sharp = reps.front().value;
  sol.d_minus = reps.front().c;
  sol.r_plus = inner_sup(prob, sol.d_minus, std::min(control.inner.tol, control.tol * 0.01));
  sol.gap_residual = full_residual(sol.d_minus, sol.r_plus);
  sol.pressure = -sol.F_sharp;
  for (const auto& r : reps) sol.multistart_minima.emplace_back(r.c, r.value);

  // ---- flat problem: sup over c_+ of inf over c_- -------------------------
  if (control.compute_flat) {
    auto inner_inf = [&](const ChannelVector& c_plus, std::vector<ChannelVector> extra_starts)
        -> std::pair<double, ChannelVector> {
      if (minus_idx.empty()) {
        ChannelVector zero(n, Sector::Minus);
        return {approx_free_energy(prob, zero, c_plus), zero};
      }
      auto gap_map_minus = [&](const Eigen::VectorXd& x) {
        ChannelVector cm = unpack(x, minus_idx, n, Sector::Minus);
        ChannelVector e = prob.expectation(combine(cm, c_plus));
        ChannelVector masked(n, Sector::Minus);
        for (std::size_t k : minus_idx) masked[k] = e[k];
        return pack(masked, minus_idx);
      };
      auto value_at = [&](const ChannelVector& cm) { return approx_free_energy(prob, cm, c_plus); };

      std::vector<ChannelVector> st = std::move(extra_starts);
      st.emplace_back(n, Sector::Minus);
      for (const auto& r : reps) st.push_back(r.c);
      double best_v = std::numeric_limits<double>::infinity();
      ChannelVector best_c(n, Sector::Minus);
      for (const auto& s0 : st) {
        FixedPointOptions fo = control.outer;
        fo.tol = control.tol * 0.1;
        FixedPointResult fp = anderson_fixed_point(gap_map_minus, pack(s0, minus_idx), fo);
        auto obj = [&](const Eigen::VectorXd& x) {
          ChannelVector cm = unpack(x, minus_idx, n, Sector::Minus);
          if (ball_norm(prob, cm) > radius_minus) return 1e9 + prob.norm2_sq(cm);
          return value_at(cm);
        };
        NelderMeadOptions nm = control.polish;
        nm.init_step = 1e-3;
        NelderMeadResult r = nelder_mead(obj, fp.x, nm);
        if (r.f < best_v) {
          best_v = r.f;
          best_c = unpack(r.x, minus_idx, n, Sector::Minus);
        }
      }
      return {best_v, best_c};
    };

    ChannelVector flat_arg(n, Sector::Plus);
    ChannelVector flat_inner_arg(n, Sector::Minus);
    if (plus_idx.empty()) {
      auto [v, cm] = inner_inf(ChannelVector(n, Sector::Plus), {});
      sol.F_flat = v;
      flat_inner_arg = cm;
    } else {
      auto flat_obj = [&](const Eigen::VectorXd& x) {
        ChannelVector cp = unpack(x, plus_idx, n, Sector::Plus);
        if (ball_norm(prob, cp) > prob.radius_plus) return 1e9 + prob.norm2_sq(cp);
        return -inner_inf(cp, {}).first;  // maximize
      };
      double best_v = -std::numeric_limits<double>::infinity();
      std::vector<ChannelVector> pstarts{ChannelVector(n, Sector::Plus), sol.r_plus};
      for (std::size_t k : plus_idx) {
        ChannelVector axis(n, Sector::Plus);
        axis[k] = Complex(0.25 * prob.radius_plus / std::sqrt(std::max(prob.weight[k], 1e-12)), 0);
        pstarts.push_back(axis);
      }
      for (const auto& s0 : pstarts) {
        NelderMeadOptions nm = control.polish;
        nm.init_step = 0.05;
        NelderMeadResult r = nelder_mead(flat_obj, pack(s0, plus_idx), nm);
        if (-r.f > best_v) {
          best_v = -r.f;
          flat_arg = unpack(r.x, plus_idx, n, Sector::Plus);
        }
      }
      sol.F_flat = best_v;
      flat_inner_arg = inner_inf(flat_arg, {}).second;
    }
    sol.flat_valid = true;

    // the max-min value can never exceed the min-max value; if the flat pass
    // found a lower sharp value, its inner minimizer is a missed start
    if (sol.F_flat > sol.F_sharp + 1e-12) {
      Candidate extra = polish_candidate(flat_inner_arg);
      if (extra.polished && extra.value < sol.F_sharp) {
        sol.F_sharp = extra.value;
        sol.d_minus = gauge_fix(extra.c);
        sol.r_plus = inner_sup(prob, sol.d_minus, control.tol * 0.01);
        sol.gap_residual = full_residual(sol.d_minus, sol.r_plus);
        sol.pressure = -sol.F_sharp;
        sol.multistart_minima.emplace_back(sol.d_minus, sol.F_sharp);
        std::sort(sol.multistart_minima.begin(), sol.multistart_minima.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
      }
    }
    if (sol.F_flat > sol.F_sharp + 1e-9)
      throw GameError("conservative values came out ordered the wrong way: F_flat - F_sharp = " +
                      std::to_string(sol.F_flat - sol.F_sharp));
    sol.duality_gap = std::max(0.0, sol.F_sharp - sol.F_flat);
  }

  return sol;
}

GameProblem make_quasifree_game(const LongRangeModel& m, const GridControl& grid) {
  if (!m.quadratic())
    throw std::invalid_argument("approximating interactions are not quadratic; use the ED fallback game");
  auto model = std::make_shared<LongRangeModel>(m);
  GameProblem prob;
  for (const auto& ch : m.channels()) {
    prob.gamma.push_back(ch.gamma);
    prob.weight.push_back(ch.weight);
  }
  prob.pressure = [model, grid](const ChannelVector& c) { return pressure_model(*model, c, model->beta(), grid); };
  prob.expectation = [model, grid](const ChannelVector& c) {
    return channel_expectation(*model, c, model->beta(), grid);
  };

  // a-priori optimizer ball from the Lipschitz constant of the pressure
  double s_min = 0, sp_min = 0, s_plus = 0, sp_plus = 0;
  for (const auto& ch : m.channels()) {
    double a = interaction_norm(ch.phi, m.lattice());
    double b = interaction_norm(ch.phi_prime, m.lattice());
    if (ch.gamma == -1) {
      s_min += ch.weight * a * a;
      sp_min += ch.weight * b * b;
    } else {
      s_plus += ch.weight * a * a;
      sp_plus += ch.weight * b * b;
    }
  }
  prob.radius_minus = 2.0 * (std::sqrt(s_min) + std::sqrt(sp_min)) + 1.0;
  prob.radius_plus = 2.0 * (std::sqrt(s_plus) + std::sqrt(sp_plus)) + 1.0;
  return prob;
}

GameProblem make_ed_game(const LongRangeModel& m, bool pbc) {
  auto model = std::make_shared<LongRangeModel>(m);
  auto basis = std::make_shared<FockBasis>(m.lattice());
  // channel operators A_k = U^{Phi_k} + i U^{Phi_k'} are fixed
  auto chan_ops = std::make_shared<std::vector<SparseMatrix>>();
  for (const auto& ch : m.channels()) chan_ops->push_back(channel_operator(ch, *basis, pbc));

  GameProblem prob;
  prob.approximate = true;
  for (const auto& ch : m.channels()) {
    prob.gamma.push_back(ch.gamma);
    prob.weight.push_back(ch.weight);
  }
  double vol = double(m.lattice().volume());
  prob.pressure = [model, basis, pbc, vol](const ChannelVector& c) {
    InteractionKernel phi_c = build_approximating_interaction(*model, c);
    SparseMatrix u = kernel_internal_energy(phi_c, *basis, pbc);
    FockOperator op{std::move(u), true};
    return pressure_ed(op, model->beta(), vol);
  };
  prob.expectation = [model, basis, chan_ops, pbc, vol](const ChannelVector& c) {
    InteractionKernel phi_c = build_approximating_interaction(*model, c);
    SparseMatrix u = kernel_internal_energy(phi_c, *basis, pbc);
    FockOperator op{std::move(u), true};
    GibbsState gibbs(op, model->beta());
    auto vals = gibbs.expectations(std::span<const SparseMatrix>(chan_ops->data(), chan_ops->size()));
    ChannelVector d(model->n_channels(), Sector::Full);
    for (std::size_t k = 0; k < vals.size(); ++k) d[k] = vals[k] / vol;
    return d;
  };

  double s_min = 0, sp_min = 0, s_plus = 0, sp_plus = 0;
  for (const auto& ch : m.channels()) {
    double a = interaction_norm(ch.phi, m.lattice());
    double b = interaction_norm(ch.phi_prime, m.lattice());
    if (ch.gamma == -1) {
      s_min += ch.weight * a * a;
      sp_min += ch.weight * b * b;
    } else {
      s_plus += ch.weight * a * a;
      sp_plus += ch.weight * b * b;
    }
  }
  prob.radius_minus = 2.0 * (std::sqrt(s_min) + std::sqrt(sp_min)) + 1.0;
  prob.radius_plus = 2.0 * (std::sqrt(s_plus) + std::sqrt(sp_plus)) + 1.0;
  return prob;
}

GameSolution solve_game(const LongRangeModel& m, const GameControl& control, const GridControl& grid) {
  if (m.quadratic()) return solve_game(make_quasifree_game(m, grid), control);
  return solve_game(make_ed_game(m, true), control);
}

double odlro_bound(const GameSolution& sol, const ChannelVector& probe, const GameProblem& prob) {
  if (sol.multistart_minima.empty()) return 0.0;
  double tol = std::max(1e-9, std::abs(sol.F_sharp) * 1e-12);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [d_minus, value] : sol.multistart_minima) {
    if (value > sol.F_sharp + tol) continue;  // only conservative strategies count
    ChannelVector r = inner_sup(prob, d_minus, 1e-10);
    ChannelVector full = combine(d_minus, r);
    Complex ip(0, 0);
    for (std::size_t k = 0; k < full.size(); ++k)
      ip += prob.weight[k] * std::conj(full[k]) * (double(prob.gamma[k]) * probe[k]);
    best = std::min(best, std::norm(ip));
  }
  return std::isfinite(best) ? best : 0.0;
}

DualityGapReport duality_gap_demo(const InteractionKernel& local, const InteractionKernel& probe_channel,
                                  double beta, const Lattice& box, const GameControl& control) {
  std::vector<Channel> channels;
  channels.push_back(Channel{probe_channel, InteractionKernel{}, -1, 1.0});
  channels.push_back(Channel{probe_channel, InteractionKernel{}, +1, 1.0});
  LongRangeModel mixed(box, beta, local, std::move(channels));
  GameControl ctl = control;
  ctl.compute_flat = true;
  GameSolution sol = solve_game(make_ed_game(mixed, true), ctl);
  DualityGapReport rep;
  rep.F_sharp = sol.F_sharp;
  rep.F_flat = sol.F_flat;
  rep.gap = sol.duality_gap;
  rep.beta = beta;
  rep.side = box.side();
  return rep;
}

ConvergenceReport convergence_study(const LongRangeModel& m, int l_min, int l_max, const GameControl& control,
                                    const GridControl& grid) {
  ConvergenceReport rep;
  GameSolution sol = solve_game(m, control, grid);
  rep.F_sharp = sol.F_sharp;

  for (int l = l_min; l <= l_max; ++l) {
    LongRangeModel boxed = m.with_box(2 * l + 1);
    FockBasis basis(boxed.lattice());
    double vol = double(boxed.lattice().volume());
    FockOperator u = build_internal_energy(boxed, basis, true);
    ConvergenceRow row;
    row.l = l;
    row.p_ed = pressure_ed(u, m.beta(), vol);
    row.err = std::abs(row.p_ed + rep.F_sharp);
    GibbsState gibbs(u, m.beta());
    for (const auto& ch : boxed.channels()) {
      SparseMatrix a = channel_operator(ch, basis, true);
      row.ed_channel_abs.push_back(std::abs(gibbs.expectation(a)) / vol);
    }
    ChannelVector full = combine(sol.d_minus, sol.r_plus);
    for (std::size_t k = 0; k < full.size(); ++k) row.d_abs.push_back(std::abs(full[k]));
    rep.rows.push_back(std::move(row));
  }

  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].err > rep.rows[i - 1].err + 1e-12) rep.monotone = false;

  std::vector<double> lx, ly;
  for (const auto& r : rep.rows)
    if (r.err > 0) {
      lx.push_back(std::log(double(2 * r.l + 1)));
      ly.push_back(std::log(r.err));
    }
  if (lx.size() >= 2) {
    double nn = double(lx.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    rep.fit_exponent = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  }
  return rep;
}

}  // namespace lrf
