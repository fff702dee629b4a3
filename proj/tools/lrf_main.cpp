// Command-line front end: single solves, ED oracles, convergence studies and
// parameter sweeps with CSV output.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lrf/config.hpp"
#include "lrf/fock.hpp"
#include "lrf/game.hpp"
#include "lrf/gibbs.hpp"
#include "lrf/perminv.hpp"
#include "lrf/quadratic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitInvariant = 3;

struct CommonOpts {
  std::string config_path;
  double beta = 0;     // 0: keep the config value
  int l = -1;          // >= 0: override box side to 2l+1
  int grid = 0;        // fixed momentum grid side
  double tol = 1e-8;
  int starts = 16;
  std::uint64_t seed = 0;
  std::string out;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

lrf::LongRangeModel load(const CommonOpts& o) {
  lrf::LongRangeModel m = lrf::load_model_file(o.config_path);
  if (o.beta > 0) m = m.with_beta(o.beta);
  if (o.l >= 0) m = m.with_box(2 * o.l + 1);
  return m;
}

lrf::GameControl game_control(const CommonOpts& o) {
  lrf::GameControl ctl;
  ctl.tol = o.tol;
  ctl.starts = o.starts;
  ctl.seed = o.seed;
  return ctl;
}

lrf::GridControl grid_control(const CommonOpts& o) {
  lrf::GridControl g;
  g.fixed_side = o.grid;
  return g;
}

std::string game_csv_header(std::size_t n_channels) {
  std::string h = "model_hash,beta,F_sharp,F_flat,duality_gap,pressure,residual";
  for (std::size_t k = 1; k <= n_channels; ++k) h += ",d_abs_" + std::to_string(k);
  h += ",wall_ms";
  return h;
}

std::string game_csv_row(const lrf::LongRangeModel& m, const lrf::GameSolution& sol, double wall_ms) {
  std::string row = m.hash_hex() + "," + fmt(m.beta()) + "," + fmt(sol.F_sharp) + "," + fmt(sol.F_flat) + "," +
                    fmt(sol.duality_gap) + "," + fmt(sol.pressure) + "," + fmt(sol.gap_residual);
  lrf::ChannelVector full = recombine(sol.d_minus, sol.r_plus);
  for (std::size_t k = 0; k < full.size(); ++k) row += "," + fmt(std::abs(full[k]));
  row += "," + fmt(wall_ms);
  return row;
}

void write_out(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << content;
}

int cmd_game(const CommonOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  lrf::LongRangeModel m = load(o);
  lrf::GameSolution sol = lrf::solve_game(m, game_control(o), grid_control(o));
  double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream csv;
  csv << game_csv_header(m.n_channels()) << '\n' << game_csv_row(m, sol, wall_ms) << '\n';
  write_out(o.out, csv.str());

  std::cerr << "F_sharp   = " << fmt(sol.F_sharp) << '\n'
            << "F_flat    = " << fmt(sol.F_flat) << '\n'
            << "pressure  = " << fmt(sol.pressure) << (sol.approximate ? "  (finite-volume fallback)" : "") << '\n'
            << "gap resid = " << fmt(sol.gap_residual) << '\n'
            << "|d|       =";
  lrf::ChannelVector full = recombine(sol.d_minus, sol.r_plus);
  for (std::size_t k = 0; k < full.size(); ++k) std::cerr << ' ' << fmt(std::abs(full[k]));
  std::cerr << '\n' << "minima    = " << sol.multistart_minima.size() << " cluster(s), "
            << sol.starts_converged << " start(s) converged\n";
  return kExitOk;
}

int cmd_gap(const CommonOpts& o) {
  lrf::LongRangeModel m = load(o);
  lrf::GameControl ctl = game_control(o);
  ctl.compute_flat = false;
  lrf::GameSolution sol = lrf::solve_game(m, ctl, grid_control(o));
  std::ostringstream rep;
  rep << "# gap-equation solution d_k = e_k(omega) + i e_k'(omega)\n";
  lrf::ChannelVector full = recombine(sol.d_minus, sol.r_plus);
  for (std::size_t k = 0; k < full.size(); ++k)
    rep << "d[" << k + 1 << "] = " << fmt(full[k].real()) << (full[k].imag() >= 0 ? "+" : "")
        << fmt(full[k].imag()) << "i  |d| = " << fmt(std::abs(full[k])) << '\n';
  rep << "residual = " << fmt(sol.gap_residual) << '\n';
  write_out(o.out, rep.str());
  return kExitOk;
}

int cmd_pressure_ed(const CommonOpts& o, bool open_boundary) {
  lrf::LongRangeModel m = load(o);
  lrf::FockBasis basis(m.lattice());
  lrf::BuildStats stats;
  lrf::FockOperator u = lrf::build_internal_energy(m, basis, !open_boundary, &stats);
  double p = lrf::pressure_ed(u, m.beta(), double(m.lattice().volume()));
  std::ostringstream rep;
  rep << fmt(p) << '\n';
  write_out(o.out, rep.str());
  if (stats.dropped_terms > 0)
    std::cerr << "warning: " << stats.dropped_terms << " boundary terms dropped (open boundary)\n";
  return kExitOk;
}

int cmd_pressure_quasifree(const CommonOpts& o) {
  lrf::LongRangeModel m = load(o);
  lrf::ChannelVector zero(m.n_channels(), lrf::Sector::Full);
  double p = lrf::pressure_model(m, zero, m.beta(), grid_control(o));
  write_out(o.out, fmt(p) + "\n");
  return kExitOk;
}

int cmd_perminv(const CommonOpts& o) {
  lrf::LongRangeModel m = load(o);
  lrf::PerminvControl ctl;
  ctl.seed = o.seed;
  lrf::PerminvResult res = lrf::perminv_pressure(m, ctl);
  std::ostringstream rep;
  rep << "pressure = " << fmt(res.pressure) << '\n';
  rep << "even     = " << (res.state.even ? "yes" : "no") << '\n';
  write_out(o.out, rep.str());
  return kExitOk;
}

int cmd_convergence(const CommonOpts& o, int lmin, int lmax) {
  lrf::LongRangeModel m = load(o);
  lrf::ConvergenceReport rep = lrf::convergence_study(m, lmin, lmax, game_control(o), grid_control(o));
  std::ostringstream os;
  os << "l,p_ed,abs_err";
  for (std::size_t k = 1; k <= m.n_channels(); ++k) os << ",ed_ch_abs_" << k << ",d_abs_" << k;
  os << '\n';
  for (const auto& row : rep.rows) {
    os << row.l << ',' << fmt(row.p_ed) << ',' << fmt(row.err);
    for (std::size_t k = 0; k < row.ed_channel_abs.size(); ++k)
      os << ',' << fmt(row.ed_channel_abs[k]) << ',' << fmt(row.d_abs[k]);
    os << '\n';
  }
  os << "# F_sharp = " << fmt(rep.F_sharp) << ", monotone = " << (rep.monotone ? "yes" : "no")
     << ", fit exponent = " << fmt(rep.fit_exponent) << '\n';
  write_out(o.out, os.str());
  return kExitOk;
}

struct Axis {
  std::string name;
  double start = 0, stop = 0;
  int steps = 1;
};

Axis parse_axis(const std::string& spec) {
  auto eq = spec.find('=');
  auto c1 = spec.find(':');
  auto c2 = spec.find(':', c1 + 1);
  if (eq == std::string::npos || c1 == std::string::npos || c2 == std::string::npos)
    throw std::runtime_error("axis spec must be param=start:stop:steps, got '" + spec + "'");
  Axis ax;
  ax.name = spec.substr(0, eq);
  ax.start = std::stod(spec.substr(eq + 1, c1 - eq - 1));
  ax.stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
  ax.steps = std::stoi(spec.substr(c2 + 1));
  if (ax.steps < 1) throw std::runtime_error("axis needs at least one step");
  return ax;
}

lrf::LongRangeModel apply_axis(const lrf::LongRangeModel& m, const Axis& ax, double value) {
  if (ax.name == "beta") return m.with_beta(value);
  if (ax.name.rfind("weight", 0) == 0) {
    std::size_t k = std::stoul(ax.name.substr(6));
    if (k < 1 || k > m.n_channels()) throw std::runtime_error("axis channel index out of range: " + ax.name);
    return m.with_channel_weight(k - 1, value);
  }
  throw std::runtime_error("unknown sweep parameter '" + ax.name + "' (use beta or weightK)");
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::string>& axis_specs, int jobs) {
  lrf::LongRangeModel base = load(o);
  std::vector<Axis> axes;
  for (const auto& s : axis_specs) {
    Axis ax = parse_axis(s);
    for (const auto& other : axes)
      if (other.name == ax.name) throw std::runtime_error("overlapping axis name '" + ax.name + "'");
    axes.push_back(ax);
  }
  if (axes.empty()) throw std::runtime_error("sweep needs at least one --axis");

  long total = 1;
  for (const auto& ax : axes) total *= ax.steps;

  auto value_of = [&](const Axis& ax, long i) {
    return ax.steps == 1 ? ax.start : ax.start + (ax.stop - ax.start) * double(i) / double(ax.steps - 1);
  };
  auto point_values = [&](long idx) {
    std::vector<double> vals(axes.size());
    long rest = idx;
    for (long a = long(axes.size()) - 1; a >= 0; --a) {
      vals[a] = value_of(axes[a], rest % axes[a].steps);
      rest /= axes[a].steps;
    }
    return vals;
  };

  auto run_point = [&](long idx) -> std::string {
    std::vector<double> vals = point_values(idx);
    lrf::LongRangeModel m = base;
    for (std::size_t a = 0; a < axes.size(); ++a) m = apply_axis(m, axes[a], vals[a]);
    lrf::GameSolution sol = lrf::solve_game(m, game_control(o), grid_control(o));
    std::string row;
    for (double v : vals) row += fmt(v) + ",";
    row += m.hash_hex() + "," + fmt(m.beta()) + "," + fmt(sol.F_sharp) + "," + fmt(sol.F_flat) + "," +
           fmt(sol.duality_gap) + "," + fmt(sol.pressure) + "," + fmt(sol.gap_residual);
    lrf::ChannelVector full = recombine(sol.d_minus, sol.r_plus);
    for (std::size_t k = 0; k < full.size(); ++k) row += "," + fmt(std::abs(full[k]));
    return row;
  };

  // worker pool with a single ordered collector
  std::vector<std::string> rows(total);
  std::vector<std::future<std::string>> futs;
  long next = 0;
  int pool = std::max(1, jobs);
  while (next < total || !futs.empty()) {
    while (long(futs.size()) < pool && next < total) futs.push_back(std::async(std::launch::async, run_point, next++));
    futs.front().wait();
    long done_idx = next - long(futs.size());
    rows[done_idx] = futs.front().get();
    futs.erase(futs.begin());
  }

  std::ostringstream csv;
  for (const auto& ax : axes) csv << ax.name << ',';
  csv << "model_hash,beta,F_sharp,F_flat,duality_gap,pressure,residual";
  for (std::size_t k = 1; k <= base.n_channels(); ++k) csv << ",d_abs_" << k;
  csv << '\n';
  for (const auto& r : rows) csv << r << '\n';
  write_out(o.out, csv.str());
  return kExitOk;
}

int cmd_validate(const CommonOpts& o) {
  lrf::LongRangeModel m = load(o);
  bool all_ok = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name << (detail.empty() ? "" : "  " + detail) << '\n';
    all_ok = all_ok && ok;
  };

  try {
    m.validate();
    report("kernel invariants", true);
  } catch (const std::exception& e) {
    report("kernel invariants", false, e.what());
  }

  const long modes = m.lattice().modes();
  if (modes <= 12) {
    lrf::FockBasis basis(m.lattice());
    lrf::FockOperator u = lrf::build_internal_energy(m, basis, true);
    double vol = double(m.lattice().volume());

    if (m.quadratic() && m.n_channels() == 0) {
      double p_ed = lrf::pressure_ed(u, m.beta(), vol);
      double p_qf = lrf::pressure_quasifree_grid(
          lrf::quadratic_from_kernel(m.local(), m.lattice().dim(), m.lattice().spins()), m.beta(),
          m.lattice().side());
      report("ED vs quasifree pressure", std::abs(p_ed - p_qf) <= 1e-9,
             "|diff| = " + fmt(std::abs(p_ed - p_qf)));
    }

    if (basis.dim() <= 256) {
      auto trials = lrf::random_density_matrices(basis.dim(), 25, o.seed + 11);
      auto rep = lrf::passivity_check(u, m.beta(), vol, trials);
      report("passivity", rep.ok,
             "gibbs margin = " + fmt(rep.gibbs_margin) + ", worst = " + fmt(rep.worst_margin));
    }
  } else {
    std::cout << "SKIP ED battery (box too large: " << modes << " modes)\n";
  }

  if (m.permutation_invariant()) {
    try {
      lrf::PerminvControl pctl;
      pctl.seed = o.seed;
      lrf::PerminvResult pi = lrf::perminv_pressure(m, pctl);
      lrf::GameSolution sol = lrf::solve_game(m, game_control(o), grid_control(o));
      report("perminv vs game pressure", std::abs(pi.pressure - sol.pressure) <= 1e-7,
             "|diff| = " + fmt(std::abs(pi.pressure - sol.pressure)));
    } catch (const std::exception& e) {
      report("perminv vs game pressure", false, e.what());
    }
  }

  return all_ok ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermodynamics of lattice fermions with long-range channels"};
  app.require_subcommand(1);

  CommonOpts o;
  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    if (needs_config) cmd->add_option("config", o.config_path, "model configuration file")->required();
    cmd->add_option("--beta", o.beta, "inverse temperature override");
    cmd->add_option("--l", o.l, "box parameter l (side 2l+1) override");
    cmd->add_option("--grid", o.grid, "fixed momentum grid side (0 = auto-refine)");
    cmd->add_option("--tol", o.tol, "gap-equation residual tolerance");
    cmd->add_option("--starts", o.starts, "multistart count");
    cmd->add_option("--seed", o.seed, "deterministic seed for all multistarts");
    cmd->add_option("--out", o.out, "output file (default stdout)");
  };

  auto* game = app.add_subcommand("game", "solve the thermodynamic game");
  add_common(game);
  auto* gap = app.add_subcommand("gap", "solve the gap equations and report d");
  add_common(gap);
  auto* ped = app.add_subcommand("pressure-ed", "finite-volume exact-diagonalization pressure");
  add_common(ped);
  bool open_boundary = false;
  ped->add_flag("--open", open_boundary, "open boundary instead of periodic");
  auto* pqf = app.add_subcommand("pressure-quasifree", "infinite-volume quasi-free pressure at c = 0");
  add_common(pqf);
  auto* pinv = app.add_subcommand("perminv", "one-site variational pressure");
  add_common(pinv);
  auto* conv = app.add_subcommand("convergence", "finite-volume pressure vs game value");
  add_common(conv);
  int lmin = 1, lmax = 3;
  conv->add_option("--lmin", lmin, "smallest box parameter");
  conv->add_option("--lmax", lmax, "largest box parameter");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  add_common(sweep);
  std::vector<std::string> axis_specs;
  int jobs = 2;
  sweep->add_option("--axis", axis_specs, "axis spec param=start:stop:steps (repeatable)")->required();
  sweep->add_option("--jobs", jobs, "worker pool size");
  auto* validate = app.add_subcommand("validate", "run the invariant battery for this model");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (game->parsed()) return cmd_game(o);
    if (gap->parsed()) return cmd_gap(o);
    if (ped->parsed()) return cmd_pressure_ed(o, open_boundary);
    if (pqf->parsed()) return cmd_pressure_quasifree(o);
    if (pinv->parsed()) return cmd_perminv(o);
    if (conv->parsed()) return cmd_convergence(o, lmin, lmax);
    if (sweep->parsed()) return cmd_sweep(o, axis_specs, jobs);
    if (validate->parsed()) return cmd_validate(o);
  } catch (const lrf::GameError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const lrf::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
