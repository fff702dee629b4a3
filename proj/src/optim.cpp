#include "lrf/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lrf {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
                             const NelderMeadOptions& opt) {
  const int n = int(x0.size());
  NelderMeadResult res;
  if (n == 0) {
    res.x = x0;
    res.f = f(x0);
    res.converged = true;
    return res;
  }

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  std::vector<Eigen::VectorXd> x(n + 1, x0);
  std::vector<double> fx(n + 1);
  double step = opt.init_step;

  auto init_simplex = [&](const Eigen::VectorXd& center) {
    for (int i = 0; i <= n; ++i) x[i] = center;
    for (int i = 0; i < n; ++i) x[i + 1][i] += step;
    for (int i = 0; i <= n; ++i) fx[i] = f(x[i]);
  };
  init_simplex(x0);

  int iters = 0;
  for (int restart = 0; restart < std::max(1, opt.restarts); ++restart) {
    if (restart > 0) {
      int best = int(std::min_element(fx.begin(), fx.end()) - fx.begin());
      Eigen::VectorXd center = x[best];
      step = std::max(opt.init_step * 0.01, 16.0 * opt.xtol);
      init_simplex(center);
    }
    for (; iters < opt.max_iter; ++iters) {
      std::vector<int> idx(n + 1);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });

      double fbest = fx[idx[0]], fworst = fx[idx[n]];
      double spread = 0;
      for (int i = 0; i < n; ++i) spread = std::max(spread, (x[idx[i + 1]] - x[idx[0]]).norm());
      if (std::abs(fworst - fbest) <= opt.ftol * (1.0 + std::abs(fbest)) && spread <= opt.xtol) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < n; ++i) centroid += x[idx[i]];
      centroid /= double(n);

      Eigen::VectorXd xr = centroid + alpha * (centroid - x[idx[n]]);
      double fr = f(xr);
      if (fr < fx[idx[0]]) {
        Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
        double fe = f(xe);
        if (fe < fr) {
          x[idx[n]] = xe;
          fx[idx[n]] = fe;
        } else {
          x[idx[n]] = xr;
          fx[idx[n]] = fr;
        }
      } else if (fr < fx[idx[n - 1]]) {
        x[idx[n]] = xr;
        fx[idx[n]] = fr;
      } else {
        Eigen::VectorXd xc = centroid + rho * (x[idx[n]] - centroid);
        double fc = f(xc);
        if (fc < fx[idx[n]]) {
          x[idx[n]] = xc;
          fx[idx[n]] = fc;
        } else {
          for (int i = 1; i <= n; ++i) {
            x[idx[i]] = x[idx[0]] + sigma * (x[idx[i]] - x[idx[0]]);
            fx[idx[i]] = f(x[idx[i]]);
          }
        }
      }
    }
  }

  int best = int(std::min_element(fx.begin(), fx.end()) - fx.begin());
  res.x = x[best];
  res.f = fx[best];
  res.iters = iters;
  res.converged = iters < opt.max_iter;
  return res;
}

FixedPointResult anderson_fixed_point(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g,
                                      Eigen::VectorXd x0, const FixedPointOptions& opt) {
  FixedPointResult res;
  Eigen::VectorXd x = std::move(x0);
  const long n = x.size();

  std::vector<Eigen::VectorXd> hist_x, hist_r;
  for (int it = 0; it < opt.max_iter; ++it) {
    Eigen::VectorXd gx = g(x);
    Eigen::VectorXd r = gx - x;
    res.residual = r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0;
    res.iters = it + 1;
    if (res.residual <= opt.tol) {
      res.x = gx;
      res.converged = true;
      return res;
    }

    hist_x.push_back(x);
    hist_r.push_back(r);
    int m = int(hist_x.size());
    if (m > opt.anderson_window + 1) {
      hist_x.erase(hist_x.begin());
      hist_r.erase(hist_r.begin());
      m = int(hist_x.size());
    }

    if (it < opt.plain_iters || m < 2) {
      x = x + opt.damping * r;
      continue;
    }

    // Type-II Anderson: minimize || r_m + sum_j theta_j (r_j - r_m) ||
    Eigen::MatrixXd dr(n, m - 1), dx(n, m - 1);
    for (int j = 0; j < m - 1; ++j) {
      dr.col(j) = hist_r[j] - hist_r[m - 1];
      dx.col(j) = hist_x[j] - hist_x[m - 1];
    }
    Eigen::VectorXd theta = dr.colPivHouseholderQr().solve(-hist_r[m - 1]);
    Eigen::VectorXd x_new = hist_x[m - 1] + opt.damping * hist_r[m - 1] + (dx + opt.damping * dr) * theta;
    if (!x_new.allFinite()) x_new = x + opt.damping * r;
    x = x_new;
  }
  res.x = x;
  res.converged = false;
  return res;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (flo * fhi > 0) throw std::invalid_argument("bisect needs a sign change");
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0) return mid;
    if (flo * fm < 0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace lrf
