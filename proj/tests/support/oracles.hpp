#pragma once

// Straight-line reference implementations used to check the library. They
// share no code with it and favour obviousness over speed.

#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

namespace oracle {

inline long double cosine(std::span<const double> x, std::span<const double> y) {
  long double xy = 0, xx = 0, yy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy += static_cast<long double>(x[i]) * y[i];
    xx += static_cast<long double>(x[i]) * x[i];
    yy += static_cast<long double>(y[i]) * y[i];
  }
  return xy / std::sqrt(xx * yy);
}

// d(a,p) - d(a,n) + m before clamping; its sign says whether the hinge is active.
inline double hinge_argument(std::span<const double> a, std::span<const double> p,
                             std::span<const double> n, double m) {
  const long double d_ap = 1.0L - cosine(a, p);
  const long double d_an = 1.0L - cosine(a, n);
  return static_cast<double>(d_ap - d_an + m);
}

inline double hinge(std::span<const double> a, std::span<const double> p,
                    std::span<const double> n, double m) {
  const double h = hinge_argument(a, p, n, m);
  return h > 0 ? h : 0;
}

inline double euclid(std::span<const double> x, std::span<const double> y) {
  long double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double d = static_cast<long double>(x[i]) - y[i];
    s += d * d;
  }
  return static_cast<double>(std::sqrt(s));
}

using Triple = std::tuple<std::size_t, std::size_t, std::size_t>;

// Every ordered index triple, filtered by the triplet rules and the margin.
inline std::set<Triple> brute_force_mine(const std::vector<std::vector<double>>& v,
                                         const std::vector<unsigned>& labels, double margin) {
  std::set<Triple> out;
  const std::size_t n = v.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t k = 0; k < n; ++k) {
        if (a == p || labels[a] != labels[p] || labels[k] == labels[a]) continue;
        if (euclid(v[a], v[k]) - euclid(v[a], v[p]) < margin) out.insert({a, p, k});
      }
  return out;
}

// Rank of x = (#values below x) + (#values equal to x + 1) / 2.
inline std::vector<long double> average_ranks(std::span<const double> v) {
  std::vector<long double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t below = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++below;
      if (w == v[i]) ++equal;
    }
    r[i] = below + (equal + 1) / 2.0L;
  }
  return r;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const std::size_t n = rx.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Central difference of f with respect to *x, restoring *x afterwards.
inline double central_difference(const std::function<double()>& f, double* x, double h = 1e-4) {
  const double saved = *x;
  *x = saved + h;
  const double up = f();
  *x = saved - h;
  const double down = f();
  *x = saved;
  return (up - down) / (2 * h);
}

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / (std::abs(numeric) + 1e-8);
}

}  // namespace oracle
