// Copyright 2026 The mleak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace mleak::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_intervals = 1000;  // per call, across all break segments
};

struct GkPiece {
  double lo;
  double hi;
  double value;
  double error;
};

// One 31-point Kronrod rule on [lo, hi] with the QUADPACK error estimate.
template <typename F>
GkPiece gk31(F& f, double lo, double hi) {
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
  using Gauss = boost::math::quadrature::gauss<double, 15>;
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);

  double fv[2 * 16];
  const double f0 = f(center);
  double resk = f0 * wk[0];
  double resg = f0 * wg[0];
  double resabs = std::abs(resk);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(center + half * x[i]);
    const double fm = f(center - half * x[i]);
    fv[2 * i] = fp;
    fv[2 * i + 1] = fm;
    resk += (fp + fm) * wk[i];
    resabs += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 0) resg += (fp + fm) * wg[i / 2];
  }
  const double mean = 0.5 * resk;
  double resasc = wk[0] * std::abs(f0 - mean);
  for (std::size_t i = 1; i < x.size(); ++i) {
    resasc += wk[i] * (std::abs(fv[2 * i] - mean) + std::abs(fv[2 * i + 1] - mean));
  }
  const double h = std::abs(half);
  resabs *= h;
  resasc *= h;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * kEps)) {
    err = std::max(50 * kEps * resabs, err);
  }
  return {lo, hi, resk * half, err};
}

// Globally adaptive Gauss-Kronrod over [a, b] split at `breaks` (points
// outside the interval are ignored). Either end may be infinite; infinite
// segments are mapped onto [0, 1). The worst piece is bisected until the
// summed error meets the tolerance or max_intervals is reached.
template <typename F>
double integrate_piecewise(F&& f, double a, double b, std::vector<double> breaks,
                           const QuadratureOptions& opts,
                           std::int64_t* evals = nullptr) {
  if (!(b > a)) return 0.0;
  std::erase_if(breaks, [&](double x) { return !(x > a && x < b) || !std::isfinite(x); });
  if (std::isinf(a) && std::isinf(b) && breaks.empty()) breaks.push_back(0.0);
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Segment k is integrated in a variable u; g(k, u) returns f * Jacobian.
  struct Segment {
    double lo, hi;
    int kind;  // 0 finite, 1 [lo, inf), 2 (-inf, hi]
  };
  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    if (std::isinf(hi)) {
      segments.push_back({lo, hi, 1});
    } else if (std::isinf(lo)) {
      segments.push_back({lo, hi, 2});
    } else {
      segments.push_back({lo, hi, 0});
    }
  }

  double total = 0.0;
  double total_err = 0.0;
  double frozen = 0.0;  // pieces too narrow to split
  struct Tagged {
    GkPiece piece;
    std::size_t seg;
    bool operator<(const Tagged& o) const { return piece.error < o.piece.error; }
  };
  std::priority_queue<Tagged> work;
  const auto eval = [&](std::size_t k, double lo, double hi) {
    const Segment& s = segments[k];
    auto g = [&](double u) {
      if (evals) ++*evals;
      if (s.kind == 0) return f(u);
      const double one_minus = 1.0 - u;
      const double x = u / one_minus;
      const double jac = 1.0 / (one_minus * one_minus);
      return s.kind == 1 ? f(s.lo + x) * jac : f(s.hi - x) * jac;
    };
    return gk31(g, lo, hi);
  };
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Segment& s = segments[k];
    const GkPiece p = s.kind == 0 ? eval(k, s.lo, s.hi) : eval(k, 0.0, 1.0);
    total += p.value;
    total_err += p.error;
    work.push({p, k});
  }
  int intervals = static_cast<int>(segments.size());
  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
         intervals < opts.max_intervals && !work.empty()) {
    const Tagged worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.piece.lo + worst.piece.hi);
    if (!(mid > worst.piece.lo && mid < worst.piece.hi)) {
      frozen += worst.piece.value;
      total_err -= worst.piece.error;
      continue;
    }
    const GkPiece left = eval(worst.seg, worst.piece.lo, mid);
    const GkPiece right = eval(worst.seg, mid, worst.piece.hi);
    total += left.value + right.value - worst.piece.value;
    total_err += left.error + right.error - worst.piece.error;
    work.push({left, worst.seg});
    work.push({right, worst.seg});
    ++intervals;
  }
  // Re-sum to drop the drift of the running updates.
  double sum = frozen;
  while (!work.empty()) {
    sum += work.top().piece.value;
    work.pop();
  }
  return sum;
}

}  // namespace mleak::detail
