#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace concmeas::quad {

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Splits the interval with
/// the largest error estimate until the summed estimate satisfies
/// error <= max(abs_tol, rel_tol * |value|) or the interval budget runs out.
template <class F>
Result adaptive(F&& f, double a, double b, const Options& opt = {}) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  Result out;
  if (a == b) return out;
  const double sign = b < a ? -1.0 : 1.0;
  if (b < a) std::swap(a, b);

  auto eval = [&](double lo, double hi) {
    // Boost 1.74 leaves the finite-interval error estimate unscaled.
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    double err = 0.0;
    const double v = Rule::integrate([&](double t) { return r * f(c + r * t); }, -1.0, 1.0, 0, 0.0, &err);
    return Piece{lo, hi, v, err};
  };

  std::priority_queue<Piece> heap;
  Piece first = eval(a, b);
  heap.push(first);
  double total = first.value;
  double total_err = first.error;
  int count = 1;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (count >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;  // interval exhausted at machine resolution
      break;
    }
    heap.pop();
    Piece left = eval(worst.a, mid);
    Piece right = eval(mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  // Re-sum to shed the cancellation accumulated by the running updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = sign * total;
  out.error = total_err;
  out.intervals = count;
  return out;
}

/// Adaptive integration over consecutive breakpoints; duplicate or unordered
/// points are tolerated.
template <class F>
Result piecewise(F&& f, std::vector<double> points, const Options& opt = {}) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  Result out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Result r = adaptive(f, points[i], points[i + 1], opt);
    out.value += r.value;
    out.error += r.error;
    out.converged = out.converged && r.converged;
    out.intervals += r.intervals;
  }
  return out;
}

struct TailOptions {
  Options segment;
  double abs_tol = 1e-12;  ///< stop once a whole segment contributes less
  double rel_tol = 1e-12;
  int max_segments = 200;
};

/// Integral of f on [a, infinity) by segments of geometrically growing width.
/// Stops once a segment contributes below abs_tol + rel_tol * |total|, or
/// when `stop_at(x)` reports that the integrand can no longer be evaluated
/// (overflow of a rapidly growing potential, say).
template <class F, class Stop>
Result to_infinity(F&& f, double a, double first_width, const TailOptions& opt, Stop&& stop_at) {
  Result out;
  double lo = a;
  double width = first_width;
  for (int seg = 0; seg < opt.max_segments; ++seg) {
    double hi = lo + width;
    if (stop_at(hi)) {
      // shrink onto the admissible range once, then give up the tail
      double h2 = lo;
      double step = width;
      while (step > 1e-12 * std::max(1.0, std::abs(lo))) {
        step *= 0.5;
        if (!stop_at(h2 + step)) h2 += step;
      }
      if (h2 > lo) {
        const Result r = adaptive(f, lo, h2, opt.segment);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
      }
      return out;
    }
    const Result r = adaptive(f, lo, hi, opt.segment);
    out.value += r.value;
    out.error += r.error;
    out.intervals += r.intervals;
    out.converged = out.converged && r.converged;
    if (std::abs(r.value) <= opt.abs_tol + opt.rel_tol * std::abs(out.value) && seg > 0) return out;
    lo = hi;
    width *= 2.0;
  }
  out.converged = false;
  return out;
}

template <class F>
Result to_infinity(F&& f, double a, double first_width, const TailOptions& opt = {}) {
  return to_infinity(std::forward<F>(f), a, first_width, opt, [](double) { return false; });
}

/// Tensor of Gauss-Legendre panels: nodes and weights of a composite rule.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// Composite 20-point Gauss-Legendre rule on [a, b] with `panels` equal panels.
Rule composite_gauss_legendre(double a, double b, int panels);

/// Composite 20-point Gauss-Legendre over panels delimited by `edges`.
Rule composite_gauss_legendre(std::span<const double> edges);

}  // namespace concmeas::quad
