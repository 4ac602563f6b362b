#include "concmeas/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "concmeas/errors.hpp"

namespace concmeas::quad {

namespace {

void append_panel(Rule& rule, double lo, double hi) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  // boost stores the non-negative half of a symmetric rule; x[0] == 0 only for odd N
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(mid - half * x[i]);
    rule.weights.push_back(half * w[i]);
    if (x[i] != 0.0) {
      rule.nodes.push_back(mid + half * x[i]);
      rule.weights.push_back(half * w[i]);
    }
  }
}

}  // namespace

Rule composite_gauss_legendre(double a, double b, int panels) {
  if (panels < 1) throw NumericError(ErrorKind::Domain, "composite_gauss_legendre: panels < 1");
  Rule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * 20);
  rule.weights.reserve(static_cast<std::size_t>(panels) * 20);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    append_panel(rule, lo, hi);
  }
  return rule;
}

Rule composite_gauss_legendre(std::span<const double> edges) {
  Rule rule;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] > edges[i]) append_panel(rule, edges[i], edges[i + 1]);
  }
  return rule;
}

}  // namespace concmeas::quad
