#include "ratchet/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "ratchet/util.hpp"

namespace ratchet {

GridFunction::GridFunction(int n_, std::vector<double> v) : n(n_), values(std::move(v)) {
  if (n < 1 || values.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("GridFunction: size mismatch");
}

GridFunction GridFunction::uniform(int n, double value) {
  GridFunction g(n);
  for (double& v : g.values) v = value;
  return g;
}

bool GridFunction::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

bool GridFunction::is_probability(double mass_tol) const {
  for (double v : values)
    if (!(v >= 0.0)) return false;
  return std::abs(mass(*this) - 1.0) <= mass_tol;
}

GridFunction GridFunction::normalized() const {
  double m = mass(*this);
  if (!(m > 0)) throw std::invalid_argument("normalize: nonpositive mass");
  GridFunction g(n);
  for (int j = 0; j < n; ++j) g.values[j] = values[j] / m;
  return g;
}

double mass(const GridFunction& g) {
  double s = 0;
  for (double v : g.values) s += v;
  return s / g.n;
}

double l1_distance(const GridFunction& g, const GridFunction& h) {
  if (g.n != h.n) throw std::invalid_argument("l1_distance: grids differ");
  double s = 0;
  for (int j = 0; j < g.n; ++j) s += std::abs(g.values[j] - h.values[j]);
  return s / g.n;
}

double relative_entropy(const GridFunction& g, const GridFunction& h) {
  if (g.n != h.n) throw std::invalid_argument("relative_entropy: grids differ");
  if (std::abs(mass(g) - 1.0) > 1e-8 || std::abs(mass(h) - 1.0) > 1e-8)
    throw std::invalid_argument("relative_entropy: inputs must have unit mass");
  double s = 0;
  for (int j = 0; j < g.n; ++j) {
    const double hj = h.values[j];
    if (!(hj > 0.0))
      throw std::invalid_argument("relative_entropy: reference has a non-positive cell");
    const double gj = g.values[j];
    if (gj < 0.0)
      throw std::invalid_argument("relative_entropy: density has a negative cell");
    if (gj > 0.0) s += gj * std::log(gj / hj);  // 0 ln 0 := 0
  }
  return s / g.n;
}

double entropy_production(const GridFunction& g, const GridFunction& h) {
  if (g.n != h.n) throw std::invalid_argument("entropy_production: grids differ");
  const int n = g.n;
  std::vector<double> r(n);
  for (int j = 0; j < n; ++j) {
    if (!(g.values[j] > 0.0) || !(h.values[j] > 0.0))
      throw std::invalid_argument("entropy_production: non-positive cell");
    r[j] = std::log(g.values[j] / h.values[j]);
  }
  double s = 0;
  for (int j = 0; j < n; ++j) {
    const double drdx = (r[(j + 1) % n] - r[(j + n - 1) % n]) * 0.5 * n;
    s += g.values[j] * drdx * drdx;
  }
  return s / n;
}

double check_csiszar_kullback(const GridFunction& g, const GridFunction& h) {
  const double d = l1_distance(g, h);
  return 2.0 * relative_entropy(g, h) - d * d;
}

void write_csv(const GridFunction& g, std::ostream& os) {
  os << "x,value\n";
  for (int j = 0; j < g.n; ++j)
    os << format_double(g.cell_center(j)) << ',' << format_double(g.values[j]) << '\n';
}

double fit_decay_rate(const std::vector<double>& times,
                      const std::vector<double>& entropy, double floor) {
  // slope of -ln E over the tail half of the samples
  const std::size_t n = times.size();
  if (n < 4) return 0.0;
  const std::size_t start = n / 2;
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t count = 0;
  for (std::size_t i = start; i < n; ++i) {
    if (!(entropy[i] > floor)) continue;
    const double y = std::log(entropy[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    ++count;
  }
  if (count < 2) return 0.0;
  const double det = count * stt - st * st;
  if (det == 0.0) return 0.0;
  return -(count * sty - st * sy) / det;
}

}  // namespace ratchet
