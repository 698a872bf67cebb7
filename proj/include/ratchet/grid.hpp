#ifndef RATCHET_GRID_HPP
#define RATCHET_GRID_HPP

#include <ostream>
#include <vector>

namespace ratchet {

/// Cell-averaged density on the unit circle.
///
/// n uniform cells of width 1/n, cell j centered at (j + 1/2)/n.  Values are
/// cell averages (mass per unit length), so the total mass is the plain mean
/// of the values and conservative fluxes telescope exactly.  Indexing is
/// circular.  Instances are treated as immutable once filled in.
struct GridFunction {
  int n = 0;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(int n_) : n(n_), values(static_cast<std::size_t>(n_), 0.0) {}
  GridFunction(int n_, std::vector<double> v);

  static GridFunction uniform(int n, double value = 1.0);

  double cell_center(int j) const { return (j + 0.5) / n; }
  /// circular access: index taken mod n
  double at(int j) const {
    int k = j % n;
    if (k < 0) k += n;
    return values[static_cast<std::size_t>(k)];
  }

  bool all_finite() const;
  bool is_probability(double mass_tol = 1e-12) const;
  GridFunction normalized() const;
};

/// Total mass, (sum of values) / n.
double mass(const GridFunction& g);

/// L1 distance (sum |g_j - h_j|) / n.  Throws on mismatched n.
double l1_distance(const GridFunction& g, const GridFunction& h);

/// Relative entropy E[g|h] = (sum g_j ln(g_j/h_j)) / n with 0 ln 0 = 0.
/// Requires matching n, h > 0, g >= 0, and both masses within 1e-8 of 1.
double relative_entropy(const GridFunction& g, const GridFunction& h);

/// Entropy production ep[g|h]: discrete form of int g |(ln(g/h))_x|^2 using
/// centered differences of ln(g/h).  Requires g, h > 0 on matching grids.
double entropy_production(const GridFunction& g, const GridFunction& h);

/// Csiszar-Kullback slack 2 E[g|h] - ||g-h||_1^2 (nonnegative up to roundoff).
double check_csiszar_kullback(const GridFunction& g, const GridFunction& h);

/// CSV rows "x,value" at cell centers, 17 significant digits.
void write_csv(const GridFunction& g, std::ostream& os);

/// Relative entropy / production along a trajectory plus a fitted decay rate.
struct EntropyTrace {
  std::vector<double> times;
  std::vector<double> entropy;
  std::vector<double> production;
  double decay_rate_estimate = 0.0;
};

/// Least-squares exponential rate of the tail half of (times, entropy);
/// entries with entropy <= floor are skipped.
double fit_decay_rate(const std::vector<double>& times,
                      const std::vector<double>& entropy, double floor = 1e-300);

}  // namespace ratchet

#endif
