// Without ordering, samples only reveal the law of g(U). That law is the
// level-set measure t -> |{t : g(t) <= x}|, which every cyclic shift of g
// shares.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "orderstat/field.hpp"
#include "orderstat/io.hpp"
#include "orderstat/rng.hpp"
#include "orderstat/sampling.hpp"

namespace orderstat {

inline constexpr double kRealValueTolerance = 1e-10;
inline constexpr std::size_t kDefaultCdfGridPoints = 512;

struct ValueCdf {
  std::vector<double> grid;
  std::vector<double> cdf;
};

// Equispaced x-grid on [lo, hi].
inline std::vector<double> value_grid(std::size_t points = kDefaultCdfGridPoints, double lo = -1.0, double hi = 1.0) {
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> x(points);
  for (std::size_t i = 0; i < points; ++i) {
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return x;
}

namespace detail {

inline void require_ascending(const std::vector<double>& grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("grid must be ascending");
}

// Fraction of `sorted` that is <= x, at each grid point.
inline std::vector<double> count_below(const std::vector<double>& sorted, const std::vector<double>& grid) {
  std::vector<double> cdf(grid.size());
  const double m = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), grid[i]);
    cdf[i] = static_cast<double>(it - sorted.begin()) / m;
  }
  return cdf;
}

inline std::vector<double> real_parts(const std::vector<Complex>& values) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i].imag()) > kRealValueTolerance) {
      throw std::domain_error("value CDF needs real field values");
    }
    out[i] = values[i].real();
  }
  return out;
}

inline void require_real(const FourierCoefficients& c) {
  if (!c.real_valued()) throw std::invalid_argument("level sets need a real-valued field");
}

}  // namespace detail

// F(x) = (1/n) #{i : g(U_i) <= x}.
inline ValueCdf empirical_value_cdf(const std::vector<Complex>& values, const std::vector<double>& grid) {
  if (values.empty()) throw std::invalid_argument("need at least one value");
  detail::require_ascending(grid);
  std::vector<double> sorted = detail::real_parts(values);
  std::sort(sorted.begin(), sorted.end());
  return {grid, detail::count_below(sorted, grid)};
}

// Measure of {t : g(t) <= x} at every grid point, approximated by the
// fraction of t_m = m / M with g(t_m) <= x.
inline ValueCdf level_measure_curve(const FourierCoefficients& c, const std::vector<double>& grid, std::size_t m) {
  detail::require_real(c);
  detail::require_ascending(grid);
  if (m < static_cast<std::size_t>(c.size())) throw std::invalid_argument("resolution M must be >= 2b+1");
  std::vector<double> values(m);
  for (std::size_t i = 0; i < m; ++i) {
    values[i] = eval_field(c, static_cast<double>(i) / static_cast<double>(m)).real();
  }
  std::sort(values.begin(), values.end());
  return {grid, detail::count_below(values, grid)};
}

inline double level_measure(const FourierCoefficients& c, double x, std::size_t m) {
  return level_measure_curve(c, {x}, m).cdf.front();
}

// g_theta(t) = g(t - theta): a_k -> a_k exp(-j 2 pi k theta).
inline FourierCoefficients shift_field(const FourierCoefficients& c, double theta) {
  const int b = c.bandwidth();
  ComplexVector a = c.coeffs();
  for (int k = -b; k <= b; ++k) {
    a(k + b) *= std::polar(1.0, -kTwoPi * k * theta);
  }
  if (c.real_valued()) {
    for (int k = 0; k <= b; ++k) a(b - k) = std::conj(a(b + k));
  }
  return FourierCoefficients(std::move(a), c.real_valued());
}

inline double sup_difference(const ValueCdf& lhs, const ValueCdf& rhs) {
  if (lhs.cdf.size() != rhs.cdf.size()) throw std::invalid_argument("CDF grids differ");
  double sup = 0.0;
  for (std::size_t i = 0; i < lhs.cdf.size(); ++i) sup = std::max(sup, std::abs(lhs.cdf[i] - rhs.cdf[i]));
  return sup;
}

// Two-sample Kolmogorov-Smirnov 99% critical value for equal sizes n.
inline double ks_two_sample_critical_99(std::size_t n) {
  return 1.63 * std::sqrt(2.0 / static_cast<double>(n));
}

struct AmbiguityReport {
  double theta = 0.0;
  std::size_t n = 0;
  std::size_t resolution = 0;
  double sup_cdf_diff_theory = 0.0;     // level-measure curves of g and g_theta
  double sup_cdf_diff_empirical = 0.0;  // empirical value CDFs from independent draws
  double distortion_between_fields = 0.0;
  double theory_tolerance = 0.0;  // 4b / M
  double ks_critical_99 = 0.0;
  double glivenko_cantelli_gap = 0.0;  // sup |F_{g,n} - level measure of g|
  FourierCoefficients shifted;
  ValueCdf level_original;
  ValueCdf level_shifted;
  ValueCdf empirical_original;
  ValueCdf empirical_shifted;
};

// Samples of g and g_theta come from streams (seed, 0) and (seed, 1).
inline AmbiguityReport ambiguity_demo(const FourierCoefficients& c, double theta, std::size_t n, std::size_t m,
                                      std::uint64_t seed) {
  detail::require_real(c);
  if (n == 0) throw std::invalid_argument("need n >= 1");
  AmbiguityReport r;
  r.theta = theta;
  r.n = n;
  r.resolution = m;
  r.shifted = shift_field(c, theta);
  const std::vector<double> grid = value_grid();
  r.level_original = level_measure_curve(c, grid, m);
  r.level_shifted = level_measure_curve(r.shifted, grid, m);
  r.sup_cdf_diff_theory = sup_difference(r.level_original, r.level_shifted);
  r.theory_tolerance = 4.0 * c.bandwidth() / static_cast<double>(m);

  const auto draw_values = [n](const FourierCoefficients& f, Engine rng) {
    const DeploymentDraw d = deploy(n, rng);
    std::vector<Complex> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = eval_field(f, d.locations()[i]);
    return values;
  };
  r.empirical_original = empirical_value_cdf(draw_values(c, make_engine(seed, {0})), grid);
  r.empirical_shifted = empirical_value_cdf(draw_values(r.shifted, make_engine(seed, {1})), grid);
  r.sup_cdf_diff_empirical = sup_difference(r.empirical_original, r.empirical_shifted);
  r.ks_critical_99 = ks_two_sample_critical_99(n);
  r.glivenko_cantelli_gap = sup_difference(r.empirical_original, r.level_original);
  r.distortion_between_fields = parseval_distance(c, r.shifted);
  return r;
}

inline void write_cdf_csv(std::ostream& out, const ValueCdf& cdf) {
  out << "x,cdf\n";
  for (std::size_t i = 0; i < cdf.grid.size(); ++i) {
    out << io::format_double(cdf.grid[i]) << ',' << io::format_double(cdf.cdf[i]) << '\n';
  }
}

inline nlohmann::json to_json(const AmbiguityReport& r) {
  return {{"theta", r.theta},
          {"n", r.n},
          {"grid", r.resolution},
          {"sup_cdf_diff_theory", r.sup_cdf_diff_theory},
          {"theory_tolerance", r.theory_tolerance},
          {"sup_cdf_diff_empirical", r.sup_cdf_diff_empirical},
          {"ks_critical_99", r.ks_critical_99},
          {"glivenko_cantelli_gap", r.glivenko_cantelli_gap},
          {"distortion_between_fields", r.distortion_between_fields},
          {"shifted_field", to_json(r.shifted)}};
}

}  // namespace orderstat
