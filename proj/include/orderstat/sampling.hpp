// Sensor deployment at i.i.d. Uniform[0, 1] locations and the ordered,
// location-free view of the samples that the estimator receives.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orderstat/field.hpp"
#include "orderstat/io.hpp"
#include "orderstat/rng.hpp"

namespace orderstat {

class DeploymentDraw {
 public:
  // Locations must lie in [0, 1]; used for replay and by tests to inject
  // hand-picked positions.
  explicit DeploymentDraw(std::vector<double> locations, std::uint64_t seed = 0)
      : locations_(std::move(locations)), seed_(seed) {
    if (locations_.empty()) throw std::invalid_argument("deployment needs at least one sensor");
    for (double u : locations_) {
      if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("locations must lie in [0, 1]");
    }
  }

  std::size_t size() const { return locations_.size(); }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& locations() const { return locations_; }

 private:
  std::vector<double> locations_;
  std::uint64_t seed_;
};

template <class Rng>
DeploymentDraw deploy(std::size_t n, Rng& rng, std::uint64_t seed_record = 0) {
  if (n == 0) throw std::invalid_argument("deployment needs n >= 1");
  std::vector<double> u(n);
  for (auto& x : u) x = uniform01(rng);
  return DeploymentDraw(std::move(u), seed_record);
}

inline DeploymentDraw deploy_seeded(std::size_t n, std::uint64_t seed) {
  Engine rng(seed);
  return deploy(n, rng, seed);
}

// Field values g(U_{1:n}), ..., g(U_{n:n}). Locations are not retained.
class SampleSet {
 public:
  explicit SampleSet(std::vector<Complex> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("sample set must be non-empty");
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<Complex> values_;
};

namespace detail {

// Locations in ascending order; equal locations keep draw order.
inline std::vector<double> sorted_locations(const DeploymentDraw& d) {
  std::vector<std::pair<double, std::size_t>> keyed(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) keyed[i] = {d.locations()[i], i};
  std::sort(keyed.begin(), keyed.end());
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = keyed[i].first;
  return out;
}

}  // namespace detail

inline SampleSet observe(const FourierCoefficients& field, const DeploymentDraw& d) {
  const std::vector<double> sorted = detail::sorted_locations(d);
  std::vector<Complex> values(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) values[i] = eval_field(field, sorted[i]);
  return SampleSet(std::move(values));
}

// One-based ranks floor(n l / (2b + 1)) + 1 for l = 0..2b.
inline std::vector<std::size_t> quantile_indices(std::size_t n, int b) {
  if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
  const auto dim = static_cast<std::size_t>(dimension(b));
  if (n < dim) throw std::invalid_argument("need n >= 2b+1 samples to select 2b+1 ranks");
  std::vector<std::size_t> ranks(dim);
  for (std::size_t l = 0; l < dim; ++l) ranks[l] = (n * l) / dim + 1;
  return ranks;
}

inline ComplexVector extract_quantile_samples(const SampleSet& s, const std::vector<std::size_t>& ranks) {
  ComplexVector g(static_cast<Eigen::Index>(ranks.size()));
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (ranks[i] < 1 || ranks[i] > s.size()) throw std::out_of_range("rank outside [1, n]");
    g(static_cast<Eigen::Index>(i)) = s[ranks[i] - 1];
  }
  return g;
}

// CSV with header "value_re,value_im", one sample per row.
inline void write_sample_csv(std::ostream& out, const SampleSet& s) {
  out << "value_re,value_im\n";
  for (const Complex& v : s.values()) {
    out << io::format_double(v.real()) << ',' << io::format_double(v.imag()) << '\n';
  }
}

inline SampleSet read_sample_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "value_re,value_im") {
    throw std::invalid_argument("sample CSV must start with header value_re,value_im");
  }
  std::vector<Complex> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed sample row: " + line);
    std::size_t used_re = 0, used_im = 0;
    const std::string re = line.substr(0, comma);
    const std::string im = line.substr(comma + 1);
    const double vr = std::stod(re, &used_re);
    const double vi = std::stod(im, &used_im);
    if (used_re != re.size() || used_im != im.size()) {
      throw std::invalid_argument("malformed sample row: " + line);
    }
    values.emplace_back(vr, vi);
  }
  return SampleSet(std::move(values));
}

inline nlohmann::json sample_sidecar(const SampleSet& s, int b_source, std::uint64_t seed) {
  return {{"n", s.size()}, {"b_source", b_source}, {"seed", std::to_string(seed)}};
}

}  // namespace orderstat
