// Quantile-substitution estimator: order statistics at ranks
// floor(n l s_b) + 1 stand in for the unknown grid points l s_b.
#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "orderstat/field.hpp"
#include "orderstat/sampling.hpp"

namespace orderstat {

class CoefficientEstimate {
 public:
  CoefficientEstimate(ComplexVector coeffs, std::size_t n) : coeffs_(std::move(coeffs)), n_(n) {
    if (coeffs_.size() == 0 || coeffs_.size() % 2 == 0) {
      throw std::invalid_argument("estimate must have 2b+1 coefficients");
    }
  }

  int bandwidth() const { return static_cast<int>((coeffs_.size() - 1) / 2); }
  std::size_t sample_count() const { return n_; }
  const ComplexVector& coeffs() const { return coeffs_; }
  Complex operator[](int k) const { return coeffs_(k + bandwidth()); }

  // Same coefficients viewed as a field; real-valued when conjugate symmetric.
  FourierCoefficients as_field() const {
    return FourierCoefficients(coeffs_, FourierCoefficients::conjugate_symmetric(coeffs_, kSymmetryTolerance));
  }

 private:
  ComplexVector coeffs_;
  std::size_t n_;
};

inline CoefficientEstimate estimate_coeffs(const SampleSet& s, int b) {
  if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
  if (s.size() < static_cast<std::size_t>(dimension(b))) {
    throw std::invalid_argument("estimator needs n >= 2b+1 samples");
  }
  const ComplexVector g = extract_quantile_samples(s, quantile_indices(s.size(), b));
  ComplexVector a = DftMatrix(b).adjoint() * g / static_cast<double>(dimension(b));
  return CoefficientEstimate(std::move(a), s.size());
}

inline Complex reconstruct(const CoefficientEstimate& e, double t) {
  return eval_field(FourierCoefficients(e.coeffs()), t);
}

// ||G_hat - g||_2^2, computed in coefficient space.
inline double distortion(const CoefficientEstimate& e, const FourierCoefficients& truth) {
  if (e.bandwidth() != truth.bandwidth()) throw std::invalid_argument("bandwidth mismatch");
  return (e.coeffs() - truth.coeffs()).squaredNorm();
}

// Asymptotic bound on n E||G_hat - g||^2 for fields with |g| <= 1.
inline double distortion_bound(int b) {
  if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
  const double bb = static_cast<double>(b);
  return std::numbers::pi * std::numbers::pi * bb * bb * (2.0 * bb + 1.0);
}

inline nlohmann::json to_json(const CoefficientEstimate& e) {
  nlohmann::json j;
  j["b"] = e.bandwidth();
  j["real_valued"] = FourierCoefficients::conjugate_symmetric(e.coeffs(), kSymmetryTolerance);
  j["coeffs"] = complex_vector_to_json(e.coeffs());
  j["n"] = e.sample_count();
  return j;
}

inline CoefficientEstimate estimate_from_json(const nlohmann::json& j) {
  const FourierCoefficients c = field_from_json(j);
  if (!j.contains("n")) throw std::invalid_argument("estimate document needs \"n\"");
  return CoefficientEstimate(c.coeffs(), j.at("n").get<std::size_t>());
}

}  // namespace orderstat
