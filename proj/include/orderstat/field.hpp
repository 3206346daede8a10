// Periodic bandlimited fields on [0, 1) described by their Fourier
// coefficients a_{-b}, ..., a_b.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "orderstat/rng.hpp"

namespace orderstat {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerance used when checking conjugate symmetry of real-valued fields.
inline constexpr double kSymmetryTolerance = 1e-12;

inline int dimension(int b) { return 2 * b + 1; }

// Spacing of the equispaced reconstruction grid, 1 / (2b + 1).
inline double grid_spacing(int b) { return 1.0 / static_cast<double>(dimension(b)); }

// Reduces t into [0, 1).
inline double wrap_unit(double t) {
  double r = t - std::floor(t);
  return r >= 1.0 ? 0.0 : r;
}

// exp(j 2 pi k t) for k = -b..b, in storage order.
inline ComplexVector fourier_basis(int b, double t) {
  const int dim = dimension(b);
  ComplexVector basis(dim);
  const Complex step = std::polar(1.0, kTwoPi * wrap_unit(t));
  const Complex inv = std::conj(step);
  basis(b) = 1.0;
  Complex up = 1.0;
  Complex down = 1.0;
  for (int k = 1; k <= b; ++k) {
    up *= step;
    down *= inv;
    basis(b + k) = up;
    basis(b - k) = down;
  }
  return basis;
}

class FourierCoefficients {
 public:
  FourierCoefficients() : FourierCoefficients(ComplexVector::Zero(1)) {}

  // coeffs(0) is a_{-b}, coeffs(2b) is a_b. The real-valued flag is checked
  // against conjugate symmetry; boundedness is derived from sum |a_k| <= 1.
  explicit FourierCoefficients(ComplexVector coeffs, bool real_valued = false)
      : coeffs_(std::move(coeffs)), real_valued_(real_valued) {
    if (coeffs_.size() == 0 || coeffs_.size() % 2 == 0) {
      throw std::invalid_argument("coefficient vector must have odd length 2b+1");
    }
    b_ = static_cast<int>((coeffs_.size() - 1) / 2);
    for (Eigen::Index i = 0; i < coeffs_.size(); ++i) {
      if (!std::isfinite(coeffs_(i).real()) || !std::isfinite(coeffs_(i).imag())) {
        throw std::invalid_argument("coefficients must be finite");
      }
    }
    if (real_valued_ && !conjugate_symmetric(coeffs_, kSymmetryTolerance)) {
      throw std::invalid_argument("real-valued field requires a_k = conj(a_{-k})");
    }
    bounded_ = coeffs_.cwiseAbs().sum() <= 1.0 + 1e-12;
  }

  static FourierCoefficients zero(int b, bool real_valued = true) {
    if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
    return FourierCoefficients(ComplexVector::Zero(dimension(b)), real_valued);
  }

  int bandwidth() const { return b_; }
  int size() const { return dimension(b_); }
  bool real_valued() const { return real_valued_; }
  bool bounded() const { return bounded_; }
  const ComplexVector& coeffs() const { return coeffs_; }

  // a_k for k in [-b, b].
  Complex operator[](int k) const {
    if (k < -b_ || k > b_) throw std::out_of_range("frequency index outside [-b, b]");
    return coeffs_(k + b_);
  }

  static bool conjugate_symmetric(const ComplexVector& c, double tol) {
    const Eigen::Index b = (c.size() - 1) / 2;
    for (Eigen::Index k = 0; k <= b; ++k) {
      if (std::abs(c(b + k) - std::conj(c(b - k))) > tol) return false;
    }
    return true;
  }

 private:
  ComplexVector coeffs_;
  int b_ = 0;
  bool real_valued_ = false;
  bool bounded_ = false;
};

// sum_k a_k exp(j 2 pi k t); t is reduced modulo 1.
inline Complex eval_field(const FourierCoefficients& c, double t) {
  const int b = c.bandwidth();
  const ComplexVector& a = c.coeffs();
  const Complex step = std::polar(1.0, kTwoPi * wrap_unit(t));
  const Complex inv = std::conj(step);
  Complex sum = a(b);
  Complex up = 1.0;
  Complex down = 1.0;
  for (int k = 1; k <= b; ++k) {
    up *= step;
    down *= inv;
    sum += a(b + k) * up + a(b - k) * down;
  }
  return sum;
}

// sum_k (j 2 pi k) a_k exp(j 2 pi k t).
inline Complex eval_derivative(const FourierCoefficients& c, double t) {
  const int b = c.bandwidth();
  const ComplexVector basis = fourier_basis(b, t);
  Complex sum = 0.0;
  for (int k = -b; k <= b; ++k) {
    sum += Complex(0.0, kTwoPi * k) * c[k] * basis(k + b);
  }
  return sum;
}

// Phi_b: row l, column (k + b) holds exp(j 2 pi k l s_b).
class DftMatrix {
 public:
  explicit DftMatrix(int b) : b_(b) {
    if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
    const int dim = dimension(b);
    entries_.resize(dim, dim);
    for (int l = 0; l < dim; ++l) {
      for (int k = -b; k <= b; ++k) {
        // k * l is reduced modulo 2b+1 so the phase stays in [0, 2 pi).
        const long long phase = ((static_cast<long long>(k) * l) % dim + dim) % dim;
        entries_(l, k + b) = std::polar(1.0, kTwoPi * static_cast<double>(phase) / dim);
      }
    }
  }

  int bandwidth() const { return b_; }
  const ComplexMatrix& matrix() const& { return entries_; }
  ComplexMatrix matrix() && { return std::move(entries_); }
  ComplexMatrix adjoint() const { return entries_.adjoint(); }

 private:
  int b_;
  ComplexMatrix entries_;
};

inline DftMatrix build_dft_matrix(int b) { return DftMatrix(b); }

// Values at t = 0, s_b, ..., 2b s_b.
inline ComplexVector samples_from_coeffs(const FourierCoefficients& c) {
  const int b = c.bandwidth();
  ComplexVector g(dimension(b));
  for (int l = 0; l < dimension(b); ++l) {
    g(l) = eval_field(c, l * grid_spacing(b));
  }
  return g;
}

// (1 / (2b + 1)) Phi_b^H g. The bandwidth is inferred from the length.
inline FourierCoefficients coeffs_from_samples(const ComplexVector& g, bool real_valued = false) {
  if (g.size() == 0 || g.size() % 2 == 0) {
    throw std::invalid_argument("sample vector must have odd length 2b+1");
  }
  const int b = static_cast<int>((g.size() - 1) / 2);
  ComplexVector a = DftMatrix(b).adjoint() * g / static_cast<double>(dimension(b));
  if (real_valued) {
    // Symmetrize away rounding so the real-valued flag check passes.
    for (int k = 0; k <= b; ++k) {
      const Complex avg = 0.5 * (a(b + k) + std::conj(a(b - k)));
      a(b + k) = avg;
      a(b - k) = std::conj(avg);
    }
  }
  return FourierCoefficients(std::move(a), real_valued);
}

inline FourierCoefficients coeffs_from_samples(int b, const ComplexVector& g, bool real_valued = false) {
  if (g.size() != dimension(b)) {
    throw std::invalid_argument("sample vector length must equal 2b+1");
  }
  return coeffs_from_samples(g, real_valued);
}

// Random phases and magnitudes, rescaled so that sum |a_k| = 1.
template <class Rng>
FourierCoefficients random_field(int b, Rng& rng, bool real_valued = true) {
  if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
  auto unit = [&rng] { return uniform01(rng); };
  const int dim = dimension(b);
  ComplexVector a(dim);
  if (real_valued) {
    // a_0 must be real: a random sign carries its "phase".
    const double mag0 = unit();
    a(b) = unit() < 0.5 ? -mag0 : mag0;
    for (int k = 1; k <= b; ++k) {
      const double mag = unit();
      const Complex v = std::polar(mag, kTwoPi * unit());
      a(b + k) = v;
      a(b - k) = std::conj(v);
    }
  } else {
    for (int i = 0; i < dim; ++i) {
      const double mag = unit();
      a(i) = std::polar(mag, kTwoPi * unit());
    }
  }
  const double total = a.cwiseAbs().sum();
  if (total > 0.0) {
    a /= total;
  } else {
    a(b) = 1.0;
  }
  return FourierCoefficients(std::move(a), real_valued);
}

// ||g1 - g2||_2^2 over one period, via Parseval.
inline double parseval_distance(const FourierCoefficients& lhs, const FourierCoefficients& rhs) {
  if (lhs.bandwidth() != rhs.bandwidth()) {
    throw std::invalid_argument("bandwidth mismatch");
  }
  return (lhs.coeffs() - rhs.coeffs()).squaredNorm();
}

// JSON: {"b": int, "real_valued": bool, "coeffs": [[re, im], ...]}.
inline nlohmann::json complex_vector_to_json(const ComplexVector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back({v(i).real(), v(i).imag()});
  }
  return arr;
}

inline ComplexVector complex_vector_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("expected an array of [re, im] pairs");
  ComplexVector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& pair = arr[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw std::invalid_argument("coefficient entries must be [re, im] number pairs");
    }
    v(static_cast<Eigen::Index>(i)) = Complex(pair[0].get<double>(), pair[1].get<double>());
  }
  return v;
}

inline nlohmann::json to_json(const FourierCoefficients& c) {
  nlohmann::json j;
  j["b"] = c.bandwidth();
  j["real_valued"] = c.real_valued();
  j["coeffs"] = complex_vector_to_json(c.coeffs());
  return j;
}

inline FourierCoefficients field_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("b") || !j.contains("coeffs")) {
    throw std::invalid_argument("field document needs \"b\" and \"coeffs\"");
  }
  const int b = j.at("b").get<int>();
  if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
  ComplexVector a = complex_vector_from_json(j.at("coeffs"));
  if (a.size() != dimension(b)) {
    throw std::invalid_argument("\"coeffs\" must hold 2b+1 entries");
  }
  const bool real_valued = j.value("real_valued", false);
  return FourierCoefficients(std::move(a), real_valued);
}

}  // namespace orderstat
