// Asymptotic covariances of the quantile vector, the sampled field values and
// the coefficient estimate, plus Monte Carlo checks of those limits.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orderstat/estimator.hpp"
#include "orderstat/field.hpp"
#include "orderstat/io.hpp"
#include "orderstat/parallel.hpp"
#include "orderstat/rng.hpp"
#include "orderstat/sampling.hpp"
#include "orderstat/test_hooks.hpp"

namespace orderstat {

// Tolerance on Im g'(u) for real-valued fields.
inline constexpr double kDerivativeImagTolerance = 1e-10;

// Limit covariance of sqrt(n)(U_{r_l:n} - p_l) with p_l = l s_b:
// K[i][j] = p_i (1 - p_j) for i <= j. Row and column 0 vanish (p_0 = 0).
inline RealMatrix quantile_covariance(int b) {
  if (b < 0) throw std::invalid_argument("bandwidth must be non-negative");
  const int dim = dimension(b);
  const double s = grid_spacing(b);
  RealMatrix k(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const int lo = std::min(i, j);
      const int hi = std::max(i, j);
      k(i, j) = (lo * s) * (1.0 - hi * s);
    }
  }
  return k;
}

// Delta method with the diagonal Jacobian D = diag(g'(l s_b)): K_G = D K_U D.
inline RealMatrix field_sample_covariance(const FourierCoefficients& c) {
  if (!c.real_valued()) {
    throw std::invalid_argument("sample covariance is defined for real-valued fields only");
  }
  const int b = c.bandwidth();
  const int dim = dimension(b);
  Eigen::VectorXd slope(dim);
  for (int l = 0; l < dim; ++l) {
    const Complex d = eval_derivative(c, l * grid_spacing(b));
    if (std::abs(d.imag()) > kDerivativeImagTolerance) {
      throw std::domain_error("derivative of a real-valued field has an imaginary residual");
    }
    slope(l) = d.real();
  }
  return slope.asDiagonal() * quantile_covariance(b) * slope.asDiagonal();
}

struct CoefficientCovariance {
  ComplexMatrix hermitian;  // E[S S^H]
  ComplexMatrix pseudo;     // E[S S^T]
};

// S = Phi_b^H X / (2b+1) with X real of covariance K_G.
inline CoefficientCovariance coeff_covariance(const RealMatrix& k_g) {
  if (k_g.rows() != k_g.cols() || k_g.rows() % 2 == 0) {
    throw std::invalid_argument("K_G must be square with odd dimension 2b+1");
  }
  const int b = static_cast<int>((k_g.rows() - 1) / 2);
  const DftMatrix phi(b);
  const ComplexMatrix adj = phi.adjoint();
  const ComplexMatrix kg = k_g.cast<Complex>();
  const double scale = 1.0 / (static_cast<double>(dimension(b)) * dimension(b));
  CoefficientCovariance out;
  out.hermitian = adj * kg * phi.matrix() * scale;
  out.pseudo = adj * kg * adj.transpose() * scale;
  return out;
}

struct CovarianceBundle {
  int b = 0;
  RealMatrix k_u;
  RealMatrix k_g;
  ComplexMatrix k_a_herm;
  ComplexMatrix k_a_pseudo;
};

inline CovarianceBundle covariance_bundle(const FourierCoefficients& c) {
  CovarianceBundle bundle;
  bundle.b = c.bandwidth();
  bundle.k_u = quantile_covariance(c.bandwidth());
  bundle.k_g = field_sample_covariance(c);
  auto ka = coeff_covariance(bundle.k_g);
  bundle.k_a_herm = std::move(ka.hermitian);
  bundle.k_a_pseudo = std::move(ka.pseudo);
  return bundle;
}

struct PointwiseMoments {
  Complex second_moment;     // lim n E[(G_hat(t) - g(t))^2]
  double abs_second_moment;  // lim n E|G_hat(t) - g(t)|^2
};

inline PointwiseMoments pointwise_variance(const CovarianceBundle& bundle, double t) {
  const ComplexVector basis = fourier_basis(bundle.b, t);
  const Complex second = (basis.transpose() * bundle.k_a_pseudo * basis).value();
  const Complex abs2 = (basis.transpose() * bundle.k_a_herm * basis.conjugate()).value();
  return {second, std::max(0.0, abs2.real())};
}

struct BetaMoments {
  double mean;
  double variance;
};

// U_{r:n} ~ Beta(r, n - r + 1).
inline BetaMoments beta_moments(std::size_t r, std::size_t n) {
  if (r < 1 || r > n) throw std::out_of_range("rank must satisfy 1 <= r <= n");
  const double rd = static_cast<double>(r);
  const double nd = static_cast<double>(n);
  const double mean = rd / (nd + 1.0);
  const double variance = rd * (nd - rd + 1.0) / ((nd + 1.0) * (nd + 1.0) * (nd + 2.0));
  return {mean, variance};
}

// ||empirical - analytic||_F / ||analytic||_F; the absolute distance when the
// analytic matrix is zero.
template <class A, class B>
double frobenius_rel_err(const Eigen::MatrixBase<A>& empirical, const Eigen::MatrixBase<B>& analytic) {
  const double diff = (empirical - analytic).norm();
  const double ref = analytic.norm();
  return ref > 0.0 ? diff / ref : diff;
}

struct QuantileProbe {
  std::size_t rank;
  double p;
};

struct QuantileMoments {
  std::size_t rank = 0;
  double p = 0.0;
  double mean = 0.0;
  double variance = 0.0;         // unbiased sample variance of U_{r:n}
  double variance_stderr = 0.0;  // standard error of that variance
  double mean_stderr = 0.0;
  double n_second_moment = 0.0;  // n * mean (U_{r:n} - p)^2
  BetaMoments beta{0.0, 0.0};
};

namespace detail {

inline QuantileMoments summarize_quantile(const std::vector<double>& draws, std::size_t n, QuantileProbe probe) {
  QuantileMoments q;
  q.rank = probe.rank;
  q.p = probe.p;
  q.beta = beta_moments(probe.rank, n);
  const double m = static_cast<double>(draws.size());
  double sum = 0.0;
  double sq_about_p = 0.0;
  for (double u : draws) {
    sum += u;
    sq_about_p += (u - probe.p) * (u - probe.p);
  }
  q.mean = sum / m;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double u : draws) {
    const double d = (u - q.mean) * (u - q.mean);
    m2 += d;
    m4 += d * d;
  }
  q.variance = m2 / (m - 1.0);
  const double pop_var = m2 / m;
  q.mean_stderr = std::sqrt(q.variance / m);
  q.variance_stderr = std::sqrt(std::max(0.0, m4 / m - pop_var * pop_var) / m);
  q.n_second_moment = static_cast<double>(n) * sq_about_p / m;
  return q;
}

}  // namespace detail

// Monte Carlo moments of U_{r:n} for each probe; trial i draws from stream
// (seed, n, i).
inline std::vector<QuantileMoments> order_statistic_moments(std::size_t n, const std::vector<QuantileProbe>& probes,
                                                            std::size_t trials, std::uint64_t seed,
                                                            unsigned workers = 0) {
  if (trials < 2) throw std::invalid_argument("need at least 2 trials");
  std::vector<std::size_t> ranks;
  for (const auto& p : probes) ranks.push_back(p.rank);
  std::vector<std::size_t> order(probes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
  std::vector<std::size_t> sorted_ranks;
  for (std::size_t i : order) sorted_ranks.push_back(ranks[i]);

  auto per_trial = map_trials(
      trials,
      [&](std::size_t i) {
        Engine rng = make_engine(seed, {n, i});
        const DeploymentDraw d = deploy(n, rng);
        return test_hooks::order_statistics(d, sorted_ranks);
      },
      workers);

  std::vector<QuantileMoments> out(probes.size());
  std::vector<double> column(trials);
  for (std::size_t j = 0; j < order.size(); ++j) {
    for (std::size_t i = 0; i < trials; ++i) column[i] = per_trial[i][j];
    out[order[j]] = detail::summarize_quantile(column, n, probes[order[j]]);
  }
  return out;
}

struct CltReport {
  int b = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  CovarianceBundle analytic;
  ComplexMatrix empirical_k_a_herm;
  ComplexMatrix empirical_k_a_pseudo;
  double frobenius_rel_err = 0.0;         // Hermitian covariance
  double pseudo_frobenius_rel_err = 0.0;  // pseudo-covariance
  RealMatrix empirical_k_u;               // all 2b+1 quantiles
  double quantile_frobenius_rel_err = 0.0;  // quantiles l >= 1 only
  std::vector<QuantileMoments> per_quantile_moments;
  // t = 0 sits on the first quantile, where the first-order limit is zero.
  PointwiseMoments analytic_pointwise_t0{};
  PointwiseMoments empirical_pointwise_t0{};
  double midpoint_t = 0.0;  // s_b / 2, between the first two grid points
  PointwiseMoments analytic_pointwise_mid{};
  PointwiseMoments empirical_pointwise_mid{};
};

// Runs `trials` deploy -> observe -> estimate pipelines on a fixed field and
// compares the second moments of sqrt(n)(A_hat - a) and sqrt(n)(U - u) with
// their limits. Trial i uses stream (seed, b, n, i).
inline CltReport clt_empirical_check(const FourierCoefficients& field, std::size_t n, std::size_t trials,
                                     std::uint64_t seed, unsigned workers = 0) {
  const int b = field.bandwidth();
  const int dim = dimension(b);
  if (n < static_cast<std::size_t>(dim)) throw std::invalid_argument("need n >= 2b+1");
  if (trials < 2) throw std::invalid_argument("need at least 2 trials");

  CltReport report;
  report.b = b;
  report.n = n;
  report.trials = trials;
  report.analytic = covariance_bundle(field);

  const std::vector<std::size_t> ranks = quantile_indices(n, b);
  const double root_n = std::sqrt(static_cast<double>(n));

  struct Trial {
    ComplexVector scaled_error;
    std::vector<double> locations;
  };
  auto per_trial = map_trials(
      trials,
      [&](std::size_t i) {
        Engine rng = make_engine(seed, {static_cast<std::uint64_t>(b), n, i});
        const DeploymentDraw d = deploy(n, rng);
        const CoefficientEstimate e = estimate_coeffs(observe(field, d), b);
        return Trial{root_n * (e.coeffs() - field.coeffs()), test_hooks::order_statistics(d, ranks)};
      },
      workers);

  ComplexMatrix herm = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix pseudo = ComplexMatrix::Zero(dim, dim);
  RealMatrix ku = RealMatrix::Zero(dim, dim);
  Complex pt_second = 0.0, mid_second = 0.0;
  double pt_abs = 0.0, mid_abs = 0.0;
  const double s = grid_spacing(b);
  report.midpoint_t = 0.5 * s;
  const ComplexVector mid_basis = fourier_basis(b, report.midpoint_t);
  for (const Trial& t : per_trial) {
    herm += t.scaled_error * t.scaled_error.adjoint();
    pseudo += t.scaled_error * t.scaled_error.transpose();
    Eigen::VectorXd du(dim);
    for (int l = 0; l < dim; ++l) du(l) = root_n * (t.locations[static_cast<std::size_t>(l)] - l * s);
    ku += du * du.transpose();
    const Complex g0 = t.scaled_error.sum();  // Phi(0)^T S
    pt_second += g0 * g0;
    pt_abs += std::norm(g0);
    const Complex gm = mid_basis.cwiseProduct(t.scaled_error).sum();
    mid_second += gm * gm;
    mid_abs += std::norm(gm);
  }
  const double inv = 1.0 / static_cast<double>(trials);
  report.empirical_k_a_herm = herm * inv;
  report.empirical_k_a_pseudo = pseudo * inv;
  report.empirical_k_u = ku * inv;
  report.empirical_pointwise_t0 = {pt_second * inv, pt_abs * inv};
  report.analytic_pointwise_t0 = pointwise_variance(report.analytic, 0.0);
  report.empirical_pointwise_mid = {mid_second * inv, mid_abs * inv};
  report.analytic_pointwise_mid = pointwise_variance(report.analytic, report.midpoint_t);

  report.frobenius_rel_err = frobenius_rel_err(report.empirical_k_a_herm, report.analytic.k_a_herm);
  report.pseudo_frobenius_rel_err = frobenius_rel_err(report.empirical_k_a_pseudo, report.analytic.k_a_pseudo);
  if (dim > 1) {
    report.quantile_frobenius_rel_err = frobenius_rel_err(report.empirical_k_u.bottomRightCorner(dim - 1, dim - 1),
                                                          report.analytic.k_u.bottomRightCorner(dim - 1, dim - 1));
  }

  std::vector<double> column(trials);
  for (int l = 0; l < dim; ++l) {
    for (std::size_t i = 0; i < trials; ++i) column[i] = per_trial[i].locations[static_cast<std::size_t>(l)];
    report.per_quantile_moments.push_back(
        detail::summarize_quantile(column, n, {ranks[static_cast<std::size_t>(l)], l * s}));
  }
  return report;
}

inline nlohmann::json to_json(const QuantileMoments& q) {
  return {{"rank", q.rank},
          {"p", q.p},
          {"mean", q.mean},
          {"variance", q.variance},
          {"variance_stderr", q.variance_stderr},
          {"n_second_moment", q.n_second_moment},
          {"beta_mean", q.beta.mean},
          {"beta_variance", q.beta.variance}};
}

inline nlohmann::json to_json(const CovarianceBundle& bundle) {
  return {{"b", bundle.b},
          {"K_U", io::matrix_to_json(bundle.k_u)},
          {"K_G", io::matrix_to_json(bundle.k_g)},
          {"K_A_herm", io::matrix_to_json(bundle.k_a_herm)},
          {"K_A_pseudo", io::matrix_to_json(bundle.k_a_pseudo)}};
}

inline nlohmann::json to_json(const CltReport& r) {
  nlohmann::json j;
  j["b"] = r.b;
  j["n"] = r.n;
  j["trials"] = r.trials;
  j["analytic"] = to_json(r.analytic);
  j["empirical_K_A_herm"] = io::matrix_to_json(r.empirical_k_a_herm);
  j["empirical_K_A_pseudo"] = io::matrix_to_json(r.empirical_k_a_pseudo);
  j["empirical_K_U"] = io::matrix_to_json(r.empirical_k_u);
  j["frobenius_rel_err"] = r.frobenius_rel_err;
  j["pseudo_frobenius_rel_err"] = r.pseudo_frobenius_rel_err;
  j["quantile_frobenius_rel_err"] = r.quantile_frobenius_rel_err;
  nlohmann::json moments = nlohmann::json::array();
  for (const auto& q : r.per_quantile_moments) moments.push_back(to_json(q));
  j["per_quantile_moments"] = std::move(moments);
  const auto pw = [](const PointwiseMoments& m) {
    return nlohmann::json{{"second_moment", {m.second_moment.real(), m.second_moment.imag()}},
                          {"abs_second_moment", m.abs_second_moment}};
  };
  j["pointwise_t0"] = {{"analytic", pw(r.analytic_pointwise_t0)}, {"empirical", pw(r.empirical_pointwise_t0)}};
  j["pointwise_midpoint"] = {{"t", r.midpoint_t},
                             {"analytic", pw(r.analytic_pointwise_mid)},
                             {"empirical", pw(r.empirical_pointwise_mid)}};
  return j;
}

}  // namespace orderstat
