#pragma once

// Synthetic demonstration data for the motion tests.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "foon/motion.hpp"

namespace foon::testing {

inline double bell(double s, double centre = 0.5, double width = 0.12) {
  const double z = (s - centre) / width;
  return std::exp(-0.5 * z * z);
}

inline double smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }

/// Pouring-like trials in normalized units: large planar (x, y) motion from a
/// start to a target, a small lift in z, and a tilt bell on phi. Lengths are
/// spread around `median_length`, which is the lower median by construction.
inline motion::TrialSet pouring_trials(std::size_t count, std::size_t median_length, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::uniform_real_distribution<double> warp(0.85, 1.15);

  std::vector<long> offsets;
  const long below = static_cast<long>((count - 1) / 2);
  for (long k = below; k >= 1; --k) offsets.push_back(-2 * k);
  offsets.push_back(0);
  for (long k = 1; offsets.size() < count; ++k) offsets.push_back(2 * k);

  motion::TrialSet set;
  set.degree_names = motion::default_degree_names();
  set.angular = motion::default_angular_degrees();
  for (std::size_t i = 0; i < count; ++i) {
    const auto len = static_cast<Eigen::Index>(static_cast<long>(median_length) + offsets[i]);
    const double x0 = 0.8 + 0.05 * jitter(rng), x1 = 0.2 + 0.05 * jitter(rng);
    const double y0 = 0.4 + 0.05 * jitter(rng), y1 = 0.35 + 0.05 * jitter(rng);
    const double lift = 0.05 + 0.01 * jitter(rng);
    const double tilt = 0.35 + 0.03 * jitter(rng);
    const double p = warp(rng);
    Eigen::MatrixXd x(6, len);
    for (Eigen::Index t = 0; t < len; ++t) {
      const double s = std::pow(static_cast<double>(t) / static_cast<double>(len - 1), p);
      x(0, t) = x0 + (x1 - x0) * smoothstep(s);
      x(1, t) = y0 + (y1 - y0) * smoothstep(s) + 0.08 * std::sin(std::numbers::pi * s);
      x(2, t) = lift * bell(s, 0.4, 0.2);
      x(3, t) = tilt * bell(s, 0.6, 0.1);
      x(4, t) = 0.02 * std::sin(2 * std::numbers::pi * s);
      x(5, t) = 0.01 * s;
    }
    set.trials.push_back(std::move(x));
  }
  return set;
}

/// Aligned trials of the form mean + sum_j a_ij * phi_j with orthonormal phi
/// (rank k per degree), so k harmonics reproduce every trial exactly.
inline motion::AlignedTrials rank_k_trials(std::size_t n, std::size_t length, std::size_t k, std::size_t degrees,
                                           unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  motion::AlignedTrials out;
  out.length = length;
  for (std::size_t d = 0; d < degrees; ++d) out.degree_names.push_back("d" + std::to_string(d));
  const auto len = static_cast<Eigen::Index>(length);

  std::vector<Eigen::MatrixXd> phi(degrees);
  std::vector<Eigen::VectorXd> mean(degrees);
  for (std::size_t d = 0; d < degrees; ++d) {
    Eigen::MatrixXd raw(len, static_cast<Eigen::Index>(k));
    for (Eigen::Index r = 0; r < raw.rows(); ++r)
      for (Eigen::Index c = 0; c < raw.cols(); ++c) raw(r, c) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    phi[d] = qr.householderQ() * Eigen::MatrixXd::Identity(len, static_cast<Eigen::Index>(k));
    mean[d].resize(len);
    for (Eigen::Index t = 0; t < len; ++t) mean[d](t) = std::sin(0.05 * static_cast<double>(t) + static_cast<double>(d));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::MatrixXd y(static_cast<Eigen::Index>(degrees), len);
    for (std::size_t d = 0; d < degrees; ++d) {
      Eigen::VectorXd curve = mean[d];
      for (std::size_t j = 0; j < k; ++j) curve += (3.0 / static_cast<double>(j + 1)) * normal(rng) * phi[d].col(static_cast<Eigen::Index>(j));
      y.row(static_cast<Eigen::Index>(d)) = curve.transpose();
    }
    out.trials.push_back(std::move(y));
  }
  return out;
}

}  // namespace foon::testing
