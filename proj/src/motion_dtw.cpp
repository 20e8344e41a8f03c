#include <algorithm>
#include <cmath>
#include <limits>

#include "foon/kernels.hpp"
#include "foon/motion.hpp"

namespace foon::motion {

namespace {

constexpr double kClamp = 1e-9;
constexpr double kRangeSlack = 1e-6;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

std::vector<std::string> default_degree_names() { return {"x", "y", "z", "phi", "theta", "psi"}; }
std::vector<std::size_t> default_angular_degrees() { return {3, 4, 5}; }

bool TrialSet::is_angular(std::size_t d) const {
  return std::find(angular.begin(), angular.end(), d) != angular.end();
}

void TrialSet::check() const {
  for (auto d : angular) {
    if (d >= degrees()) throw Error("angular degree index " + std::to_string(d) + " out of range");
  }
  for (std::size_t i = 0; i < trials.size(); ++i) {
    if (static_cast<std::size_t>(trials[i].rows()) != degrees()) {
      throw Error("trial " + std::to_string(i + 1) + " has " + std::to_string(trials[i].rows()) +
                  " degrees, expected " + std::to_string(degrees()));
    }
    if (trials[i].cols() == 0) throw Error("trial " + std::to_string(i + 1) + " is empty");
  }
}

double to_unbounded(double v) {
  if (!(std::abs(v) <= 1.0 + kRangeSlack)) {
    throw RangeError("angular value " + std::to_string(v) + " outside [-1, 1]; angles must be normalized");
  }
  return std::atanh(std::clamp(v, -1.0 + kClamp, 1.0 - kClamp));
}

TrialSet angle_transform(const TrialSet& trials, AngleDirection direction) {
  trials.check();
  TrialSet out = trials;
  for (auto& x : out.trials) {
    for (auto d : out.angular) {
      auto row = x.row(static_cast<Eigen::Index>(d));
      if (direction == AngleDirection::Forward) {
        for (Eigen::Index t = 0; t < row.size(); ++t) row(t) = to_unbounded(row(t));
      } else {
        row = row.array().tanh();
      }
    }
  }
  return out;
}

DtwResult dtw(const Eigen::MatrixXd& trial, const Eigen::MatrixXd& reference) {
  const auto n = static_cast<std::size_t>(trial.cols());
  const auto m = static_cast<std::size_t>(reference.cols());
  const auto dims = trial.rows();
  if (n == 0 || m == 0) throw Error("dtw on an empty sequence");
  if (reference.rows() != dims) throw Error("dtw: degree mismatch");

  const RowMajor ref = reference;  // each degree contiguous over time
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> acc(n * m, inf);
  std::vector<double> local(m);

  for (std::size_t i = 0; i < n; ++i) {
    std::fill(local.begin(), local.end(), 0.0);
    for (Eigen::Index d = 0; d < dims; ++d) {
      kernels::sq_diff_accumulate({ref.row(d).data(), m}, trial(d, static_cast<Eigen::Index>(i)), local);
    }
    double* row = acc.data() + i * m;
    const double* prev = i > 0 ? acc.data() + (i - 1) * m : nullptr;
    for (std::size_t j = 0; j < m; ++j) {
      double best;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else {
        best = inf;
        if (prev && j > 0) best = std::min(best, prev[j - 1]);
        if (prev) best = std::min(best, prev[j]);
        if (j > 0) best = std::min(best, row[j - 1]);
      }
      row[j] = local[j] + best;
    }
  }

  DtwResult result;
  result.cost = acc[n * m - 1];
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  result.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = acc[(i - 1) * m + (j - 1)];
      const double up = acc[(i - 1) * m + j];
      const double left = acc[i * m + (j - 1)];
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    result.path.emplace_back(i, j);
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

Eigen::MatrixXd resample(const Eigen::MatrixXd& trial, std::size_t length) {
  const auto src = trial.cols();
  if (src == 0 || length == 0) throw Error("resample of an empty trial");
  Eigen::MatrixXd out(trial.rows(), static_cast<Eigen::Index>(length));
  if (length == 1 || src == 1) {
    for (Eigen::Index t = 0; t < out.cols(); ++t) out.col(t) = trial.col(0);
    if (length == 1) out.col(0) = trial.col(0);
    return out;
  }
  const double step = static_cast<double>(src - 1) / static_cast<double>(length - 1);
  for (std::size_t k = 0; k < length; ++k) {
    const double pos = static_cast<double>(k) * step;
    auto lo = static_cast<Eigen::Index>(std::floor(pos));
    lo = std::min(lo, src - 1);
    const auto hi = std::min<Eigen::Index>(lo + 1, src - 1);
    const double frac = pos - static_cast<double>(lo);
    out.col(static_cast<Eigen::Index>(k)) = (1.0 - frac) * trial.col(lo) + frac * trial.col(hi);
  }
  return out;
}

namespace {

// Trial samples averaged onto the reference axis along the warping path.
Eigen::MatrixXd warp_onto_reference(const Eigen::MatrixXd& trial, const WarpPath& path, std::size_t length) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(trial.rows(), static_cast<Eigen::Index>(length));
  std::vector<double> hits(length, 0.0);
  for (auto [i, j] : path) {
    out.col(static_cast<Eigen::Index>(j)) += trial.col(static_cast<Eigen::Index>(i));
    hits[j] += 1.0;
  }
  for (std::size_t j = 0; j < length; ++j) out.col(static_cast<Eigen::Index>(j)) /= hits[j];
  return out;
}

}  // namespace

AlignedTrials batch_dtw_align(const TrialSet& trials, const DtwOptions& opts) {
  if (trials.trials.empty()) throw Error("batch alignment needs at least one trial");
  trials.check();

  std::vector<std::size_t> lengths;
  for (const auto& x : trials.trials) lengths.push_back(static_cast<std::size_t>(x.cols()));
  std::vector<std::size_t> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t length = sorted[(sorted.size() - 1) / 2];

  std::size_t seed = 0;
  for (std::size_t i = 1; i < lengths.size(); ++i) {
    const auto gap = [&](std::size_t k) { return lengths[k] > length ? lengths[k] - length : length - lengths[k]; };
    if (gap(i) < gap(seed)) seed = i;
  }

  Eigen::MatrixXd reference = resample(trials.trials[seed], length);
  AlignedTrials out;
  out.degree_names = trials.degree_names;
  out.angular = trials.angular;
  out.length = length;

  for (std::size_t iter = 1; iter <= std::max<std::size_t>(opts.max_iterations, 1); ++iter) {
    out.trials.clear();
    out.paths.clear();
    out.costs.clear();
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(reference.rows(), reference.cols());
    for (const auto& x : trials.trials) {
      auto r = dtw(x, reference);
      out.trials.push_back(warp_onto_reference(x, r.path, length));
      next += out.trials.back();
      out.paths.push_back(std::move(r.path));
      out.costs.push_back(r.cost);
    }
    next /= static_cast<double>(trials.trials.size());
    const double change = kernels::max_abs_diff({next.data(), static_cast<std::size_t>(next.size())},
                                                {reference.data(), static_cast<std::size_t>(reference.size())});
    reference = std::move(next);
    out.iterations = iter;
    if (change < opts.tolerance) break;
  }
  return out;
}

}  // namespace foon::motion
