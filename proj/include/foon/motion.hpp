#pragma once

// Motion learning and generation from demonstration trials.
//
// Trials are D x T_i matrices (one row per degree). Angular degrees are kept
// in normalized units in [-1, 1] and moved through atanh before alignment
// and learning, so the learned model lives in an unbounded space; generation
// maps them back with tanh.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "foon/error.hpp"

namespace foon::motion {

/// Default degree layout: location x, y, z then Euler angles phi, theta, psi.
std::vector<std::string> default_degree_names();
std::vector<std::size_t> default_angular_degrees();

struct TrialSet {
  std::vector<Eigen::MatrixXd> trials;  // each D x T_i
  std::vector<std::string> degree_names;
  std::vector<std::size_t> angular;  // indices into degree_names

  std::size_t degrees() const noexcept { return degree_names.size(); }
  bool is_angular(std::size_t d) const;

  /// Throws Error unless every trial has D rows and at least one column.
  void check() const;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

enum class AngleDirection { Forward, Inverse };

/// Forward: atanh on angular degrees after clamping to [-1 + 1e-9, 1 - 1e-9];
/// values beyond 1 + 1e-6 in magnitude throw RangeError. Inverse: tanh.
TrialSet angle_transform(const TrialSet& trials, AngleDirection direction);

/// atanh with the same clamp and range check, for single values.
double to_unbounded(double normalized);

using WarpPath = std::vector<std::pair<std::size_t, std::size_t>>;  // (trial index, reference index), 0-based

struct DtwResult {
  WarpPath path;
  double cost = 0.0;  // accumulated squared-Euclidean cost along the path
};

/// Full DTW with squared-Euclidean local cost over all degrees and the
/// symmetric step set {(1,0), (0,1), (1,1)}. Ties on backtrack prefer the diagonal.
DtwResult dtw(const Eigen::MatrixXd& trial, const Eigen::MatrixXd& reference);

/// Linear interpolation of each degree onto `length` evenly spaced samples.
Eigen::MatrixXd resample(const Eigen::MatrixXd& trial, std::size_t length);

struct DtwOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 20;
};

struct AlignedTrials {
  std::vector<Eigen::MatrixXd> trials;  // each D x T
  std::vector<WarpPath> paths;
  std::vector<double> costs;
  std::vector<std::string> degree_names;
  std::vector<std::size_t> angular;
  std::size_t length = 0;
  std::size_t iterations = 0;
};

/// Iterative batch alignment: the reference starts as the trial whose length is
/// closest to the lower-median length (resampled to that length); each round
/// warps every trial onto the reference and replaces the reference with the
/// mean of the warped trials, until it moves less than the tolerance.
AlignedTrials batch_dtw_align(const TrialSet& trials, const DtwOptions& opts = {});

/// Either a fixed harmonic count or the smallest count reaching an explained-variance fraction.
struct HarmonicSelection {
  std::optional<std::size_t> count;
  double variance = 0.95;
};

struct MotionModel {
  std::vector<std::string> degree_names;
  std::vector<std::size_t> angular;
  std::size_t length = 0;     // T
  std::size_t harmonics = 0;  // M
  Eigen::MatrixXd mean;                    // D x T
  std::vector<Eigen::MatrixXd> basis;      // per degree, M x T, orthonormal rows
  std::vector<Eigen::VectorXd> mu;         // per degree, M
  std::vector<Eigen::MatrixXd> sigma;      // per degree, M x M

  // Learning diagnostics; not persisted.
  std::vector<Eigen::MatrixXd> weights;            // per degree, N x M
  std::vector<Eigen::VectorXd> explained_variance; // per degree, cumulative fraction for 1..M

  std::size_t degrees() const noexcept { return degree_names.size(); }
  bool is_angular(std::size_t d) const;

  /// mean(d, .) + w^T basis(d) (unbounded space, no tanh).
  Eigen::VectorXd reconstruct(std::size_t degree, const Eigen::VectorXd& w, double offset = 0.0) const;
};

/// Discretized functional PCA per degree over aligned trials. The weight
/// Gaussian uses the maximum-likelihood (1/N) covariance.
MotionModel learn_motion_model(const AlignedTrials& aligned, const HarmonicSelection& select = {});

/// angle_transform(Forward) -> batch_dtw_align -> learn_motion_model.
MotionModel learn_from_trials(const TrialSet& raw, const HarmonicSelection& select = {},
                              const DtwOptions& dtw_opts = {});

struct Constraint {
  std::size_t degree = 0;
  std::size_t time = 1;  // 1-based sample index
  double value = 0.0;    // output units; normalized [-1, 1] on angular degrees
};

struct ConstraintSet {
  std::vector<Constraint> entries;
  double lambda = 1e-6;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

struct GeneratedTrajectory {
  Eigen::MatrixXd values;  // D x T, output units (tanh applied on angular degrees)
  std::vector<Eigen::VectorXd> weights;
  std::vector<double> offsets;  // c0 per degree
};

/// Ridge added to each weight covariance before inversion.
inline constexpr double kCovarianceRidge = 1e-9;

/// Closed-form constrained generation: unconstrained degrees use the mean
/// weights; constrained degrees minimize the squared constraint misfit plus
/// lambda times the Mahalanobis distance of the weights from their mean.
GeneratedTrajectory generate_trajectory(const MotionModel& model, const ConstraintSet& constraints);

/// Objective minimized for one constrained degree, at weights `w` and offset `c0`.
double constraint_loss(const MotionModel& model, const ConstraintSet& constraints, std::size_t degree,
                       const Eigen::VectorXd& w, double c0);

// File formats.

/// CSV with header "t,<degree>,..."; t must start at 1 and strictly increase.
/// Angular columns are radians and are divided by pi.
Eigen::MatrixXd read_trial_csv(const std::string& path, std::vector<std::string>* degree_names = nullptr);
Eigen::MatrixXd parse_trial_csv(const std::string& text, const std::string& source,
                                std::vector<std::string>* degree_names = nullptr);

/// Every *.csv in `dir`, in filename order. Angular degrees are those named phi, theta or psi.
TrialSet read_trial_directory(const std::string& dir);

/// Inverse of parse_trial_csv: angular rows multiplied by pi, t from 1.
std::string format_trial_csv(const Eigen::MatrixXd& values, const std::vector<std::string>& degree_names,
                             const std::vector<std::size_t>& angular);

std::string model_to_json(const MotionModel& model);
MotionModel model_from_json(const std::string& text);

/// "d=<name>,t=<int>,v=<real>" with v in file units (radians on angular degrees).
Constraint parse_constraint(const std::string& spec, const MotionModel& model);

}  // namespace foon::motion
