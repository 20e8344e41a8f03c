#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "foon/kernels.hpp"
#include "foon/motion.hpp"

namespace foon::motion {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::span<const double> row_span(const RowMajor& m, Eigen::Index r) {
  return {m.row(r).data(), static_cast<std::size_t>(m.cols())};
}

struct DegreePca {
  Eigen::VectorXd eigenvalues;  // descending, Gram-matrix scale
  RowMajor directions;          // rank x T, unit-norm rows
};

// Principal directions of the centered N x T curve matrix, computed through
// the N x N Gram matrix: if G v = s v then C^T v / sqrt(s) is a unit
// eigenvector of the T x T scatter C^T C with the same eigenvalue.
// Eigenvalues at or below `noise` (rounding left over from centering) count as zero.
DegreePca principal_directions(const RowMajor& centered, double noise) {
  const auto n = centered.rows();
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      gram(a, b) = gram(b, a) = kernels::dot(row_span(centered, a), row_span(centered, b));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  DegreePca out;
  out.eigenvalues = solver.eigenvalues().reverse().cwiseMax(0.0);
  const Eigen::MatrixXd vecs = solver.eigenvectors().rowwise().reverse();

  const double trace = out.eigenvalues.sum();
  const double floor = std::max(trace * 1e-13, noise);
  Eigen::Index rank = 0;
  while (rank < out.eigenvalues.size() && out.eigenvalues(rank) > floor) ++rank;
  out.eigenvalues.tail(out.eigenvalues.size() - rank).setZero();

  out.directions.resize(rank, centered.cols());
  for (Eigen::Index k = 0; k < rank; ++k) {
    Eigen::VectorXd dir = centered.transpose() * vecs.col(k);
    out.directions.row(k) = dir.transpose() / dir.norm();
  }
  return out;
}

// Modified Gram-Schmidt; rows past `filled` are completed from the standard basis.
void orthonormalize(RowMajor& rows, Eigen::Index filled) {
  const auto count = rows.rows();
  const auto len = rows.cols();
  Eigen::Index next_axis = 0;
  for (Eigen::Index k = 0; k < count; ++k) {
    while (true) {
      Eigen::VectorXd v;
      if (k < filled) {
        v = rows.row(k).transpose();
      } else {
        v = Eigen::VectorXd::Unit(len, next_axis++);
      }
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < k; ++j) v -= rows.row(j).dot(v) * rows.row(j).transpose();
      }
      const double norm = v.norm();
      if (norm > 1e-6) {
        rows.row(k) = v.transpose() / norm;
        break;
      }
      if (k < filled) filled = k;  // degenerate direction; replace it from the basis
    }
  }
}

// Sign convention: the largest-magnitude sample of each harmonic is positive.
void fix_signs(RowMajor& rows) {
  for (Eigen::Index k = 0; k < rows.rows(); ++k) {
    Eigen::Index arg = 0;
    rows.row(k).cwiseAbs().maxCoeff(&arg);
    if (rows(k, arg) < 0) rows.row(k) *= -1.0;
  }
}

}  // namespace

bool MotionModel::is_angular(std::size_t d) const {
  return std::find(angular.begin(), angular.end(), d) != angular.end();
}

Eigen::VectorXd MotionModel::reconstruct(std::size_t degree, const Eigen::VectorXd& w, double offset) const {
  const auto d = static_cast<Eigen::Index>(degree);
  Eigen::VectorXd y = mean.row(d).transpose();
  if (harmonics > 0) y += basis[degree].transpose() * w;
  y.array() += offset;
  return y;
}

MotionModel learn_motion_model(const AlignedTrials& aligned, const HarmonicSelection& select) {
  const auto n = aligned.trials.size();
  if (n == 0) throw Error("motion model needs at least one trial");
  const auto dims = aligned.degree_names.size();
  const auto length = aligned.length;
  for (const auto& y : aligned.trials) {
    if (static_cast<std::size_t>(y.rows()) != dims || static_cast<std::size_t>(y.cols()) != length) {
      throw Error("aligned trials must all be D x T");
    }
  }
  const std::size_t max_m = std::min(n - 1, length);
  if (select.count) {
    if (*select.count >= 1 && n < 2) throw Error("at least 2 trials are needed to learn harmonics");
    if (*select.count > max_m) {
      throw Error("harmonic count " + std::to_string(*select.count) + " exceeds min(N-1, T) = " +
                  std::to_string(max_m));
    }
  } else if (!(select.variance > 0.0 && select.variance <= 1.0)) {
    throw Error("variance threshold must be in (0, 1]");
  }

  MotionModel model;
  model.degree_names = aligned.degree_names;
  model.angular = aligned.angular;
  model.length = length;
  model.mean = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(length));

  std::vector<RowMajor> centered(dims);
  std::vector<DegreePca> pcas(dims);
  std::size_t harmonics = select.count.value_or(0);
  for (std::size_t d = 0; d < dims; ++d) {
    const auto di = static_cast<Eigen::Index>(d);
    RowMajor curves(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(length));
    for (std::size_t i = 0; i < n; ++i) curves.row(static_cast<Eigen::Index>(i)) = aligned.trials[i].row(di);
    const Eigen::RowVectorXd mean = curves.colwise().mean();
    model.mean.row(di) = mean;
    const double raw_scale = curves.squaredNorm();
    curves.rowwise() -= mean;
    pcas[d] = principal_directions(curves, 1e-24 * raw_scale);
    centered[d] = std::move(curves);

    if (!select.count) {
      const auto& ev = pcas[d].eigenvalues;
      const double total = ev.sum();
      std::size_t k = 0;
      if (total > 0) {
        double acc = 0.0;
        while (k < static_cast<std::size_t>(ev.size()) && acc < select.variance * total) acc += ev(static_cast<Eigen::Index>(k++));
      }
      harmonics = std::max(harmonics, k);
    }
  }
  harmonics = std::min(harmonics, max_m);
  model.harmonics = harmonics;
  const auto m = static_cast<Eigen::Index>(harmonics);

  for (std::size_t d = 0; d < dims; ++d) {
    RowMajor basis(m, static_cast<Eigen::Index>(length));
    const auto available = std::min<Eigen::Index>(m, pcas[d].directions.rows());
    if (available > 0) basis.topRows(available) = pcas[d].directions.topRows(available);
    orthonormalize(basis, available);
    fix_signs(basis);

    Eigen::MatrixXd weights(static_cast<Eigen::Index>(n), m);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
      for (Eigen::Index k = 0; k < m; ++k) weights(i, k) = kernels::dot(row_span(centered[d], i), row_span(basis, k));
    }
    Eigen::VectorXd mu = weights.colwise().mean().transpose();
    const Eigen::MatrixXd dev = weights.rowwise() - mu.transpose();
    Eigen::MatrixXd sigma = (dev.transpose() * dev) / static_cast<double>(n);
    sigma = 0.5 * (sigma + sigma.transpose());

    const auto& ev = pcas[d].eigenvalues;
    const double total = ev.sum();
    Eigen::VectorXd explained(m);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (k < ev.size()) acc += ev(k);
      explained(k) = total > 0 ? acc / total : 1.0;
    }

    model.basis.push_back(Eigen::MatrixXd(basis));
    model.weights.push_back(std::move(weights));
    model.mu.push_back(std::move(mu));
    model.sigma.push_back(std::move(sigma));
    model.explained_variance.push_back(std::move(explained));
  }
  return model;
}

MotionModel learn_from_trials(const TrialSet& raw, const HarmonicSelection& select, const DtwOptions& dtw_opts) {
  return learn_motion_model(batch_dtw_align(angle_transform(raw, AngleDirection::Forward), dtw_opts), select);
}

namespace {

void check_constraints(const MotionModel& model, const ConstraintSet& cs) {
  if (!(cs.lambda > 0.0) || !std::isfinite(cs.lambda)) throw Error("lambda must be a finite positive value");
  for (const auto& c : cs.entries) {
    if (c.degree >= model.degrees()) throw Error("constraint on unknown degree index " + std::to_string(c.degree));
    if (c.time < 1 || c.time > model.length) {
      throw Error("constraint time " + std::to_string(c.time) + " outside [1, " + std::to_string(model.length) + "]");
    }
    if (!std::isfinite(c.value)) throw Error("constraint value must be finite");
  }
}

double target_value(const MotionModel& model, const Constraint& c) {
  return model.is_angular(c.degree) ? to_unbounded(c.value) : c.value;
}

Eigen::MatrixXd regularized_precision(const MotionModel& model, std::size_t degree) {
  const auto m = static_cast<Eigen::Index>(model.harmonics);
  Eigen::MatrixXd cov = model.sigma[degree] + kCovarianceRidge * Eigen::MatrixXd::Identity(m, m);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw SingularSystem("weight covariance is not positive definite");
  return llt.solve(Eigen::MatrixXd::Identity(m, m));
}

}  // namespace

double constraint_loss(const MotionModel& model, const ConstraintSet& constraints, std::size_t degree,
                       const Eigen::VectorXd& w, double c0) {
  check_constraints(model, constraints);
  double misfit = 0.0;
  for (const auto& c : constraints.entries) {
    if (c.degree != degree) continue;
    const auto t = static_cast<Eigen::Index>(c.time - 1);
    double pred = model.mean(static_cast<Eigen::Index>(degree), t) + c0;
    if (model.harmonics > 0) pred += w.dot(model.basis[degree].col(t));
    const double r = target_value(model, c) - pred;
    misfit += r * r;
  }
  double prior = 0.0;
  if (model.harmonics > 0) {
    const Eigen::VectorXd dev = w - model.mu[degree];
    prior = dev.dot(regularized_precision(model, degree) * dev);
  }
  return 0.5 * misfit + 0.5 * constraints.lambda * prior;
}

GeneratedTrajectory generate_trajectory(const MotionModel& model, const ConstraintSet& constraints) {
  check_constraints(model, constraints);
  const auto dims = model.degrees();
  const auto m = static_cast<Eigen::Index>(model.harmonics);

  GeneratedTrajectory out;
  out.values.resize(static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(model.length));
  out.weights.resize(dims);
  out.offsets.assign(dims, 0.0);

  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<Eigen::Index> times;
    std::vector<double> residuals;  // e_s - mean(d, t_s)
    for (const auto& c : constraints.entries) {
      if (c.degree != d) continue;
      const auto t = static_cast<Eigen::Index>(c.time - 1);
      times.push_back(t);
      residuals.push_back(target_value(model, c) - model.mean(static_cast<Eigen::Index>(d), t));
    }

    Eigen::VectorXd w = model.mu[d];
    double offset = 0.0;
    if (!times.empty()) {
      const auto s = static_cast<double>(times.size());
      Eigen::VectorXd g_sum = Eigen::VectorXd::Zero(m);
      double f_sum = 0.0;
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (m > 0) g_sum += model.basis[d].col(times[k]);
        f_sum += residuals[k];
      }
      if (m > 0) {
        const Eigen::VectorXd g_bar = g_sum / s;
        const double f_bar = f_sum / s;
        const Eigen::MatrixXd precision = regularized_precision(model, d);
        Eigen::MatrixXd a = constraints.lambda * precision;
        Eigen::VectorXd b = constraints.lambda * (precision * model.mu[d]);
        for (std::size_t k = 0; k < times.size(); ++k) {
          const Eigen::VectorXd gc = model.basis[d].col(times[k]) - g_bar;
          a.noalias() += gc * gc.transpose();
          b += (residuals[k] - f_bar) * gc;
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
        const double rcond = ldlt.rcond();
        if (ldlt.info() != Eigen::Success || !(rcond > 1e-15)) {
          std::ostringstream msg;
          msg << "constraint system for degree '" << model.degree_names[d] << "' is singular (rcond " << rcond << ")";
          throw SingularSystem(msg.str());
        }
        w = ldlt.solve(b);
      }
      offset = (f_sum - (m > 0 ? w.dot(g_sum) : 0.0)) / s;
    }

    Eigen::VectorXd y = model.reconstruct(d, w, offset);
    if (model.is_angular(d)) y = y.array().tanh();
    out.values.row(static_cast<Eigen::Index>(d)) = y.transpose();
    out.weights[d] = std::move(w);
    out.offsets[d] = offset;
  }
  return out;
}

}  // namespace foon::motion
