#pragma once

// Centrality on the object projection and motion-instance statistics.

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "foon/error.hpp"
#include "foon/graph.hpp"

namespace foon {

enum class Measure { Degree, Eigenvector, Katz };

std::string to_string(Measure m);
Measure parse_measure(const std::string& s);

struct CentralityReport {
  Measure measure = Measure::Degree;
  std::vector<std::string> labels;  // parallel to scores, projection node order
  std::vector<double> scores;
  std::map<std::string, double> parameters;
  std::size_t iterations = 0;

  /// (label, score) pairs, highest score first, ties by label.
  std::vector<std::pair<std::string, double>> ranked() const;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, CentralityReport last)
      : Error(what), last_(std::move(last)) {}
  const CentralityReport& last_iterate() const noexcept { return last_; }

 private:
  CentralityReport last_;
};

/// in-degree + out-degree, counting multiplicities.
CentralityReport degree_centrality(const ObjectGraph& og);

enum class EigenMode {
  Symmetrized,  // dominant eigenvector of A + A^T
  Directed,     // dominant eigenvector of A^T (in-edges confer score)
};

struct EigenOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  EigenMode mode = EigenMode::Symmetrized;
};

/// Power iteration on the shifted matrix (B + I), B per mode; the shift keeps
/// the Perron root strictly dominant so bipartite-like spectra still converge.
/// Scores are non-negative with unit Euclidean norm.
CentralityReport eigenvector_centrality(const ObjectGraph& og, const EigenOptions& opts = {});

struct SpectralRadius {
  double value = 0.0;
  bool nilpotent = false;  // the projection has no directed cycle
};

/// Perron root of the directed multiplicity matrix. Exactly 0 for acyclic
/// projections; otherwise the Collatz-Wielandt upper bound at convergence.
SpectralRadius spectral_radius(const ObjectGraph& og);

struct KatzOptions {
  std::optional<double> alpha;  // default 0.85 / lambda_max, or 0.1 when nilpotent
  double beta = 1.0;
  double tolerance = 1e-13;
  std::size_t max_iterations = 1000000;
};

/// Solves x = alpha * A^T x + beta * 1 by fixed-point iteration.
/// Throws Error when alpha is negative or not below 1 / lambda_max.
CentralityReport katz_centrality(const ObjectGraph& og, const KatzOptions& opts = {});

struct MotionHistogram {
  std::vector<std::pair<std::string, std::size_t>> counts;  // descending, ties alphabetical
  std::size_t total = 0;
};

MotionHistogram motion_frequency(const FoonGraph& g);

void write_centrality_csv(std::ostream& os, const CentralityReport& report);
void write_histogram_csv(std::ostream& os, const MotionHistogram& hist);

}  // namespace foon
