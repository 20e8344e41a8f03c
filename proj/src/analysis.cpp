#include "foon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <ostream>
#include <vector>

#include "foon/kernels.hpp"

namespace foon {

namespace {

CentralityReport blank_report(const ObjectGraph& og, Measure m) {
  CentralityReport r;
  r.measure = m;
  r.labels = og.labels;
  r.scores.assign(og.size(), 0.0);
  return r;
}

// Kahn's algorithm over the projection; self-loops count as cycles.
bool acyclic(const ObjectGraph& og) {
  std::vector<std::size_t> indeg(og.size(), 0);
  std::vector<std::vector<std::size_t>> out(og.size());
  for (const auto& [e, _] : og.edges) {
    out[e.first].push_back(e.second);
    ++indeg[e.second];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < og.size(); ++i) {
    if (indeg[i] == 0) ready.push_back(i);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const auto v = ready.back();
    ready.pop_back();
    ++seen;
    for (auto w : out[v]) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  return seen == og.size();
}

// Row-major storage whose rows are the rows of A^T, i.e. the columns of A.
std::vector<double> transposed_rows(const Eigen::MatrixXd& a) {
  // Eigen is column-major, so its raw buffer already lists A's columns.
  return {a.data(), a.data() + a.size()};
}

void normalize_l2(std::vector<double>& v) {
  const double norm = std::sqrt(kernels::sum_sq(v));
  if (norm > 0) {
    for (auto& x : v) x /= norm;
  }
}

}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::Degree:
      return "degree";
    case Measure::Eigenvector:
      return "eigenvector";
    case Measure::Katz:
      return "katz";
  }
  return "unknown";
}

Measure parse_measure(const std::string& s) {
  if (s == "degree") return Measure::Degree;
  if (s == "eigenvector") return Measure::Eigenvector;
  if (s == "katz") return Measure::Katz;
  throw Error("unknown centrality measure '" + s + "'");
}

std::vector<std::pair<std::string, double>> CentralityReport::ranked() const {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out.emplace_back(labels[i], scores[i]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

CentralityReport degree_centrality(const ObjectGraph& og) {
  auto r = blank_report(og, Measure::Degree);
  for (const auto& [e, mult] : og.edges) {
    r.scores[e.first] += static_cast<double>(mult);
    r.scores[e.second] += static_cast<double>(mult);
  }
  return r;
}

CentralityReport eigenvector_centrality(const ObjectGraph& og, const EigenOptions& opts) {
  if (og.size() == 0) throw Error("eigenvector centrality of an empty graph");
  auto r = blank_report(og, Measure::Eigenvector);
  r.parameters["tolerance"] = opts.tolerance;
  r.parameters["max_iterations"] = static_cast<double>(opts.max_iterations);
  r.parameters["symmetrized"] = opts.mode == EigenMode::Symmetrized ? 1.0 : 0.0;

  const auto n = og.size();
  const Eigen::MatrixXd a = og.multiplicity_matrix();
  Eigen::MatrixXd b = opts.mode == EigenMode::Symmetrized ? Eigen::MatrixXd(a + a.transpose()) : a;
  b.diagonal().array() += 1.0;
  // Rows of the iteration matrix (B^T for the directed case; B is symmetric otherwise).
  const auto rows = transposed_rows(b);

  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    kernels::matvec_rows(rows, n, n, x, y);
    normalize_l2(y);
    const double delta = kernels::max_abs_diff(x, y);
    x.swap(y);
    if (delta < opts.tolerance) {
      r.scores = x;
      r.iterations = it;
      return r;
    }
  }
  r.scores = x;
  r.iterations = opts.max_iterations;
  throw NonConvergence("eigenvector centrality did not converge in " + std::to_string(opts.max_iterations) +
                           " iterations",
                       std::move(r));
}

SpectralRadius spectral_radius(const ObjectGraph& og) {
  if (acyclic(og)) return {0.0, true};
  const auto n = og.size();
  Eigen::MatrixXd m = og.multiplicity_matrix();
  m.diagonal().array() += 1.0;
  const auto rows = transposed_rows(m);

  // A + I is non-negative with a positive diagonal, so iterates stay positive and
  // max_i (Mx)_i / x_i bounds the Perron root from above.
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  double upper = 0.0;
  for (std::size_t it = 0; it < 200000; ++it) {
    kernels::matvec_rows(rows, n, n, x, y);
    upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) upper = std::max(upper, y[i] / x[i]);
    normalize_l2(y);
    const double delta = kernels::max_abs_diff(x, y);
    x.swap(y);
    if (delta < 1e-14) break;
  }
  return {std::max(upper - 1.0, 0.0), false};
}

CentralityReport katz_centrality(const ObjectGraph& og, const KatzOptions& opts) {
  auto r = blank_report(og, Measure::Katz);
  const auto radius = spectral_radius(og);
  const double alpha =
      opts.alpha.value_or(radius.value > 0 ? 0.85 / radius.value : 0.1);
  r.parameters["alpha"] = alpha;
  r.parameters["beta"] = opts.beta;
  r.parameters["lambda_max"] = radius.value;

  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error("katz: alpha must be a finite value >= 0");
  if (!radius.nilpotent && alpha * radius.value >= 1.0) {
    std::ostringstream msg;
    msg << "katz: alpha " << alpha << " is not below 1/lambda_max = " << 1.0 / radius.value;
    throw Error(msg.str());
  }

  const auto n = og.size();
  if (n == 0) return r;
  const auto rows = transposed_rows(og.multiplicity_matrix());

  std::vector<double> x(n, opts.beta);
  std::vector<double> y(n);
  std::vector<double> ones(n, 1.0);
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    kernels::matvec_rows(rows, n, n, x, y);
    for (auto& v : y) v *= alpha;
    kernels::axpy(opts.beta, ones, y);
    const double delta = kernels::max_abs_diff(x, y);
    double scale = 1.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    x.swap(y);
    if (delta <= opts.tolerance * scale) {
      kernels::matvec_rows(rows, n, n, x, y);
      double residual = 0.0;
      for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(x[i] - alpha * y[i] - opts.beta));
      r.scores = x;
      r.iterations = it;
      r.parameters["residual"] = residual;
      return r;
    }
  }
  r.scores = x;
  r.iterations = opts.max_iterations;
  throw NonConvergence("katz centrality did not converge", std::move(r));
}

MotionHistogram motion_frequency(const FoonGraph& g) {
  std::map<std::string, std::size_t> counts;
  for (const auto& m : g.motions()) ++counts[m.label];
  MotionHistogram h;
  h.counts.assign(counts.begin(), counts.end());
  std::stable_sort(h.counts.begin(), h.counts.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  h.total = g.motion_count();
  return h;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_centrality_csv(std::ostream& os, const CentralityReport& report) {
  os << "node,score\n";
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(12);
  for (const auto& [label, score] : report.ranked()) os << csv_field(label) << ',' << score << '\n';
  os.flags(flags);
  os.precision(prec);
}

void write_histogram_csv(std::ostream& os, const MotionHistogram& hist) {
  os << "motion,count\n";
  for (const auto& [label, count] : hist.counts) os << csv_field(label) << ',' << count << '\n';
}

}  // namespace foon
