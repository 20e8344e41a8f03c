#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "foon/motion.hpp"
#include "json.hpp"

namespace foon::motion {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r' && c != ' ' && c != '\t') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool angular_name(const std::string& name) { return name == "phi" || name == "theta" || name == "psi"; }

double parse_number(const std::string& s, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(source, line, "'" + s + "' is not a finite number");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Eigen::MatrixXd parse_trial_csv(const std::string& text, const std::string& source,
                                std::vector<std::string>* degree_names) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  long last_t = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = split_csv(line);
    if (header.empty()) {
      if (fields.size() < 2 || fields[0] != "t") throw ParseError(source, line_no, "header must be t,<degree>,...");
      header = fields;
      columns.resize(header.size() - 1);
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(source, line_no, "expected " + std::to_string(header.size()) + " fields");
    }
    const double tv = parse_number(fields[0], source, line_no);
    const auto t = static_cast<long>(tv);
    if (static_cast<double>(t) != tv) throw ParseError(source, line_no, "t must be an integer");
    if (last_t == 0 ? t != 1 : t <= last_t) {
      throw ParseError(source, line_no, last_t == 0 ? "t must start at 1" : "t must strictly increase");
    }
    last_t = t;
    for (std::size_t d = 1; d < fields.size(); ++d) {
      double v = parse_number(fields[d], source, line_no);
      if (angular_name(header[d])) v /= std::numbers::pi;
      columns[d - 1].push_back(v);
    }
  }
  if (header.empty()) throw ParseError(source, line_no, "missing header");
  if (columns.front().empty()) throw ParseError(source, line_no, "trial has no samples");

  Eigen::MatrixXd out(static_cast<Eigen::Index>(columns.size()), static_cast<Eigen::Index>(columns.front().size()));
  for (std::size_t d = 0; d < columns.size(); ++d) {
    for (std::size_t t = 0; t < columns[d].size(); ++t) {
      out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(t)) = columns[d][t];
    }
  }
  if (degree_names) degree_names->assign(header.begin() + 1, header.end());
  return out;
}

Eigen::MatrixXd read_trial_csv(const std::string& path, std::vector<std::string>* degree_names) {
  return parse_trial_csv(read_file(path), path, degree_names);
}

TrialSet read_trial_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("no .csv trials in '" + dir + "'");

  TrialSet set;
  for (const auto& f : files) {
    std::vector<std::string> names;
    set.trials.push_back(read_trial_csv(f.string(), &names));
    if (set.degree_names.empty()) {
      set.degree_names = names;
    } else if (names != set.degree_names) {
      throw Error("trial '" + f.string() + "' has a different header");
    }
  }
  for (std::size_t d = 0; d < set.degree_names.size(); ++d) {
    if (angular_name(set.degree_names[d])) set.angular.push_back(d);
  }
  return set;
}

std::string format_trial_csv(const Eigen::MatrixXd& values, const std::vector<std::string>& degree_names,
                             const std::vector<std::size_t>& angular) {
  std::ostringstream os;
  os << std::setprecision(17) << 't';
  for (const auto& n : degree_names) os << ',' << n;
  os << '\n';
  for (Eigen::Index t = 0; t < values.cols(); ++t) {
    os << (t + 1);
    for (Eigen::Index d = 0; d < values.rows(); ++d) {
      const bool ang = std::find(angular.begin(), angular.end(), static_cast<std::size_t>(d)) != angular.end();
      os << ',' << (ang ? values(d, t) * std::numbers::pi : values(d, t));
    }
    os << '\n';
  }
  return os.str();
}

std::string model_to_json(const MotionModel& model) {
  using nlohmann::json;
  const auto dims = model.degrees();
  const auto m = static_cast<Eigen::Index>(model.harmonics);
  const auto len = static_cast<Eigen::Index>(model.length);
  std::vector<double> mean, harmonics, mu, sigma;
  for (std::size_t d = 0; d < dims; ++d) {
    const auto di = static_cast<Eigen::Index>(d);
    for (Eigen::Index t = 0; t < len; ++t) mean.push_back(model.mean(di, t));
    for (Eigen::Index k = 0; k < m; ++k) {
      for (Eigen::Index t = 0; t < len; ++t) harmonics.push_back(model.basis[d](k, t));
      mu.push_back(model.mu[d](k));
      for (Eigen::Index j = 0; j < m; ++j) sigma.push_back(model.sigma[d](k, j));
    }
  }
  json doc = {{"degree_names", model.degree_names},
              {"angular_degrees", model.angular},
              {"T", model.length},
              {"M", model.harmonics},
              {"mean", mean},
              {"harmonics", harmonics},
              {"mu", mu},
              {"sigma", sigma}};
  return doc.dump() + "\n";
}

MotionModel model_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("model file: ") + e.what());
  }
  MotionModel model;
  try {
    model.degree_names = doc.at("degree_names").get<std::vector<std::string>>();
    model.angular = doc.at("angular_degrees").get<std::vector<std::size_t>>();
    model.length = doc.at("T").get<std::size_t>();
    model.harmonics = doc.at("M").get<std::size_t>();
    const auto mean = doc.at("mean").get<std::vector<double>>();
    const auto harmonics = doc.at("harmonics").get<std::vector<double>>();
    const auto mu = doc.at("mu").get<std::vector<double>>();
    const auto sigma = doc.at("sigma").get<std::vector<double>>();

    const auto dims = model.degree_names.size();
    const auto m = model.harmonics;
    const auto len = model.length;
    if (mean.size() != dims * len || harmonics.size() != dims * m * len || mu.size() != dims * m ||
        sigma.size() != dims * m * m) {
      throw Error("model file: array sizes do not match D, M and T");
    }
    for (auto a : model.angular) {
      if (a >= dims) throw Error("model file: angular degree out of range");
    }
    const auto mi = static_cast<Eigen::Index>(m);
    const auto li = static_cast<Eigen::Index>(len);
    model.mean.resize(static_cast<Eigen::Index>(dims), li);
    std::size_t hi = 0, ui = 0, si = 0, ti = 0;
    for (std::size_t d = 0; d < dims; ++d) {
      for (Eigen::Index t = 0; t < li; ++t) model.mean(static_cast<Eigen::Index>(d), t) = mean[ti++];
      Eigen::MatrixXd basis(mi, li);
      Eigen::VectorXd muv(mi);
      Eigen::MatrixXd sig(mi, mi);
      for (Eigen::Index k = 0; k < mi; ++k) {
        for (Eigen::Index t = 0; t < li; ++t) basis(k, t) = harmonics[hi++];
        muv(k) = mu[ui++];
        for (Eigen::Index j = 0; j < mi; ++j) sig(k, j) = sigma[si++];
      }
      model.basis.push_back(std::move(basis));
      model.mu.push_back(std::move(muv));
      model.sigma.push_back(std::move(sig));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("model file: ") + e.what());
  }
  return model;
}

Constraint parse_constraint(const std::string& spec, const MotionModel& model) {
  Constraint c;
  bool have_d = false, have_t = false, have_v = false;
  std::istringstream in(spec);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw Error("constraint '" + spec + "': expected key=value pairs");
    const auto key = part.substr(0, eq);
    const auto value = part.substr(eq + 1);
    if (key == "d") {
      const auto it = std::find(model.degree_names.begin(), model.degree_names.end(), value);
      if (it == model.degree_names.end()) throw Error("constraint '" + spec + "': unknown degree '" + value + "'");
      c.degree = static_cast<std::size_t>(it - model.degree_names.begin());
      have_d = true;
    } else if (key == "t") {
      const double t = parse_number(value, "constraint", 1);
      if (t < 1 || t != std::floor(t)) throw Error("constraint '" + spec + "': t must be a positive integer");
      c.time = static_cast<std::size_t>(t);
      have_t = true;
    } else if (key == "v") {
      c.value = parse_number(value, "constraint", 1);
      have_v = true;
    } else {
      throw Error("constraint '" + spec + "': unknown key '" + key + "'");
    }
  }
  if (!have_d || !have_t || !have_v) throw Error("constraint '" + spec + "' needs d=, t= and v=");
  if (model.is_angular(c.degree)) c.value /= std::numbers::pi;
  return c;
}

}  // namespace foon::motion
