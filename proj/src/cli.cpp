#include "foon/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "foon/analysis.hpp"
#include "foon/ingest.hpp"
#include "foon/merge.hpp"
#include "foon/motion.hpp"
#include "foon/retrieval.hpp"

namespace foon::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
}

struct IngestArgs {
  std::vector<std::string> files;
  std::string lexicon;
  std::string records;
  std::string out;
};

// Parses and normalizes every file; writes the records CSV when asked.
std::vector<Subgraph> ingest(const IngestArgs& a, std::ostream& err) {
  Lexicon lex;
  if (!a.lexicon.empty()) lex = parse_lexicon(read_text(a.lexicon), a.lexicon);
  std::vector<Subgraph> subs;
  std::vector<ChangeRecord> records;
  for (const auto& f : a.files) {
    auto result = normalize(read_subgraph_file(f), lex);
    err << f << ": " << result.subgraph.units.size() << " units, " << result.records.size() << " relabeled, "
        << result.unknown_labels << " labels not in lexicon\n";
    records.insert(records.end(), result.records.begin(), result.records.end());
    subs.push_back(std::move(result.subgraph));
  }
  if (!a.records.empty()) {
    std::ostringstream csv;
    write_records_csv(csv, records);
    emit(csv.str(), a.records, err);
  }
  return subs;
}

void add_ingest_options(CLI::App* cmd, IngestArgs& a) {
  cmd->add_option("files", a.files, "Subgraph files")->required()->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", a.lexicon, "Lexicon file (canonical<TAB>variant...)")->check(CLI::ExistingFile);
  cmd->add_option("--records", a.records, "Write the change-records CSV here");
  cmd->add_option("-o,--out", a.out, "Output file (default: stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Functional object-oriented network toolkit", "foon"};
  app.require_subcommand(1);

  IngestArgs parse_args;
  auto* parse_cmd = app.add_subcommand("parse", "Parse and normalize subgraph files");
  add_ingest_options(parse_cmd, parse_args);

  IngestArgs merge_args;
  auto* merge_cmd = app.add_subcommand("merge", "Merge subgraphs into a universal network file");
  add_ingest_options(merge_cmd, merge_args);

  std::string foon_file, out_file;

  std::string measure = "degree";
  std::optional<double> alpha;
  double beta = 1.0;
  bool collapse = false, directed = false, histogram = false;
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
  auto* analyze_cmd = app.add_subcommand("analyze", "Centrality and motion-frequency reports");
  analyze_cmd->add_option("-f,--foon", foon_file, "Universal network file")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--measure", measure, "Centrality measure")
      ->check(CLI::IsMember({"degree", "eigenvector", "katz"}));
  analyze_cmd->add_option("--alpha", alpha, "Katz attenuation (default 0.85/lambda_max)");
  analyze_cmd->add_option("--beta", beta, "Katz baseline score");
  analyze_cmd->add_flag("--collapse-states", collapse, "Merge object nodes sharing a name");
  analyze_cmd->add_flag("--directed", directed, "Eigenvector centrality on the directed projection");
  analyze_cmd->add_option("--tolerance", tolerance, "Power-iteration tolerance");
  analyze_cmd->add_option("--max-iterations", max_iterations, "Power-iteration limit");
  analyze_cmd->add_flag("--histogram", histogram, "Report motion instance counts instead of centrality");
  analyze_cmd->add_option("-o,--out", out_file, "Output file (default: stdout)");

  std::string goal_spec, scene_file, costs_file;
  bool first_found = false, as_json = false;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Retrieve a task tree for a goal object");
  retrieve_cmd->add_option("-f,--foon", foon_file, "Universal network file")->required()->check(CLI::ExistingFile);
  retrieve_cmd->add_option("-g,--goal", goal_spec, "Goal as name:state1[,state2]")->required();
  retrieve_cmd->add_option("-s,--scene", scene_file, "Scene inventory file")->required()->check(CLI::ExistingFile);
  retrieve_cmd->add_option("--costs", costs_file, "Motion cost CSV (motion,cost)")->check(CLI::ExistingFile);
  retrieve_cmd->add_flag("--first-found", first_found, "Return the first executable tree, skip cost minimization");
  retrieve_cmd->add_flag("--json", as_json, "Write ordered steps as JSON");
  retrieve_cmd->add_option("-o,--out", out_file, "Output file (default: stdout)");

  auto* dot_cmd = app.add_subcommand("export-dot", "Write the network as Graphviz DOT");
  dot_cmd->add_option("-f,--foon", foon_file, "Universal network file")->required()->check(CLI::ExistingFile);
  dot_cmd->add_option("-o,--out", out_file, "Output file (default: stdout)");

  std::string trial_dir;
  std::optional<std::size_t> harmonics;
  std::optional<double> variance;
  auto* learn_cmd = app.add_subcommand("motion-learn", "Learn a motion model from a directory of trials");
  learn_cmd->add_option("trials", trial_dir, "Directory of trial CSV files")->required()->check(CLI::ExistingDirectory);
  auto* m_opt = learn_cmd->add_option("-M,--harmonics", harmonics, "Number of motion harmonics");
  learn_cmd->add_option("--variance", variance, "Explained-variance threshold (default 0.95)")->excludes(m_opt);
  learn_cmd->add_option("-o,--out", out_file, "Model JSON output (default: stdout)");

  std::string model_file;
  std::vector<std::string> constraint_specs;
  double lambda = 1e-6;
  auto* gen_cmd = app.add_subcommand("motion-generate", "Generate a constrained trajectory from a model");
  gen_cmd->add_option("--model", model_file, "Model JSON")->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--constraint", constraint_specs, "d=<name>,t=<int>,v=<real> (repeatable)");
  gen_cmd->add_option("--lambda", lambda, "Regularization weight")->check(CLI::PositiveNumber);
  gen_cmd->add_option("-o,--out", out_file, "Trajectory CSV output (default: stdout)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse_cmd) {
      auto subs = ingest(parse_args, err);
      std::string text;
      for (const auto& s : subs) {
        if (subs.size() > 1) text += "# " + s.source + "\n";
        text += serialize_subgraph(s);
      }
      emit(text, parse_args.out, out);
    } else if (*merge_cmd) {
      auto subs = ingest(merge_args, err);
      auto [graph, stats] = merge_all(subs);
      err << "merged " << stats.units_examined << " units: " << stats.units_added << " added, "
          << stats.units_duplicated << " duplicates, " << graph.object_count() << " object nodes, "
          << graph.motion_count() << " motion nodes, " << graph.edge_count() << " edges\n";
      for (const auto& d : stats.duplicates) err << "  duplicate " << d << "\n";
      emit(serialize_subgraph(graph_units(graph)), merge_args.out, out);
    } else if (*analyze_cmd) {
      const auto graph = load_graph(foon_file);
      std::ostringstream report;
      if (histogram) {
        write_histogram_csv(report, motion_frequency(graph));
      } else {
        auto og = one_mode_projection(graph);
        if (collapse) og = collapse_states(og);
        switch (parse_measure(measure)) {
          case Measure::Degree:
            write_centrality_csv(report, degree_centrality(og));
            break;
          case Measure::Eigenvector:
            write_centrality_csv(
                report, eigenvector_centrality(og, {tolerance, max_iterations,
                                                    directed ? EigenMode::Directed : EigenMode::Symmetrized}));
            break;
          case Measure::Katz: {
            KatzOptions k;
            k.alpha = alpha;
            k.beta = beta;
            const auto r = katz_centrality(og, k);
            err << "katz: alpha=" << r.parameters.at("alpha") << " beta=" << beta
                << " lambda_max=" << r.parameters.at("lambda_max") << "\n";
            write_centrality_csv(report, r);
            break;
          }
        }
      }
      emit(report.str(), out_file, out);
    } else if (*retrieve_cmd) {
      const auto graph = load_graph(foon_file);
      const auto goal = parse_object_spec(goal_spec);
      const auto scene = parse_scene(read_text(scene_file), scene_file);
      MotionCostTable costs;
      if (!costs_file.empty()) costs = parse_cost_table(read_text(costs_file), costs_file);
      RetrievalOptions opts;
      opts.mode = first_found ? SearchMode::FirstFound : SearchMode::CostMinimal;
      const auto tree = retrieve_task_tree(graph, goal, scene, costs, opts);
      err << "task tree: " << tree.units.size() << " units, cost " << tree.cost
          << (tree.proven_optimal ? "" : " (search budget reached; not proven minimal)") << "\n";
      if (as_json) {
        emit(task_tree_json(tree), out_file, out);
      } else {
        emit(serialize_subgraph({"task-tree", tree.units}), out_file, out);
      }
    } else if (*dot_cmd) {
      emit(export_dot(load_graph(foon_file)), out_file, out);
    } else if (*learn_cmd) {
      const auto trials = motion::read_trial_directory(trial_dir);
      motion::HarmonicSelection sel;
      sel.count = harmonics;
      if (variance) sel.variance = *variance;
      const auto model = motion::learn_from_trials(trials, sel);
      err << "learned from " << trials.trials.size() << " trials: T=" << model.length << " M=" << model.harmonics
          << "\n";
      emit(motion::model_to_json(model), out_file, out);
    } else if (*gen_cmd) {
      const auto model = motion::model_from_json(read_text(model_file));
      motion::ConstraintSet cs;
      cs.lambda = lambda;
      for (const auto& spec : constraint_specs) cs.entries.push_back(motion::parse_constraint(spec, model));
      const auto traj = motion::generate_trajectory(model, cs);
      emit(motion::format_trial_csv(traj.values, model.degree_names, model.angular), out_file, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace foon::cli
