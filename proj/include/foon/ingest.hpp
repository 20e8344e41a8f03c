#pragma once

// Subgraph text files, label normalization against a lexicon, and the
// change-records file written while relabeling.
//
// File format (tab separated, '#' lines and blank lines ignored):
//
//   O<TAB>name
//   S<TAB>state[,state...][<TAB>{content,content...}]
//   M<TAB>motion<TAB>start<TAB>end
//   ...
//   //
//
// Objects before the M line are inputs, objects after it are outputs.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "foon/graph.hpp"

namespace foon {

struct Subgraph {
  std::string source;
  std::vector<FunctionalUnit> units;
};

/// Lowercase, trim, and collapse internal whitespace runs to one space.
std::string normalize_label(std::string_view raw);

enum class UnitOrder {
  ByTimeWindow,  // stable sort on window start (subgraph files)
  AsWritten,     // keep file order (universal network files)
};

Subgraph parse_subgraph(std::string_view text, std::string source,
                        UnitOrder order = UnitOrder::ByTimeWindow);

Subgraph read_subgraph_file(const std::string& path, UnitOrder order = UnitOrder::ByTimeWindow);

std::string serialize_unit(const FunctionalUnit& u);
std::string serialize_subgraph(const Subgraph& sub);

/// Units of a graph in insertion order, as a subgraph named `source`.
Subgraph graph_units(const FoonGraph& g, std::string source = "universal");

/// Parsed "name:state1[,state2][:{c1,c2}]" (CLI goal syntax).
ObjectNode parse_object_spec(std::string_view spec);

/// One object per line: name<TAB>state1[,state2][<TAB>{contents}].
std::vector<ObjectNode> parse_scene(std::string_view text, const std::string& source = "scene");

/// Variant -> canonical label map with chains resolved at load.
class Lexicon {
 public:
  /// Registers `variant` as an alias of `canonical`. Both are normalized first.
  void add(std::string_view canonical, std::string_view variant);

  /// Resolves chains (a->b, b->c gives a->c). Throws Error on cycles or on a
  /// variant claimed by two different canonicals.
  void resolve();

  /// Canonical form; unknown labels come back unchanged.
  std::string canonical(const std::string& label) const;
  bool knows(const std::string& label) const;

  std::size_t size() const noexcept { return map_.size(); }

 private:
  std::map<std::string, std::string> map_;
  bool resolved_ = true;
};

/// Lines: canonical<TAB>variant[<TAB>variant...]. Returned resolved.
Lexicon parse_lexicon(std::string_view text, const std::string& source = "lexicon");

struct ChangeRecord {
  std::string object;
  std::string old_id;
  std::string new_id;
  std::string initial_state;
  std::string final_state;
  std::string file;
  std::string motion;
};

struct NormalizeResult {
  Subgraph subgraph;
  std::vector<ChangeRecord> records;
  std::size_t unknown_labels = 0;  // distinct labels absent from the lexicon
};

NormalizeResult normalize(const Subgraph& sub, const Lexicon& lex);

void write_records_csv(std::ostream& os, const std::vector<ChangeRecord>& records);

}  // namespace foon
