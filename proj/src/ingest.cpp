#include "foon/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "foon/error.hpp"

namespace foon {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string join(const std::set<std::string>& items, char sep = ',') {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

bool has_reserved(std::string_view s) {
  return s.find_first_of(",{}:") != std::string_view::npos;
}

// Splits a comma list into normalized, non-empty labels.
std::set<std::string> label_set(std::string_view list, const std::string& what,
                                const std::string& source, std::size_t line) {
  std::set<std::string> out;
  for (auto tok : split(list, ',')) {
    auto label = normalize_label(tok);
    if (label.empty()) throw ParseError(source, line, "empty " + what + " in '" + std::string(list) + "'");
    if (has_reserved(label)) throw ParseError(source, line, "reserved character in " + what + " '" + label + "'");
    out.insert(std::move(label));
  }
  return out;
}

std::set<std::string> contents_group(std::string_view field, const std::string& source, std::size_t line) {
  field = trim(field);
  if (field.size() < 2 || field.front() != '{' || field.back() != '}') {
    throw ParseError(source, line, "contents must be written as {a,b,...}, got '" + std::string(field) + "'");
  }
  const auto inner = trim(field.substr(1, field.size() - 2));
  if (inner.empty()) return {};
  return label_set(inner, "content", source, line);
}

std::string object_name(std::string_view raw, const std::string& source, std::size_t line) {
  auto name = normalize_label(raw);
  if (name.empty()) throw ParseError(source, line, "empty object name");
  if (has_reserved(name)) throw ParseError(source, line, "reserved character in object name '" + name + "'");
  return name;
}

long parse_time(std::string_view field, const std::string& source, std::size_t line) {
  field = trim(field);
  if (field.empty()) throw ParseError(source, line, "missing time value");
  long value = 0;
  for (char c : field) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError(source, line, "time '" + std::string(field) + "' is not a non-negative integer");
    }
    value = value * 10 + (c - '0');
    if (value > 1'000'000'000'000L) throw ParseError(source, line, "time value too large");
  }
  return value;
}

struct Block {
  std::size_t first_line = 0;
  std::size_t motion_line = 0;
  bool has_motion = false;
  std::string motion;
  TimeWindow window;
  std::vector<ObjectNode> inputs;
  std::vector<ObjectNode> outputs;
  // Object whose O line has been read but whose S line has not.
  bool pending = false;
  std::string pending_name;
  std::size_t pending_line = 0;
};

void require_no_pending(const Block& b, const std::string& source) {
  if (b.pending) {
    throw ParseError(source, b.pending_line, "object '" + b.pending_name + "' has no S line");
  }
}

}  // namespace

std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool space = false;
  for (char c : trim(raw)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

Subgraph parse_subgraph(std::string_view text, std::string source, UnitOrder order) {
  Subgraph sub{std::move(source), {}};
  const std::string& src = sub.source;

  std::optional<Block> block;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty() || trim(raw).front() == '#') continue;

    const auto fields = split(raw, '\t');
    const auto tag = trim(fields[0]);

    if (tag == "//") {
      if (!block) throw ParseError(src, line_no, "'//' without an open unit");
      require_no_pending(*block, src);
      if (!block->has_motion) throw ParseError(src, block->first_line, "unit has no M line");
      if (block->outputs.empty()) throw ParseError(src, line_no, "unit '" + block->motion + "' has no outputs");
      sub.units.emplace_back(std::move(block->inputs), std::move(block->motion), std::move(block->outputs),
                             block->window);
      block.reset();
      continue;
    }

    if (!block) {
      block.emplace();
      block->first_line = line_no;
    }

    if (tag == "O") {
      require_no_pending(*block, src);
      if (fields.size() < 2) throw ParseError(src, line_no, "O line needs an object name");
      if (fields.size() > 2) throw ParseError(src, line_no, "O line has extra fields");
      block->pending = true;
      block->pending_name = object_name(fields[1], src, line_no);
      block->pending_line = line_no;
    } else if (tag == "S") {
      if (!block->pending) throw ParseError(src, line_no, "S line does not follow an O line");
      if (fields.size() < 2 || fields.size() > 3) {
        throw ParseError(src, line_no, "S line must be S<TAB>states[<TAB>{contents}]");
      }
      ObjectNode node{block->pending_name, label_set(fields[1], "state", src, line_no), {}};
      if (fields.size() == 3) node.contents = contents_group(fields[2], src, line_no);
      block->pending = false;
      if (block->has_motion) {
        block->outputs.push_back(std::move(node));
      } else {
        block->inputs.push_back(std::move(node));
      }
    } else if (tag == "M") {
      require_no_pending(*block, src);
      if (block->has_motion) {
        throw ParseError(src, line_no, "second M line in unit starting at line " + std::to_string(block->first_line));
      }
      if (fields.size() != 4) throw ParseError(src, line_no, "M line must be M<TAB>motion<TAB>start<TAB>end");
      block->motion = normalize_label(fields[1]);
      if (block->motion.empty()) throw ParseError(src, line_no, "empty motion label");
      block->window = {parse_time(fields[2], src, line_no), parse_time(fields[3], src, line_no)};
      if (block->window.start > block->window.end) {
        throw ParseError(src, line_no, "time window start " + std::to_string(block->window.start) + " after end " +
                                           std::to_string(block->window.end));
      }
      if (block->inputs.empty()) throw ParseError(src, line_no, "unit '" + block->motion + "' has no inputs");
      block->has_motion = true;
      block->motion_line = line_no;
    } else {
      throw ParseError(src, line_no, "unknown line tag '" + std::string(tag) + "'");
    }
  }

  if (block) throw ParseError(src, block->first_line, "unit is missing its '//' terminator");

  if (order == UnitOrder::ByTimeWindow) {
    std::stable_sort(sub.units.begin(), sub.units.end(), [](const auto& a, const auto& b) {
      return a.window().start < b.window().start;
    });
  }
  return sub;
}

Subgraph read_subgraph_file(const std::string& path, UnitOrder order) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto stem = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem.resize(dot);
  auto sub = parse_subgraph(buf.str(), path, order);
  sub.source = stem;
  return sub;
}

namespace {

void serialize_object(std::string& out, const ObjectNode& n) {
  out += "O\t" + n.name + "\n";
  out += "S\t" + join(n.states);
  if (!n.contents.empty()) out += "\t{" + join(n.contents) + "}";
  out += "\n";
}

}  // namespace

std::string serialize_unit(const FunctionalUnit& u) {
  std::string out;
  for (const auto& n : u.inputs()) serialize_object(out, n);
  out += "M\t" + u.motion() + "\t" + std::to_string(u.window().start) + "\t" + std::to_string(u.window().end) + "\n";
  for (const auto& n : u.outputs()) serialize_object(out, n);
  out += "//\n";
  return out;
}

std::string serialize_subgraph(const Subgraph& sub) {
  std::string out;
  for (const auto& u : sub.units) out += serialize_unit(u);
  return out;
}

Subgraph graph_units(const FoonGraph& g, std::string source) {
  Subgraph sub{std::move(source), {}};
  sub.units.reserve(g.unit_count());
  for (const auto& su : g.units()) sub.units.push_back(su.unit);
  return sub;
}

ObjectNode parse_object_spec(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    throw Error("object spec '" + std::string(spec) + "' must be name:state1[,state2][:{contents}]");
  }
  ObjectNode node;
  node.name = object_name(parts[0], "goal", 1);
  node.states = label_set(parts[1], "state", "goal", 1);
  if (parts.size() == 3) node.contents = contents_group(parts[2], "goal", 1);
  return node;
}

std::vector<ObjectNode> parse_scene(std::string_view text, const std::string& source) {
  std::vector<ObjectNode> scene;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty() || trim(raw).front() == '#') continue;
    const auto fields = split(raw, '\t');
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(source, line_no, "scene line must be name<TAB>states[<TAB>{contents}]");
    }
    ObjectNode node{object_name(fields[0], source, line_no), label_set(fields[1], "state", source, line_no), {}};
    if (fields.size() == 3) node.contents = contents_group(fields[2], source, line_no);
    scene.push_back(std::move(node));
  }
  return scene;
}

void Lexicon::add(std::string_view canonical_raw, std::string_view variant_raw) {
  const auto canon = normalize_label(canonical_raw);
  const auto variant = normalize_label(variant_raw);
  if (canon.empty() || variant.empty()) throw Error("lexicon entries must be non-empty");
  map_.try_emplace(canon, canon);
  if (variant == canon) return;
  auto [it, inserted] = map_.try_emplace(variant, canon);
  if (!inserted && it->second != canon) {
    if (it->second != variant) {
      throw Error("lexicon: '" + variant + "' is listed under both '" + it->second + "' and '" + canon + "'");
    }
    it->second = canon;  // a former canonical becomes a variant
  }
  resolved_ = false;
}

void Lexicon::resolve() {
  for (auto& [variant, target] : map_) {
    std::size_t steps = 0;
    std::string cur = target;
    while (true) {
      const auto& next = map_.at(cur);
      if (next == cur) break;
      cur = next;
      if (++steps > map_.size()) throw Error("lexicon: cycle through '" + variant + "'");
    }
    target = cur;
  }
  resolved_ = true;
}

std::string Lexicon::canonical(const std::string& label) const {
  if (!resolved_) throw Error("lexicon used before resolve()");
  if (auto it = map_.find(label); it != map_.end()) return it->second;
  return label;
}

bool Lexicon::knows(const std::string& label) const { return map_.count(label) != 0; }

Lexicon parse_lexicon(std::string_view text, const std::string& source) {
  Lexicon lex;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (trim(raw).empty() || trim(raw).front() == '#') continue;
    const auto fields = split(raw, '\t');
    if (normalize_label(fields[0]).empty()) throw ParseError(source, line_no, "empty canonical label");
    lex.add(fields[0], fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      if (normalize_label(fields[i]).empty()) continue;
      try {
        lex.add(fields[0], fields[i]);
      } catch (const Error& e) {
        throw ParseError(source, line_no, e.what());
      }
    }
  }
  lex.resolve();
  return lex;
}

namespace {

struct Normalizer {
  const Lexicon& lex;
  const std::string& file;
  std::vector<ChangeRecord>& records;
  std::set<std::string>& unknown;

  std::string map(const std::string& label) {
    if (!lex.knows(label)) unknown.insert(label);
    return lex.canonical(label);
  }

  ObjectNode object(const ObjectNode& n) {
    ObjectNode out;
    out.name = map(n.name);
    for (const auto& s : n.states) out.states.insert(map(s));
    for (const auto& c : n.contents) out.contents.insert(map(c));
    return out;
  }
};

std::string states_named(const std::vector<ObjectNode>& side, const std::string& name) {
  for (const auto& n : side) {
    if (n.name == name) return join(n.states);
  }
  return {};
}

void record_object_changes(const ObjectNode& before, const ObjectNode& after, bool is_input,
                           const FunctionalUnit& canon_unit, const std::string& file,
                           std::vector<ChangeRecord>& records, const Lexicon& lex) {
  const auto initial = is_input ? join(after.states) : states_named(canon_unit.inputs(), after.name);
  const auto final_state = is_input ? states_named(canon_unit.outputs(), after.name) : join(after.states);
  auto emit = [&](const std::string& old_label) {
    const auto new_label = lex.canonical(old_label);
    if (new_label != old_label) {
      records.push_back({after.name, old_label, new_label, initial, final_state, file, canon_unit.motion()});
    }
  };
  emit(before.name);
  for (const auto& s : before.states) emit(s);
  for (const auto& c : before.contents) emit(c);
}

}  // namespace

NormalizeResult normalize(const Subgraph& sub, const Lexicon& lex) {
  NormalizeResult result;
  result.subgraph.source = sub.source;
  std::set<std::string> unknown;
  Normalizer norm{lex, sub.source, result.records, unknown};

  for (const auto& u : sub.units) {
    FunctionalUnit canon;
    for (const auto& n : u.inputs()) canon.add_input(norm.object(n));
    canon.set_motion(norm.map(u.motion()));
    for (const auto& n : u.outputs()) canon.add_output(norm.object(n));
    canon.set_window(u.window());

    for (std::size_t i = 0; i < u.inputs().size(); ++i) {
      record_object_changes(u.inputs()[i], norm.object(u.inputs()[i]), true, canon, sub.source, result.records,
                            lex);
    }
    if (canon.motion() != u.motion()) {
      result.records.push_back({"", u.motion(), canon.motion(), "", "", sub.source, canon.motion()});
    }
    for (std::size_t i = 0; i < u.outputs().size(); ++i) {
      record_object_changes(u.outputs()[i], norm.object(u.outputs()[i]), false, canon, sub.source, result.records,
                            lex);
    }
    result.subgraph.units.push_back(std::move(canon));
  }
  result.unknown_labels = unknown.size();
  return result;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<ChangeRecord>& records) {
  os << "object,old_id,new_id,initial_state,final_state,file,motion\n";
  for (const auto& r : records) {
    os << csv_field(r.object) << ',' << csv_field(r.old_id) << ',' << csv_field(r.new_id) << ','
       << csv_field(r.initial_state) << ',' << csv_field(r.final_state) << ',' << csv_field(r.file) << ','
       << csv_field(r.motion) << '\n';
  }
}

}  // namespace foon
