#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "foon/error.hpp"
#include "foon/ingest.hpp"
#include "support/generators.hpp"

using namespace foon;

namespace {

const char* kChop =
    "O\ttomato\nS\twhole\nO\tknife\nS\tclean\nM\tchop\t5\t20\n"
    "O\ttomato\nS\tchopped\nO\tknife\nS\tdirty\n//\n";

std::size_t error_line(const std::string& text) {
  try {
    parse_subgraph(text, "t");
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

bool same_subgraph(const Subgraph& a, const Subgraph& b) {
  if (a.units.size() != b.units.size()) return false;
  for (std::size_t i = 0; i < a.units.size(); ++i) {
    if (!unit_equals(a.units[i], b.units[i]) || a.units[i].window() != b.units[i].window()) return false;
    if (a.units[i].inputs() != b.units[i].inputs() || a.units[i].outputs() != b.units[i].outputs()) return false;
  }
  return true;
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(std::string(FOON_DATA_DIR) + "/corpus")) {
    out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("parse the reference unit block") {
  const auto sub = parse_subgraph(kChop, "chop");
  REQUIRE(sub.units.size() == 1);
  const auto& u = sub.units[0];
  CHECK(u.motion() == "chop");
  CHECK(u.window() == TimeWindow{5, 20});
  CHECK(u.inputs() == std::vector<ObjectNode>{{"tomato", {"whole"}, {}}, {"knife", {"clean"}, {}}});
  CHECK(u.outputs() == std::vector<ObjectNode>{{"tomato", {"chopped"}, {}}, {"knife", {"dirty"}, {}}});
}

TEST_CASE("parse details") {
  CHECK(parse_subgraph("", "e").units.empty());
  CHECK(parse_subgraph("# only a comment\n\n", "e").units.empty());

  const auto sub = parse_subgraph("O\tBowl\nS\tContains , Mixed\t{ Egg,salt }\r\nM\tStir\t1\t2\nO\tbowl\nS\tmixed\n//\n", "x");
  REQUIRE(sub.units.size() == 1);
  CHECK(sub.units[0].inputs()[0] == ObjectNode{"bowl", {"contains", "mixed"}, {"egg", "salt"}});
  CHECK(sub.units[0].motion() == "stir");

  SUBCASE("units sorted by window start") {
    const std::string late = "O\ta\nS\ts\nM\tlate\t50\t60\nO\tb\nS\ts\n//\n";
    const std::string early = "O\ta\nS\ts\nM\tearly\t1\t2\nO\tb\nS\ts\n//\n";
    const auto sorted = parse_subgraph(late + early, "x");
    CHECK(sorted.units[0].motion() == "early");
    const auto written = parse_subgraph(late + early, "x", UnitOrder::AsWritten);
    CHECK(written.units[0].motion() == "late");
  }
}

TEST_CASE("parse errors carry the line number") {
  CHECK(error_line("O\ta\nS\ts\nO\tb\nS\ts\n//\n") == 1);                      // missing M line
  CHECK(error_line("\n\nO\ta\nS\ts\nM\tm\t1\t2\nO\tb\nS\ts\n") == 3);         // missing terminator
  CHECK(error_line("O\ta\nS\ts\nM\tm\t1\t2\nM\tn\t1\t2\nO\tb\nS\ts\n//\n") == 4);  // second M
  CHECK(error_line("X\ta\n") == 1);                                          // unknown tag
  CHECK(error_line("S\ts\n") == 1);                                          // S without O
  CHECK(error_line("O\ta\nO\tb\n") == 1);                                    // O without S
  CHECK(error_line("M\tm\t1\t2\nO\tb\nS\ts\n//\n") == 1);                    // no inputs
  CHECK(error_line("O\ta\nS\ts\nM\tm\t1\t2\n//\n") == 4);                    // no outputs
  CHECK(error_line("O\ta\nS\ts\nM\tm\t1.5\t2\nO\tb\nS\ts\n//\n") == 3);      // non-integer
  CHECK(error_line("O\ta\nS\ts\nM\tm\t9\t2\nO\tb\nS\ts\n//\n") == 3);        // inverted
  CHECK(error_line("O\ta:b\nS\ts\nM\tm\t1\t2\nO\tb\nS\ts\n//\n") == 1);      // reserved char
  CHECK(error_line("//\n") == 1);

  try {
    parse_subgraph("X\ta\n", "file.foon");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("file.foon:1") != std::string::npos);
    CHECK(e.source() == "file.foon");
  }
}

TEST_CASE("serialize round trip") {
  Subgraph empty{"e", {}};
  CHECK(serialize_subgraph(empty).empty());
  CHECK(parse_subgraph(serialize_subgraph(empty), "e").units.empty());

  const auto one = parse_subgraph(kChop, "chop");
  CHECK(same_subgraph(parse_subgraph(serialize_subgraph(one), "chop"), one));

  for (const auto& path : corpus_files()) {
    CAPTURE(path);
    const auto sub = read_subgraph_file(path);
    CHECK(!sub.units.empty());
    const auto text = serialize_subgraph(sub);
    const auto again = parse_subgraph(text, sub.source);
    CHECK(same_subgraph(sub, again));
    CHECK(serialize_subgraph(again) == text);
  }

  testing::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto sub = testing::random_subgraph(rng, testing::uniform(rng, 0, 12), "r");
    CHECK(same_subgraph(parse_subgraph(serialize_subgraph(sub), "r"), sub));
  }
}

TEST_CASE("object spec and scene parsing") {
  CHECK(parse_object_spec("ribs:cooked") == ObjectNode{"ribs", {"cooked"}, {}});
  CHECK(parse_object_spec("Bowl:contains:{salt,egg}") == ObjectNode{"bowl", {"contains"}, {"egg", "salt"}});
  CHECK_THROWS_AS(parse_object_spec("ribs"), Error);
  CHECK_THROWS_AS(parse_object_spec("ribs:"), Error);

  const auto scene = parse_scene("# scene\nribs\traw\nbowl\tcontains\t{salt}\n");
  CHECK(scene.size() == 2);
  CHECK(scene[1].contents == std::set<std::string>{"salt"});
  CHECK_THROWS_AS(parse_scene("ribs\n"), ParseError);
}

TEST_CASE("lexicon") {
  Lexicon lex;
  lex.add("pot", "saucepan");
  lex.add("saucepan", "sauce pan");
  lex.resolve();
  CHECK(lex.canonical("sauce pan") == "pot");
  CHECK(lex.canonical("saucepan") == "pot");
  CHECK(lex.canonical("pot") == "pot");
  CHECK(lex.canonical("kettle") == "kettle");
  CHECK_FALSE(lex.knows("kettle"));

  Lexicon conflict;
  conflict.add("pot", "pan");
  CHECK_THROWS_AS(conflict.add("skillet", "pan"), Error);

  const auto parsed = parse_lexicon("# c\nPot\tSaucepan\t Sauce  Pan \n");
  CHECK(parsed.canonical("sauce pan") == "pot");
  CHECK_THROWS_AS(parse_lexicon("pot\tpan\nskillet\tpan\n"), ParseError);
}

TEST_CASE("normalize") {
  Lexicon lex;
  lex.add("pot", "saucepan");
  lex.resolve();

  SUBCASE("relabel produces one record") {
    const auto sub = parse_subgraph("O\tsaucepan\nS\tempty\nM\tfill\t1\t2\nO\tpot\nS\tfull\n//\n", "soup");
    const auto r = normalize(sub, lex);
    CHECK(r.subgraph.units[0].inputs()[0].name == "pot");
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].old_id == "saucepan");
    CHECK(r.records[0].new_id == "pot");
    CHECK(r.records[0].file == "soup");
    CHECK(r.records[0].motion == "fill");
    CHECK(r.records[0].initial_state == "empty");
    CHECK(r.records[0].final_state == "full");

    std::ostringstream os;
    write_records_csv(os, r.records);
    CHECK(os.str() == "object,old_id,new_id,initial_state,final_state,file,motion\npot,saucepan,pot,empty,full,soup,fill\n");
  }
  SUBCASE("canonical input is unchanged") {
    const auto sub = parse_subgraph(kChop, "chop");
    const auto r = normalize(sub, lex);
    CHECK(r.records.empty());
    CHECK(serialize_subgraph(r.subgraph) == serialize_subgraph(sub));
    CHECK(r.unknown_labels > 0);
  }
  SUBCASE("idempotent on the sample corpus, cardinalities preserved") {
    std::ifstream in(std::string(FOON_DATA_DIR) + "/lexicon.tsv");
    std::stringstream buf;
    buf << in.rdbuf();
    const auto corpus_lex = parse_lexicon(buf.str());
    std::size_t total_records = 0;
    for (const auto& path : corpus_files()) {
      CAPTURE(path);
      const auto sub = read_subgraph_file(path);
      const auto once = normalize(sub, corpus_lex);
      const auto twice = normalize(once.subgraph, corpus_lex);
      CHECK(serialize_subgraph(twice.subgraph) == serialize_subgraph(once.subgraph));
      CHECK(twice.records.empty());
      REQUIRE(once.subgraph.units.size() == sub.units.size());
      for (std::size_t i = 0; i < sub.units.size(); ++i) {
        CHECK(once.subgraph.units[i].inputs().size() == sub.units[i].inputs().size());
        CHECK(once.subgraph.units[i].outputs().size() == sub.units[i].outputs().size());
      }
      total_records += once.records.size();
    }
    CHECK(total_records > 0);
  }
}
