#include <doctest.h>

#include <unistd.h>

#include <filesystem>

#include "nosig/generators.hpp"
#include "nosig/io.hpp"

using nosig::ModelKind;
using nosig::OrderedJson;
using nosig::ParseError;
using nosig::Scenario;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("nosig_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

OrderedJson pr_doc() { return nosig::empirical_to_json(nosig::pr_box()); }

}  // namespace

TEST_CASE("scenario documents round trip") {
  for (const Scenario& sc :
       {nosig::bell(2, 2, 2), nosig::triangle(), nosig::bell(2, 2, 3),
        Scenario({"m"}, {{"m"}}, {"u", "v", "w"})}) {
    CHECK(nosig::scenario_from_json(nosig::scenario_to_json(sc)) == sc);
  }
}

TEST_CASE("scenario digests are stable") {
  CHECK(nosig::scenario_digest(nosig::bell(2, 2, 2)) == "6abf7c974f611877");
  CHECK(nosig::scenario_digest(nosig::triangle()) == "9e5701139d380b73");
  CHECK(nosig::scenario_digest(nosig::section3_counterexample().scenario()) ==
        "f75293971590f7f7");
  CHECK(nosig::scenario_digest(nosig::bell(2, 2, 2)) !=
        nosig::scenario_digest(nosig::bell(2, 2, 3)));
}

TEST_CASE("model documents round trip exactly") {
  const auto empirical = nosig::pr_box();
  const auto parsed_e = nosig::model_from_json(
      nosig::empirical_to_json(empirical), fs::path("."));
  REQUIRE(parsed_e.kind == ModelKind::kEmpirical);
  CHECK(parsed_e.empirical->table() == empirical.table());
  CHECK(parsed_e.scenario() == empirical.scenario());

  const auto schv = nosig::random_schv_model(nosig::bell(2, 2, 2), 3);
  const auto parsed_s =
      nosig::model_from_json(nosig::schv_to_json(schv), fs::path("."));
  REQUIRE(parsed_s.kind == ModelKind::kSchv);
  CHECK(parsed_s.schv->weights() == schv.weights());

  const auto general = nosig::section3_counterexample();
  const auto parsed_g =
      nosig::model_from_json(nosig::general_to_json(general), fs::path("."));
  REQUIRE(parsed_g.kind == ModelKind::kGeneral);
  CHECK(parsed_g.general->weights() == general.weights());
  CHECK(parsed_g.general->hidden_values() == general.hidden_values());
}

TEST_CASE("emitters omit zero entries") {
  const OrderedJson doc = pr_doc();
  CHECK(doc["entries"].size() == 8);  // 16 cells, half of them zero
  const OrderedJson s3 = nosig::general_to_json(nosig::section3_counterexample());
  CHECK(s3["entries"].size() == 4);
}

TEST_CASE("dump is canonical") {
  const std::string text = nosig::dump_document(pr_doc());
  CHECK(text.back() == '\n');
  CHECK(OrderedJson::parse(text) == pr_doc());
}

TEST_CASE("missing and unknown top-level fields") {
  OrderedJson doc = pr_doc();
  doc.erase("kind");
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  doc = pr_doc();
  doc["kind"] = "stochastic";
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  doc = pr_doc();
  doc.erase("scenario");
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  doc = pr_doc();
  doc.erase("entries");
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);
}

TEST_CASE("label resolution failures") {
  OrderedJson doc = pr_doc();
  doc["entries"][0]["section"] = {{"a9", "0"}, {"b0", "0"}};
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  doc = pr_doc();
  doc["entries"][0]["section"] = {{"a0", "7"}, {"b0", "0"}};
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  // {a0, a1} is a valid measurement set but not a context of the cover.
  doc = pr_doc();
  doc["entries"][0]["context"] = {"a0", "a1"};
  doc["entries"][0]["section"] = {{"a0", "0"}, {"a1", "0"}};
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  // Section domain differs from the entry's context.
  doc = pr_doc();
  doc["entries"][0]["section"] = {{"a0", "0"}, {"b1", "0"}};
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  OrderedJson s3 = nosig::general_to_json(nosig::section3_counterexample());
  s3["entries"][0]["lambda"] = "lambda9";
  CHECK_THROWS_AS((void)nosig::model_from_json(s3, "."), ParseError);
}

TEST_CASE("weight grammar is strict") {
  for (const char* bad : {"3/-4", "1.5", "1/0", "", " 1/2", "+1", "0x3"}) {
    OrderedJson doc = pr_doc();
    doc["entries"][0]["weight"] = bad;
    CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);
  }
  OrderedJson doc = pr_doc();
  doc["entries"][0]["weight"] = 0.125;  // numbers are rejected, strings only
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);
}

TEST_CASE("model invariants surface as parse errors") {
  OrderedJson doc = pr_doc();
  doc["entries"][0]["weight"] = "3/16";  // total mass 17/16
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  doc = pr_doc();
  doc["entries"][0]["weight"] = "-1/8";  // empirical tables are nonnegative
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  doc = pr_doc();
  doc["entries"].push_back(doc["entries"][0]);  // duplicate cell
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);
}

TEST_CASE("scenario validation failures surface as parse errors") {
  OrderedJson doc = pr_doc();
  // {a0} is contained in {a0, b0}: not an antichain.
  doc["scenario"]["cover"].push_back(OrderedJson::array({"a0"}));
  CHECK_THROWS_AS((void)nosig::model_from_json(doc, "."), ParseError);

  OrderedJson sc = nosig::scenario_to_json(nosig::bell(2, 2, 2));
  sc["outcomes"] = OrderedJson::array({"0"});
  CHECK_THROWS_AS((void)nosig::scenario_from_json(sc), ParseError);
}

TEST_CASE("path-referenced scenarios resolve against the document directory") {
  TempDir tmp;
  const Scenario sc = nosig::bell(2, 2, 2);
  nosig::write_text_file(tmp.path / "sc.json",
                         nosig::dump_document(nosig::scenario_to_json(sc)));
  OrderedJson doc = pr_doc();
  doc["scenario"] = "sc.json";
  nosig::write_text_file(tmp.path / "model.json", nosig::dump_document(doc));

  const auto parsed = nosig::load_model(tmp.path / "model.json");
  CHECK(parsed.scenario() == sc);
  CHECK(parsed.empirical->table() == nosig::pr_box().table());

  CHECK(nosig::load_scenario(tmp.path / "sc.json") == sc);
}

TEST_CASE("file-level failures carry the path") {
  TempDir tmp;
  const fs::path missing = tmp.path / "nope.json";
  CHECK_THROWS_WITH_AS((void)nosig::load_model(missing),
                       doctest::Contains("nope.json"), ParseError);

  const fs::path bad = tmp.path / "bad.json";
  nosig::write_text_file(bad, "{ not json");
  CHECK_THROWS_WITH_AS((void)nosig::load_model(bad),
                       doctest::Contains("bad.json"), ParseError);
  CHECK_THROWS_AS((void)nosig::load_scenario(bad), ParseError);
}
