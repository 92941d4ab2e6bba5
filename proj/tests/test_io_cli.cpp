#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sp21kit/cli.hpp"
#include "sp21kit/io.hpp"
#include "test_support.hpp"

using namespace sp21kit;
using namespace sp21kit::testing;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Workspace : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("sp21kit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }

  std::string write_group(const std::string& name, const GeneratorSet& gens) {
    return write(name, io::serialize_group(gens));
  }

  std::filesystem::path dir_;
};

io::json parse(const std::string& text) { return io::json::parse(text); }

}  // namespace

TEST(GroupFormat, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GeneratorSet gens = make_fixture({FixtureCase::C31, seed, 3});
    const io::GroupDocument doc = io::parse_group(io::serialize_group(gens, 1e-8));
    EXPECT_EQ(doc.tolerance, 1e-8);
    EXPECT_EQ(doc.gens.loxodromic, gens.loxodromic);
    ASSERT_EQ(doc.gens.others.size(), gens.others.size());
    for (std::size_t i = 0; i < gens.others.size(); ++i) EXPECT_EQ(doc.gens.others[i], gens.others[i]);
    EXPECT_EQ(doc.gens.labels, gens.labels);
  }
}

TEST(GroupFormat, SchemaAndDefaults) {
  const std::string text = io::serialize_group(make_fixture({FixtureCase::C1, 1}));
  EXPECT_EQ(parse(text)["schema"], "sp21kit/1");
  const io::GroupDocument doc =
      io::parse_group(R"({"loxodromic": [[[2,0,0,0],[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[1,0,0,0],[0,0,0,0]],)"
                      R"([[0,0,0,0],[0,0,0,0],[0.5,0,0,0]]], "labels": []})");
  EXPECT_EQ(doc.tolerance, 1e-9);
  EXPECT_TRUE(doc.gens.others.empty());
  EXPECT_EQ(doc.gens.label(0), "A");
}

TEST(GroupFormat, ErrorsCarryLocations) {
  try {
    io::parse_group("{\n  \"loxodromic\": [\n    [1, 2,\n");
    FAIL() << "expected Parse";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Parse);
    EXPECT_NE(std::string(e.what()).find("line "), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("column "), std::string::npos);
  }
  try {
    io::parse_group(R"({"loxodromic": [[[1,0,0],[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[1,0,0,0],[0,0,0,0]],)"
                    R"([[0,0,0,0],[0,0,0,0],[1,0,0,0]]]})");
    FAIL() << "expected Parse";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/loxodromic/0/0"), std::string::npos);
  }
  EXPECT_THROW(io::parse_group(R"({"schema": "other/2", "loxodromic": []})"), Error);
  EXPECT_THROW(io::parse_group(R"({"tolerance": -1})"), Error);
}

TEST(GroupFormat, LabelsAreValidated) {
  GeneratorSet gens = make_fixture({FixtureCase::C1, 1});
  io::json doc = parse(io::serialize_group(gens));
  doc["labels"] = {"P", "Q"};
  EXPECT_EQ(io::parse_group(doc.dump()).gens.labels, (std::vector<std::string>{"A", "P", "Q"}));
  doc["labels"] = {"A", "P", "P"};
  EXPECT_THROW(io::parse_group(doc.dump()), Error);
  doc["labels"] = {"A", "P^2", "Q"};
  EXPECT_THROW(io::parse_group(doc.dump()), Error);
}

TEST(Reports, CaseReportDocument) {
  const GeneratorSet gens = make_fixture({FixtureCase::C31, 2});
  const io::json doc = io::to_json(decide(gens), gens);
  EXPECT_EQ(doc["kind"], "case_report");
  EXPECT_EQ(doc["case"], "ConjBFrame");
  EXPECT_EQ(doc["frame"]["family"], "MiddleScaledByConjB");
  for (const auto& q : doc["frame"]["u"]) {
    for (const auto& x : q) {
      const double v = x.get<double>();
      EXPECT_NEAR(v * 1e4, std::round(v * 1e4), 1e-6);
    }
  }
  EXPECT_TRUE(doc["conjugator"].is_array());
  EXPECT_EQ(doc["residuals"].size(), gens.size());
  EXPECT_EQ(doc["residuals"][1]["generator"], "B1");
  bool cited = false;
  for (const auto& d : doc["diagnostics"]) cited = cited || d["rule"] == "conj-b-structure";
  EXPECT_TRUE(cited);
}

TEST_F(Workspace, CheckCommand) {
  const std::string good = write_group("c1.json", make_fixture({FixtureCase::C1, 1}));
  EXPECT_EQ(run({"check", good}).code, 0);
  EXPECT_EQ(run({"--exact", "check", good}).code, 1);

  GeneratorSet gens = make_fixture({FixtureCase::C1, 1});
  gens.others.push_back(2.0 * QMat3::identity());
  gens.labels.push_back("Twice");
  const CliRun bad = run({"check", write_group("bad.json", gens)});
  EXPECT_EQ(bad.code, 1);
  const io::json report = parse(bad.out);
  EXPECT_FALSE(report["passed"]);
  EXPECT_EQ(report["matrices"][3]["generator"], "Twice");
  EXPECT_FALSE(report["matrices"][3]["member"]);
  EXPECT_DOUBLE_EQ(report["matrices"][3]["residual"].get<double>(), 3.0);

  const std::string exact = write_group("exact.json", make_generator_set(QMat3::diagonal(
                                                          Quat(0, 2, 0, 0), Quat(-1.0), Quat(0, 0.5, 0, 0)), {}));
  EXPECT_EQ(run({"--exact", "check", exact}).code, 0);
}

TEST_F(Workspace, MalformedInputIsAUsageError) {
  const std::string path = write("short.json", R"({"loxodromic": [[[1,0,0],[0,0,0,0],[0,0,0,0]],)"
                                               R"([[0,0,0,0],[1,0,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,0,0],[1,0,0,0]]]})");
  const CliRun r = run({"check", path});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("/loxodromic/0/0"), std::string::npos);
  EXPECT_EQ(run({"check", (dir_ / "missing.json").string()}).code, 3);
  const CliRun syntax = run({"check", write("broken.json", "{\n  \"loxodromic\": [,]\n}")});
  EXPECT_EQ(syntax.code, 3);
  EXPECT_NE(syntax.err.find("line 2"), std::string::npos);
}

TEST_F(Workspace, AuditCommand) {
  const std::string good = write_group("c1.json", make_fixture({FixtureCase::C1, 1}));
  const CliRun ok = run({"audit", good, "--max-len", "4"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(parse(ok.out)["passed"]);

  GeneratorSet jlox;
  jlox.loxodromic = QMat3::diagonal(2.0 * Quat::unit_j(), Quat(1.0), 0.5 * Quat::unit_j());
  const CliRun bad = run({"audit", write_group("j.json", jlox), "--max-len", "1"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(parse(bad.out)["worst_word"], "A");

  EXPECT_EQ(run({"audit", good, "--max-len", "7"}).code, 3);
  const CliRun budget = run({"audit", write_group("one.json", make_fixture({FixtureCase::C1, 1, 1})), "--max-len", "7",
                          "--budget", "100000"});
  EXPECT_EQ(budget.code, 0);
  EXPECT_EQ(parse(budget.out)["words_checked"], count_words(2, 7));
}

TEST_F(Workspace, DecideCommand) {
  const CliRun c31 = run({"decide", write_group("c31.json", make_fixture({FixtureCase::C31, 1}))});
  EXPECT_EQ(c31.code, 0);
  EXPECT_EQ(parse(c31.out)["case"], "ConjBFrame");

  GeneratorSet fixed = make_fixture({FixtureCase::C1, 1});
  fixed.others.push_back(QMat3(Quat(1.0), Quat(1.0), Quat(-0.5, 0.3, 0, 0), Quat(), Quat(1.0), Quat(-1.0), Quat(),
                               Quat(), Quat(1.0)));
  const CliRun shared = run({"decide", write_group("fixed.json", fixed)});
  EXPECT_EQ(shared.code, 2);
  EXPECT_EQ(parse(shared.out)["case"], "CommonFixedPoint");

  GeneratorSet generic = make_fixture({FixtureCase::C1, 1});
  generic.others.push_back(random_sp21(9));
  const CliRun hv = run({"decide", write_group("generic.json", generic)});
  EXPECT_EQ(hv.code, 1);
  EXPECT_EQ(parse(hv.out)["case"], "HypothesisViolated");

  const CliRun witness = run({"decide", write_group("witness.json", make_generator_set(QMat3::diagonal(
                                                                   Quat(2.0), Quat(1.0), Quat(0.5)),
                                                                   {imaginary_c_witness(2)}))});
  EXPECT_EQ(witness.code, 2);
  EXPECT_EQ(parse(witness.out)["case"], "Inconsistent");
}

TEST_F(Workspace, FixtureThenDecide) {
  const std::string path = (dir_ / "c2.json").string();
  EXPECT_EQ(run({"fixture", "--case", "c2", "--seed", "7", "-o", path}).code, 0);
  const CliRun r = run({"decide", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(parse(r.out)["case"], "MiddleJTwist");

  const CliRun first = run({"fixture", "--case", "bd0_im", "--seed", "3"});
  const CliRun second = run({"fixture", "--case", "bd0_im", "--seed", "3"});
  EXPECT_EQ(first.code, 0);
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(run({"decide", path}).out, r.out);

  EXPECT_EQ(run({"fixture", "--case", "c9"}).code, 3);
  EXPECT_EQ(run({"fixture", "--case", "c31", "--theta", "0.5"}).code, 3);
}

TEST(Cli, ClassifyPair) {
  const CliRun r = run({"classify-pair", "--a", "0,0,1,0", "--b", "0,0,2,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "CaseII a_*=1 b_*=2\n");
  EXPECT_EQ(run({"--exact", "classify-pair", "--a", "0,0,1,0", "--b", "0,0,2,0"}).out, "CaseII a_*=1 b_*=2\n");
  EXPECT_EQ(run({"classify-pair", "--a", "1,1,1,1", "--b", "2,-2,-2,-2"}).out, "CaseIII r=2\n");
  EXPECT_EQ(run({"classify-pair", "--a", "1,2,0,0", "--b", "3,-1,0,0"}).out, "CaseI\n");
  const io::json doc = parse(run({"classify-pair", "--a", "0,0,1,0", "--b", "0,0,2,0", "--json"}).out);
  EXPECT_EQ(doc["label"], "CaseII");
  EXPECT_EQ(run({"classify-pair", "--a", "0,0,1", "--b", "1,0,0,0"}).code, 3);
  EXPECT_EQ(run({"classify-pair", "--a", "0,0,0,0", "--b", "1,0,0,0"}).code, 1);
}

TEST(Cli, Falsify) {
  const CliRun r = run({"falsify31", "--trials", "1000", "--seed", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("0 counterexamples", 0), 0u);
  const io::json doc = parse(run({"falsify31", "--trials", "50", "--seed", "1", "--json"}).out);
  EXPECT_EQ(doc["trials"], 50);
  EXPECT_TRUE(doc["counterexamples"].empty());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"--tol", "-1", "classify-pair", "--a", "1,0,0,0", "--b", "1,0,0,0"}).code, 3);
  const CliRun help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("decide"), std::string::npos);
}
