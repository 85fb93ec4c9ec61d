#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "test_util.hpp"

namespace slotfill {
namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary through the shell, feeding `input` on stdin.
Run run_cli(const testing::TempDir& dir, const std::string& args, const std::string& input = "") {
  static int counter = 0;
  const auto tag = std::to_string(counter++);
  const auto in = dir / ("stdin" + tag), out = dir / ("stdout" + tag), err = dir / ("stderr" + tag);
  testing::spit(in, input);
  const std::string cmd = std::string("'") + SLOTFILL_CLI_PATH + "' " + args + " <'" + in.string() + "' >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = testing::slurp(out);
  r.err = testing::slurp(err);
  return r;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    const auto r = run_cli(*dir_, "synth --seed 7 --train-sentences 25 --test-sentences 8 --out '" + (*dir_ / "data").string() + "'");
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static std::string data(const std::string& name) { return "'" + (*dir_ / "data" / name).string() + "'"; }
  static std::string path(const std::string& name) { return "'" + (*dir_ / name).string() + "'"; }

  static std::string train_args(const std::string& out) {
    return "train --corpus " + data("train.txt") + " --labels " + data("labels.txt") + " --manifest " +
           data("features.tsv") + " --gazetteers " + data("gazetteers") + " --out " + path(out) +
           " --epochs 3 --embed-dim 12 --num-filters 12 --seed 5";
  }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, TrainWritesModelAndRegistry) {
  const auto r = run_cli(*dir_, train_args("happy.bin"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(*dir_ / "happy.bin"));
  EXPECT_TRUE(std::filesystem::exists(*dir_ / "happy.bin.registry"));
  EXPECT_NE(r.err.find("epoch 3"), std::string::npos);
}

TEST_F(CliTest, TrainIsByteDeterministic) {
  ASSERT_EQ(run_cli(*dir_, train_args("det_a.bin")).code, 0);
  ASSERT_EQ(run_cli(*dir_, train_args("det_b.bin")).code, 0);
  EXPECT_EQ(testing::slurp(*dir_ / "det_a.bin"), testing::slurp(*dir_ / "det_b.bin"));
  EXPECT_EQ(testing::slurp(*dir_ / "det_a.bin.registry"), testing::slurp(*dir_ / "det_b.bin.registry"));
  const auto serial = run_cli(*dir_, train_args("det_c.bin") + " --serial");
  ASSERT_EQ(serial.code, 0) << serial.err;
  EXPECT_EQ(testing::slurp(*dir_ / "det_a.bin"), testing::slurp(*dir_ / "det_c.bin"));
}

TEST_F(CliTest, MissingGazetteerDirectoryIsNamed) {
  const auto r = run_cli(*dir_, "train --corpus " + data("train.txt") + " --labels " + data("labels.txt") +
                                    " --manifest " + data("features.tsv") + " --gazetteers /no/such/gazetteers --out " +
                                    path("never.bin"));
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("/no/such/gazetteers"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(*dir_ / "never.bin"));
}

TEST_F(CliTest, TrainWithoutFeaturesNeedsNoGazetteers) {
  const auto r = run_cli(*dir_, "train --corpus " + data("train.txt") + " --labels " + data("labels.txt") +
                                    " --features off --epochs 1 --embed-dim 8 --num-filters 8 --out " + path("plain.bin"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto e = run_cli(*dir_, "eval --model " + path("plain.bin") + " --corpus " + data("test.txt") + " --labels " + data("labels.txt"));
  EXPECT_EQ(e.code, 0) << e.err;
}

TEST_F(CliTest, BadCorpusLabelReportsLine) {
  testing::spit(*dir_ / "bad.txt", "from O\nboston B-nonexistent\n");
  const auto r = run_cli(*dir_, "train --corpus " + path("bad.txt") + " --labels " + data("labels.txt") +
                                    " --features off --out " + path("bad.bin"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("B-nonexistent"), std::string::npos) << r.err;
}

TEST_F(CliTest, EvalReportsTextAndJson) {
  ASSERT_EQ(run_cli(*dir_, train_args("eval.bin")).code, 0);
  const std::string base = "eval --model " + path("eval.bin") + " --corpus " + data("test.txt") + " --labels " + data("labels.txt");
  const auto text = run_cli(*dir_, base);
  ASSERT_EQ(text.code, 0) << text.err;
  for (const auto* key : {"accuracy=", "precision=", "recall=", "f1=", "f1_pct=", "tp=", "tn=", "fp=", "fn="})
    EXPECT_NE(text.out.find(key), std::string::npos) << key;
  const auto json = run_cli(*dir_, base + " --report json");
  ASSERT_EQ(json.code, 0) << json.err;
  const auto j = nlohmann::json::parse(json.out);
  EXPECT_TRUE(j.contains("f1"));
  EXPECT_TRUE(j.contains("tp"));
}

// A model fit to the gold test corpus and scored on it: the metrics pipeline
// end to end reaches 1 once the model reproduces gold.
TEST_F(CliTest, EvalOfOverfitModelOnItsCorpusIsOne) {
  testing::spit(*dir_ / "one.txt", "from O\nboston B-fromloc.city_name\nto O\ndenver B-toloc.city_name\n");
  const auto r = run_cli(*dir_, "train --corpus " + path("one.txt") + " --labels " + data("labels.txt") +
                                    " --features off --unk-threshold 0 --epochs 200 --embed-dim 8 --num-filters 8 --lr 0.1 --out " +
                                    path("one.bin"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto e = run_cli(*dir_, "eval --model " + path("one.bin") + " --corpus " + path("one.txt") + " --labels " + data("labels.txt"));
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("f1=1.0000\n"), std::string::npos) << e.out;
  EXPECT_NE(e.out.find("accuracy=1.0000\n"), std::string::npos) << e.out;
}

TEST_F(CliTest, EvalRejectsInventoryMismatch) {
  ASSERT_EQ(run_cli(*dir_, train_args("inv.bin")).code, 0);
  testing::spit(*dir_ / "small_labels.txt", "B-x\nO\n");
  testing::spit(*dir_ / "small.txt", "a O\n");
  const auto r = run_cli(*dir_, "eval --model " + path("inv.bin") + " --corpus " + path("small.txt") + " --labels " + path("small_labels.txt"));
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("inventory"), std::string::npos) << r.err;
}

TEST_F(CliTest, EvalRejectsGarbageModel) {
  testing::spit(*dir_ / "garbage.bin", "not a model\n");
  const auto r = run_cli(*dir_, "eval --model " + path("garbage.bin") + " --corpus " + data("test.txt") + " --labels " + data("labels.txt"));
  EXPECT_EQ(r.code, 5);
}

TEST_F(CliTest, TagOneLinePerToken) {
  ASSERT_EQ(run_cli(*dir_, train_args("tag.bin")).code, 0);
  const std::string base = "tag --model " + path("tag.bin");
  const auto empty = run_cli(*dir_, base, "");
  EXPECT_EQ(empty.code, 0) << empty.err;
  EXPECT_EQ(empty.out, "");

  const auto r = run_cli(*dir_, base, "show\nme\nflights\n\nfrom B-fromloc.city_name\nboston\n");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> words;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    words.push_back(line.substr(0, line.find('\t')));
    EXPECT_NE(line.find('\t'), std::string::npos) << line;
  }
  EXPECT_EQ(words, (std::vector<std::string>{"show", "me", "flights", "from", "boston"}));
  EXPECT_EQ(count_lines(r.out), 6u);  // blank line kept between sentences

  const auto bad = run_cli(*dir_, base, "fine\ntoo many fields\n");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2"), std::string::npos) << bad.err;
}

TEST_F(CliTest, FeaturizeShippedBundle) {
  const auto r = run_cli(*dir_, "featurize --word washington --word zzxqv");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "washington\t0.285714,0.000000,0.214286,0.000000,0.000000,0.000000,0.285714,0.214286,0.000000,"
            "0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000\n"
            "zzxqv\t0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,"
            "0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000,0.000000\n");
  const auto piped = run_cli(*dir_, "featurize --input -", "washington\nzzxqv\n");
  EXPECT_EQ(piped.code, 0) << piped.err;
  EXPECT_EQ(piped.out, r.out);
}

TEST_F(CliTest, SynthIsDeterministic) {
  ASSERT_EQ(run_cli(*dir_, "synth --seed 3 --train-sentences 10 --test-sentences 4 --out " + path("s1")).code, 0);
  ASSERT_EQ(run_cli(*dir_, "synth --seed 3 --train-sentences 10 --test-sentences 4 --out " + path("s2")).code, 0);
  EXPECT_EQ(testing::slurp(*dir_ / "s1" / "train.txt"), testing::slurp(*dir_ / "s2" / "train.txt"));
  EXPECT_EQ(testing::slurp(*dir_ / "s1" / "test.txt"), testing::slurp(*dir_ / "s2" / "test.txt"));
}

TEST_F(CliTest, UnknownSubcommandFails) {
  EXPECT_NE(run_cli(*dir_, "frobnicate").code, 0);
  EXPECT_NE(run_cli(*dir_, "train --variant sideways --corpus x --labels y --out z").code, 0);
}

}  // namespace
}  // namespace slotfill
