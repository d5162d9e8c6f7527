#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "neuroami/config.hpp"
#include "neuroami/trace_io.hpp"

using namespace neuroami;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("neuroami_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kCarBus = "Car\nBus\nBus\nCar\nCar\nCar\nCar\nCar\nBus\n";

}  // namespace

// ---------------------------------------------------------------------------
// Configuration layering
// ---------------------------------------------------------------------------

TEST(Config, Defaults) {
  const auto c = config::resolve(config::Layers{});
  EXPECT_EQ(c.run.encoder.class_level, 5);
  EXPECT_EQ(c.run.encoder.reference, Reference::last());
  EXPECT_EQ(c.run.train_fraction, 0.35);
  EXPECT_EQ(c.run.learner.population_size, 1000u);
  EXPECT_EQ(c.run.learner.max_deviant_adjust, 2.0);
  EXPECT_EQ(c.run.learner.rule_mode, RuleMode::AdditiveSubtractive);
  EXPECT_EQ(c.run.learner.bias, 0.0);
  EXPECT_EQ(c.run.learner.k_winners, 1u);
  EXPECT_FALSE(c.numeric);
  EXPECT_FALSE(c.run.freeze_after_train);
}

TEST(Config, PrecedencePerField) {
  // value per layer for each key: default, file, flag
  const std::vector<std::tuple<std::string, std::string, std::string>> cases = {
      {"class_level", "7", "9"},   {"reference", "first", "2"}, {"train_fraction", "0.5", "0.6"},
      {"population", "10", "20"},  {"max_adjust", "1.0", "0.5"}, {"rule", "muldiv", "addsub"},
      {"lp", "0.25", "0.5"},       {"k_winners", "2", "3"},     {"numeric", "true", "false"},
      {"freeze_after_train", "true", "false"},
  };
  for (const auto& [key, file_value, flag_value] : cases) {
    config::Layers only_file;
    config::load_file(only_file, key + " = " + file_value + "\n");
    config::Layers both;
    config::load_file(both, key + " = " + file_value + "\n");
    both.set(key, flag_value, config::Source::Flag);
    config::Layers flag_then_file;
    flag_then_file.set(key, flag_value, config::Source::Flag);
    config::load_file(flag_then_file, key + " = " + file_value + "\n");

    EXPECT_EQ(only_file.get(key).value, file_value) << key;
    EXPECT_EQ(only_file.get(key).source, config::Source::File) << key;
    EXPECT_EQ(both.get(key).value, flag_value) << key;
    EXPECT_EQ(flag_then_file.get(key).value, flag_value) << key;
    EXPECT_NO_THROW(config::resolve(both)) << key;
  }
}

TEST(Config, FileSyntax) {
  config::Layers l;
  config::load_file(l, "# comment\n\n  class-level = 8  # trailing\ntrain_fraction=0.4\n");
  const auto c = config::resolve(l);
  EXPECT_EQ(c.run.encoder.class_level, 8);
  EXPECT_EQ(c.run.train_fraction, 0.4);
}

TEST(Config, ErrorsNameTheSource) {
  config::Layers l;
  config::load_file(l, "\nclass_level = 11\n");
  try {
    config::resolve(l);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadConfig);
    EXPECT_NE(std::string(e.what()).find("config file line 2"), std::string::npos) << e.what();
  }
  config::Layers f;
  f.set("train_fraction", "1.5", config::Source::Flag);
  try {
    config::resolve(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("flag --train-fraction"), std::string::npos) << e.what();
  }
  config::Layers u;
  EXPECT_THROW(config::load_file(u, "colour = blue\n"), Error);
  EXPECT_THROW(config::load_file(u, "no equals sign\n"), Error);
}

TEST(Config, RejectsOutOfRange) {
  const std::vector<std::pair<std::string, std::string>> bad = {
      {"class_level", "1"}, {"class_level", "x"},     {"reference", "0"},  {"reference", "middle"},
      {"train_fraction", "0"}, {"train_fraction", "1"}, {"population", "0"}, {"max_adjust", "0"},
      {"rule", "mul"},      {"lp", "inf"},          {"k_winners", "0"},  {"k_winners", "1001"},
      {"numeric", "maybe"},
  };
  for (const auto& [key, value] : bad) {
    config::Layers l;
    l.set(key, value, config::Source::Flag);
    EXPECT_THROW(config::resolve(l), Error) << key << "=" << value;
  }
}

// ---------------------------------------------------------------------------
// Trace text format
// ---------------------------------------------------------------------------

TEST(TraceIo, FixedSixDecimals) {
  EXPECT_EQ(io::fixed6(0.0), "0.000000");
  EXPECT_EQ(io::fixed6(-0.0), "0.000000");
  EXPECT_EQ(io::fixed6(-1e-9), "0.000000");
  EXPECT_EQ(io::fixed6(12.5), "12.500000");
  EXPECT_EQ(io::fixed6(-2.0), "-2.000000");
}

TEST(TraceIo, ParseRoundTrip) {
  const ClassSequence c{{1, 5, 5, 1, 1, 1, 1, 1, 5}, 5};
  const auto t = run_continual(c, RunConfig{});
  const auto text = io::format_trace(t);
  const auto back = io::parse_trace(text);
  EXPECT_EQ(io::format_trace(back), text);
  EXPECT_EQ(back.train_elements, t.train_elements);
}

TEST(TraceIo, RejectsMalformed) {
  const ClassSequence c{{1, 2, 3, 2, 1}, 5};
  const auto text = io::format_trace(run_continual(c, RunConfig{}));
  // cut mid-line
  try {
    io::parse_trace(text.substr(0, text.size() - 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadTrace);
    EXPECT_EQ(e.location(), 5u);
  }
  EXPECT_THROW(io::parse_trace("step,phase\n"), Error);
  EXPECT_THROW(io::parse_trace(""), Error);
  std::string bad = text;
  bad.replace(bad.find("test"), 4, "tset");
  EXPECT_THROW(io::parse_trace(bad), Error);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

TEST(CmdEncode, CarBusMemorySection) {
  TempDir dir;
  const auto in = dir.write("carbus.txt", kCarBus);
  const auto r = run_cli({"encode", "--input", in, "--class-level", "5", "--reference", "last"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("row_index,symbol,match_value,scale,class\n1,Car,0,0.000000,1\n2,Bus,7,1.000000,5\n"),
            std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("class,symbol\n1,Car\n2,[]\n3,[]\n4,[]\n5,Bus\n"), std::string::npos) << r.out;
}

TEST(CmdEncode, SingletonAndErrors) {
  TempDir dir;
  const auto in = dir.write("one.txt", "hello\n");
  const auto r = run_cli({"encode", in});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1,hello,31,1.000000,5\n"), std::string::npos) << r.out;

  EXPECT_EQ(run_cli({"encode", "--input", dir.file("missing.txt")}).code, 1);
  EXPECT_EQ(run_cli({"encode", in, "--class-level", "11"}).code, 2);
  EXPECT_EQ(run_cli({"encode", in, "--reference", "4"}).code, 2);
  EXPECT_EQ(run_cli({"encode", in, "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"encode", dir.write("empty.txt", "\n\n")}).code, 1);
}

TEST(CmdEncode, NumericInput) {
  TempDir dir;
  const auto in = dir.write("p.txt", "20.0\n15\n18\n20\n");
  const auto r = run_cli({"encode", in, "--numeric"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1,20,3,1.000000,5\n"), std::string::npos) << r.out;
  EXPECT_EQ(run_cli({"encode", dir.write("bad.txt", "1\nx\n"), "--numeric"}).code, 1);
}

TEST(CmdPredict, CarBusSummary) {
  TempDir dir;
  const auto in = dir.write("carbus.txt", kCarBus);
  const auto trace_path = dir.file("trace.csv");
  const auto r = run_cli({"predict", in, "--out", trace_path});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("test_steps=6\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("exact_test_matches=4\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("exact_matches_by_class=1:4\n"), std::string::npos) << r.out;
  const auto trace = slurp(trace_path);
  EXPECT_EQ(trace.rfind(std::string(io::kTraceHeader) + "\n", 0), 0u);
  EXPECT_NE(trace.find("\n3,test,5,5.000000,5,1,4,400.000000,-2.000000\n"), std::string::npos) << trace;
}

TEST(CmdPredict, TrainFractionSplit) {
  TempDir dir;
  const auto in = dir.write("five.txt", "a\nb\nc\nd\ne\n");
  const auto r = run_cli({"predict", in, "--train-fraction", "0.9", "--out", dir.file("t.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("train_elements=4\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("test_steps=1\n"), std::string::npos) << r.out;
}

TEST(CmdPredict, ConfigFileAndFlags) {
  TempDir dir;
  const auto in = dir.write("five.txt", "a\nb\nc\nd\ne\n");
  const auto cfg = dir.write("run.conf", "train_fraction = 0.9\nclass_level = 4\n");
  auto r = run_cli({"predict", in, "--config", cfg, "--out", dir.file("t.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("train_elements=4\n"), std::string::npos);
  r = run_cli({"predict", in, "--config", cfg, "--train-fraction", "0.5", "--out", dir.file("t.csv")});
  EXPECT_NE(r.out.find("train_elements=2\n"), std::string::npos) << r.out;
  const auto bad = dir.write("bad.conf", "class_level = 12\n");
  r = run_cli({"predict", in, "--config", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("config file line 1"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"predict", in, "--config", dir.file("nope.conf")}).code, 2);
}

TEST(CmdPredict, Errors) {
  TempDir dir;
  EXPECT_EQ(run_cli({"predict", dir.write("one.txt", "x\n")}).code, 1);
  EXPECT_EQ(run_cli({"predict", dir.write("ok.txt", kCarBus), "--class-level", "11"}).code, 2);
  EXPECT_EQ(run_cli({"predict", dir.file("ok.txt"), "--rule", "xor"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
}

TEST(CmdPredict, BaselineAndDecodeSections) {
  TempDir dir;
  const auto in = dir.write("carbus.txt", kCarBus);
  const auto out = dir.file("t.csv");
  const auto r = run_cli({"predict", in, "--baseline", "--decode", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("baseline_final_mape="), std::string::npos);
  const auto text = slurp(out);
  EXPECT_NE(text.find("\n# baseline persistence\n"), std::string::npos);
  EXPECT_NE(text.find("\n# decoded\nstep,predicted_symbol,expected_symbol,exact\n"), std::string::npos);
  EXPECT_NE(text.find("5,Car,Car,true\n"), std::string::npos) << text;
  // The primary section still parses for reporting.
  EXPECT_EQ(run_cli({"report", out}).code, 0);
}

TEST(CmdPredict, TraceOnStdoutWhenNoOut) {
  TempDir dir;
  const auto r = run_cli({"predict", dir.write("c.txt", kCarBus)});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind(std::string(io::kTraceHeader), 0), 0u);
  EXPECT_NE(r.err.find("final_mape="), std::string::npos);
}

TEST(CmdPredict, ByteIdenticalReruns) {
  TempDir dir;
  const auto in = dir.write("c.txt", kCarBus);
  ASSERT_EQ(run_cli({"predict", in, "--out", dir.file("a.csv")}).code, 0);
  ASSERT_EQ(run_cli({"predict", in, "--out", dir.file("b.csv")}).code, 0);
  EXPECT_EQ(slurp(dir.file("a.csv")), slurp(dir.file("b.csv")));
}

TEST(CmdReport, Series) {
  TempDir dir;
  const auto in = dir.write("c.txt", "2\n2\n2\n2\n2\n");
  ASSERT_EQ(run_cli({"predict", in, "--out", dir.file("t.csv")}).code, 0);
  const auto r = run_cli({"report", dir.file("t.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "test_step,cumulative_mape\n1,0.000000\n2,0.000000\n3,0.000000\n4,0.000000\n");
}

TEST(CmdReport, DecreasingAfterOneError) {
  TempDir dir;
  std::string trace(io::kTraceHeader);
  trace += "\n1,test,1,1.000000,1,5,4,80.000000,2.000000\n";
  for (int i = 2; i <= 5; ++i) trace += std::to_string(i) + ",test,5,5.000000,5,5,0,0.000000,0.000000\n";
  const auto r = run_cli({"report", dir.write("t.csv", trace), "--svg", dir.file("s.svg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "test_step,cumulative_mape\n1,80.000000\n2,40.000000\n3,26.666667\n4,20.000000\n5,16.000000\n");
  const auto svg = slurp(dir.file("s.svg"));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(CmdReport, TruncatedTrace) {
  TempDir dir;
  std::string trace(io::kTraceHeader);
  trace += "\n1,test,1,1.000000,1,5,4,80.000000,2.00";
  const auto r = run_cli({"report", dir.write("t.csv", trace)});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"report", dir.write("u.csv", "1,2,3\n")}).code, 1);
}
