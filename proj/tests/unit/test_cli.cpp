#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "demibit/cli.hpp"
#include "demibit/errors.hpp"

using namespace demibit;
using namespace demibit::cli;

namespace {

const std::filesystem::path kData = DEMIBIT_DATA_DIR;

std::string body(const std::string& report) { return report.substr(report.find('\n') + 1); }

ExperimentConfig config(const std::string& text) { return parse_config(text, kData / "configs"); }

std::string parity_inputs() {
  return "input ../circuits/parity_map.net\ninput ../circuits/off_parity.net\n"
         "input ../circuits/xor_func.net\ninput ../generators/parity.gen\n";
}

}  // namespace

TEST(Config, ParsesDirectives) {
  auto cfg = config("# comment\nseed 42\ncap 16\noutput out.txt\ninput a.net\n\n"
                    "task demi_break generator=g adversary=d\n");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.cap, 16u);
  ASSERT_TRUE(cfg.output);
  EXPECT_EQ(*cfg.output, "out.txt");
  ASSERT_EQ(cfg.inputs.size(), 1u);
  ASSERT_EQ(cfg.tasks.size(), 1u);
  EXPECT_EQ(cfg.tasks[0].kind, "demi_break");
  EXPECT_EQ(cfg.tasks[0].params.at("generator"), "g");
  EXPECT_EQ(cfg.tasks[0].line, 7u);
}

TEST(Config, Errors) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_config(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("seed x"), 1u);
  EXPECT_EQ(line_of("seed 1\nseed 2"), 2u);
  EXPECT_EQ(line_of("cap 0"), 1u);
  EXPECT_EQ(line_of("cap 41"), 1u);
  EXPECT_EQ(line_of("\nfrobnicate 3"), 2u);
  EXPECT_EQ(line_of("task"), 1u);
  EXPECT_EQ(line_of("task hsg generator"), 1u);
  EXPECT_EQ(line_of("task hsg a=1 a=2"), 1u);
  EXPECT_EQ(line_of("output a\noutput b"), 2u);
  EXPECT_THROW(load_config(kData / "configs" / "missing.cfg"), Error);
}

TEST(Run, EmptyTaskListHasEmptyBody) {
  auto r = run(load_config(kData / "configs" / "empty.cfg"), {OutputFormat::Report, {}, {}, "T"});
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.output, "# demibit report T\n# seed=1 cap=24 tasks=0\n");
  auto csv = run(load_config(kData / "configs" / "empty.cfg"), {OutputFormat::Csv, {}, {}, "T"});
  EXPECT_EQ(body(csv.output),
            "kind,generator,adversary,advantage_num,advantage_den,zero_on_image,s_witness,holds,detail\n");
}

TEST(Run, DemiBreakRowCarriesIntegerPair) {
  auto cfg = config(parity_inputs() + "task demi_break generator=parity adversary=off_parity\n");
  auto r = run(cfg, {OutputFormat::Csv, {}, {}, "T"});
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_NE(r.output.find("\nDemiBreak,parity,off_parity,1,2,yes,2,yes,"), std::string::npos) << r.output;
  auto rep = run(cfg, {OutputFormat::Report, {}, {}, "T"});
  EXPECT_NE(rep.output.find("advantage 1/2\n"), std::string::npos);
  EXPECT_NE(rep.output.find("status ok\n"), std::string::npos);
}

TEST(Run, PreconditionFailureIsExitTwo) {
  auto r = run(load_config(kData / "configs" / "precondition.cfg"), {OutputFormat::Report, {}, {}, "T"});
  EXPECT_EQ(r.exit_code, kExitInput);
  EXPECT_NE(r.output.find("status error (precondition)"), std::string::npos) << r.output;
}

TEST(Run, CorruptedInputStopsBeforeTasks) {
  auto r = run(load_config(kData / "configs" / "corrupted.cfg"), {OutputFormat::Report, {}, {}, "T"});
  EXPECT_EQ(r.exit_code, kExitInput);
  EXPECT_NE(r.output.find("error "), std::string::npos);
  EXPECT_EQ(r.output.find("== task"), std::string::npos);
}

TEST(Run, UnknownTaskKindStopsBeforeTasks) {
  auto r = run(config(parity_inputs() + "task demi_break generator=parity adversary=off_parity\ntask bogus\n"),
               {OutputFormat::Report, {}, {}, "T"});
  EXPECT_EQ(r.exit_code, kExitInput);
  EXPECT_EQ(r.output.find("== task"), std::string::npos);
}

TEST(Run, CapExceededIsExitThree) {
  auto cfg = config(parity_inputs() + "task demi_break generator=parity adversary=off_parity\n");
  auto r = run(cfg, {OutputFormat::Report, {}, std::size_t{2}, "T"});
  EXPECT_EQ(r.exit_code, kExitCap);
  EXPECT_NE(r.output.find("status cap exceeded"), std::string::npos) << r.output;
}

TEST(Run, WorstEventWins) {
  auto cfg = config(parity_inputs() +
                    "input ../circuits/reject4.net\ninput ../generators/double.gen\n"
                    "task reduce:stretch base=double c=1/2 N=2 adversary=reject4\n"
                    "task demi_break generator=parity adversary=off_parity\n");
  EXPECT_EQ(run(cfg, {OutputFormat::Report, {}, {}, "T"}).exit_code, kExitInput);
  // Cap 3 lets the 3-bit demi-break through but not the 4-bit stretch.
  EXPECT_EQ(run(cfg, {OutputFormat::Report, {}, std::size_t{3}, "T"}).exit_code, kExitCap);
}

TEST(Run, UnknownParameterIsRejected) {
  auto cfg = config(parity_inputs() + "task demi_break generator=parity adversary=off_parity colour=red\n");
  auto r = run(cfg, {OutputFormat::Report, {}, {}, "T"});
  EXPECT_EQ(r.exit_code, kExitInput);
}

TEST(Run, DemoConfigPasses) {
  auto r = run(load_config(kData / "configs" / "demo.cfg"), {OutputFormat::Report, {}, {}, "T"});
  EXPECT_EQ(r.exit_code, kExitOk) << r.output;
  EXPECT_EQ(r.output.find("holds no"), std::string::npos);
}

TEST(Run, ReportsAreDeterministicApartFromHeader) {
  auto cfg = load_config(kData / "configs" / "demo.cfg");
  auto a = run(cfg, {OutputFormat::Report, {}, {}, "2000-01-01T00:00:00Z"});
  auto b = run(cfg, {OutputFormat::Report, {}, {}, "2099-12-31T23:59:59Z"});
  EXPECT_NE(a.output, b.output);
  EXPECT_EQ(body(a.output), body(b.output));
  auto c = run(cfg, {OutputFormat::Report, std::uint64_t{8}, {}, "2000-01-01T00:00:00Z"});
  EXPECT_NE(body(a.output), body(c.output));
}

TEST(ExitCodes, WorseRanking) {
  EXPECT_EQ(worse(kExitOk, kExitInput), kExitInput);
  EXPECT_EQ(worse(kExitInput, kExitCap), kExitCap);
  EXPECT_EQ(worse(kExitCap, kExitViolation), kExitViolation);
  EXPECT_EQ(worse(kExitViolation, kExitInput), kExitViolation);
  EXPECT_EQ(worse(kExitOk, kExitOk), kExitOk);
}

TEST(Selftest, PristineAndFaulty) {
  auto ok = selftest();
  EXPECT_EQ(ok.exit_code, kExitOk) << ok.table;
  EXPECT_GE(ok.checks.size(), 10u);
  for (const auto& c : ok.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  auto bad = selftest({true});
  EXPECT_EQ(bad.exit_code, kExitViolation);
  bool named = false;
  for (const auto& c : bad.checks)
    if (!c.passed) named = c.name == "super-core identities" && c.detail.find("t3(A1) + t4(A2)") != std::string::npos;
  EXPECT_TRUE(named) << bad.table;
}
