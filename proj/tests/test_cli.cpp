#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"
#include "congru/error.hpp"
#include "problem_file.hpp"

using namespace congru;
using namespace congru::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "congru");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string problem(const std::string& name) { return std::string(CONGRU_PROBLEMS_DIR) + "/" + name; }

std::map<std::string, std::string> structured(const std::vector<std::string>& args) {
  auto a = args;
  a.push_back("--format");
  a.push_back("structured");
  return flatten(nlohmann::json::parse(run_cli(a).out));
}

}  // namespace

TEST(Cli, AnalyzeRingA) {
  const auto r = structured({"analyze", problem("a2_p5.cng")});
  EXPECT_EQ(r.at("result.modules[0].eta"), "(pi^2)");
  EXPECT_EQ(r.at("result.modules[0].psi.structure"), "O/pi^2");
  EXPECT_EQ(r.at("result.algebra.phi.length"), "2");
  EXPECT_EQ(r.at("result.modules[0].verdicts.wld"), "holds");
  EXPECT_EQ(r.at("exit_code"), "0");
}

TEST(Cli, AnalyzeRegular) {
  const auto r = structured({"analyze", problem("regular.cng")});
  EXPECT_EQ(r.at("result.algebra.regular_global"), "true");
  EXPECT_EQ(r.at("result.algebra.eta"), "(1)");
  EXPECT_EQ(r.at("result.algebra.phi.length"), "0");
  EXPECT_EQ(r.at("result.modules[0].psi.structure"), "0");
  EXPECT_EQ(r.at("result.modules[0].verdicts.defect0"), "holds");
}

TEST(Cli, Deform) {
  const auto r = structured({"deform", problem("deform_a3.cng"), "--element", "y"});
  EXPECT_EQ(r.at("result.lhs"), "3");
  EXPECT_EQ(r.at("result.rhs"), "3");
  EXPECT_EQ(r.at("result.exact_sequence_holds"), "true");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"analyze", problem("a2_p5.cng")}).code, kComputed);
  EXPECT_EQ(run_cli({"analyze", problem("ring_b.cng"), "--module", "B"}).code, kVerdictFails);
  EXPECT_EQ(run_cli({"analyze", problem("missing.cng")}).code, kInputError);
  EXPECT_EQ(run_cli({"analyze"}).code, kInputError);
  EXPECT_EQ(run_cli({"analyze", problem("a2_p5.cng"), "--strategy", "bogus"}).code, kInputError);
  EXPECT_EQ(run_cli({"analyze", problem("deform_a3.cng"), "--degree-bound", "1"}).code, kBoundExceeded);
  EXPECT_EQ(run_cli({"lattice", problem("a2_p5.cng")}).code, kInputError);
}

TEST(Cli, TextAndStructuredAgree) {
  const std::vector<std::vector<std::string>> cases{
      {"analyze", problem("ring_b.cng")},
      {"analyze", problem("depth_zero.cng")},
      {"lattice", problem("lattice_691.cng")},
      {"serre", problem("deform_a3.cng"), "--products"},
      {"invariance", problem("surjection.cng")},
      {"criterion", problem("surjection.cng"), "--mode", "cotangent_iso"},
      {"eta", problem("user_resolution.cng"), "--strategy", "file"},
      {"probe-fitting-question", "--count", "10", "--seed", "3"},
  };
  for (const auto& c : cases) {
    const auto text = parse_text(run_cli(c).out);
    EXPECT_EQ(text, structured(c)) << c[0];
  }
}

TEST(Cli, Deterministic) {
  for (const auto& c : std::vector<std::vector<std::string>>{
           {"analyze", problem("ring_b.cng"), "--format", "structured"},
           {"probe-fitting-question", "--count", "15", "--seed", "42", "--format", "structured"}}) {
    EXPECT_EQ(run_cli(c).out, run_cli(c).out);
  }
}

TEST(Cli, StrategiesAgree) {
  const auto a = structured({"psi", problem("a2_p5.cng"), "--strategy", "syzygy"});
  const auto b = structured({"psi", problem("a2_p5.cng"), "--strategy", "shamash"});
  EXPECT_EQ(a.at("result.modules[0].psi.structure"), b.at("result.modules[0].psi.structure"));
}

TEST(ProblemFile, ParseErrorsCarryPositions) {
  auto code_and_msg = [](const std::string& text) -> std::pair<ErrorCode, std::string> {
    try {
      parse_problem(text, "t.cng");
    } catch (const Error& e) {
      return {e.code(), e.what()};
    }
    return {ErrorCode::InternalInvariantViolation, ""};
  };
  const std::string head = "[dvr]\np = 3\n[ring]\nvars = x\n";
  auto [c1, m1] = code_and_msg(head + "relations = x*(x - pi\n[augmentation]\ncodim = 0\n");
  EXPECT_EQ(c1, ErrorCode::ParseError);
  EXPECT_NE(m1.find("t.cng:5:"), std::string::npos) << m1;
  auto [c2, m2] = code_and_msg(head + "colour = red\n[augmentation]\ncodim = 0\n");
  EXPECT_EQ(c2, ErrorCode::ParseError);
  EXPECT_NE(m2.find("unknown key 'colour'"), std::string::npos);
  auto [c3, m3] = code_and_msg(head + "[augmentation]\nx = 1\ncodim = 0\n");
  EXPECT_EQ(c3, ErrorCode::NonLocalAugmentation);
  auto [c4, m4] = code_and_msg(head + "[augmentation]\nx = 0\n");
  EXPECT_EQ(c4, ErrorCode::ParseError);
  auto [c5, m5] = code_and_msg("[dvr]\np = 3\n[modules.M]\n");
  EXPECT_EQ(c5, ErrorCode::ParseError);
}

TEST(ProblemFile, ModulesAndResolution) {
  const ProblemFile p = load_problem(problem("ring_b.cng"));
  ASSERT_EQ(p.modules.size(), 2u);
  EXPECT_EQ(p.modules[1].name, "residue");
  EXPECT_EQ(reduce_mod_p(p.modules[1].module).mu, 1u);
  const ProblemFile u = load_problem(problem("user_resolution.cng"));
  EXPECT_EQ(u.resolution.size(), 3u);
  const ProblemFile t = parse_problem(
      "[dvr]\np = 5\n[ring]\nvars = x\n[augmentation]\ncodim = 1\n[module.M]\ngenerators = 2\npresentation = [x, pi; 0, x]\n",
      "m.cng");
  EXPECT_EQ(t.modules[0].module.presentation().cols(), 2u);
}
