#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "sopt/gallery.hpp"
#include "sopt/sopoly_io.hpp"

using namespace sopt;
using nlohmann::json;

namespace {

struct Result {
  int exit_code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(SOPT_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content = "") {
  const std::string path = testing::TempDir() + "sopt_cli_" + name;
  if (!content.empty()) std::ofstream(path) << content;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 2 * l(n): root 2*X_1 over the identity leaf.
const char* kTwoL = R"({"poly":[{"exps":[0,1],"coef":2}],"children":[{"poly":[{"exps":[1],"coef":1}]}]})";
const char* kLeaf = R"({"poly":[{"exps":[1],"coef":1}]})";

}  // namespace

TEST(CliRun, IteratedApplyOnDoubling) {
  const auto r = cli("run gallery:iterated-apply --oracle doubling --input 000");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(json::parse(r.out).at("output"), "00000000");
}

TEST(CliRun, NoFuelExitsThree) {
  EXPECT_EQ(cli("run gallery:max-length --input 01 --fuel 0").exit_code, 3);
}

TEST(CliRun, TraceFilesAreByteIdentical) {
  const auto a = temp_file("trace_a"), b = temp_file("trace_b");
  ASSERT_EQ(cli("run gallery:bruteforce-length --oracle doubling --input 0110 --trace " + a).exit_code, 0);
  ASSERT_EQ(cli("run gallery:bruteforce-length --oracle doubling --input 0110 --trace " + b).exit_code, 0);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(CliRun, MalformedInputsExitTwo) {
  EXPECT_EQ(cli("run " + temp_file("bad_program", "{\"tapes\": 3")).exit_code, 2);
  EXPECT_EQ(cli("run gallery:identity --oracle " + temp_file("bad_oracle", "{\"kind\":\"spooky\"}")).exit_code, 2);
  EXPECT_EQ(cli("run gallery:identity --input 012").exit_code, 2);
  EXPECT_EQ(cli("run gallery:nonexistent").exit_code, 2);
  EXPECT_EQ(cli("frobnicate").exit_code, 2);
}

TEST(CliCheck, StepCountPassAndFail) {
  const auto t = temp_file("trace_sc");
  ASSERT_EQ(cli("run gallery:iterated-apply --oracle doubling --input 000 --trace " + t).exit_code, 0);
  EXPECT_EQ(cli("check step-count --trace " + t + " --poly '[26,52,26]'").exit_code, 0);
  const auto bad = cli("check step-count --trace " + t + " --poly '[1,1]'");
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_TRUE(json::parse(bad.out).contains("witness_step"));
}

TEST(CliCheck, RunningTimeSearchFindsWitness) {
  const auto r = cli("check running-time --machine gallery:iterated-apply --oracle doubling --max-input 20 --bound '" +
                     std::string(kTwoL) + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(json::parse(r.out).contains("witness_input"));
}

TEST(CliCheck, RunningTimeOfDeclaredBoundPasses) {
  const auto bound = temp_file("ml_bound", to_json(*gallery::max_length_machine().bounds.running_time).dump());
  EXPECT_EQ(cli("check running-time --machine gallery:max-length --oracle pad:1,2 --max-input 12 --bound " + bound)
                .exit_code,
            0);
}

TEST(CliCheck, MajorantOverSampleFile) {
  json samples = json::array();
  for (int n = 0; n <= 16; ++n) samples.push_back({{"l", {{"table", {0, 3, 9, 27, 64}}, {"tail", "constant"}}}, {"n", n}});
  const auto f = temp_file("samples", samples.dump());
  EXPECT_EQ(cli(std::string("check majorant --bound '") + kTwoL + "' --samples " + f).exit_code, 0);
  EXPECT_EQ(cli(std::string("check majorant --bound '") + kTwoL + "' --count 300 --seed 5").exit_code, 0);
}

TEST(CliPoly, PlusOfLeafIsLOverIdentity) {
  const auto r = cli(std::string("poly plus '") + kLeaf + "'");
  ASSERT_EQ(r.exit_code, 0);
  const Description d = description_from_json(json::parse(r.out));
  EXPECT_EQ(d, Description::node_of(MultiPoly::variable(2, 1), {Description::leaf(UniPoly::identity())}));
}

TEST(CliPoly, MajorantOfTwoL) {
  const auto r = cli(std::string("poly majorant '") + kTwoL + "'");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("N"), 1);
  EXPECT_EQ(j.at("p"), json({0, 2}));
}

TEST(CliPoly, EvalMatchesLibrary) {
  const auto r = cli(std::string("poly eval '") + kTwoL + "' --l-table 0,1,2 --tail affine --slope 1 --n 5");
  ASSERT_EQ(r.exit_code, 0);
  const Description d = description_from_json(json::parse(kTwoL));
  EXPECT_EQ(json::parse(r.out).at("value"), eval_description(d, LengthFn({0, 1, 2}, LengthFn::Tail::Affine, 1), 5));
}

TEST(CliPoly, ArityViolationExitsTwo) {
  EXPECT_EQ(cli(std::string("poly sum '") + kLeaf + "' '{\"poly\":[{\"exps\":[1,1],\"coef\":1}]}'").exit_code, 2);
}

TEST(CliAdversary, FlrAgainstMaxLength) {
  const auto r = cli("adversary flr gallery:max-length -N 3");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j.at("exceeded").get<bool>());
  EXPECT_FALSE(j.at("output_wrong").get<bool>());
}

TEST(CliAdversary, DelayedAgainstMajorantClockedBruteForce) {
  const auto m = temp_file("clocked_bf");
  ASSERT_EQ(cli("transform majorant-clock gallery:bruteforce-length -o " + m).exit_code, 0);
  const auto r = cli("adversary delayed " + m + " --depth 0");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j.at("in_class_A").get<bool>());
  EXPECT_FALSE(j.at("agrees").get<bool>());
}

TEST(CliTransform, ComposeAndClockRoundTrip) {
  const auto c = temp_file("composed");
  ASSERT_EQ(cli("transform compose gallery:max-length gallery:identity -o " + c).exit_code, 0);
  EXPECT_EQ(json::parse(cli("run " + c + " --oracle pad:1,1 --input 0101").out).at("output"), "00000");
  const auto k = temp_file("clocked");
  ASSERT_EQ(cli("transform clock gallery:max-length -N 3 --poly '[64,128,64]' -o " + k).exit_code, 0);
  const auto r = json::parse(cli("adversary flr " + k + " -N 3").out);
  EXPECT_EQ(r.at("output"), "");
  EXPECT_TRUE(r.at("output_wrong").get<bool>());
}

TEST(CliGallery, ListAndShow) {
  const auto l = json::parse(cli("gallery list").out);
  EXPECT_EQ(l.size(), gallery::machine_names().size());
  const auto s = json::parse(cli("gallery show iterated-apply").out);
  EXPECT_TRUE(s.at("bounds").contains("step_count"));
}
