#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + HZETA_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch() {
  auto d = fs::temp_directory_path() / ("hzeta_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

const std::string kSqrt2 = "--minpoly 1,2,-1 --interval 0.4,0.5";

}  // namespace

TEST(Cli, EvalZetaTwo) {
  auto r = run("eval --sigma 2 --t 0 --alpha 1/1 --f 1 --q 1");
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_NEAR(j["value_re"].get<double>(), 1.6449340668482264, 1e-12);
  EXPECT_EQ(j["config"]["alpha"], "1/1");
  EXPECT_LT(j["error_bound"].get<double>(), 1e-10);
}

TEST(Cli, EvalFiftyDigits) {
  auto r = run("eval --sigma 2 --alpha 1 --digits 40");
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["value_re_decimal"].get<std::string>().substr(0, 30), "1.6449340668482264364724151666");
}

TEST(Cli, EvalAlgebraicAndDecimal) {
  auto a = json::parse(run("eval --sigma 3 " + kSqrt2).out);
  auto b = json::parse(run("eval --sigma 3 --alpha 0.41421356237309503").out);
  EXPECT_EQ(a["alpha_kind"], "algebraic");
  EXPECT_EQ(b["alpha_kind"], "untyped float");
  EXPECT_NEAR(a["value_re"].get<double>(), b["value_re"].get<double>(), 1e-12);
}

TEST(Cli, ClassifyThirdShift) {
  auto r = run("classify --alpha 1/3 --f 1 --q 1");
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "infinitely many zeros in sigma>1");
  EXPECT_EQ(j["certificate"]["proof_kind"], "ResidueObstruction");
}

TEST(Cli, Decompose) {
  auto j = json::parse(run("decompose --alpha 1 --f 1,-1 --q 2").out);
  EXPECT_EQ(j["certificate"]["verdict"], "IsPL");
  EXPECT_TRUE(j["decomposition"]["verified"].get<bool>());
  EXPECT_EQ(j["certificate"]["polynomial"]["text"], "(1) + (-2)*2^-s");
}

TEST(Cli, DensitySpecWindow) {
  auto r = run("density " + kSqrt2 + " --q 1 --theta 0.1 --N 100");
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  std::set<int> elig;
  for (const auto& e : j["windows"][0]["eligible"]) elig.insert(e["n"].get<int>());
  EXPECT_TRUE(elig.count(101) && elig.count(103) && elig.count(107));
  EXPECT_FALSE(elig.count(102));
}

TEST(Cli, FactorIdealsCsv) {
  auto r = run("factor-ideals " + kSqrt2 + " --q 1 --range 0..5");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "n,norm,admissible,residual\n0,1,,1\n1,2,,2\n2,1,,1\n3,2,,2\n4,7,7:4^1,1\n5,14,7:5^1,2\n");
}

TEST(Cli, ZerosFixture) {
  auto r = run("zeros --alpha 1 --f 1,-2 --q 2 --rect 1.3,1.9,0,30 --grid 4x16");
  ASSERT_EQ(r.status, 0);
  auto j = json::parse(r.out);
  ASSERT_EQ(j["zeros"].size(), 4u);
  EXPECT_NEAR(j["zeros"][1]["t"].get<double>(), 2 * 3.141592653589793 / std::log(2.0), 1e-5);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("eval --sigma 2 --alpha 1 --bogus 1").status, 1);
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("eval --alpha 1").status, 1);                        // missing --sigma
  EXPECT_EQ(run("eval --sigma 1 --alpha 1 --f 1").status, 2);        // pole
  EXPECT_EQ(run("classify --alpha 0.5 --f 1").status, 2);            // untyped float
  EXPECT_EQ(run("zeros --alpha 1 --f 1 --rect 1,2,3 --grid 2x2").status, 1);
  EXPECT_EQ(run("density " + kSqrt2 + " --q 3 --theta 0.01 --N 100 --b 0").status, 2);  // empty window
  EXPECT_EQ(run("eval --sigma 2 --alpha 3/2").status, 1);
  EXPECT_EQ(run("--help").status, 0);
}

TEST(Cli, DeterministicReports) {
  const auto d = scratch();
  for (const std::string& cmd : std::vector<std::string>{"classify --alpha 1 --f 1,-2 --q 2", "density " + kSqrt2 + " --q 2 --N 1e7,2e7",
                                "construct-phi --stages 2 --recompute off"}) {
    auto a = run(cmd + " --seed 5 -o " + (d / "a.json").string());
    auto b = run(cmd + " --seed 5 --threads 3 -o " + (d / "b.json").string());
    ASSERT_EQ(a.status, 0) << cmd;
    ASSERT_EQ(b.status, 0) << cmd;
    auto ja = json::parse(slurp(d / "a.json")), jb = json::parse(slurp(d / "b.json"));
    ja.erase("timestamp");
    jb.erase("timestamp");
    ja["config"].erase("threads");
    jb["config"].erase("threads");
    EXPECT_EQ(ja.dump(), jb.dump()) << cmd;
  }
  fs::remove_all(d);
}

TEST(Cli, VerifyRoundTrip) {
  const auto d = scratch();
  struct Case {
    std::string cmd, file;
  };
  const std::vector<Case> cases = {
      {"factor-ideals " + kSqrt2 + " --range 1..3000", "f.csv"},
      {"factor-ideals " + kSqrt2 + " --range 1..300 --format json", "f.json"},
      {"density " + kSqrt2 + " --N 1e6,1e7 --theta 1/10000", "d.json"},
      {"zeros --alpha 1 --f 1,-2 --q 2 --rect 1.3,1.9,0,30", "z.json"},
      {"construct-phi --stages 2 --recompute off", "c.json"},
      {"eval --sigma 2.5 --t 3 --alpha 1/3 --f 1,i --q 2", "e.json"},
      {"decompose --alpha 2/5 --f 1,2,3 --q 3", "p.json"},
  };
  for (const auto& c : cases) {
    const auto path = (d / c.file).string();
    ASSERT_EQ(run(c.cmd + " -o " + path).status, 0) << c.cmd;
    auto v = run(c.cmd + " --verify " + path);
    ASSERT_EQ(v.status, 0) << c.cmd << "\n" << v.out;
    auto j = json::parse(v.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_GE(j["sampled"].size(), 1u);
  }
  // tampering is caught
  const auto path = (d / "t.csv").string();
  ASSERT_EQ(run("factor-ideals " + kSqrt2 + " --range 4..4 -o " + path).status, 0);
  std::ofstream(path) << "n,norm,admissible,residual\n4,7,7:5^1,1\n";
  EXPECT_EQ(run("factor-ideals " + kSqrt2 + " --range 4..4 --verify " + path).status, 2);
  fs::remove_all(d);
}

TEST(Cli, CacheEnvironmentOverride) {
  const auto d = scratch();
  const auto flag = d / "flag.csv", env = d / "env.csv";
  ASSERT_EQ(run("factor-ideals " + kSqrt2 + " --range 100..120 --cache " + flag.string(), "HURWITZ_CACHE=" + env.string()).status, 0);
  EXPECT_TRUE(fs::exists(env));
  EXPECT_FALSE(fs::exists(flag));
  ASSERT_EQ(run("factor-ideals " + kSqrt2 + " --range 100..120 --cache " + flag.string()).status, 0);
  EXPECT_TRUE(fs::exists(flag));
  EXPECT_EQ(slurp(flag), slurp(env));
  fs::remove_all(d);
}

TEST(Cli, SecondaryCsvOutputs) {
  const auto d = scratch();
  const auto j = d / "z.json", c = d / "z.csv";
  ASSERT_EQ(run("zeros --alpha 1 --f 1,-2 --q 2 --rect 1.3,1.9,0,10 -o " + j.string() + " --csv " + c.string()).status, 0);
  const auto text = slurp(c);
  EXPECT_EQ(text.rfind("sigma,t,residual,multiplicity,converged\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  fs::remove_all(d);
}
