#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace {

struct CliRun {
  int code;
  std::string out;
};

// Runs the CLI with stdout captured and stderr folded in.
CliRun run(const std::string& args) {
  const std::string cmd = std::string(MCP_CLI_PATH) + " " + args + " 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe.get())) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe.release());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
  const CliRun r = run("");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("Subcommands"), std::string::npos);
}

TEST(Cli, BadConfigNamesLine) {
  const std::string path = temp_path("mcp_cli_bad.cfg");
  std::ofstream(path) << "signal.n = 6\nnot a pair\n";
  const CliRun r = run("--config " + path + " sweep");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find(path + ":2:"), std::string::npos) << r.out;
}

TEST(Cli, BoundsEvaluateAsJson) {
  const CliRun r = run("bounds T1 n=256 d=24 m=8 kappa=4 t=0.965");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["theorem"], "T1");
  EXPECT_NEAR(j["epsilon"].get<double>(), 1.8217425559610220868, 1e-12);
  EXPECT_EQ(run("bounds T1 n=256").code, 2);
}

TEST(Cli, GenEncodeDecodeRoundTrip) {
  const std::string bits = temp_path("mcp_cli_gen.bits");
  const CliRun gen = run("gen signal.class=sparse signal.n=8 signal.k=2 signal.m=3 seed=4 --bitstream " + bits);
  ASSERT_EQ(gen.code, 0) << gen.out;
  const auto j = nlohmann::json::parse(gen.out);
  const CliRun dec = run("encode --decode " + bits);
  ASSERT_EQ(dec.code, 0) << dec.out;
  std::istringstream rows(dec.out);
  std::vector<double> x;
  for (std::string line; std::getline(rows, line);) x.push_back(std::stod(line));
  EXPECT_EQ(x, j["x"].get<std::vector<double>>());
}

TEST(Cli, SweepIsReproducible) {
  const std::string args =
      "sweep signal.n=6 signal.k=1 signal.m=2 solver.m=2 ensemble.d=5 trials=10 seed=3";
  const CliRun a = run(args);
  const CliRun b = run(args + " workers=2");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyLemmasSuite) {
  const CliRun r = run("verify --suite lemmas");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("PASS 4", 0), 0u) << r.out;
}
