#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "oracles/oracles.hpp"
#include "pdbary/diagram_io.hpp"
#include "pdbary/energy_trace.hpp"
#include "pdbary/scalar_field.hpp"

using namespace pdbary;
namespace fs = std::filesystem;

namespace {

const fs::path kData = PDBARY_TEST_DATA_DIR;

struct Outcome {
  int code = 0;
  std::string out, err;
  nlohmann::json report;
};

Outcome pdbaryRun(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  if (!r.out.empty() && r.out.front() == '{') r.report = nlohmann::json::parse(r.out);
  return r;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "pdbary_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string data(const char* name) { return (kData / name).string(); }

// Sets an environment variable for the lifetime of the object.
struct EnvGuard {
  std::string name;
  EnvGuard(const std::string& n, const std::string& v) : name(n) { ::setenv(n.c_str(), v.c_str(), 1); }
  ~EnvGuard() { ::unsetenv(name.c_str()); }
};

}  // namespace

TEST_CASE("cli distance") {
  auto same = pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_a.csv")});
  REQUIRE(same.code == 0);
  CHECK(same.report["metrics"]["distance"].get<double>() == 0.0);
  CHECK(same.report["command"] == "distance");

  for (auto [a, b] : {std::pair{"tiny_a.csv", "tiny_b.csv"}, {"tiny_a.csv", "tiny_c.csv"}, {"tiny_b.csv", "tiny_c.csv"}}) {
    auto exact = pdbaryRun({"distance", data(a), data(b), "--solver", "munkres"});
    auto approx = pdbaryRun({"distance", data(a), data(b), "--solver", "auction", "--gamma", "0.01"});
    REQUIRE(exact.code == 0);
    REQUIRE(approx.code == 0);
    const double e = exact.report["metrics"]["distance"];
    const double d = approx.report["metrics"]["distance"];
    CHECK(d >= e * (1.0 - 1e-12));
    CHECK(d <= 1.01 * e);
  }

  const auto dir = scratch("distance");
  auto matched = pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_c.csv"), "--solver", "munkres", "--matching",
                            (dir / "m.csv").string(), "--report", (dir / "r.json").string()});
  REQUIRE(matched.code == 0);
  std::ifstream rows(dir / "m.csv");
  std::string line;
  std::getline(rows, line);
  CHECK(line == "bidder,object,bidder_birth,bidder_death,object_birth,object_death,cost");
  double total = 0.0;
  std::size_t count = 0;
  while (std::getline(rows, line)) {
    total += std::stod(line.substr(line.rfind(',') + 1));
    ++count;
  }
  CHECK(count >= 9);
  CHECK(total == doctest::Approx(matched.report["metrics"]["cost"].get<double>()));
  CHECK(nlohmann::json::parse(slurp(dir / "r.json")) == matched.report);
}

TEST_CASE("cli distance errors") {
  const std::string missing = (kData / "nope.csv").string();
  auto r = pdbaryRun({"distance", missing, data("tiny_a.csv")});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find(missing) != std::string::npos);
  CHECK(r.report["exitCode"] == 2);

  auto bad = pdbaryRun({"distance", data("bad_row.csv"), data("tiny_a.csv")});
  CHECK(bad.code == cli::kExitValidation);
  CHECK(bad.err.find("bad_row.csv:3") != std::string::npos);

  CHECK(pdbaryRun({"distance", data("tiny_a.csv")}).code == cli::kExitValidation);
  CHECK(pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_b.csv"), "--solver", "sinkhorn"}).code ==
        cli::kExitValidation);
  CHECK(pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_b.csv"), "--alpha", "2"}).code ==
        cli::kExitValidation);
  CHECK(pdbaryRun({"frobnicate"}).code == cli::kExitValidation);
  CHECK(pdbaryRun({}).code == cli::kExitValidation);
  auto help = pdbaryRun({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("barycenter") != std::string::npos);
}

TEST_CASE("cli flags fall back to PDBARY_ environment variables") {
  {
    EnvGuard env("PDBARY_SOLVER", "munkres");
    auto r = pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_b.csv")});
    REQUIRE(r.code == 0);
    CHECK(r.report["config"]["solver"] == "munkres");
    auto flagWins = pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_b.csv"), "--solver", "auction"});
    CHECK(flagWins.report["config"]["solver"] == "auction");
  }
  {
    EnvGuard env("PDBARY_ALPHA", "7");
    CHECK(pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_b.csv")}).code == cli::kExitValidation);
  }
  {
    EnvGuard env("PDBARY_THREADS", "many");
    CHECK(pdbaryRun({"barycenter", data("identical.json")}).code == cli::kExitValidation);
  }
  {
    EnvGuard env("PDBARY_SKIP_ENERGY", "true");
    const auto out = (scratch("env") / "b.csv").string();
    auto r = pdbaryRun({"barycenter", data("identical.json"), "-o", out});
    REQUIRE(r.code == 0);
    CHECK(!r.report["metrics"].contains("convergedEnergy"));
  }
  EnvGuard env("PDBARY_GAMMA", "0.5");
  auto r = pdbaryRun({"distance", data("tiny_a.csv"), data("tiny_b.csv")});
  CHECK(r.report["config"]["gamma"].get<double>() == 0.5);
}

TEST_CASE("cli barycenter of identical diagrams") {
  const auto dir = scratch("bary_same");
  for (std::string algo : {"progressive", "reference"}) {
    const auto out = (dir / (algo + ".csv")).string();
    auto r = pdbaryRun({"barycenter", data("identical.json"), "--algo", algo, "-o", out, "--trace",
                        (dir / (algo + "_trace.csv")).string()});
    REQUIRE(r.code == 0);
    CHECK(r.report["metrics"]["convergedEnergy"].get<double>() == doctest::Approx(0.0));
    const auto bary = readDiagram(out);
    const auto input = readDiagram(kData / "same.csv");
    REQUIRE(bary.size() == input.size());
    // the barycenter is written in its own point order; compare as sets
    std::vector<std::pair<double, double>> a, b;
    for (const auto& p : bary.points) a.emplace_back(p.birth, p.death);
    for (const auto& p : input.points) b.emplace_back(p.birth, p.death);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].first == doctest::Approx(b[i].first));
      CHECK(a[i].second == doctest::Approx(b[i].second));
    }
    std::ifstream trace(dir / (algo + "_trace.csv"));
    CHECK(!parseTrace(trace).empty());
  }
}

TEST_CASE("cli barycenter guards and validation") {
  const auto dir = scratch("bary_guard");
  std::mt19937_64 rng(3);
  Manifest big;
  for (int i = 0; i < 2; ++i) {
    writeDiagram(oracle::randomDiagram(rng, 1100), dir / ("big" + std::to_string(i) + ".csv"));
    big.members.push_back({"big" + std::to_string(i), "big" + std::to_string(i) + ".csv", std::nullopt});
  }
  writeManifest(big, dir / "big.json");
  auto refused = pdbaryRun({"barycenter", (dir / "big.json").string(), "--algo", "reference", "--solver", "munkres",
                            "-o", (dir / "x.csv").string()});
  CHECK(refused.code == cli::kExitValidation);
  CHECK(refused.err.find("auction") != std::string::npos);

  auto limited = pdbaryRun({"barycenter", data("tiny.json"), "--algo", "reference", "--time-limit", "1", "-o",
                            (dir / "x.csv").string()});
  CHECK(limited.code == cli::kExitValidation);
  CHECK(pdbaryRun({"barycenter", (dir / "missing.json").string()}).code == cli::kExitValidation);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(pdbaryRun({"barycenter", (dir / "broken.json").string()}).code == cli::kExitValidation);
  CHECK(pdbaryRun({"barycenter", data("tiny.json"), "--threads", "0"}).code == cli::kExitValidation);
}

TEST_CASE("cli synth, extract, mean-field and a time-limited barycenter") {
  const auto dir = scratch("pipeline");
  auto synth = pdbaryRun({"synth", data("two_gaussians.json"), (dir / "ens").string(), "--pair-type", "saddleMax"});
  REQUIRE(synth.code == 0);
  REQUIRE(fs::exists(dir / "ens" / "fields.json"));
  REQUIRE(fs::exists(dir / "ens" / "diagrams.json"));
  CHECK(synth.report["metrics"]["members"] == 6);

  auto single = pdbaryRun({"extract", (dir / "ens" / "member000.pdbf").string(), "--pair-type", "saddleMax", "-o",
                           (dir / "one.csv").string()});
  REQUIRE(single.code == 0);
  CHECK(readDiagram(dir / "one.csv") == [&] {
    auto d = readDiagram(dir / "ens" / "member000.csv");
    d.label = "member000";
    return d;
  }());

  auto many = pdbaryRun({"extract", (dir / "ens" / "fields.json").string(), "--pair-type", "minSaddle", "-o",
                         (dir / "mins").string()});
  REQUIRE(many.code == 0);
  CHECK(readManifest(dir / "mins" / "diagrams.json").members.size() == 6);

  auto mean = pdbaryRun({"mean-field", (dir / "ens" / "fields.json").string(), "-o", (dir / "mean.pdbf").string(),
                         "--diagram", (dir / "mean.csv").string()});
  REQUIRE(mean.code == 0);
  CHECK(readField(dir / "mean.pdbf").vertexCount() == 24 * 24);
  CHECK(mean.report["metrics"]["memberSalientPairs"]["min"] == 2);

  auto bary = pdbaryRun({"barycenter", (dir / "ens" / "diagrams.json").string(), "--time-limit", "0.1", "-o",
                         (dir / "b.csv").string()});
  REQUIRE(bary.code == 0);
  CHECK(bary.report["metrics"]["optimizationSeconds"].get<double>() < 0.1 + 0.5);
  CHECK(!readDiagram(dir / "b.csv").empty());

  CHECK(pdbaryRun({"mean-field", (dir / "ens" / "diagrams.json").string()}).code == cli::kExitValidation);
  CHECK(pdbaryRun({"extract", (dir / "ens" / "member000.pdbf").string()}).code == cli::kExitValidation);
  std::ofstream(dir / "bad_spec.json") << R"({"memberCount": 0, "patterns": []})";
  CHECK(pdbaryRun({"synth", (dir / "bad_spec.json").string(), (dir / "x").string()}).code == cli::kExitValidation);
}

TEST_CASE("cli runs are reproducible and thread-count invariant") {
  const auto dir = scratch("repro");
  auto synth = pdbaryRun({"synth", data("two_gaussians.json"), (dir / "ens").string(), "--pair-type", "saddleMax"});
  REQUIRE(synth.code == 0);
  const std::string manifest = (dir / "ens" / "diagrams.json").string();
  std::vector<std::string> outputs;
  for (std::string threads : {"1", "1", "3"}) {
    const auto out = (dir / ("b" + std::to_string(outputs.size()) + ".csv")).string();
    auto r = pdbaryRun({"barycenter", manifest, "--seed", "9", "--threads", threads, "-o", out, "--skip-energy"});
    REQUIRE(r.code == 0);
    CHECK(r.report["config"]["seed"] == 9);
    outputs.push_back(slurp(out));
  }
  CHECK(outputs[0] == outputs[1]);
  CHECK(outputs[0] == outputs[2]);
}

TEST_CASE("cli cluster") {
  const auto dir = scratch("cluster");
  auto r = pdbaryRun({"cluster", data("tiny.json"), "-k", "2", "--seed", "1", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  const auto labels = nlohmann::json::parse(slurp(dir / "labels.json"));
  CHECK(labels["labels"].size() == 3);
  CHECK(labels["energies"].size() == 2);
  CHECK(labels["members"][0]["label"] == "a");
  CHECK(fs::exists(dir / "centroid_0.csv"));
  CHECK(fs::exists(dir / "centroid_1.csv"));
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(r.report["metrics"].contains("groundTruthMatch"));

  CHECK(pdbaryRun({"cluster", data("tiny.json"), "-k", "4", "--out-dir", dir.string()}).code ==
        cli::kExitValidation);
  CHECK(pdbaryRun({"cluster", data("tiny.json"), "-k", "0"}).code == cli::kExitValidation);
}
