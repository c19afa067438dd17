#include "cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/run_report.hpp"
#include "pdbary/assignment.hpp"
#include "pdbary/barycenter.hpp"
#include "pdbary/clustering.hpp"
#include "pdbary/diagram_io.hpp"
#include "pdbary/energy_trace.hpp"
#include "pdbary/ensemble.hpp"
#include "pdbary/error.hpp"
#include "pdbary/field_persistence.hpp"
#include "pdbary/scalar_field.hpp"

namespace pdbary::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// "-o,--output" -> "PDBARY_OUTPUT"
std::string envName(const std::string& names) {
  const std::string flag = names.substr(names.rfind("--") + 2);
  std::string out = kEnvPrefix;
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
CLI::Option* flag(CLI::App* app, const std::string& names, T& value, const std::string& help) {
  return app->add_option(names, value, help)->capture_default_str();
}

// Unset flags of the chosen subcommand take their value from the
// environment, converted like a command-line value so bad input is an error.
void applyEnvironment(CLI::App* sub) {
  for (CLI::Option* opt : sub->get_options()) {
    if (opt->count() > 0 || opt->get_lnames().empty() || opt == sub->get_help_ptr()) continue;
    const char* value = std::getenv(envName("--" + opt->get_lnames().front()).c_str());
    if (!value) continue;
    opt->add_result(std::string(value));
    opt->run_callback();
  }
}

struct Common {
  double alpha = 0.0;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string report;
};

void addCommon(CLI::App* app, Common& c, bool seeded) {
  flag(app, "--alpha", c.alpha, "geometric lifting weight in [0,1]");
  flag(app, "--threads", c.threads, "worker threads (>= 1)");
  if (seeded) flag(app, "--seed", c.seed, "random seed");
  flag(app, "--report", c.report, "also write the run report to this file");
}

const std::vector<std::string> kPairTypes = {"minSaddle", "saddleMax"};

// Allowed values are checked here rather than by the parser, so flags and
// environment variables are held to the same rules.
void requireOneOf(const std::string& flagName, const std::string& value, const std::vector<std::string>& allowed) {
  if (std::find(allowed.begin(), allowed.end(), value) != allowed.end()) return;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  throw ValidationError(flagName + " must be one of " + list + ", got '" + value + "'");
}

MetricParams metricOf(const Common& c, double q = 2.0) {
  if (c.threads < 1) throw ValidationError("--threads must be at least 1");
  MetricParams params;
  params.alpha = c.alpha;
  params.q = q;
  validate(params);
  return params;
}

void ensureParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

Manifest manifestOfKind(const std::string& path, const std::string& kind) {
  Manifest manifest = readManifest(path);
  if (manifest.kind != kind)
    throw ValidationError(path + ": expected a '" + kind + "' manifest, got '" + manifest.kind + "'");
  return manifest;
}

std::vector<ScalarField> loadFields(const Manifest& manifest) {
  std::vector<ScalarField> fields;
  for (const auto& entry : manifest.members) {
    fields.push_back(loadField(manifest.resolve(entry)));
    fields.back().label = entry.label;
  }
  return fields;
}

std::size_t salientCount(const PersistenceDiagram& d, double fraction) {
  const double top = d.maxPersistence();
  return static_cast<std::size_t>(std::count_if(d.points.begin(), d.points.end(), [&](const DiagramPoint& p) {
    return p.persistence() > fraction * top;
  }));
}

json traceJson(const EnergyTrace& trace) {
  json rows = json::array();
  for (const auto& r : trace) {
    json row = {{"step", r.step},
                {"elapsedSeconds", r.elapsedSeconds},
                {"epsilon", r.epsilon},
                {"rho", r.rho},
                {"candidateSize", r.candidateSize},
                {"approxEnergy", r.approxEnergy}};
    if (r.convergedEnergy) row["convergedEnergy"] = *r.convergedEnergy;
    rows.push_back(row);
  }
  return rows;
}

// --- distance ---------------------------------------------------------------

struct DistanceOptions {
  Common common;
  std::string first, second;
  std::string solver = "auction";
  double gamma = 0.01;
  double q = 2.0;
  std::size_t munkresGuard = kDefaultMunkresGuard;
  std::string matching;
};

void writeMatching(const AssignmentProblem& problem, const AssignmentResult& result, const fs::path& path) {
  ensureParent(path);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "bidder,object,bidder_birth,bidder_death,object_birth,object_death,cost\n";
  const auto& f = problem.bidders();
  const auto& g = problem.objects();
  for (std::size_t a = 0; a < result.mapping.size(); ++a) {
    const std::size_t b = result.mapping[a];
    const bool ghostA = problem.isGhostBidder(a), ghostB = problem.isGhostObject(b);
    if (ghostA && ghostB) continue;
    // A ghost stands for the diagonal projection of the point it is matched with.
    const DiagramPoint pa = ghostA ? diagonalProjection(g.points[b]) : f.points[a];
    const DiagramPoint pb = ghostB ? diagonalProjection(f.points[a]) : g.points[b];
    out << (ghostA ? std::string("-1") : std::to_string(a)) << ',' << (ghostB ? std::string("-1") : std::to_string(b))
        << ',' << formatReal(pa.birth) << ',' << formatReal(pa.death) << ',' << formatReal(pb.birth) << ','
        << formatReal(pb.death) << ',' << formatReal(problem.cost(a, b)) << '\n';
  }
}

void distanceCommand(const DistanceOptions& o, RunReport& report) {
  requireOneOf("--solver", o.solver, {"munkres", "auction"});
  const MetricParams params = metricOf(o.common, o.q);
  report.config = {{"first", o.first},   {"second", o.second}, {"solver", o.solver},
                   {"gamma", o.gamma},   {"q", o.q},           {"alpha", o.common.alpha},
                   {"munkresGuard", o.munkresGuard}};
  if (!(o.gamma > 0.0)) throw ValidationError("--gamma must be positive");
  const auto f = readDiagram(o.first);
  const auto g = readDiagram(o.second);
  const AssignmentProblem problem(f, g, params);
  Stopwatch clock;
  AssignmentResult result;
  if (o.solver == "munkres") {
    result = munkresAssignment(problem, o.munkresGuard);
  } else {
    AuctionOptions options;
    options.gamma = o.gamma;
    auto converged = auctionUntilConverged(problem, options);
    result = std::move(converged.result);
    report.metrics["rounds"] = converged.rounds;
    report.metrics["finalEpsilon"] = converged.finalEpsilon;
  }
  report.metrics["seconds"] = clock.seconds();
  report.metrics["distance"] = result.distance;
  report.metrics["cost"] = result.cost;
  report.metrics["points"] = {f.size(), g.size()};
  if (!o.matching.empty()) {
    writeMatching(problem, result, o.matching);
    report.outputs["matching"] = o.matching;
  }
}

// --- barycenter -------------------------------------------------------------

struct BarycenterOptions {
  Common common;
  std::string manifest;
  std::string algo = "progressive";
  std::string solver = "auction";
  double timeLimit = 0.0;
  double gamma = 0.01;
  std::size_t munkresGuard = kDefaultMunkresGuard;
  std::string output = "barycenter.csv";
  std::string trace;
  bool skipEnergy = false;
};

void barycenterCommand(const BarycenterOptions& o, RunReport& report) {
  requireOneOf("--algo", o.algo, {"progressive", "reference"});
  requireOneOf("--solver", o.solver, {"munkres", "auction"});
  const MetricParams params = metricOf(o.common);
  report.config = {{"manifest", o.manifest},       {"algo", o.algo},
                   {"solver", o.solver},           {"timeLimit", o.timeLimit},
                   {"gamma", o.gamma},             {"alpha", o.common.alpha},
                   {"threads", o.common.threads},  {"seed", o.common.seed},
                   {"munkresGuard", o.munkresGuard}};
  if (o.timeLimit < 0.0) throw ValidationError("--time-limit must be non-negative");
  if (!(o.gamma > 0.0)) throw ValidationError("--gamma must be positive");
  if (o.algo == "reference" && o.timeLimit > 0.0)
    throw ValidationError("--time-limit applies to --algo progressive only");
  const Ensemble inputs = loadDiagramEnsemble(manifestOfKind(o.manifest, "diagrams"));

  BarycenterResult result;
  if (o.algo == "reference") {
    ReferenceConfig config;
    config.seed = o.common.seed;
    config.threads = o.common.threads;
    config.gamma = o.gamma;
    config.munkresGuard = o.munkresGuard;
    result = referenceBarycenter(inputs, params, o.solver == "munkres" ? Solver::Munkres : Solver::Auction, config);
  } else {
    BarycenterConfig config;
    if (o.timeLimit > 0.0) config.timeLimit = o.timeLimit;
    config.threads = o.common.threads;
    config.seed = o.common.seed;
    config.gammaForEnergy = o.gamma;
    result = progressiveBarycenter(inputs, params, config);
  }

  writeDiagram(result.barycenter, o.output);
  report.outputs["barycenter"] = o.output;
  if (!o.trace.empty()) {
    writeTrace(result.trace, o.trace);
    report.outputs["trace"] = o.trace;
  }
  report.metrics["members"] = inputs.size();
  report.metrics["barycenterPoints"] = result.barycenter.size();
  report.metrics["relaxations"] = result.relaxations;
  report.metrics["optimizationSeconds"] = result.elapsedSeconds;
  report.metrics["approxEnergy"] = result.approxEnergy;
  if (!o.skipEnergy)
    report.metrics["convergedEnergy"] =
        frechetEnergy(result.barycenter, inputs, params, o.gamma, o.common.threads);
}

// --- cluster ----------------------------------------------------------------

struct ClusterOptions {
  Common common;
  std::string manifest;
  std::size_t k = 2;
  double timeLimit = 0.0;
  double gamma = 0.01;
  bool noElkan = false;
  std::string outDir = "clusters";
};

void clusterCommand(const ClusterOptions& o, RunReport& report) {
  if (o.k < 1) throw ValidationError("--k must be at least 1");
  if (!(o.gamma > 0.0)) throw ValidationError("--gamma must be positive");
  const MetricParams params = metricOf(o.common);
  report.config = {{"manifest", o.manifest}, {"k", o.k},
                   {"timeLimit", o.timeLimit}, {"gamma", o.gamma},
                   {"alpha", o.common.alpha}, {"threads", o.common.threads},
                   {"seed", o.common.seed},   {"elkan", !o.noElkan}};
  if (o.timeLimit < 0.0) throw ValidationError("--time-limit must be non-negative");
  const Manifest manifest = manifestOfKind(o.manifest, "diagrams");
  const Ensemble inputs = loadDiagramEnsemble(manifest);

  ClusteringConfig config;
  config.k = o.k;
  if (o.timeLimit > 0.0) config.timeLimit = o.timeLimit;
  config.seed = o.common.seed;
  config.gammaAssign = o.gamma;
  config.threads = o.common.threads;
  config.elkanPruning = !o.noElkan;
  const ClusteringResult result = clusterDiagrams(inputs, params, config);
  const auto energies = clusterEnergies(inputs, result.labels, result.centroids, params, o.gamma, o.common.threads);

  const fs::path dir = o.outDir;
  fs::create_directories(dir);
  json centroidFiles = json::array();
  for (std::size_t j = 0; j < result.centroids.size(); ++j) {
    const fs::path file = dir / ("centroid_" + std::to_string(j) + ".csv");
    writeDiagram(result.centroids[j], file);
    centroidFiles.push_back(file.string());
  }
  writeTrace(result.trace, dir / "trace.csv");

  json members = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i)
    members.push_back({{"label", manifest.members[i].label}, {"cluster", result.labels[i]}});
  json labels = {{"labels", result.labels},
                 {"members", members},
                 {"energies", energies},
                 {"centroids", centroidFiles},
                 {"trace", traceJson(result.trace)}};
  const fs::path labelsPath = dir / "labels.json";
  std::ofstream(labelsPath) << labels.dump(2) << '\n';

  report.outputs = {{"labels", labelsPath.string()},
                    {"centroids", centroidFiles},
                    {"trace", (dir / "trace.csv").string()}};
  report.metrics["members"] = inputs.size();
  report.metrics["iterations"] = result.iterations;
  report.metrics["optimizationSeconds"] = result.elapsedSeconds;
  report.metrics["energies"] = energies;
  report.metrics["distancesComputed"] = result.distancesComputed;
  report.metrics["distancesPruned"] = result.distancesPruned;
  const bool grouped = std::all_of(manifest.members.begin(), manifest.members.end(),
                                   [](const ManifestEntry& e) { return e.group.has_value(); });
  if (grouped) {
    std::vector<std::size_t> truth;
    for (const auto& e : manifest.members) truth.push_back(static_cast<std::size_t>(*e.group));
    report.metrics["groundTruthMatch"] = samePartition(result.labels, truth);
  }
}

// --- synth / extract / mean-field -------------------------------------------

struct SynthOptions {
  std::string spec;
  std::string outDir;
  std::string pairType = "none";
  std::string report;
};

void writeDiagrams(const std::vector<ScalarField>& fields, const std::vector<std::optional<int>>& groups,
                   PairType type, const fs::path& dir, RunReport& report) {
  fs::create_directories(dir);
  Manifest manifest;
  manifest.kind = "diagrams";
  manifest.pairType = type;
  std::size_t points = 0;
  for (std::size_t m = 0; m < fields.size(); ++m) {
    PersistenceDiagram d = extremumDiagram(fields[m], type);
    d.label = fields[m].label;
    points += d.size();
    const std::string file = fields[m].label + ".csv";
    writeDiagram(d, dir / file);
    manifest.members.push_back({fields[m].label, file, groups[m]});
  }
  writeManifest(manifest, dir / "diagrams.json");
  report.outputs["diagramManifest"] = (dir / "diagrams.json").string();
  report.metrics["diagramPoints"] = points;
}

void synthCommand(const SynthOptions& o, RunReport& report) {
  requireOneOf("--pair-type", o.pairType, {"none", "minSaddle", "saddleMax"});
  const EnsembleSpec spec = readEnsembleSpec(o.spec);
  report.config = {{"spec", o.spec}, {"outDir", o.outDir}, {"pairType", o.pairType}};
  const fs::path dir = o.outDir;
  fs::create_directories(dir);
  const auto truth = groundTruthGroups(spec);
  Manifest manifest;
  manifest.kind = "fields";
  std::vector<ScalarField> fields;
  std::vector<std::optional<int>> groups;
  for (std::size_t m = 0; m < spec.memberCount; ++m) {
    fields.push_back(generateMember(spec, m));
    const std::string file = fields.back().label + ".pdbf";
    writeField(fields.back(), dir / file);
    groups.emplace_back(static_cast<int>(truth[m]));
    manifest.members.push_back({fields.back().label, file, groups.back()});
  }
  writeManifest(manifest, dir / "fields.json");
  report.outputs["fieldManifest"] = (dir / "fields.json").string();
  report.metrics["members"] = spec.memberCount;
  if (o.pairType != "none") writeDiagrams(fields, groups, pairTypeFromString(o.pairType), dir, report);
}

struct ExtractOptions {
  std::string input;
  std::string pairType = "saddleMax";
  std::string output;
  std::string report;
};

void extractCommand(const ExtractOptions& o, RunReport& report) {
  requireOneOf("--pair-type", o.pairType, kPairTypes);
  report.config = {{"input", o.input}, {"pairType", o.pairType}, {"output", o.output}};
  const PairType type = pairTypeFromString(o.pairType);
  if (fs::path(o.input).extension() == ".json") {
    const Manifest manifest = manifestOfKind(o.input, "fields");
    std::vector<std::optional<int>> groups;
    for (const auto& e : manifest.members) groups.push_back(e.group);
    writeDiagrams(loadFields(manifest), groups, type, o.output, report);
    return;
  }
  ScalarField field = loadField(o.input);
  PersistenceDiagram d = extremumDiagram(field, type);
  d.label = fs::path(o.input).stem().string();
  ensureParent(o.output);
  writeDiagram(d, o.output);
  report.outputs["diagram"] = o.output;
  report.metrics["points"] = d.size();
  report.metrics["maxPersistence"] = d.maxPersistence();
}

struct MeanFieldOptions {
  std::string manifest;
  std::string pairType = "saddleMax";
  std::string output = "mean.pdbf";
  std::string diagram;
  double salientFraction = 0.5;
  std::string report;
};

void meanFieldCommand(const MeanFieldOptions& o, RunReport& report) {
  requireOneOf("--pair-type", o.pairType, kPairTypes);
  if (!(o.salientFraction >= 0.0 && o.salientFraction <= 1.0))
    throw ValidationError("--salient-fraction must lie in [0,1]");
  report.config = {{"manifest", o.manifest}, {"pairType", o.pairType},
                   {"output", o.output},     {"salientFraction", o.salientFraction}};
  const PairType type = pairTypeFromString(o.pairType);
  const auto fields = loadFields(manifestOfKind(o.manifest, "fields"));
  ScalarField mean = pointwiseMean(fields);
  mean.label = "mean";
  ensureParent(o.output);
  writeField(mean, o.output);
  report.outputs["field"] = o.output;

  PersistenceDiagram d = extremumDiagram(mean, type);
  d.label = "mean";
  if (!o.diagram.empty()) {
    ensureParent(o.diagram);
    writeDiagram(d, o.diagram);
    report.outputs["diagram"] = o.diagram;
  }
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& f : fields) {
    const std::size_t s = salientCount(extremumDiagram(f, type), o.salientFraction);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  report.metrics["members"] = fields.size();
  report.metrics["points"] = d.size();
  report.metrics["salientPairs"] = salientCount(d, o.salientFraction);
  report.metrics["memberSalientPairs"] = {{"min", lo}, {"max", hi}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wasserstein distances, barycenters and clusterings of persistence diagrams", "pdbary"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PDBARY_VERSION);
  app.footer("Every --flag can also be set through the environment as PDBARY_FLAG, upper case with\n"
             "dashes turned into underscores (--time-limit -> PDBARY_TIME_LIMIT). Flags win.\n"
             "Exit codes: 0 success, 2 invalid input, 3 runtime failure.");

  DistanceOptions dist;
  auto* distance = app.add_subcommand("distance", "Wasserstein distance between two diagram files");
  distance->add_option("first", dist.first, "first diagram (CSV)")->required();
  distance->add_option("second", dist.second, "second diagram (CSV)")->required();
  flag(distance, "--solver", dist.solver, "munkres or auction");
  flag(distance, "--gamma", dist.gamma, "relative accuracy of the auction");
  flag(distance, "--q", dist.q, "Wasserstein exponent");
  flag(distance, "--munkres-guard", dist.munkresGuard, "largest total point count for munkres");
  flag(distance, "--matching", dist.matching, "write the matching as CSV");
  addCommon(distance, dist.common, false);

  BarycenterOptions bary;
  auto* barycenter = app.add_subcommand("barycenter", "Wasserstein barycenter of a diagram ensemble");
  barycenter->add_option("manifest", bary.manifest, "diagram manifest (JSON)")->required();
  flag(barycenter, "--algo", bary.algo, "progressive or reference");
  flag(barycenter, "--solver", bary.solver, "assignment solver of the reference algorithm");
  flag(barycenter, "--time-limit", bary.timeLimit, "seconds; 0 runs to convergence");
  flag(barycenter, "--gamma", bary.gamma, "accuracy of converged distances");
  flag(barycenter, "--munkres-guard", bary.munkresGuard, "largest total point count for munkres");
  flag(barycenter, "-o,--output", bary.output, "barycenter diagram (CSV)");
  flag(barycenter, "--trace", bary.trace, "energy trace (CSV)");
  barycenter->add_flag("--skip-energy", bary.skipEnergy, "do not evaluate the converged energy");
  addCommon(barycenter, bary.common, true);

  ClusterOptions clus;
  auto* cluster = app.add_subcommand("cluster", "progressive k-means clustering of a diagram ensemble");
  cluster->add_option("manifest", clus.manifest, "diagram manifest (JSON)")->required();
  flag(cluster, "-k,--k", clus.k, "number of clusters");
  flag(cluster, "--time-limit", clus.timeLimit, "seconds; 0 runs to convergence");
  flag(cluster, "--gamma", clus.gamma, "accuracy of member-to-centroid distances");
  flag(cluster, "--out-dir", clus.outDir, "directory for labels, centroids and trace");
  cluster->add_flag("--no-elkan", clus.noElkan, "evaluate every member-centroid distance");
  addCommon(cluster, clus.common, true);

  SynthOptions syn;
  auto* synth = app.add_subcommand("synth", "generate a synthetic Gaussian ensemble");
  synth->add_option("spec", syn.spec, "ensemble specification (JSON)")->required();
  synth->add_option("out-dir", syn.outDir, "output directory")->required();
  flag(synth, "--pair-type", syn.pairType, "also extract diagrams: none, minSaddle or saddleMax");
  flag(synth, "--report", syn.report, "also write the run report to this file");

  ExtractOptions ext;
  auto* extract = app.add_subcommand("extract", "persistence diagram of a field or a field manifest");
  extract->add_option("input", ext.input, "field file (.pdbf or .csv) or field manifest (.json)")->required();
  flag(extract, "--pair-type", ext.pairType, "minSaddle or saddleMax");
  flag(extract, "-o,--output", ext.output, "diagram file, or directory for a manifest")->required();
  flag(extract, "--report", ext.report, "also write the run report to this file");

  MeanFieldOptions mf;
  auto* meanField = app.add_subcommand("mean-field", "pointwise mean of a field ensemble and its diagram");
  meanField->add_option("manifest", mf.manifest, "field manifest (JSON)")->required();
  flag(meanField, "--pair-type", mf.pairType, "minSaddle or saddleMax");
  flag(meanField, "-o,--output", mf.output, "mean field (.pdbf)");
  flag(meanField, "--diagram", mf.diagram, "diagram of the mean field (CSV)");
  flag(meanField, "--salient-fraction", mf.salientFraction, "salience threshold, fraction of max persistence");
  flag(meanField, "--report", mf.report, "also write the run report to this file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    for (CLI::App* sub : app.get_subcommands()) applyEnvironment(sub);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  RunReport report;
  report.arguments = args;
  std::string reportPath;
  try {
    if (distance->parsed()) {
      report.command = "distance";
      reportPath = dist.common.report;
      distanceCommand(dist, report);
    } else if (barycenter->parsed()) {
      report.command = "barycenter";
      reportPath = bary.common.report;
      barycenterCommand(bary, report);
    } else if (cluster->parsed()) {
      report.command = "cluster";
      reportPath = clus.common.report;
      clusterCommand(clus, report);
    } else if (synth->parsed()) {
      report.command = "synth";
      reportPath = syn.report;
      synthCommand(syn, report);
    } else if (extract->parsed()) {
      report.command = "extract";
      reportPath = ext.report;
      extractCommand(ext, report);
    } else if (meanField->parsed()) {
      report.command = "mean-field";
      reportPath = mf.report;
      meanFieldCommand(mf, report);
    }
  } catch (const ValidationError& e) {
    report.exitCode = kExitValidation;
    report.error = e.what();
  } catch (const std::exception& e) {
    report.exitCode = kExitRuntime;
    report.error = e.what();
  }
  if (!report.error.empty()) err << "pdbary " << report.command << ": " << report.error << '\n';
  out << report.toJson().dump(2) << '\n';
  if (!reportPath.empty()) {
    try {
      report.write(reportPath);
    } catch (const std::exception& e) {
      err << "pdbary: " << e.what() << '\n';
      if (report.exitCode == kExitOk) report.exitCode = kExitRuntime;
    }
  }
  return report.exitCode;
}

}  // namespace pdbary::cli
