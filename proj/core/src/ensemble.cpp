#include "pdbary/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "pdbary/error.hpp"

namespace pdbary {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double symmetric(std::mt19937_64& rng, double amplitude) {
  return amplitude * (2.0 * unit(rng) - 1.0);
}

std::mt19937_64 memberRng(std::uint64_t seed, std::size_t m) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(m >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void validate(const EnsembleSpec& spec) {
  if (spec.memberCount == 0) throw ValidationError("memberCount must be at least 1");
  if (spec.patterns.empty()) throw ValidationError("at least one pattern is required");
  if (!(spec.noiseAmplitude >= 0.0) || !std::isfinite(spec.noiseAmplitude))
    throw ValidationError("noiseAmplitude must be non-negative");
  if (!(spec.centerJitter >= 0.0) || !std::isfinite(spec.centerJitter))
    throw ValidationError("centerJitter must be non-negative");
  if (spec.extents[0] < 2 || spec.extents[1] < 2 || spec.extents[2] < 1)
    throw ValidationError("grid extents must be at least 2 x 2");
  for (const auto& p : spec.patterns)
    for (const auto& g : p.gaussians)
      if (!(g.width > 0.0) || !std::isfinite(g.amplitude))
        throw ValidationError("gaussian widths must be positive and amplitudes finite");
}

EnsembleSpec parseEnsembleSpec(const std::string& text, const std::string& source) {
  EnsembleSpec spec;
  try {
    const auto j = nlohmann::json::parse(text);
    spec.memberCount = j.value("memberCount", std::size_t{1});
    if (j.contains("extents")) {
      const auto& e = j.at("extents");
      if (!e.is_array() || e.size() < 2 || e.size() > 3)
        throw ParseError(source, 0, "extents must list 2 or 3 sizes");
      spec.extents = {e[0].get<std::size_t>(), e[1].get<std::size_t>(),
                      e.size() == 3 ? e[2].get<std::size_t>() : std::size_t{1}};
    }
    spec.noiseAmplitude = j.value("noiseAmplitude", 0.0);
    spec.centerJitter = j.value("centerJitter", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.labelPrefix = j.value("labelPrefix", std::string("member"));
    for (const auto& p : j.at("patterns")) {
      Pattern pattern;
      for (const auto& g : p.at("gaussians")) {
        Gaussian gaussian;
        const auto& c = g.at("center");
        for (std::size_t a = 0; a < c.size() && a < 3; ++a) gaussian.center[a] = c[a].get<double>();
        gaussian.amplitude = g.value("amplitude", 1.0);
        gaussian.width = g.value("width", 0.1);
        pattern.gaussians.push_back(gaussian);
      }
      spec.patterns.push_back(std::move(pattern));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source, 0, std::string("invalid ensemble spec: ") + e.what());
  }
  validate(spec);
  return spec;
}

EnsembleSpec readEnsembleSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open ensemble spec " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parseEnsembleSpec(buffer.str(), path.string());
}

ScalarField generateMember(const EnsembleSpec& spec, std::size_t m) {
  validate(spec);
  if (m >= spec.memberCount) throw ValidationError("member index out of range");
  const auto& pattern = spec.patterns[m % spec.patterns.size()];
  auto rng = memberRng(spec.seed, m);
  const int dims = spec.extents[2] > 1 ? 3 : 2;

  std::vector<Gaussian> shifted = pattern.gaussians;
  for (auto& g : shifted)
    for (int a = 0; a < dims; ++a) g.center[a] += symmetric(rng, spec.centerJitter);

  ScalarField field(spec.extents[0], spec.extents[1], spec.extents[2]);
  for (int a = 0; a < dims; ++a)
    field.spacing[a] = spec.extents[a] > 1 ? 1.0 / static_cast<double>(spec.extents[a] - 1) : 1.0;
  char label[64];
  std::snprintf(label, sizeof label, "%s%03zu", spec.labelPrefix.c_str(), m);
  field.label = label;
  for (std::size_t v = 0; v < field.vertexCount(); ++v) {
    const auto c = field.coordinates(v);
    double value = 0.0;
    for (const auto& g : shifted) {
      double r2 = 0.0;
      for (int a = 0; a < dims; ++a) {
        const double u = static_cast<double>(c[a]) / static_cast<double>(spec.extents[a] - 1);
        r2 += (u - g.center[a]) * (u - g.center[a]);
      }
      value += g.amplitude * std::exp(-r2 / (2.0 * g.width * g.width));
    }
    field.values[v] = value + symmetric(rng, spec.noiseAmplitude);
  }
  return field;
}

std::vector<ScalarField> generateEnsemble(const EnsembleSpec& spec) {
  validate(spec);
  std::vector<ScalarField> out;
  out.reserve(spec.memberCount);
  for (std::size_t m = 0; m < spec.memberCount; ++m) out.push_back(generateMember(spec, m));
  return out;
}

std::vector<std::size_t> groundTruthGroups(const EnsembleSpec& spec) {
  validate(spec);
  std::vector<std::size_t> out(spec.memberCount);
  for (std::size_t m = 0; m < spec.memberCount; ++m) out[m] = m % spec.patterns.size();
  return out;
}

}  // namespace pdbary
