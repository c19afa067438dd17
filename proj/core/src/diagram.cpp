#include "pdbary/diagram.hpp"

#include <algorithm>
#include <cmath>

#include "pdbary/error.hpp"

namespace pdbary {

namespace {

double powAbs(double x, double q) {
  const double ax = std::abs(x);
  if (q == 2.0) return ax * ax;
  if (q == 1.0) return ax;
  return std::pow(ax, q);
}

double squaredNorm(const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

}  // namespace

std::string_view toString(PairType type) {
  return type == PairType::MinSaddle ? "minSaddle" : "saddleMax";
}

PairType pairTypeFromString(std::string_view text) {
  if (text == "minSaddle") return PairType::MinSaddle;
  if (text == "saddleMax") return PairType::SaddleMax;
  throw ValidationError("unknown pair type '" + std::string(text) +
                        "' (expected minSaddle or saddleMax)");
}

DiagramPoint makePoint(double birth, double death, PairType type, Vec3 birthLocation,
                       Vec3 deathLocation, int dimension) {
  DiagramPoint p;
  p.birth = birth;
  p.death = death;
  p.criticalIndexLow = type == PairType::MinSaddle ? 0 : dimension - 1;
  p.criticalIndexHigh = p.criticalIndexLow + 1;
  p.birthLocation = birthLocation;
  p.deathLocation = deathLocation;
  return p;
}

double PersistenceDiagram::maxPersistence() const noexcept {
  double best = 0.0;
  for (const auto& p : points) best = std::max(best, p.persistence());
  return best;
}

void validate(const MetricParams& params) {
  if (!(params.q > 0.0)) throw ValidationError("metric exponent q must be positive");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(params.alpha)) throw ValidationError("alpha must lie in [0,1]");
  if (!unit(params.lambdaMin) || !unit(params.lambdaMax))
    throw ValidationError("lambda must lie in [0,1]");
  if (params.alpha > 0.0 && params.q != 2.0)
    throw ValidationError("geometric lifting requires q = 2");
}

void validate(const PersistenceDiagram& diagram) {
  bool seen = false;
  int low = 0;
  int high = 0;
  for (std::size_t i = 0; i < diagram.points.size(); ++i) {
    const auto& p = diagram.points[i];
    const std::string where = "point " + std::to_string(i);
    if (!std::isfinite(p.birth) || !std::isfinite(p.death))
      throw ValidationError(where + ": non-finite birth/death");
    if (p.death < p.birth) throw ValidationError(where + ": death < birth");
    if (p.criticalIndexHigh != p.criticalIndexLow + 1)
      throw ValidationError(where + ": critical indices must differ by one");
    if (p.isDiagonal) continue;
    if (!seen) {
      low = p.criticalIndexLow;
      high = p.criticalIndexHigh;
      seen = true;
    } else if (p.criticalIndexLow != low || p.criticalIndexHigh != high) {
      throw ValidationError(where + ": mixed critical pair types in one diagram");
    }
  }
}

double pointwiseDistance(const DiagramPoint& a, const DiagramPoint& b, double q) {
  if (a.onDiagonal() && b.onDiagonal()) return 0.0;
  const double dx = b.birth - a.birth;
  const double dy = b.death - a.death;
  if (q == 2.0) return std::sqrt(dx * dx + dy * dy);
  return std::pow(powAbs(dx, q) + powAbs(dy, q), 1.0 / q);
}

DiagramPoint diagonalProjection(const DiagramPoint& a) {
  DiagramPoint p = a;
  const double mid = (a.birth + a.death) / 2.0;
  p.birth = mid;
  p.death = mid;
  p.isDiagonal = true;
  return p;
}

Vec3 liftedLocation(const DiagramPoint& a, double lambda) noexcept {
  Vec3 out;
  for (int k = 0; k < 3; ++k)
    out[k] = lambda * a.deathLocation[k] + (1.0 - lambda) * a.birthLocation[k];
  return out;
}

double liftedSquaredDistance(const DiagramPoint& a, const DiagramPoint& b,
                             const MetricParams& params, PairType type) {
  if (a.onDiagonal() && b.onDiagonal()) return 0.0;
  const double dx = b.birth - a.birth;
  const double dy = b.death - a.death;
  const double plane = dx * dx + dy * dy;
  if (params.alpha == 0.0) return plane;
  const double lambda = params.lambdaFor(type);
  const double geometric = squaredNorm(liftedLocation(a, lambda), liftedLocation(b, lambda));
  return (1.0 - params.alpha) * plane + params.alpha * geometric;
}

double liftedDistance(const DiagramPoint& a, const DiagramPoint& b, const MetricParams& params,
                      PairType type) {
  if (params.alpha == 0.0) return pointwiseDistance(a, b, 2.0);
  return std::sqrt(liftedSquaredDistance(a, b, params, type));
}

double diagonalCost(const DiagramPoint& a, const MetricParams& params) {
  if (a.onDiagonal()) return 0.0;
  const double half = (a.death - a.birth) / 2.0;
  const double plane = 2.0 * powAbs(half, params.q);
  return params.alpha == 0.0 ? plane : (1.0 - params.alpha) * plane;
}

double matchingCost(const DiagramPoint& a, const DiagramPoint& b, const MetricParams& params,
                    PairType type) {
  if (params.q == 2.0) return liftedSquaredDistance(a, b, params, type);
  if (a.onDiagonal() && b.onDiagonal()) return 0.0;
  return powAbs(b.birth - a.birth, params.q) + powAbs(b.death - a.death, params.q);
}

std::pair<PersistenceDiagram, PersistenceDiagram> augment(const PersistenceDiagram& f,
                                                          const PersistenceDiagram& g) {
  if (f.pairType != g.pairType && !f.empty() && !g.empty())
    throw ValidationError("cannot augment diagrams of different pair types");
  PersistenceDiagram fa = f;
  PersistenceDiagram ga = g;
  fa.points.reserve(f.size() + g.size());
  ga.points.reserve(f.size() + g.size());
  for (const auto& b : g.points) fa.points.push_back(diagonalProjection(b));
  for (const auto& a : f.points) ga.points.push_back(diagonalProjection(a));
  return {std::move(fa), std::move(ga)};
}

PersistenceDiagram thresholdByPersistence(const PersistenceDiagram& diagram, double rho) {
  PersistenceDiagram out;
  out.pairType = diagram.pairType;
  out.label = diagram.label;
  for (const auto& p : diagram.points)
    if (p.persistence() > rho) out.points.push_back(p);
  return out;
}

PersistenceDiagram withoutDiagonalPoints(const PersistenceDiagram& diagram) {
  PersistenceDiagram out;
  out.pairType = diagram.pairType;
  out.label = diagram.label;
  std::copy_if(diagram.points.begin(), diagram.points.end(), std::back_inserter(out.points),
               [](const DiagramPoint& p) { return !p.onDiagonal(); });
  return out;
}

}  // namespace pdbary
