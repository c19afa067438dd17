#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pdbary {

using Vec3 = std::array<double, 3>;

/// Critical type shared by every pair of a diagram.
enum class PairType { MinSaddle, SaddleMax };

std::string_view toString(PairType type);
PairType pairTypeFromString(std::string_view text);

/// One birth/death point of a persistence diagram.
///
/// Locations are the domain coordinates of the two critical points
/// (birth vertex, death vertex). Diagonal points are augmentation ghosts:
/// they have birth == death and are never serialized.
struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  int criticalIndexLow = 0;
  int criticalIndexHigh = 1;
  Vec3 birthLocation{0.0, 0.0, 0.0};
  Vec3 deathLocation{0.0, 0.0, 0.0};
  bool isDiagonal = false;

  double persistence() const noexcept { return death - birth; }
  bool onDiagonal() const noexcept { return isDiagonal || birth == death; }

  friend bool operator==(const DiagramPoint&, const DiagramPoint&) = default;
};

/// Convenience constructor for tests and generators.
DiagramPoint makePoint(double birth, double death, PairType type = PairType::MinSaddle,
                       Vec3 birthLocation = {0.0, 0.0, 0.0}, Vec3 deathLocation = {0.0, 0.0, 0.0},
                       int dimension = 2);

struct PersistenceDiagram {
  std::vector<DiagramPoint> points;
  PairType pairType = PairType::MinSaddle;
  std::string label;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  double maxPersistence() const noexcept;

  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// An ensemble is an ordered list of diagrams of one pair type.
using Ensemble = std::vector<PersistenceDiagram>;

struct MetricParams {
  double q = 2.0;
  double alpha = 0.0;      // geometric lifting weight
  double lambdaMin = 0.0;  // location blend used for MinSaddle diagrams
  double lambdaMax = 1.0;  // location blend used for SaddleMax diagrams

  double lambdaFor(PairType type) const noexcept {
    return type == PairType::MinSaddle ? lambdaMin : lambdaMax;
  }
};

/// Throws ValidationError when q <= 0, alpha or lambdas leave [0,1], or
/// alpha > 0 is combined with q != 2.
void validate(const MetricParams& params);

/// Throws ValidationError on death < birth, mismatched critical indices,
/// or diagonal flags on stored points.
void validate(const PersistenceDiagram& diagram);

/// (|x_b-x_a|^q + |y_b-y_a|^q)^(1/q); zero when both points lie on the diagonal.
double pointwiseDistance(const DiagramPoint& a, const DiagramPoint& b, double q);

/// Nearest diagonal point; keeps a's critical indices and locations.
DiagramPoint diagonalProjection(const DiagramPoint& a);

/// p^lambda = lambda * deathLocation + (1 - lambda) * birthLocation.
Vec3 liftedLocation(const DiagramPoint& a, double lambda) noexcept;

/// Squared geometrically lifted distance (q = 2). Equals the squared
/// pointwise distance when alpha == 0, and zero for two diagonal points.
double liftedSquaredDistance(const DiagramPoint& a, const DiagramPoint& b,
                             const MetricParams& params, PairType type);

double liftedDistance(const DiagramPoint& a, const DiagramPoint& b, const MetricParams& params,
                      PairType type = PairType::MinSaddle);

/// Cost of deleting `a`, i.e. matching it with its own diagonal projection,
/// raised to the q-th power (lifted by (1 - alpha) when alpha > 0).
double diagonalCost(const DiagramPoint& a, const MetricParams& params);

/// Cost of matching two points raised to the q-th power: d_q(a,b)^q, or the
/// squared lifted distance when alpha > 0.
double matchingCost(const DiagramPoint& a, const DiagramPoint& b, const MetricParams& params,
                    PairType type);

/// Balances two diagrams by injecting the diagonal projections of each
/// diagram's points into the other. Input points come first, ghosts after.
std::pair<PersistenceDiagram, PersistenceDiagram> augment(const PersistenceDiagram& f,
                                                          const PersistenceDiagram& g);

/// Points with persistence strictly above rho, in their original order.
PersistenceDiagram thresholdByPersistence(const PersistenceDiagram& diagram, double rho);

/// Removes points with death <= birth (used to prune dead barycenter points).
PersistenceDiagram withoutDiagonalPoints(const PersistenceDiagram& diagram);

}  // namespace pdbary
