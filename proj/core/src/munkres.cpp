#include <cmath>
#include <limits>

#include "pdbary/assignment.hpp"
#include "pdbary/error.hpp"

namespace pdbary {

AssignmentResult munkresAssignment(const AssignmentProblem& problem, std::size_t sizeGuard) {
  const std::size_t n = problem.size();
  if (n > sizeGuard)
    throw SizeGuardError("exact assignment refused: " + std::to_string(n) +
                         " points exceed the Munkres size guard of " +
                         std::to_string(sizeGuard) + "; use the auction solver");
  AssignmentResult result;
  if (n == 0) return result;

  std::vector<double> costs(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double c = problem.cost(i, j);
      if (!std::isfinite(c)) throw ValidationError("non-finite matching cost");
      costs[i * n + j] = c;
    }

  // Shortest augmenting paths with row/column potentials; rows and columns
  // are 1-based, column 0 is the virtual source.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> rowOfColumn(n + 1, 0), way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    rowOfColumn[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t i0 = rowOfColumn[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = costs[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = col0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          col1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[rowOfColumn[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col0 = col1;
    } while (rowOfColumn[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      rowOfColumn[col0] = rowOfColumn[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  result.mapping.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.mapping[rowOfColumn[j] - 1] = j - 1;
  result.cost = problem.mappingCost(result.mapping);
  result.distance = costToDistance(result.cost, problem.params().q);
  return result;
}

AssignmentResult munkresAssignment(const PersistenceDiagram& f, const PersistenceDiagram& g,
                                   const MetricParams& params, std::size_t sizeGuard) {
  const AssignmentProblem problem(f, g, params);
  return munkresAssignment(problem, sizeGuard);
}

}  // namespace pdbary
