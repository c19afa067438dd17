#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pdbary/diagram.hpp"

namespace pdbary::detail {

inline PersistenceDiagram sortedByPersistence(const PersistenceDiagram& diagram) {
  PersistenceDiagram out;
  out.pairType = diagram.pairType;
  out.label = diagram.label;
  for (const auto& p : diagram.points)
    if (p.persistence() > 0.0) out.points.push_back(p);
  std::stable_sort(out.points.begin(), out.points.end(),
                   [](const DiagramPoint& a, const DiagramPoint& b) {
                     return a.persistence() > b.persistence();
                   });
  return out;
}

/// Next persistence threshold. `all` holds every input persistence in
/// decreasing order and `revealed` of them lie above the current `rho`.
/// The revealed count may grow by `cap` (at least one persistence level);
/// the threshold never drops below sqrt(tau * epsilon) nor rises above rho.
inline double scheduleRho(const std::vector<double>& all, std::size_t revealed, double rho,
                          double epsilon, double tau, double cap) {
  const double floor = std::sqrt(tau * epsilon);
  const std::size_t total = all.size();
  if (revealed >= total) return std::max(0.0, std::min(rho, floor));
  const auto countAbove = [&](double threshold) {
    return static_cast<std::size_t>(
        std::lower_bound(all.begin(), all.end(), threshold, std::greater<>()) - all.begin());
  };
  const auto allowed = std::max<std::size_t>(
      static_cast<std::size_t>(std::floor(static_cast<double>(revealed) * (1.0 + cap))),
      revealed + 1);
  double target = allowed >= total ? 0.0 : all[allowed];
  if (countAbove(target) <= revealed) {
    // A tie group wider than the cap: reveal the whole next level.
    const double next = all[revealed];
    const auto below = std::upper_bound(all.begin(), all.end(), next, std::greater<>());
    target = below == all.end() ? 0.0 : *below;
  }
  return std::max(0.0, std::min(rho, std::max(floor, target)));
}

/// Uniform pick among the members that gained points, or kNoIndex when none did.
/// The donor's new points seed the candidate, one per feature it gained.
inline std::size_t pickDonor(const std::vector<std::size_t>& gained, std::mt19937_64& rng) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < gained.size(); ++i)
    if (gained[i] > 0) eligible.push_back(i);
  if (eligible.empty()) return kNoIndex;
  return eligible[static_cast<std::size_t>(rng() % eligible.size())];
}

/// Drops candidate points that reached the diagonal, with their price entries
/// (the first candidate.size() entries of each price vector). Such a point is
/// never better than deletion for any bidder, so no optimal cost changes.
inline void pruneSnapped(PersistenceDiagram& candidate, std::vector<std::vector<double>*> prices) {
  const std::size_t m = candidate.size();
  std::vector<bool> keep(m);
  std::size_t kept = 0;
  for (std::size_t j = 0; j < m; ++j) kept += keep[j] = !candidate.points[j].onDiagonal();
  if (kept == m) return;
  auto compact = [&](auto& items) {
    std::size_t w = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (keep[j]) items[w++] = items[j];
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(w), items.begin() + static_cast<std::ptrdiff_t>(m));
  };
  compact(candidate.points);
  for (auto* p : prices) compact(*p);
}

}  // namespace pdbary::detail
