#include "pdbary/assignment.hpp"

#include <algorithm>
#include <cmath>

#include "pdbary/error.hpp"

namespace pdbary {

namespace {

PairType commonType(const PersistenceDiagram& a, const PersistenceDiagram& b) {
  if (!a.empty() && !b.empty() && a.pairType != b.pairType)
    throw ValidationError("diagrams have different pair types");
  return a.empty() ? b.pairType : a.pairType;
}

}  // namespace

AssignmentProblem::AssignmentProblem(const PersistenceDiagram& bidders,
                                     const PersistenceDiagram& objects,
                                     const MetricParams& params,
                                     std::shared_ptr<const ObjectTree> objectTree)
    : bidders_(&bidders),
      objects_(&objects),
      params_(params),
      pairType_(commonType(bidders, objects)),
      realBidders_(bidders.size()),
      realObjects_(objects.size()),
      tree_(std::move(objectTree)) {
  validate(params_);
  bidderDiag_.reserve(realBidders_);
  for (const auto& p : bidders.points) bidderDiag_.push_back(diagonalCost(p, params_));
  objectDiag_.reserve(realObjects_);
  for (const auto& p : objects.points) objectDiag_.push_back(diagonalCost(p, params_));
  if (!tree_) tree_ = buildTree(objects, params_);
  if (tree_->objectCount() != realObjects_)
    throw ValidationError("shared kd-tree does not match the object diagram");
}

std::shared_ptr<const ObjectTree> AssignmentProblem::buildTree(const PersistenceDiagram& objects,
                                                               const MetricParams& params) {
  return std::make_shared<const ObjectTree>(objects.points, params, objects.pairType);
}

double AssignmentProblem::cost(std::size_t bidder, std::size_t object) const {
  const bool ghostBidder = isGhostBidder(bidder);
  const bool ghostObject = isGhostObject(object);
  if (ghostBidder && ghostObject) return 0.0;
  if (ghostObject) return bidderDiag_[bidder];
  if (ghostBidder) return objectDiag_[object];
  return matchingCost(bidders_->points[bidder], objects_->points[object], params_, pairType_);
}

double AssignmentProblem::maxEdgeWeight() const {
  double best = 0.0;
  for (double c : bidderDiag_) best = std::max(best, c);
  for (double c : objectDiag_) best = std::max(best, c);
  for (std::size_t a = 0; a < realBidders_; ++a)
    for (std::size_t b = 0; b < realObjects_; ++b) best = std::max(best, cost(a, b));
  return best;
}

double AssignmentProblem::mappingCost(const std::vector<std::size_t>& mapping) const {
  double total = 0.0;
  for (std::size_t a = 0; a < mapping.size(); ++a) total += cost(a, mapping[a]);
  return total;
}

double costToDistance(double cost, double q) {
  if (cost <= 0.0) return 0.0;
  if (q == 2.0) return std::sqrt(cost);
  if (q == 1.0) return cost;
  return std::pow(cost, 1.0 / q);
}

double wassersteinDistance(const PersistenceDiagram& f, const PersistenceDiagram& g,
                           const MetricParams& params, Solver solver, double gamma) {
  if (solver == Solver::Munkres) return munkresAssignment(f, g, params).distance;
  return auctionUntilConverged(f, g, params, gamma).distance;
}

}  // namespace pdbary
