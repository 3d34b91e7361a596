#pragma once

#include <memory>
#include <string_view>

#include "rbm/reduced_basis.hpp"

namespace rbm {

enum class EstimatorKind { classical, stable, lebesgue };
enum class AlphaMode { unit, exact_eig };

std::string_view to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);
std::string_view to_string(AlphaMode mode);
AlphaMode parse_alpha_mode(std::string_view name);

struct EstimateValue {
  double value = 0.0;
  /// Expanded quadratic went negative and was clamped to zero.
  bool clamped = false;
  double alpha_used = 1.0;
};

/// Greedy selection objective. rebuild() refreshes offline data after the
/// basis changes; evaluate() is a pure read and may run concurrently.
class GreedyObjective {
public:
  virtual ~GreedyObjective() = default;

  virtual EstimatorKind kind() const = 0;
  virtual void rebuild(const AffineOperator& op, const ReducedBasis& basis) = 0;
  virtual EstimateValue evaluate(const AffineOperator& op, const Param& mu, const Vector& u_hat,
                                 double alpha_lb) const = 0;
};

} // namespace rbm
