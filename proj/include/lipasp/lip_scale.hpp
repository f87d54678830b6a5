#pragma once

namespace lipasp {

/// Grey-scale bound M of the LIP model. Grey levels live in [0, M);
/// 8-bit data uses M = 256.
class LipScale {
 public:
  LipScale() = default;
  /// Throws DomainError unless bound is finite and > 0.
  explicit LipScale(double bound);

  double bound() const noexcept { return bound_; }

  friend bool operator==(const LipScale&, const LipScale&) = default;

 private:
  double bound_ = 256.0;
};

}  // namespace lipasp
