#pragma once

#include <map>
#include <string>
#include <utility>

namespace regdist {

// Leading terms of an expansion in the two scales,
//   sum_{(i,j)} c_{ij} a^i eps^j + O(eps^remainder_order).
// Exact zero coefficients are not stored; coefficient() reports them as 0.
class AsymptoticValue {
 public:
  using Key = std::pair<int, int>;  // (power of a, power of eps)

  AsymptoticValue() = default;
  explicit AsymptoticValue(int remainder_order) : remainder_order_(remainder_order) {}

  // Accumulates into an existing key. Throws DomainError on non-finite input.
  void add(int pow_a, int pow_eps, double coefficient);

  double coefficient(int pow_a, int pow_eps) const;
  bool contains(int pow_a, int pow_eps) const;
  const std::map<Key, double>& coefficients() const { return coefficients_; }
  std::size_t size() const { return coefficients_.size(); }

  int remainder_order() const { return remainder_order_; }
  void set_remainder_order(int order) { remainder_order_ = order; }

  double evaluate(double a, double eps) const;
  AsymptoticValue scaled(double factor) const;

  std::string to_string() const;

 private:
  std::map<Key, double> coefficients_;
  int remainder_order_ = 1;
};

}  // namespace regdist
