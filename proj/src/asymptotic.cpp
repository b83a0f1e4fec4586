#include "regdist/asymptotic.hpp"

#include <cmath>
#include <sstream>

#include "regdist/errors.hpp"

namespace regdist {

void AsymptoticValue::add(int pow_a, int pow_eps, double coefficient) {
  if (!std::isfinite(coefficient)) throw DomainError("AsymptoticValue: non-finite coefficient");
  if (coefficient == 0.0) return;
  auto [it, inserted] = coefficients_.try_emplace({pow_a, pow_eps}, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0.0) coefficients_.erase(it);
  }
}

double AsymptoticValue::coefficient(int pow_a, int pow_eps) const {
  auto it = coefficients_.find({pow_a, pow_eps});
  return it == coefficients_.end() ? 0.0 : it->second;
}

bool AsymptoticValue::contains(int pow_a, int pow_eps) const {
  return coefficients_.count({pow_a, pow_eps}) != 0;
}

double AsymptoticValue::evaluate(double a, double eps) const {
  double sum = 0.0;
  for (const auto& [key, c] : coefficients_) sum += c * std::pow(a, key.first) * std::pow(eps, key.second);
  return sum;
}

AsymptoticValue AsymptoticValue::scaled(double factor) const {
  AsymptoticValue out(remainder_order_);
  for (const auto& [key, c] : coefficients_) out.add(key.first, key.second, c * factor);
  return out;
}

std::string AsymptoticValue::to_string() const {
  std::ostringstream os;
  os.precision(10);
  bool first = true;
  for (const auto& [key, c] : coefficients_) {
    if (!first) os << " + ";
    first = false;
    os << c << "*a^" << key.first << "*eps^" << key.second;
  }
  if (first) os << "0";
  os << " + O(eps^" << remainder_order_ << ")";
  return os.str();
}

}  // namespace regdist
