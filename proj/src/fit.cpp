#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "regdist/errors.hpp"
#include "regdist/quadrature.hpp"

namespace regdist {

namespace {
constexpr double kMaxCondition = 1e12;
}

AsymptoticFit fit_asymptotics(std::span<const Sample> samples, std::span<const int> model_powers) {
  if (model_powers.empty()) throw DomainError("fit_asymptotics: empty model");
  if (samples.size() < model_powers.size() + 1)
    throw ConditioningError("fit_asymptotics: need at least " + std::to_string(model_powers.size() + 1) +
                            " samples, got " + std::to_string(samples.size()));

  double eps_min = std::numeric_limits<double>::infinity(), eps_max = 0.0, v_max = 0.0;
  for (const auto& [eps, v] : samples) {
    if (!(eps > 0.0) || !std::isfinite(v)) throw DomainError("fit_asymptotics: samples need eps > 0 and finite values");
    eps_min = std::min(eps_min, eps);
    eps_max = std::max(eps_max, eps);
    v_max = std::max(v_max, std::abs(v));
  }
  if (eps_max < 10.0 * eps_min * (1.0 - 1e-12))
    throw ConditioningError("fit_asymptotics: eps samples must span at least one decade");

  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto cols = static_cast<Eigen::Index>(model_powers.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& [eps, v] = samples[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < cols; ++j) design(i, j) = std::pow(eps, model_powers[static_cast<std::size_t>(j)]);
    rhs(i) = v;
  }
  Eigen::VectorXd col_scale = design.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) design.col(j) /= col_scale(j);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond < kMaxCondition)) throw ConditioningError("fit_asymptotics: design matrix is ill-conditioned");

  Eigen::VectorXd x = svd.solve(rhs);
  Eigen::VectorXd fitted = design * x;
  double rms = std::sqrt((fitted - rhs).squaredNorm() / static_cast<double>(rows));

  AsymptoticFit fit;
  fit.value.set_remainder_order(*std::max_element(model_powers.begin(), model_powers.end()) + 1);
  for (Eigen::Index j = 0; j < cols; ++j) fit.value.add(0, model_powers[static_cast<std::size_t>(j)], x(j) / col_scale(j));
  fit.residual = v_max > 0.0 ? rms / v_max : rms;
  fit.condition_number = cond;
  return fit;
}

PowerLawFit fit_power_law(std::span<const Sample> samples) {
  if (samples.size() < 3) throw ConditioningError("fit_power_law: need at least 3 samples");
  const double sign = samples.front().second < 0.0 ? -1.0 : 1.0;
  double x_min = std::numeric_limits<double>::infinity(), x_max = 0.0;
  for (const auto& [x, v] : samples) {
    if (!(x > 0.0)) throw DomainError("fit_power_law: abscissae must be positive");
    if (!(sign * v > 0.0) || !std::isfinite(v))
      throw ConditioningError("fit_power_law: values must be finite, non-zero and of one sign");
    x_min = std::min(x_min, x);
    x_max = std::max(x_max, x);
  }
  if (x_max < 1.5 * x_min) throw ConditioningError("fit_power_law: abscissae span is too narrow");

  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0;
  for (const auto& [x, v] : samples) {
    sx += std::log(x);
    sy += std::log(sign * v);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, v] : samples) {
    double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(sign * v) - my);
  }
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  fit.coefficient = sign * std::exp(my - fit.exponent * mx);
  double ss = 0;
  for (const auto& [x, v] : samples) {
    double r = std::log(sign * v) - (my + fit.exponent * (std::log(x) - mx));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace regdist
