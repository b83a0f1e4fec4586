#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace regdist {

enum class KernelKind { gaussian, compact_bump, asymmetric_bump, tabulated };
enum class Parity { even, general };

std::string to_string(KernelKind kind);
std::string to_string(Parity parity);

// Shape parameters. The kernel is amplitude * shape((z - shift) / width).
struct KernelParams {
  double width = 1.0;
  double shift = 0.0;
  double amplitude = 1.0;
};

// |rho(z)| <= envelope(|z|) for |z| >= r0. An empty envelope means rho is
// identically zero beyond r0 (compact support).
struct TailBound {
  double r0 = 0.0;
  std::function<double(double)> envelope;

  double operator()(double z) const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double z) const { return z >= lo && z <= hi; }
};

struct MomentValue {
  int p = 1;
  int n = 0;
  double value = 0.0;
};

// A smooth, rapidly decaying 1D kernel with unit integral (once normalized).
// Immutable; copies share identity, so the moment cache is shared too.
class Regularizer {
 public:
  // Normalized kernels.
  static Regularizer gaussian(double width = 1.0);
  static Regularizer compact_bump(double width = 1.0);
  static Regularizer asymmetric_bump(double shift, double width = 1.0);

  // Barycentric-rational interpolant through (z_i, v_i); z strictly increasing.
  // Not normalized: pass through normalize() if the table is not unit-mass.
  // peak_halfwidth <= 0 means max(|z_0|, |z_n|).
  static Regularizer tabulated(std::vector<double> z, std::vector<double> values, double peak_halfwidth = 0.0);

  // Two-column CSV (z, rho). Blank lines, '#' comments and one header row are skipped.
  static Regularizer load_csv(const std::filesystem::path& path, double peak_halfwidth = 0.0);

  // Raw shape with the amplitude given in params (for gaussian/bump kinds).
  static Regularizer raw(KernelKind kind, KernelParams params);

  double operator()(double z) const;

  // d^k rho / dz^k. Analytic for gaussian and bumps; central differences with
  // step peak_halfwidth/1e3 for tabulated kernels.
  double derivative(double z, int order) const;

  KernelKind kind() const;
  Parity parity() const;
  const KernelParams& params() const;
  double peak_halfwidth() const;
  // Location of the dominant peak.
  double peak_centre() const;
  const TailBound& decay() const;

  // Interval outside which the kernel is treated as zero: the exact support
  // for compact kernels, +-12 widths for the gaussian, the table range for
  // tabulated kernels.
  Interval support() const;

  std::string name() const;
  std::string label() const;
  Regularizer with_label(std::string label) const;

  Regularizer scaled(double factor) const;
  Regularizer with_decay(TailBound decay) const;

  bool same_kernel(const Regularizer& other) const { return impl_ == other.impl_; }

  struct Impl;

 private:
  explicit Regularizer(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;

  friend MomentValue moment(const Regularizer& rho, int p, int n);
};

inline double eval(const Regularizer& rho, double z) { return rho(z); }

// int y^n rho(y)^p dy to 1e-12 absolute, cached per (kernel, p, n).
// Throws DivergenceError when the tail bound integral does not converge.
MomentValue moment(const Regularizer& rho, int p, int n);

// Shorthands for M[^2_0] and M[^2_1].
double m20(const Regularizer& rho);
double m21(const Regularizer& rho);

// Rescales to unit integral; returns rho itself when already normalized to
// 1e-12. Throws NormalizationError for a zero integral.
Regularizer normalize(const Regularizer& rho);

}  // namespace regdist
