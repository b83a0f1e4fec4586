#pragma once

#include <functional>
#include <span>
#include <vector>

#include "regdist/asymptotic.hpp"
#include "regdist/embedding.hpp"
#include "regdist/quadrature.hpp"

namespace regdist {

// Tolerances for the radial integrals. abs_tol is multiplied by the natural
// magnitude of each integral before use; peak_locations and peak_width are
// filled in from (a, eps) and the kernel.
QuadratureSpec default_observable_spec();

// Pieces of M_n(a, eps) = int_0^inf r^n [(r^-2 H_a) - (a^-1 delta_a)]^2 dr.
struct MomentTerms {
  double h_squared = 0.0;      // int r^n (r^-2 H_a)^2
  double mixed = 0.0;          // -(2/a) int r^n (r^-2 H_a)(delta_a)
  double delta_squared = 0.0;  // a^-2 int r^n delta_a^2
  double error = 0.0;          // sum of quadrature error estimates

  double total() const { return h_squared + mixed + delta_squared; }
};

// n <= 2; the integral diverges at infinity for n >= 3.
MomentTerms moment_Mn_terms(int n, const TwoScale& ts, const Regularizer& rho,
                            const QuadratureSpec& spec = default_observable_spec());
double moment_Mn_numeric(int n, const TwoScale& ts, const Regularizer& rho,
                         const QuadratureSpec& spec = default_observable_spec());

// {(n-3, 0): 1/(3-n) - 1 - n M21,  (n-2, -1): M20}. PoleError at n = 3.
AsymptoticValue moment_Mn_analytic(int n, const TwoScale& ts, const Regularizer& rho);

// R_n(a, eps) = int_0^inf r^n * cross profile, grouped as
//   h_sector:      2 r^n (r^-2 H)(r^-3 H) - r^(n-1) (r^-2 H)^2
//   mixed:         -(2 r^n/a)(r^-3 H) delta + ((a r^(n-1) - r^n)/a^2)(r^-2 H) delta
//   delta_squared: (r^n/a^3) delta^2
struct RnTerms {
  double h_sector = 0.0;
  double mixed = 0.0;
  double delta_squared = 0.0;
  double error = 0.0;

  double total() const { return h_sector + mixed + delta_squared; }
};

// n <= 3.
RnTerms Rn_terms(int n, const TwoScale& ts, const Regularizer& rho,
                 const QuadratureSpec& spec = default_observable_spec());
double Rn_numeric(int n, const TwoScale& ts, const Regularizer& rho,
                  const QuadratureSpec& spec = default_observable_spec());

// {(n-3, -1): M20,  (n-4, 0): -(n-3)/(n-4) - n M21}. PoleError at n = 4.
AsymptoticValue Rn_analytic(int n, const TwoScale& ts, const Regularizer& rho);

// int_0^inf delta_a(r)^2 F(r) dr.
double delta_sq_weighted(const std::function<double(double)>& F, const TwoScale& ts, const Regularizer& rho,
                         const QuadratureSpec& spec = default_observable_spec());

// M20 F(a)/eps - M21 F'(a). F' is taken by central differences unless given.
double delta_sq_prediction(const std::function<double(double)>& F, const TwoScale& ts, const Regularizer& rho,
                           const std::function<double(double)>& F_prime = {});

// Integrates f over [0, inf) with the peak hint at the kernel centre,
// abs_tol scaled by `scale`.
QuadratureResult integrate_profile(const std::function<double(double)>& f, const TwoScale& ts,
                                   const Regularizer& rho, const QuadratureSpec& spec, double scale);

// Same, restricted to the window where (delta_a)_eps is non-zero.
QuadratureResult integrate_delta_window(const std::function<double(double)>& f, const TwoScale& ts,
                                        const Regularizer& rho, const QuadratureSpec& spec, double scale);

enum class IdentityTag { SEN8, SFO7, DIP13, DIP14, ELE12, ELE13 };

std::string to_string(IdentityTag tag);
IdentityTag identity_tag_from_string(const std::string& name);
const std::vector<IdentityTag>& all_identity_tags();

struct IdentitySides {
  double lhs = 0.0;  // derivative side, 5-point difference with step eps/100
  double rhs = 0.0;  // product side from the term families
};

// amplitude multiplies every family (both sides vanish for amplitude 0);
// n is the power used by ELE12 and ELE13.
IdentitySides identity_sides(IdentityTag tag, const TwoScale& ts, const Regularizer& rho, double r, int n = 2,
                             double amplitude = 1.0);

// max over r of |lhs - rhs| / (1 + |lhs|); ELE12 and ELE13 take n = 2 and n = 3.
double identity_residual(IdentityTag tag, const TwoScale& ts, const Regularizer& rho,
                         std::span<const double> r_samples, double amplitude = 1.0);

}  // namespace regdist
