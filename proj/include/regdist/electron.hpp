#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "regdist/asymptotic.hpp"
#include "regdist/fields.hpp"
#include "regdist/observables.hpp"

namespace regdist {

enum class ObservableName { U_ele, U_mag, F_r, P_vec, S_vec, mc2 };

std::string to_string(ObservableName name);
ObservableName observable_from_string(const std::string& name);

// Numeric value against the instantiated analytic expansion.
//
// relative_deviation = |numeric - analytic| / max(|analytic|, floor). For
// vector observables the numerator is the norm of the difference. The floor
// is 1e-300 unless noted; P uses its radial x angular scale.
struct ObservableReport {
  ObservableName name = ObservableName::U_ele;
  bool is_vector = false;
  double numeric = 0.0;  // scalar value, or the norm for vectors
  Eigen::Vector3d numeric_vector = Eigen::Vector3d::Zero();
  AsymptoticValue analytic;
  double analytic_value = 0.0;
  Eigen::Vector3d analytic_vector = Eigen::Vector3d::Zero();
  double relative_deviation = 0.0;
  double floor = 1e-300;

  ElectronParams params;
  TwoScale scales;
  std::string kernel;
  double M20 = 0.0;
  double M21 = 0.0;

  // Named side quantities (H-sector subtotal, radial and angular factors, ...).
  std::map<std::string, double> extras;
  std::string notes;
};

// (e^2/2) M_2.
ObservableReport self_energy_electric(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                      const QuadratureSpec& spec = default_observable_spec());

// mu^2 (I_10 + I_11 + I_12) with
//   I_10 = int (r^-2H)^2 - (4/3) r (r^-2H)(r^-3H) + (4/3) r^2 (r^-3H)^2
//   I_11 = int (2/3) r (r^-2H)(a^-2 delta) - (4/3) r^2 (r^-3H)(a^-2 delta)
//   I_12 = int (1/3) r^2 (a^-2 delta)^2.
// extras: h_sector = I_10 + I_11 (per unit mu^2), h_sector_term_scale = 2/(3a^3).
ObservableReport self_energy_magnetic(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                      const QuadratureSpec& spec = default_observable_spec());

struct DeltaVolumeIntegral {
  Eigen::Vector3d value = Eigen::Vector3d::Zero();
  double radial_factor = 0.0;                                // int r^2 (a^-2 delta_a) dr
  Eigen::Vector3d angular_factor = Eigen::Vector3d::Zero();  // sphere integral of mu - u(mu.u)
};

// Volume integral of (mu - u(mu.u)) (a^-2 delta_a)_eps; tends to (8 pi/3) mu.
DeltaVolumeIntegral dipole_delta_volume_integral(const ElectronParams& p, const TwoScale& ts,
                                                 const Regularizer& rho,
                                                 const QuadratureSpec& spec = default_observable_spec(),
                                                 const SphereGrid& grid = make_sphere_grid());

// e^2 M_1, with the total force vector F_r * (sphere integral of u).
// extras: force_x, force_y, force_z, force_norm.
ObservableReport radial_self_force(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                   const QuadratureSpec& spec = default_observable_spec(),
                                   const SphereGrid& grid = make_sphere_grid());

// (e/4 pi c) R_2 times the sphere integral of mu x u.
// extras: P_r, P_r_analytic, P_r_rel_dev, angular_norm.
ObservableReport hidden_momentum(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                 const QuadratureSpec& spec = default_observable_spec(),
                                 const SphereGrid& grid = make_sphere_grid());

// (1/4 pi c) R_3 times the sphere integral of u x (e mu x u).
// extras: S_r, S_r_analytic, misalignment = |S x mu| / (|S||mu|).
ObservableReport spin(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                      const QuadratureSpec& spec = default_observable_spec(),
                      const SphereGrid& grid = make_sphere_grid());

// U_ele + U_mag from the two reports.
ObservableReport self_mass(const ObservableReport& u_ele, const ObservableReport& u_mag);

// One (kernel, a, eps) point of the comparison between the closed forms
// (e^2/2) M20/eps, (mu^2/3a^2) M20/eps, (2 e mu/3c) M20/eps and the
// corresponding delta^2 integrals (e^2/2) D, (mu^2/3a^2) D, (2 e mu/3c) D with
// D = int delta_a^2 dr.
struct ComparisonEntry {
  std::string observable;  // U_ele, U_mag, S
  std::string kernel;
  double a = 0.0;
  double eps = 0.0;
  double numeric = 0.0;
  double moment_form = 0.0;
  double delta_sq_form = 0.0;
  double mutual_deviation = 0.0;  // |moment - delta^2| / |moment|
  double numeric_deviation = 0.0;  // |numeric - moment| / |moment|
};

struct ScalingFit {
  std::string observable;
  std::string kernel;
  double a = 0.0;
  double exponent = 0.0;
  double coefficient = 0.0;
  int points = 0;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  std::vector<ScalingFit> eps_fits;  // per (observable, kernel, a) with >= 3 eps values
  std::vector<ObservableReport> reports;
};

ComparisonReport comparison_report(const ElectronParams& p, const std::vector<TwoScale>& ts_list,
                                   const std::vector<Regularizer>& rho_list,
                                   const QuadratureSpec& spec = default_observable_spec());

}  // namespace regdist
