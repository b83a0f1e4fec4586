#include "regdist/electron.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "regdist/errors.hpp"

namespace regdist {

namespace {

using Family = SingularTermFamily;

ObservableReport base_report(ObservableName name, const ElectronParams& p, const TwoScale& ts,
                             const Regularizer& rho) {
  ObservableReport rep;
  rep.name = name;
  rep.params = p;
  rep.scales = ts;
  rep.kernel = rho.label();
  rep.M20 = m20(rho);
  rep.M21 = m21(rho);
  if (!ts.in_regime()) rep.notes = "out of regime";
  return rep;
}

void finish_scalar(ObservableReport& rep) {
  rep.analytic_value = rep.analytic.evaluate(rep.scales.a, rep.scales.eps);
  rep.relative_deviation = std::abs(rep.numeric - rep.analytic_value) / std::max(std::abs(rep.analytic_value), rep.floor);
}

void finish_vector(ObservableReport& rep) {
  rep.is_vector = true;
  rep.numeric = rep.numeric_vector.norm();
  rep.analytic_value = rep.analytic_vector.norm();
  rep.relative_deviation =
      (rep.numeric_vector - rep.analytic_vector).norm() / std::max(rep.analytic_value, rep.floor);
}

void append_note(ObservableReport& rep, const std::string& note) {
  if (!rep.notes.empty()) rep.notes += "; ";
  rep.notes += note;
}

}  // namespace

std::string to_string(ObservableName name) {
  switch (name) {
    case ObservableName::U_ele:
      return "U_ele";
    case ObservableName::U_mag:
      return "U_mag";
    case ObservableName::F_r:
      return "F_r";
    case ObservableName::P_vec:
      return "P";
    case ObservableName::S_vec:
      return "S";
    case ObservableName::mc2:
      return "mc2";
  }
  return "unknown";
}

ObservableName observable_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "u_ele" || s == "electric" || s == "self_energy_electric") return ObservableName::U_ele;
  if (s == "u_mag" || s == "magnetic" || s == "self_energy_magnetic") return ObservableName::U_mag;
  if (s == "f_r" || s == "force" || s == "self_force") return ObservableName::F_r;
  if (s == "p" || s == "p_vec" || s == "hidden_momentum" || s == "momentum") return ObservableName::P_vec;
  if (s == "s" || s == "s_vec" || s == "spin") return ObservableName::S_vec;
  if (s == "mc2" || s == "mass" || s == "self_mass") return ObservableName::mc2;
  throw DomainError("unknown observable '" + name + "'");
}

ObservableReport self_energy_electric(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                      const QuadratureSpec& spec) {
  p.validate();
  ts.require_regime("self_energy_electric");
  ObservableReport rep = base_report(ObservableName::U_ele, p, ts, rho);
  const double k = 0.5 * p.e * p.e;
  rep.analytic = moment_Mn_analytic(2, ts, rho).scaled(k);
  if (k != 0.0) {
    MomentTerms m = moment_Mn_terms(2, ts, rho, spec);
    rep.numeric = k * m.total();
    rep.extras["h_squared"] = k * m.h_squared;
    rep.extras["mixed"] = k * m.mixed;
    rep.extras["delta_squared"] = k * m.delta_squared;
  }
  finish_scalar(rep);
  return rep;
}

ObservableReport self_energy_magnetic(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                      const QuadratureSpec& spec) {
  p.validate();
  ts.require_regime("self_energy_magnetic");
  ObservableReport rep = base_report(ObservableName::U_mag, p, ts, rho);
  const double mu2 = p.mu.squaredNorm();
  const double a = ts.a;
  rep.analytic.add(-2, -1, mu2 * rep.M20 / 3.0);
  rep.analytic.add(-3, 0, -2.0 * mu2 * rep.M21 / 3.0);
  rep.extras["h_sector_term_scale"] = 2.0 / (3.0 * a * a * a);

  if (mu2 != 0.0) {
    const Family T2 = Family::power_heaviside(2, rho, ts);
    const Family T3 = Family::power_heaviside(3, rho, ts);
    const Family D = Family::delta(0, rho, ts, 1.0 / (a * a));
    const double scale = std::max(2.0 / (3.0 * a * a * a), rep.M20 / (3.0 * a * a * ts.eps));

    auto i10 = integrate_profile(
        [&](double r) {
          double t2 = T2(r);
          if (t2 == 0.0) return 0.0;
          double t3 = T3(r);
          return t2 * t2 - (4.0 / 3.0) * r * t2 * t3 + (4.0 / 3.0) * r * r * t3 * t3;
        },
        ts, rho, spec, scale);
    auto i11 = integrate_delta_window(
        [&](double r) {
          double d = D(r);
          if (d == 0.0) return 0.0;
          return (2.0 / 3.0) * r * T2(r) * d - (4.0 / 3.0) * r * r * T3(r) * d;
        },
        ts, rho, spec, scale);
    auto i12 = integrate_delta_window(
        [&](double r) {
          double d = D(r);
          return r * r * d * d / 3.0;
        },
        ts, rho, spec, scale);

    rep.numeric = mu2 * (i10.value + i11.value + i12.value);
    rep.extras["I10"] = i10.value;
    rep.extras["I11"] = i11.value;
    rep.extras["I12"] = i12.value;
    rep.extras["h_sector"] = i10.value + i11.value;
  } else {
    rep.extras["h_sector"] = 0.0;
  }
  finish_scalar(rep);
  return rep;
}

DeltaVolumeIntegral dipole_delta_volume_integral(const ElectronParams& p, const TwoScale& ts,
                                                 const Regularizer& rho, const QuadratureSpec& spec,
                                                 const SphereGrid& grid) {
  p.validate();
  ts.require_regime("dipole_delta_volume_integral");
  DeltaVolumeIntegral out;
  const double a = ts.a;
  const Family D = Family::delta(0, rho, ts, 1.0 / (a * a));
  out.radial_factor = integrate_delta_window([&](double r) { return r * r * D(r); }, ts, rho, spec, 1.0).value;
  const Eigen::Vector3d mu = p.mu;
  out.angular_factor =
      integrate_sphere([&](const Eigen::Vector3d& u) -> Eigen::Vector3d { return mu - u * mu.dot(u); }, grid);
  out.value = out.radial_factor * out.angular_factor;
  return out;
}

ObservableReport radial_self_force(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                   const QuadratureSpec& spec, const SphereGrid& grid) {
  p.validate();
  ts.require_regime("radial_self_force");
  ObservableReport rep = base_report(ObservableName::F_r, p, ts, rho);
  const double k = p.e * p.e;
  rep.analytic = moment_Mn_analytic(1, ts, rho).scaled(k);
  if (k != 0.0) rep.numeric = k * moment_Mn_numeric(1, ts, rho, spec);
  finish_scalar(rep);

  const Eigen::Vector3d angular =
      integrate_sphere([](const Eigen::Vector3d& u) -> Eigen::Vector3d { return u; }, grid);
  const Eigen::Vector3d force = rep.numeric * angular;
  rep.numeric_vector = force;
  rep.extras["force_x"] = force.x();
  rep.extras["force_y"] = force.y();
  rep.extras["force_z"] = force.z();
  rep.extras["force_norm"] = force.norm();
  if (ts.in_regime() && rep.numeric < 0.0) append_note(rep, "F_r < 0 in regime");
  return rep;
}

ObservableReport hidden_momentum(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                                 const QuadratureSpec& spec, const SphereGrid& grid) {
  p.validate();
  ts.require_regime("hidden_momentum");
  ObservableReport rep = base_report(ObservableName::P_vec, p, ts, rho);
  const double R2 = Rn_numeric(2, ts, rho, spec);
  const double R2_analytic = Rn_analytic(2, ts, rho).evaluate(ts.a, ts.eps);
  const Eigen::Vector3d mu = p.mu;
  const Eigen::Vector3d angular =
      integrate_sphere([&](const Eigen::Vector3d& u) -> Eigen::Vector3d { return mu.cross(u); }, grid);
  const double k = p.e / (4.0 * M_PI * p.c);
  rep.numeric_vector = k * R2 * angular;
  rep.analytic_vector = Eigen::Vector3d::Zero();
  rep.floor = std::abs(k) * std::abs(R2) * 4.0 * M_PI * mu.norm();
  if (rep.floor == 0.0) rep.floor = 1e-300;
  finish_vector(rep);
  rep.extras["P_r"] = R2;
  rep.extras["P_r_analytic"] = R2_analytic;
  rep.extras["P_r_rel_dev"] = std::abs(R2 - R2_analytic) / std::abs(R2_analytic);
  rep.extras["angular_norm"] = angular.norm();
  return rep;
}

ObservableReport spin(const ElectronParams& p, const TwoScale& ts, const Regularizer& rho,
                      const QuadratureSpec& spec, const SphereGrid& grid) {
  p.validate();
  ts.require_regime("spin");
  ObservableReport rep = base_report(ObservableName::S_vec, p, ts, rho);
  const Eigen::Vector3d mu = p.mu;
  const double mu_norm = mu.norm();
  const AsymptoticValue R3_analytic = Rn_analytic(3, ts, rho);
  rep.analytic = R3_analytic.scaled(2.0 * p.e * mu_norm / (3.0 * p.c));
  const double R3_value = R3_analytic.evaluate(ts.a, ts.eps);
  rep.analytic_vector = (2.0 * p.e / (3.0 * p.c)) * mu * R3_value;

  double R3 = 0.0;
  if (p.e != 0.0 && mu_norm != 0.0) R3 = Rn_numeric(3, ts, rho, spec);
  const double e = p.e;
  const Eigen::Vector3d angular = integrate_sphere(
      [&](const Eigen::Vector3d& u) -> Eigen::Vector3d { return u.cross((e * mu).cross(u)); }, grid);
  rep.numeric_vector = angular * R3 / (4.0 * M_PI * p.c);
  finish_vector(rep);
  rep.extras["S_r"] = R3;
  rep.extras["S_r_analytic"] = R3_value;
  const double s_norm = rep.numeric_vector.norm();
  rep.extras["misalignment"] =
      (s_norm > 0.0 && mu_norm > 0.0) ? rep.numeric_vector.cross(mu).norm() / (s_norm * mu_norm) : 0.0;
  return rep;
}

ObservableReport self_mass(const ObservableReport& u_ele, const ObservableReport& u_mag) {
  ObservableReport rep = u_ele;
  rep.name = ObservableName::mc2;
  rep.extras.clear();
  rep.numeric = u_ele.numeric + u_mag.numeric;
  rep.analytic = u_ele.analytic;
  for (const auto& [key, c] : u_mag.analytic.coefficients()) rep.analytic.add(key.first, key.second, c);
  rep.extras["U_ele"] = u_ele.numeric;
  rep.extras["U_mag"] = u_mag.numeric;
  finish_scalar(rep);
  return rep;
}

ComparisonReport comparison_report(const ElectronParams& p, const std::vector<TwoScale>& ts_list,
                                   const std::vector<Regularizer>& rho_list, const QuadratureSpec& spec) {
  p.validate();
  ComparisonReport out;
  const double mu = p.mu.norm();
  for (const Regularizer& rho : rho_list) {
    for (const TwoScale& ts : ts_list) {
      ts.require_regime("comparison_report");
      ObservableReport ue = self_energy_electric(p, ts, rho, spec);
      ObservableReport um = self_energy_magnetic(p, ts, rho, spec);
      ObservableReport s = spin(p, ts, rho, spec);
      const double D = delta_sq_weighted([](double) { return 1.0; }, ts, rho, spec);
      const double moment = m20(rho) / ts.eps;

      struct Form {
        const char* name;
        double numeric;
        double factor;
      };
      const Form forms[] = {{"U_ele", ue.numeric, 0.5 * p.e * p.e},
                            {"U_mag", um.numeric, mu * mu / (3.0 * ts.a * ts.a)},
                            {"S", s.numeric, 2.0 * p.e * mu / (3.0 * p.c)}};
      for (const Form& f : forms) {
        ComparisonEntry e;
        e.observable = f.name;
        e.kernel = rho.label();
        e.a = ts.a;
        e.eps = ts.eps;
        e.numeric = f.numeric;
        e.moment_form = f.factor * moment;
        e.delta_sq_form = f.factor * D;
        const double denom = std::abs(e.moment_form) > 0.0 ? std::abs(e.moment_form) : 1.0;
        e.mutual_deviation = std::abs(e.moment_form - e.delta_sq_form) / denom;
        e.numeric_deviation = std::abs(e.numeric - e.moment_form) / denom;
        out.entries.push_back(e);
      }
      out.reports.push_back(ue);
      out.reports.push_back(um);
      out.reports.push_back(s);
    }
  }

  std::sort(out.entries.begin(), out.entries.end(), [](const ComparisonEntry& l, const ComparisonEntry& r) {
    return std::tie(l.observable, l.kernel, l.a, l.eps) < std::tie(r.observable, r.kernel, r.a, r.eps);
  });

  for (std::size_t i = 0; i < out.entries.size();) {
    std::size_t j = i;
    std::vector<Sample> samples;
    while (j < out.entries.size() && out.entries[j].observable == out.entries[i].observable &&
           out.entries[j].kernel == out.entries[i].kernel && out.entries[j].a == out.entries[i].a) {
      samples.emplace_back(out.entries[j].eps, out.entries[j].numeric);
      ++j;
    }
    if (samples.size() >= 3) {
      try {
        PowerLawFit fit = fit_power_law(samples);
        out.eps_fits.push_back({out.entries[i].observable, out.entries[i].kernel, out.entries[i].a, fit.exponent,
                                fit.coefficient, static_cast<int>(samples.size())});
      } catch (const ConditioningError&) {
        // eps span too narrow or zero values: no fit for this group
      }
    }
    i = j;
  }
  return out;
}

}  // namespace regdist
