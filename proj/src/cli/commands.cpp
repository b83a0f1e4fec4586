#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "regdist/cli.hpp"
#include "regdist/electron.hpp"
#include "regdist/observables.hpp"

namespace regdist::cli {

namespace {

Row make_row(const RunConfig& cfg, const std::string& observable, const Regularizer& rho, const TwoScale& ts,
             double numeric, double analytic, double rel_dev, std::string notes = {}) {
  Row r;
  r.observable = observable;
  r.kernel = rho.label();
  r.a = ts.a;
  r.eps = ts.eps;
  r.numeric = numeric;
  r.analytic = analytic;
  r.rel_dev = rel_dev;
  r.notes = std::move(notes);
  r.M20 = m20(rho);
  r.M21 = m21(rho);
  r.regime_warning = !ts.in_regime();
  r.pass = std::isfinite(rel_dev) && rel_dev <= cfg.threshold(observable);
  return r;
}

double rel(double numeric, double analytic) {
  return std::abs(numeric - analytic) / std::max(std::abs(analytic), 1e-300);
}

std::vector<Regularizer> build_kernels(const RunConfig& cfg) {
  std::vector<Regularizer> out;
  for (const KernelSpec& k : cfg.kernels) out.push_back(k.build());
  return out;
}

std::set<ObservableName> selected_observables(const RunConfig& cfg, std::set<ObservableName> fallback) {
  if (cfg.observables.empty()) return fallback;
  std::set<ObservableName> out;
  for (const std::string& o : cfg.observables) out.insert(observable_from_string(o));
  return out;
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> convergence_grid(const RunConfig& cfg, double a) {
  if (!cfg.eps_values.empty()) {
    std::vector<double> grid = cfg.eps_values;
    std::sort(grid.begin(), grid.end(), std::greater<>());
    return grid;
  }
  return geometric_eps_grid(cfg.eps_ratio * a, cfg.convergence_points, cfg.convergence_ratio);
}

}  // namespace

std::vector<Row> run_moments(const RunConfig& cfg) {
  std::vector<Row> rows;
  for (const Regularizer& rho : build_kernels(cfg)) {
    for (const TwoScale& ts : cfg.scales()) {
      for (int n : cfg.moment_orders) {
        AsymptoticValue an = moment_Mn_analytic(n, ts, rho);
        MomentTerms m = moment_Mn_terms(n, ts, rho, cfg.quadrature);
        double v = an.evaluate(ts.a, ts.eps);
        std::ostringstream notes;
        notes.precision(10);
        notes << "H2=" << m.h_squared << " mixed=" << m.mixed << " delta2=" << m.delta_squared;
        rows.push_back(make_row(cfg, "M" + std::to_string(n), rho, ts, m.total(), v, rel(m.total(), v), notes.str()));
      }
      for (int n : cfg.rn_orders) {
        AsymptoticValue an = Rn_analytic(n, ts, rho);
        RnTerms t = Rn_terms(n, ts, rho, cfg.quadrature);
        double v = an.evaluate(ts.a, ts.eps);
        std::ostringstream notes;
        notes.precision(10);
        notes << "H=" << t.h_sector << " mixed=" << t.mixed << " delta2=" << t.delta_squared;
        rows.push_back(make_row(cfg, "R" + std::to_string(n), rho, ts, t.total(), v, rel(t.total(), v), notes.str()));
      }
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<Row> run_electron(const RunConfig& cfg) {
  using O = ObservableName;
  const auto want = selected_observables(cfg, {O::U_ele, O::U_mag, O::F_r, O::P_vec, O::S_vec, O::mc2});
  const ElectronParams& p = cfg.electron;
  const SphereGrid grid = make_sphere_grid(cfg.sphere_order);
  const double mu = p.mu.norm();
  std::vector<Row> rows;

  for (const Regularizer& rho : build_kernels(cfg)) {
    for (const TwoScale& ts : cfg.scales()) {
      const bool need_ele = want.count(O::U_ele) || want.count(O::mc2);
      const bool need_mag = want.count(O::U_mag) || want.count(O::mc2);
      const bool need_d2 = want.count(O::U_ele) || want.count(O::U_mag) || want.count(O::S_vec);
      const double D = need_d2 ? delta_sq_weighted([](double) { return 1.0; }, ts, rho, cfg.quadrature) : 0.0;
      const double moment_form = m20(rho) / ts.eps;

      auto report_row = [&](const ObservableReport& rep) {
        return make_row(cfg, to_string(rep.name), rho, ts, rep.numeric, rep.analytic_value, rep.relative_deviation,
                        rep.notes);
      };
      auto delta_sq_row = [&](const std::string& name, double factor) {
        double m = factor * moment_form, d = factor * D;
        return make_row(cfg, name + "[delta_sq]", rho, ts, d, m, rel(d, m), "delta^2 integral form vs closed form");
      };

      ObservableReport ue, um;
      if (need_ele) ue = self_energy_electric(p, ts, rho, cfg.quadrature);
      if (need_mag) um = self_energy_magnetic(p, ts, rho, cfg.quadrature);
      if (want.count(O::U_ele)) {
        rows.push_back(report_row(ue));
        rows.push_back(delta_sq_row("U_ele", 0.5 * p.e * p.e));
      }
      if (want.count(O::U_mag)) {
        rows.push_back(report_row(um));
        const double scale = um.extras.at("h_sector_term_scale");
        const double h = um.extras.at("h_sector");
        rows.push_back(make_row(cfg, "U_mag[h_sector]", rho, ts, h, 0.0, std::abs(h) / scale,
                                "rel_dev relative to 2/(3a^3)"));
        rows.push_back(delta_sq_row("U_mag", mu * mu / (3.0 * ts.a * ts.a)));
      }
      if (want.count(O::mc2)) rows.push_back(report_row(self_mass(ue, um)));
      if (want.count(O::F_r)) {
        ObservableReport f = radial_self_force(p, ts, rho, cfg.quadrature, grid);
        rows.push_back(report_row(f));
        const double fn = f.extras.at("force_norm");
        rows.push_back(make_row(cfg, "F_r[total]", rho, ts, fn, 0.0,
                                fn / std::max(4.0 * M_PI * std::abs(f.numeric), 1e-300),
                                "norm of the assembled force vector over 4pi F_r"));
      }
      if (want.count(O::P_vec)) {
        ObservableReport pr = hidden_momentum(p, ts, rho, cfg.quadrature, grid);
        rows.push_back(report_row(pr));
        rows.push_back(make_row(cfg, "P[radial]", rho, ts, pr.extras.at("P_r"), pr.extras.at("P_r_analytic"),
                                pr.extras.at("P_r_rel_dev"), "R_2"));
      }
      if (want.count(O::S_vec)) {
        ObservableReport s = spin(p, ts, rho, cfg.quadrature, grid);
        rows.push_back(report_row(s));
        rows.push_back(make_row(cfg, "S[direction]", rho, ts, s.extras.at("misalignment"), 0.0,
                                s.extras.at("misalignment"), "|S x mu|/(|S||mu|)"));
        rows.push_back(delta_sq_row("S", 2.0 * p.e * mu / (3.0 * p.c)));
      }
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<Row> run_convergence(const RunConfig& cfg) {
  using O = ObservableName;
  const auto want = selected_observables(cfg, {O::U_ele, O::U_mag, O::F_r, O::S_vec});
  const ElectronParams& p = cfg.electron;
  const double mu = p.mu.norm();
  const SphereGrid grid = make_sphere_grid(cfg.sphere_order);
  std::vector<Row> rows;

  auto value = [&](O name, const TwoScale& ts, const Regularizer& rho) {
    switch (name) {
      case O::U_ele:
        return self_energy_electric(p, ts, rho, cfg.quadrature).numeric;
      case O::U_mag:
        return self_energy_magnetic(p, ts, rho, cfg.quadrature).numeric;
      case O::F_r:
        return radial_self_force(p, ts, rho, cfg.quadrature, grid).numeric;
      case O::S_vec:
        return spin(p, ts, rho, cfg.quadrature, grid).numeric;
      default:
        throw ConfigError("convergence supports U_ele, U_mag, F_r and S only");
    }
  };
  // Expected coefficient of 1/eps.
  auto leading = [&](O name, double a, const Regularizer& rho) {
    const double M20 = m20(rho);
    switch (name) {
      case O::U_ele:
        return 0.5 * p.e * p.e * M20;
      case O::U_mag:
        return mu * mu * M20 / (3.0 * a * a);
      case O::F_r:
        return p.e * p.e * M20 / a;
      default:
        return 2.0 * p.e * mu * M20 / (3.0 * p.c);
    }
  };

  for (const Regularizer& rho : build_kernels(cfg)) {
    for (double a : cfg.a_values) {
      const std::vector<double> grid_eps = convergence_grid(cfg, a);
      if (grid_eps.size() < 3)
        throw ConditioningError("convergence needs at least 3 eps values, got " + std::to_string(grid_eps.size()));
      for (O name : want) {
        std::vector<Sample> samples;
        for (double e : grid_eps) samples.emplace_back(e, value(name, TwoScale{a, e, cfg.allow_out_of_regime}, rho));
        const TwoScale ts_min{a, grid_eps.back(), cfg.allow_out_of_regime};
        const std::string base = to_string(name);

        // the eps^1 column needs a fourth sample to leave a residual
        std::vector<int> powers = {-1, 0, 1};
        if (samples.size() < 4) powers.pop_back();
        AsymptoticFit fit = fit_asymptotics(samples, powers);
        const double c = fit.value.coefficient(0, -1), expected = leading(name, a, rho);
        std::ostringstream notes;
        notes.precision(10);
        notes << "fit " << fit.value.to_string() << " over " << samples.size() << " eps values";
        rows.push_back(make_row(cfg, base + "[eps_coeff]", rho, ts_min, c, expected, rel(c, expected), notes.str()));

        if (name != O::F_r) {
          PowerLawFit pl = fit_power_law(samples);
          Row r = make_row(cfg, base + "[eps_exponent]", rho, ts_min, pl.exponent, -1.0, std::abs(pl.exponent + 1.0),
                           "log-log slope");
          r.pass = r.rel_dev <= cfg.exponent_tolerance;
          rows.push_back(r);
        }
      }
    }

    if (cfg.a_values.size() >= 3) {
      const double a_min = *std::min_element(cfg.a_values.begin(), cfg.a_values.end());
      const double eps = cfg.eps_values.empty()
                             ? cfg.eps_ratio * a_min
                             : *std::min_element(cfg.eps_values.begin(), cfg.eps_values.end());
      for (O name : {O::U_ele, O::U_mag}) {
        if (!want.count(name)) continue;
        std::vector<Sample> samples;
        for (double a : cfg.a_values) samples.emplace_back(a, value(name, TwoScale{a, eps, cfg.allow_out_of_regime}, rho));
        PowerLawFit pl = fit_power_law(samples);
        const double expected = name == O::U_ele ? 0.0 : -2.0;
        Row r = make_row(cfg, to_string(name) + "[a_exponent]", rho, TwoScale{a_min, eps, cfg.allow_out_of_regime},
                         pl.exponent, expected, std::abs(pl.exponent - expected), "log-log slope in a at fixed eps");
        r.a = 0.0;
        r.pass = r.rel_dev <= cfg.a_exponent_tolerance;
        rows.push_back(r);
      }
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<Row> run_identities(const RunConfig& cfg) {
  std::vector<IdentityTag> tags;
  if (cfg.identities.empty())
    tags = all_identity_tags();
  else
    for (const std::string& t : cfg.identities) tags.push_back(identity_tag_from_string(t));

  std::vector<Row> rows;
  for (const Regularizer& rho : build_kernels(cfg)) {
    for (const TwoScale& ts : cfg.scales()) {
      std::vector<double> radii;
      const int n = cfg.identity_radii;
      for (int i = 0; i < n; ++i)
        radii.push_back(n == 1 ? ts.a : ts.a / 2 + (10 * ts.a - ts.a / 2) * i / (n - 1));
      for (IdentityTag tag : tags) {
        double res = identity_residual(tag, ts, rho, radii);
        rows.push_back(make_row(cfg, "identity:" + to_string(tag), rho, ts, res, 0.0, res,
                                std::to_string(n) + " radii in [a/2, 10a]"));
      }
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<Row> run_kernel_info(const RunConfig& cfg) {
  std::vector<Row> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < cfg.kernels.size(); ++i) {
    const KernelSpec& spec = cfg.kernels[i];
    const Regularizer rho = spec.build();
    const bool even = rho.parity() == Parity::even;
    const double gauss_m20 = spec.name == "gaussian" ? 1.0 / (std::sqrt(2.0 * M_PI) * spec.width) : nan;
    struct Item {
      std::string name;
      double value, expected;
    };
    const Item items[] = {
        {"kernel:M[1,0]", moment(rho, 1, 0).value, 1.0},
        {"kernel:M[2,0]", m20(rho), gauss_m20},
        {"kernel:M[2,1]", m21(rho), even ? 0.0 : nan},
        {"kernel:peak_halfwidth", rho.peak_halfwidth(), nan},
    };
    for (const Item& it : items) {
      Row r;
      r.observable = it.name;
      r.kernel = rho.label();
      r.a = nan;
      r.eps = nan;
      r.numeric = it.value;
      r.analytic = it.expected;
      r.M20 = m20(rho);
      r.M21 = m21(rho);
      r.notes = "parity=" + to_string(rho.parity());
      if (std::isnan(it.expected)) {
        r.rel_dev = nan;
        r.pass = true;
      } else {
        r.rel_dev = it.expected == 0.0 ? std::abs(it.value) : rel(it.value, it.expected);
        r.pass = r.rel_dev <= 1e-10;
      }
      rows.push_back(r);
    }
  }
  sort_rows(rows);
  return rows;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularized point-electron field integrals: numeric values against closed-form asymptotics"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  std::vector<std::string> kernels, observables, identities;
  std::vector<double> a_values, eps_values;
  bool allow_out = false;
  bool deterministic = true;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--kernel", kernels, "kernel name (gaussian, compact-bump, asymmetric-bump[:shift], tabulated:path)")
        ->delimiter(',');
    sub->add_option("--a", a_values, "cutoff radii, comma separated")->delimiter(',');
    sub->add_option("--eps", eps_values, "regularization widths, comma separated")->delimiter(',');
    sub->add_option("--out", out_path, "output file (default stdout)");
    sub->add_option("--format", format, "csv or json");
    sub->add_flag("--allow-out-of-regime", allow_out, "permit eps > a/10");
    sub->add_flag("--deterministic,!--no-deterministic", deterministic, "omit timestamps (default on)");
    sub->add_option("--observable", observables, "restrict observables")->delimiter(',');
    sub->add_option("--identity", identities, "restrict identity tags")->delimiter(',');
  };
  CLI::App* moments = app.add_subcommand("moments", "M_n and R_n: numeric against analytic");
  CLI::App* electron = app.add_subcommand("electron", "self-energies, self-force, hidden momentum, spin");
  CLI::App* convergence = app.add_subcommand("convergence", "eps and a scaling fits");
  CLI::App* identities_cmd = app.add_subcommand("identities", "integration-by-parts identity residuals");
  CLI::App* kernel_info = app.add_subcommand("kernel-info", "kernel moments and metadata");
  for (CLI::App* sub : {moments, electron, convergence, identities_cmd, kernel_info}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    RunConfig cfg = config_path.empty() ? RunConfig::defaults() : load_config(config_path);
    if (!kernels.empty()) {
      cfg.kernels.clear();
      for (const std::string& k : kernels) cfg.kernels.push_back(KernelSpec::parse(k));
    }
    if (!a_values.empty()) cfg.a_values = a_values;
    if (!eps_values.empty()) cfg.eps_values = eps_values;
    if (!out_path.empty()) cfg.out = out_path;
    if (!format.empty()) cfg.format = format;
    if (allow_out) cfg.allow_out_of_regime = true;
    if (!deterministic) cfg.deterministic = false;
    if (!observables.empty()) cfg.observables = observables;
    if (!identities.empty()) cfg.identities = identities;
    cfg.validate();

    std::vector<Row> rows;
    if (moments->parsed())
      rows = run_moments(cfg);
    else if (electron->parsed())
      rows = run_electron(cfg);
    else if (convergence->parsed())
      rows = run_convergence(cfg);
    else if (identities_cmd->parsed())
      rows = run_identities(cfg);
    else
      rows = run_kernel_info(cfg);

    std::optional<std::string> stamp;
    if (!cfg.deterministic) stamp = utc_now();
    std::string text = cfg.format == "json" ? to_json(rows, stamp).dump(2) + "\n" : to_csv(rows, stamp);
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw ConfigError("cannot write " + cfg.out);
      file << text;
    }

    int failures = 0;
    for (const Row& r : rows)
      if (!r.pass) ++failures;
    if (failures > 0) {
      err << failures << " of " << rows.size() << " rows exceed their threshold\n";
      return kThresholdViolation;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IntegrationError& e) {
    err << "quadrature did not converge: " << e.what() << "\n";
    return kNumericError;
  } catch (const ConditioningError& e) {
    err << "conditioning error: " << e.what() << "\n";
    return kNumericError;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace regdist::cli
