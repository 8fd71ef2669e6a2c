#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include "centrifugal/csv.hpp"
#include "centrifugal/errors.hpp"
#include "centrifugal/flux.hpp"
#include "centrifugal/parallel.hpp"
#include "centrifugal/resonance.hpp"
#include "centrifugal/roughness.hpp"
#include "centrifugal/shooting.hpp"

namespace centrifugal::cli {

namespace {

double nev() { return PhysicalConstants::codata().nev_to_joule; }

std::string num(double x) { return format_number(x); }

std::string gnuplot_header(const std::string& xlabel, const std::string& ylabel) {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel '" + xlabel + "'\n"
         "set ylabel '" + ylabel + "'\n";
}

Report run_scales(const RunConfig& cfg) {
  const MirrorSpec& m = *cfg.mirror;
  const ScaleSet s = make_scales(BeamSpec{*cfg.velocity}, m);
  CsvTable t(csv_columns("scales"));
  t.row({num(s.velocity), num(m.radius_R), num(m.fermi_potential_nev()), num(s.l0), num(s.eps0_nev()),
         num(s.z0), num(s.mu0), num(s.accel_a), num(s.energy_E / nev())});
  std::ostringstream os;
  os << "v     = " << s.velocity << " m/s\n"
     << "l0    = " << s.l0 * 1e6 << " um\n"
     << "eps0  = " << s.eps0_nev() << " neV\n"
     << "z0    = " << s.z0 << "\n"
     << "mu0   = " << s.mu0 << "\n"
     << "a     = " << s.accel_a << " m/s^2\n"
     << "E     = " << s.energy_E / nev() << " neV\n";
  return {t.str(), os.str(), {}, true};
}

Report run_resonances(const RunConfig& cfg, bool plot, const std::string& csv_name) {
  const ScaleSet s = make_scales(BeamSpec{*cfg.velocity}, *cfg.mirror);
  const std::vector<Resonance> states = solve_resonances(s, cfg.n_max);
  CsvTable t(csv_columns("resonances"));
  for (const Resonance& r : states) {
    t.row({std::to_string(r.index_n), num(r.lambda.real()), num(r.lambda.imag()),
           num(r.energy_eps.real() / nev()), num(r.energy_eps.imag() / nev()),
           num(r.width_gamma / nev()), num(r.lifetime_tau), num(r.ang_momentum_mu.real()),
           num(r.ang_momentum_mu.imag())});
  }
  Report rep{t.str(), "z0 = " + num(s.z0) + ", " + std::to_string(states.size()) + " states\n", {}, true};
  if (plot) {
    rep.plot = gnuplot_header("n", "tau (s)") + "set logscale y\n" + "plot '" + csv_name +
               "' using 1:7 with linespoints\n";
  }
  return rep;
}

Report run_lifetimes(const RunConfig& cfg, bool plot, const std::string& csv_name) {
  const std::vector<double> grid = sweep_grid(cfg.sweep_params());
  const int n_states = cfg.sweep->n_states;
  const std::vector<LifetimeRow> rows = lifetime_curve(*cfg.mirror, grid, n_states, cfg.threads);

  std::map<double, bool> failed;
  for (const LifetimeRow& r : rows) failed[r.velocity] = failed[r.velocity] || !r.error.empty();
  int bad = 0;
  std::string first_error;
  for (const LifetimeRow& r : rows) {
    if (!r.error.empty() && first_error.empty()) first_error = r.error;
  }
  for (const auto& [v, f] : failed) bad += f ? 1 : 0;
  if (10 * bad > static_cast<int>(failed.size())) {
    throw PartialSweepError(std::to_string(bad) + " of " + std::to_string(failed.size()) +
                            " velocities failed; first: " + first_error);
  }

  CsvTable t(csv_columns("lifetimes"));
  for (const LifetimeRow& r : rows) {
    const bool ok = r.error.empty() && r.exists();
    t.row({num(r.velocity), std::to_string(r.index_n),
           num(ok ? *r.lifetime_tau : std::nan("")), num(r.time_of_flight), ok ? "1" : "0"});
  }
  std::ostringstream os;
  for (int n = 1; n <= n_states; ++n) {
    const auto v = lifetime_crossing(*cfg.mirror, n, grid.front(), grid.back());
    os << "tau_" << n << " = t_flight at " << (v ? num(*v) + " m/s" : std::string("no crossing in range"))
       << '\n';
  }
  if (bad) os << bad << " velocities failed and are marked exists=0\n";
  Report rep{t.str(), os.str(), {}, true};
  if (plot) {
    rep.plot = gnuplot_header("v (m/s)", "time (s)") + "set logscale y\n" + "plot for [k=1:" +
               std::to_string(n_states) + "] '" + csv_name +
               "' using 1:(($2==k && $5==1) ? $3 : 1/0) with lines title sprintf('tau_%d', k), '" +
               csv_name + "' using 1:(($2==1) ? $4 : 1/0) with lines title 't_flight'\n";
  }
  return rep;
}

std::string steps_summary(const FluxCurve& curve) {
  std::ostringstream os;
  os << "steps at";
  for (double v : detect_steps(curve, 2)) os << ' ' << num(v);
  os << " m/s\n";
  return os.str();
}

Report run_sweep(const RunConfig& cfg, bool plot, const std::string& csv_name) {
  FluxOptions opt;
  opt.threads = cfg.threads;
  const FluxCurve c = flux_sweep(*cfg.mirror, cfg.sweep_params(), cfg.population, opt);
  CsvTable t(csv_columns("sweep"));
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    t.row({num(c.velocity_grid[i]), num(c.relative_flux[i]), num(c.absolute_flux[i]),
           std::to_string(c.state_count[i])});
  }
  Report rep{t.str(), steps_summary(c), {}, true};
  if (plot) rep.plot = gnuplot_header("v (m/s)", "F / F(v_ref)") + "plot '" + csv_name + "' using 1:2 with lines\n";
  return rep;
}

Report run_rough_sweep(const RunConfig& cfg, bool plot, const std::string& csv_name) {
  FluxOptions opt;
  opt.threads = cfg.threads;
  const SweepParams p = cfg.sweep_params();
  const FluxCurve smooth = flux_sweep(*cfg.mirror, p, cfg.population, opt);
  const FluxCurve rough = rough_flux_sweep(*cfg.mirror, *cfg.roughness, p, cfg.population, opt);
  CsvTable t(csv_columns("rough-sweep"));
  for (Eigen::Index i = 0; i < rough.size(); ++i) {
    t.row({num(rough.velocity_grid[i]), num(smooth.relative_flux[i]),
           num(rough.absolute_flux[i] / smooth.reference_flux), num(smooth.absolute_flux[i]),
           num(rough.absolute_flux[i]), std::to_string(rough.state_count[i])});
  }
  std::ostringstream os;
  for (double v : detect_steps(smooth, 2)) {
    os << "contrast at " << num(v) << " m/s: smooth " << num(step_contrast(smooth, smooth, v, 0.1 * v))
       << ", rough " << num(step_contrast(rough, smooth, v, 0.1 * v)) << '\n';
  }
  Report rep{t.str(), os.str(), {}, true};
  if (plot) {
    rep.plot = gnuplot_header("v (m/s)", "F / F_smooth(v_ref)") + "plot '" + csv_name +
               "' using 1:2 with lines, '" + csv_name + "' using 1:3 with lines dashtype 2\n";
  }
  return rep;
}

Report run_scaling(const RunConfig& cfg, bool plot, const std::string& csv_name) {
  const ScalingTable s = potential_scaling_check(cfg.sweep->u0_list, *cfg.mirror, *cfg.roughness);
  CsvTable t(csv_columns("scaling-check"));
  for (const ScalingRow& r : s.rows) {
    t.row({num(r.u0 / nev()), num(r.critical_velocity), num(r.final_energy / nev()), num(r.rate)});
  }
  std::ostringstream os;
  os << "log-log slope = " << num(s.slope) << " (U0^" << num(s.potential_exponent) << " v^"
     << num(s.velocity_exponent) << " Ef^" << num(s.final_energy_exponent) << ")\n";
  Report rep{t.str(), os.str(), {}, true};
  if (plot) {
    rep.plot = gnuplot_header("U0 (neV)", "P (1/s)") + "set logscale xy\n" + "plot '" + csv_name +
               "' using 1:4 with linespoints\n";
  }
  return rep;
}

Report run_verify(const RunConfig& cfg) {
  const std::vector<double> z0s = {4.0, 7.0, 10.0, 15.0};
  std::vector<OracleCheck> checks(z0s.size());
  parallel_for(z0s.size(), cfg.threads, [&](std::size_t i) { checks[i] = compare_with_oracle(z0s[i]); });

  Report rep;
  CsvTable t(csv_columns("verify"));
  std::ostringstream os;
  for (const OracleCheck& c : checks) {
    rep.passed = rep.passed && c.passed;
    os << (c.passed ? "PASS" : "FAIL") << " z0=" << num(c.z0) << " states " << c.solver_count << '/'
       << c.oracle_count << " re_rel=" << num(c.worst_real_rel) << " im_rel=" << num(c.worst_imag_rel)
       << '\n';
    t.row({num(c.z0), std::to_string(c.solver_count), std::to_string(c.oracle_count),
           num(c.worst_real_rel), num(c.worst_imag_rel), c.passed ? "1" : "0"});
  }
  rep.csv = t.str();
  rep.summary = os.str();
  return rep;
}

// scales and verify report on stdout; the rest stream their table there
// when no output path is given.
bool table_on_stdout(const std::string& sub) { return sub != "scales" && sub != "verify"; }

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"scales", "resonances", "lifetimes", "sweep",
                                                 "rough-sweep", "scaling-check", "verify"};
  return names;
}

const std::vector<std::string>& csv_columns(const std::string& subcommand) {
  static const std::map<std::string, std::vector<std::string>> columns = {
      {"scales", {"v_mps", "R_m", "U0_neV", "l0_m", "eps0_neV", "z0", "mu0", "a_mps2", "E_neV"}},
      {"resonances",
       {"n", "lambda_re", "lambda_im", "eps_re_neV", "eps_im_neV", "gamma_neV", "tau_s", "mu_re", "mu_im"}},
      {"lifetimes", {"v_mps", "n", "tau_s", "t_flight_s", "exists"}},
      {"sweep", {"v_mps", "flux_rel", "flux_abs_per_s", "state_count"}},
      {"rough-sweep",
       {"v_mps", "smooth_rel", "rough_rel", "smooth_abs_per_s", "rough_abs_per_s", "state_count"}},
      {"scaling-check", {"U0_neV", "vc1_mps", "Ef_neV", "rate_per_s"}},
      {"verify", {"z0", "solver_states", "oracle_states", "worst_real_rel", "worst_imag_rel", "passed"}},
  };
  const auto it = columns.find(subcommand);
  if (it == columns.end()) throw ValidationError("subcommand", "unknown '" + subcommand + "'");
  return it->second;
}

Report run(const std::string& subcommand, const RunConfig& config, bool plot_script,
           const std::string& csv_name) {
  config.require_for(subcommand);
  if (subcommand == "scales") return run_scales(config);
  if (subcommand == "resonances") return run_resonances(config, plot_script, csv_name);
  if (subcommand == "lifetimes") return run_lifetimes(config, plot_script, csv_name);
  if (subcommand == "sweep") return run_sweep(config, plot_script, csv_name);
  if (subcommand == "rough-sweep") return run_rough_sweep(config, plot_script, csv_name);
  if (subcommand == "scaling-check") return run_scaling(config, plot_script, csv_name);
  if (subcommand == "verify") return run_verify(config);
  throw ValidationError("subcommand", "unknown '" + subcommand + "'");
}

int report_error(std::exception_ptr error, std::ostream& err) {
  try {
    std::rethrow_exception(error);
  } catch (const ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PartialSweepError& e) {
    err << "partial sweep: " << e.what() << '\n';
    return kPartialSweep;
  } catch (const ConvergenceError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const DomainError& e) {
    err << "convergence failure: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (...) {
    err << "error: unknown exception\n";
    return kFailure;
  }
}

int execute(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const std::string& sub = inv.subcommand;
  try {
    RunConfig cfg;
    if (inv.config_path) {
      cfg = load_config(*inv.config_path);
    } else if (sub != "verify") {
      throw ValidationError("--config", "required for " + sub);
    }
    if (inv.output) cfg.output_path = *inv.output;
    if (inv.threads) {
      if (*inv.threads < 1) throw ValidationError("--threads", "must be at least 1");
      cfg.threads = *inv.threads;
    }
    const bool plot = inv.plot_script || cfg.plot_script;
    if (plot && !table_on_stdout(sub)) throw ValidationError("--plot-script", "not available for " + sub);
    if (plot && cfg.output_path.empty()) throw ValidationError("--plot-script", "needs an output path");

    const std::string csv_name =
        cfg.output_path.empty() ? "out.csv" : std::filesystem::path(cfg.output_path).filename().string();
    const Report rep = run(sub, cfg, plot, csv_name);

    if (!cfg.output_path.empty()) {
      write_file_atomic(cfg.output_path, rep.csv);
      if (plot) write_file_atomic(cfg.output_path + ".gp", rep.plot);
      out << rep.summary;
    } else if (table_on_stdout(sub)) {
      out << rep.csv;
      err << rep.summary;
    } else {
      out << rep.summary;
    }
    return rep.passed ? kSuccess : kFailure;
  } catch (...) {
    return report_error(std::current_exception(), err);
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quasi-stationary neutron states on a curved mirror: spectra, lifetimes and fluxes."};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 verification failed or I/O error, 2 config error,\n"
      "3 convergence failure, 4 partial sweep (more than 10% of points failed).\n"
      "CSV goes to --output (or [output] path=) when given, otherwise to stdout.");

  const std::map<std::string, std::string> about = {
      {"scales", "Print l0, eps0, z0 and related scales at one velocity"},
      {"resonances", "Complex eigenvalues, energies, widths and lifetimes at one velocity"},
      {"lifetimes", "Lifetime of each state against the flight time over a velocity grid"},
      {"sweep", "Deflected flux against velocity, normalized at v_ref"},
      {"rough-sweep", "Deflected flux with and without roughness-induced ionization"},
      {"scaling-check", "Ionization rate at the first critical velocity against U0"},
      {"verify", "Cross-check the Airy solver against the shooting oracle"},
  };

  Invocation inv;
  std::string config;
  std::string output;
  int threads = 0;
  for (const std::string& name : subcommands()) {
    CLI::App* sc = app.add_subcommand(name, about.at(name));
    sc->add_option("-c,--config", config, "Config file")->check(CLI::ExistingFile);
    sc->add_option("-o,--output", output, "CSV output path (written atomically)");
    sc->add_option("-t,--threads", threads, "Worker threads, overrides [output] threads");
    if (table_on_stdout(name)) {
      sc->add_flag("--plot-script", inv.plot_script, "Also write <output>.gp for gnuplot");
    }
    std::string cols;
    for (const std::string& c : csv_columns(name)) cols += (cols.empty() ? "" : ",") + c;
    sc->footer("CSV columns: " + cols);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  for (CLI::App* sc : app.get_subcommands()) {
    inv.subcommand = sc->get_name();
    if (sc->count("--config")) inv.config_path = config;
    if (sc->count("--output")) inv.output = output;
    if (sc->count("--threads")) inv.threads = threads;
  }
  return execute(inv, out, err);
}

}  // namespace centrifugal::cli
