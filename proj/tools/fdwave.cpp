// fdwave: command-line front end. Talks to the library only through fdw.h.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fdw/fdw.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAssert = 3;

std::string real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Library failure, carrying the status for the diagnostic.
struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(fdw_status s) {
  if (s != FDW_OK) throw LibraryError(std::string(fdw_status_name(s)) + ": " + fdw_last_error());
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One subcommand with the values it echoes into config.txt.
struct Command {
  CLI::App* app = nullptr;
  std::vector<std::pair<std::string, std::function<std::string()>>> echo;
  std::string out_dir = "fdwave_out";
  std::string config_path;
  bool assert_mode = false;

  void real_opt(const std::string& name, double& v, const std::string& help) {
    app->add_option("--" + name, v, help)->capture_default_str();
    echo.emplace_back(name, [&v] { return real(v); });
  }
  void int_opt(const std::string& name, int& v, const std::string& help) {
    app->add_option("--" + name, v, help)->capture_default_str();
    echo.emplace_back(name, [&v] { return std::to_string(v); });
  }
  void string_opt(const std::string& name, std::string& v, const std::string& help) {
    app->add_option("--" + name, v, help)->capture_default_str();
    echo.emplace_back(name, [&v] { return v; });
  }
  void flag(const std::string& name, bool& v, const std::string& help) {
    app->add_flag("--" + name, v, help);
    echo.emplace_back(name, [&v] { return v ? std::string("true") : std::string("false"); });
  }
  void common() {
    app->add_option("--config", config_path, "key = value file; flags override it");
    app->add_option("--out", out_dir, "output directory")->capture_default_str();
    app->add_flag("--assert", assert_mode, "exit nonzero when the associated checks fail");
    echo.emplace_back("out", [this] { return out_dir; });
    echo.emplace_back("assert", [this] { return assert_mode ? "true" : "false"; });
  }

  std::vector<std::string> valid_keys() const {
    std::vector<std::string> keys;
    for (const auto& [k, _] : echo) keys.push_back(k);
    return keys;
  }

  std::string path(const std::string& file) const {
    return (std::filesystem::path(out_dir) / file).string();
  }

  void prepare_output() const {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(path("config.txt"));
    if (!os) throw std::runtime_error("cannot write " + path("config.txt"));
    os << "command = " << app->get_name() << '\n';
    for (const auto& [k, get] : echo) os << k << " = " << get() << '\n';
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Flat "key = value" lines; '#' starts a comment. Keys may use '_' for '-'.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open config file " + file);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(file + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    entries.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return entries;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw UsageError("not a number in list: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// Runs acceptance criteria through the C API and prints one line each.
bool run_criteria(const std::vector<int>& ids) {
  fdw_acceptance* results = nullptr;
  check(fdw_acceptance_run(ids.data(), ids.size(), &results));
  bool ok = true;
  for (std::size_t i = 0; i < fdw_acceptance_size(results); ++i) {
    fdw_criterion c{};
    check(fdw_acceptance_get(results, i, &c));
    ok = ok && c.passed;
    std::cout << fdw_acceptance_line(results, i) << '\n';
  }
  fdw_acceptance_destroy(results);
  return ok;
}

bool in_open_unit(double g) { return g > -1.0 && g < 1.0 && g != 0.0; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leapfrog + BDF2 convolution quadrature solver for the weakly damped fractional wave equation"};
  app.set_version_flag("--version", fdw_version());
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::map<std::string, Command> cmds;
  const auto make = [&](const std::string& name, const std::string& desc) -> Command& {
    Command& c = cmds[name];
    c.app = app.add_subcommand(name, desc);
    return c;
  };

  // weights
  double w_gamma = 0.5, w_kappa = 1.0;
  int w_n = 8;
  {
    Command& c = make("weights", "CQ weights and correction weights");
    c.real_opt("gamma", w_gamma, "order; any real for plain weights, (-1,1)\\{0} adds corrections");
    c.real_opt("kappa", w_kappa, "time step");
    c.int_opt("n", w_n, "last index");
    c.common();
  }

  // ode
  double o_gamma = 0.5, o_lambda = 1.0, o_a = 1.0, o_u0 = 0.0, o_v0 = 1.0, o_f = 1.0,
         o_fslope = 0.0, o_T = 0.01;
  int o_substeps = 1024;
  {
    Command& c = make("ode", "scalar Volterra reference solve and small-t asymptotic fit");
    c.real_opt("gamma", o_gamma, "fractional order");
    c.real_opt("lambda", o_lambda, "modal stiffness");
    c.real_opt("a", o_a, "damping coefficient a_gamma");
    c.real_opt("u0", o_u0, "initial displacement");
    c.real_opt("v0", o_v0, "initial velocity");
    c.real_opt("f", o_f, "constant part of the source");
    c.real_opt("f-slope", o_fslope, "linear part of the source");
    c.real_opt("final-time", o_T, "final time");
    c.int_opt("substeps", o_substeps, "uniform substeps");
    c.common();
  }

  // convergence
  std::string c_case = "smooth1d";
  double c_gamma = 0.5, c_alpha0 = 1.0, c_coupling = 0.0, c_kappa0 = 0.0, c_T = 1.0;
  int c_levels = 4;
  bool c_corrected = false, c_serial = false;
  {
    Command& c = make("convergence", "refinement study for a manufactured solution");
    c.string_opt("case", c_case, "smooth1d, smooth2d, nonsmooth1d, nonsmooth1d_printed");
    c.real_opt("gamma", c_gamma, "fractional order");
    c.real_opt("alpha0", c_alpha0, "media constant");
    c.flag("corrected", c_corrected, "use correction weights");
    c.int_opt("levels", c_levels, "refinement levels");
    c.real_opt("coupling", c_coupling, "h = coupling * kappa; 0 picks the case default");
    c.real_opt("kappa0", c_kappa0, "coarsest step; 0 picks the case default");
    c.real_opt("final-time", c_T, "final time");
    c.flag("serial", c_serial, "run levels one after another");
    c.common();
  }

  // damping
  std::string d_gammas = "-0.75,-0.25,0.25,0.75";
  double d_alpha0 = 1.0, d_ratio = 0.1, d_T = 2.0;
  int d_n = 64;
  bool d_corrected = false;
  {
    Command& c = make("damping", "Gaussian pulse on [-1,1]^2 for a sweep of orders");
    c.string_opt("gammas", d_gammas, "comma-separated orders");
    c.real_opt("alpha0", d_alpha0, "media constant");
    c.int_opt("n", d_n, "cells per side");
    c.real_opt("kappa-over-h", d_ratio, "kappa / h");
    c.real_opt("final-time", d_T, "final time");
    c.flag("corrected", d_corrected, "use correction weights");
    c.common();
  }

  // constants
  int k_grid = 99;
  double k_T = 1.0;
  {
    Command& c = make("constants", "positivity constants C1, C2 on an equispaced grid in (0,1)");
    c.int_opt("grid", k_grid, "number of interior grid points");
    c.real_opt("final-time", k_T, "final time T");
    c.common();
  }

  // solve
  std::string s_case = "smooth1d";
  double s_gamma = 0.5, s_alpha0 = 1.0, s_kappa = 1.0 / 640.0, s_T = 1.0;
  int s_n = 64, s_every = 10;
  bool s_corrected = false, s_allow = false;
  {
    Command& c = make("solve", "single run with nodal snapshots and the energy log");
    c.string_opt("case", s_case, "smooth1d, smooth2d, nonsmooth1d, nonsmooth1d_printed");
    c.real_opt("gamma", s_gamma, "fractional order");
    c.real_opt("alpha0", s_alpha0, "media constant");
    c.flag("corrected", s_corrected, "use correction weights");
    c.int_opt("n", s_n, "cells per side");
    c.real_opt("kappa", s_kappa, "time step");
    c.real_opt("final-time", s_T, "final time");
    c.int_opt("snapshot-every", s_every, "snapshot stride in steps");
    c.flag("allow-cfl-violation", s_allow, "skip the CFL check");
    c.common();
  }

  // accept
  std::string a_ids;
  {
    Command& c = make("accept", "acceptance criteria 1-10");
    c.string_opt("criteria", a_ids, "comma-separated ids; empty runs all");
    c.common();
  }

  // Config entries become "--key=value" tokens ahead of the command line, so
  // later flags win.
  std::vector<std::string> args(argv + 1, argv + argc);
  Command* active = nullptr;
  if (!args.empty()) {
    if (auto it = cmds.find(args.front()); it != cmds.end()) active = &it->second;
  }
  try {
    if (active) {
      std::string cfg;
      for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
      }
      if (!cfg.empty()) {
        const auto keys = active->valid_keys();
        std::vector<std::string> injected;
        for (const auto& [k, v] : read_config(cfg)) {
          if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
            std::string list;
            for (const auto& key : keys) list += (list.empty() ? "" : ", ") + key;
            throw UsageError("unknown config key '" + k + "' for " + args.front() +
                             "; valid keys: " + list);
          }
          injected.push_back("--" + k + "=" + v);
        }
        args.insert(args.begin() + 1, injected.begin(), injected.end());
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << (active ? active->app->help() : app.help());
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << fdw_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n' << (active ? active->app->help() : app.help());
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n' << (active ? active->app->help() : app.help());
    return kExitUsage;
  }

  Command& cmd = *active;
  const std::string name = cmd.app->get_name();
  bool ok = true;
  try {
    cmd.prepare_output();

    if (name == "weights") {
      if (w_n < 0) throw UsageError("--n must be non-negative");
      const auto n = static_cast<std::size_t>(w_n);
      std::ofstream csv(cmd.path("weights.csv"));
      if (in_open_unit(w_gamma)) {
        fdw_cq_scheme* s = nullptr;
        check(fdw_cq_scheme_create(w_gamma, w_kappa, n, &s));
        csv << "n,t,omega,w0,w1\n";
        for (std::size_t j = 0; j <= n; ++j) {
          double om = 0, a = 0, b = 0;
          check(fdw_cq_scheme_weights(s, j, &om, &a, &b));
          const std::string row = std::to_string(j) + "," + real(static_cast<double>(j) * w_kappa) +
                                  "," + real(om) + "," + real(a) + "," + real(b);
          csv << row << '\n';
          std::cout << row << '\n';
        }
        fdw_cq_scheme_destroy(s);
      } else {
        std::vector<double> w(n + 1);
        check(fdw_bdf2_weights(w_gamma, w_kappa, n, w.data()));
        csv << "n,t,omega\n";
        for (std::size_t j = 0; j <= n; ++j) {
          const std::string row =
              std::to_string(j) + "," + real(static_cast<double>(j) * w_kappa) + "," + real(w[j]);
          csv << row << '\n';
          std::cout << row << '\n';
        }
      }
      if (cmd.assert_mode) ok = run_criteria({1, 2, 3});

    } else if (name == "ode") {
      fdw_ode_problem p;
      fdw_ode_problem_init(&p);
      p.gamma = o_gamma;
      p.lambda = o_lambda;
      p.a_gamma = o_a;
      p.u0 = o_u0;
      p.v0 = o_v0;
      p.f_const = o_f;
      p.f_slope = o_fslope;
      p.final_time = o_T;
      if (o_substeps < 1) throw UsageError("--substeps must be positive");
      p.substeps = static_cast<std::size_t>(o_substeps);
      fdw_ode_solution* sol = nullptr;
      check(fdw_ode_solve(&p, &sol));
      check(fdw_ode_solution_write_csv(sol, cmd.path("ode.csv").c_str()));
      fdw_asymptotic_fit fit{};
      const fdw_status st = fdw_ode_solution_fit(sol, &fit);
      fdw_ode_solution_destroy(sol);
      check(st);
      std::cout << "exponent=" << real(fit.exponent) << " expected=" << real(fit.expected_exponent)
                << " coefficient=" << real(fit.coefficient)
                << " expected_coefficient=" << real(fit.expected_coefficient)
                << " monotone=" << fit.monotone << " samples=" << fit.samples << '\n';
      if (cmd.assert_mode) ok = run_criteria({9, 10});

    } else if (name == "convergence") {
      fdw_convergence_options o;
      fdw_convergence_options_init(&o);
      o.case_name = c_case.c_str();
      o.gamma = c_gamma;
      o.alpha0 = c_alpha0;
      o.corrected = c_corrected;
      o.levels = c_levels;
      o.coupling = c_coupling;
      o.kappa0 = c_kappa0;
      o.final_time = c_T;
      o.parallel = !c_serial;
      fdw_convergence_report* r = nullptr;
      check(fdw_convergence_run(&o, &r));
      check(fdw_convergence_write_csv(r, cmd.path("convergence.csv").c_str()));
      std::cout << "level,n_per_side,h,kappa,error_energy,error_l2max\n";
      for (std::size_t i = 0; i < fdw_convergence_level_count(r); ++i) {
        fdw_level l{};
        check(fdw_convergence_level(r, i, &l));
        std::cout << l.level << ',' << l.n_per_side << ',' << real(l.h) << ',' << real(l.kappa)
                  << ',' << real(l.error_energy) << ',' << real(l.error_l2max) << '\n';
      }
      std::cout << fdw_convergence_summary(r) << '\n';
      fdw_convergence_destroy(r);
      if (cmd.assert_mode) ok = run_criteria({5, 6, 7});

    } else if (name == "damping") {
      const std::vector<double> gammas = parse_list(d_gammas);
      fdw_damping_options o;
      fdw_damping_options_init(&o);
      o.gammas = gammas.data();
      o.gamma_count = gammas.size();
      o.alpha0 = d_alpha0;
      o.n_per_side = d_n;
      o.kappa_over_h = d_ratio;
      o.final_time = d_T;
      o.corrected = d_corrected;
      fdw_damping_report* r = nullptr;
      check(fdw_damping_run(&o, &r));
      check(fdw_damping_write_csv(r, cmd.path("damping.csv").c_str()));
      std::cout << "label,gamma,a_gamma,late_amplitude,final_energy\n";
      fdw_damping_trace base{};
      double late_quarter = -1.0, late_three_quarter = -1.0;
      for (std::size_t i = 0; i < fdw_damping_trace_count(r); ++i) {
        fdw_damping_trace t{};
        check(fdw_damping_trace_info(r, i, &t));
        if (i == 0) base = t;
        if (t.gamma == 0.25) late_quarter = t.late_amplitude;
        if (t.gamma == 0.75) late_three_quarter = t.late_amplitude;
        std::cout << t.label << ',' << real(t.gamma) << ',' << real(t.a_gamma) << ','
                  << real(t.late_amplitude) << ',' << real(t.final_energy) << '\n';
        if (i > 0 && cmd.assert_mode) {
          const bool damped = t.final_energy < base.final_energy &&
                              t.late_amplitude <= base.late_amplitude;
          if (!damped) {
            std::cout << "check FAIL " << t.label << " is not damped relative to the baseline\n";
            ok = false;
          }
        }
      }
      fdw_damping_destroy(r);
      if (cmd.assert_mode && ok) std::cout << "check PASS every damped trace loses energy\n";
      // Reported ordering: gamma = 0.25 damps the pulse more than gamma = 0.75.
      if (cmd.assert_mode && late_quarter >= 0.0 && late_three_quarter >= 0.0) {
        const bool order = late_quarter < late_three_quarter;
        std::cout << "check " << (order ? "PASS" : "FAIL") << " late amplitude gamma=0.25 "
                  << real(late_quarter) << " < gamma=0.75 " << real(late_three_quarter) << '\n';
        ok = ok && order;
      }

    } else if (name == "constants") {
      int strict = 0;
      check(fdw_constants_csv(k_grid, k_T, cmd.path("constants.csv").c_str(), &strict));
      std::cout << "rows=" << k_grid << " c2_gt_c1=" << (strict ? "all" : "not-all") << '\n';
      if (cmd.assert_mode) ok = strict && run_criteria({4});

    } else if (name == "solve") {
      fdw_solve_options o;
      fdw_solve_options_init(&o);
      o.case_name = s_case.c_str();
      o.gamma = s_gamma;
      o.alpha0 = s_alpha0;
      o.corrected = s_corrected;
      o.n_per_side = s_n;
      o.kappa = s_kappa;
      o.final_time = s_T;
      o.snapshot_every = s_every;
      o.allow_cfl_violation = s_allow;
      fdw_solve_report* r = nullptr;
      check(fdw_solve_run(&o, &r));
      fdw_solve_summary s{};
      check(fdw_solve_get_summary(r, &s));
      check(fdw_solve_write_snapshots_csv(r, cmd.path("snapshots.csv").c_str()));
      check(fdw_solve_write_energy_csv(r, cmd.path("energy.csv").c_str()));
      fdw_solve_destroy(r);
      std::cout << "steps=" << s.steps << " h=" << real(s.h) << " a_gamma=" << real(s.a_gamma)
                << " c_inv=" << real(s.c_inv) << " cfl_limit=" << real(s.cfl_limit)
                << " error_energy=" << real(s.error_energy)
                << " error_l2max=" << real(s.error_l2max) << " E1=" << real(s.first_energy)
                << " EN=" << real(s.final_energy) << '\n';
      if (cmd.assert_mode) ok = run_criteria({8});

    } else if (name == "accept") {
      std::vector<int> ids;
      for (double v : parse_list(a_ids)) {
        if (v != std::floor(v)) throw UsageError("criterion ids must be integers");
        ids.push_back(static_cast<int>(v));
      }
      ok = run_criteria(ids);
      if (!cmd.assert_mode) ok = true;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n' << cmd.app->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return ok ? 0 : kExitAssert;
}
