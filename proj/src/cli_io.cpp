#include "tfim2d/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "tfim2d/lattice.hpp"
#include "tfim2d/verify.hpp"

namespace tfim2d {

namespace {

std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

LambdaGrid parse_grid(const std::string& text) {
  LambdaGrid g;
  char tail = '\0';
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g.start, &g.stop, &g.step, &tail) != 3)
    throw UsageError("--lambda expects start:stop:step, got '" + text + "'");
  g.points();  // validates
  return g;
}

std::pair<int, int> parse_pair(const std::string& text) {
  int i = 0, j = 0;
  char tail = '\0';
  if (std::sscanf(text.c_str(), "%d,%d%c", &i, &j, &tail) != 2 || i < 1 || j < 1 || i == j)
    throw UsageError("--pair expects two distinct 1-based sites as i,j, got '" + text + "'");
  return {i, j};
}

std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("--alpha expects a comma-separated list of numbers, got '" + text + "'");
    }
  }
  if (out.empty()) throw UsageError("--alpha list is empty");
  return out;
}

std::string grid_text(const LambdaGrid& g) {
  return g17(g.start) + ":" + g17(g.stop) + ":" + g17(g.step);
}

std::string default_output(const std::string& subcommand) {
  return subcommand + ".csv";
}

const std::vector<std::string> kFigures = {"fig1", "fig2", "fig3", "fig4",
                                           "fig5", "fig6", "fig7", "fig8"};

void add_solver_flags(CLI::App* cmd, RunConfig& cfg, double& shift_val, bool& no_adaptive) {
  cmd->add_option("--block-size", cfg.solver.block_size, "eigensolver block width");
  cmd->add_option("--n-wanted", cfg.solver.n_wanted, "eigenpairs to converge");
  cmd->add_option("--outer-tol", cfg.solver.outer_tol, "outer residual tolerance");
  cmd->add_option("--inner-tol", cfg.solver.inner_rel_tol, "inner CG reduction factor");
  cmd->add_option("--max-outer", cfg.solver.max_outer, "outer iteration cap");
  cmd->add_option("--max-inner", cfg.solver.max_inner, "inner CG iteration cap");
  cmd->add_option("--seed", cfg.solver.seed, "random seed");
  cmd->add_option("--shift", shift_val, "fixed spectral shift (default: automatic)");
  cmd->add_flag("--no-adaptive-shift", no_adaptive, "keep the initial shift for the whole solve");
  cmd->add_option("--diagnostics", cfg.diagnostics, "per-iteration solver CSV path");
}

void add_sweep_flags(CLI::App* cmd, RunConfig& cfg, std::vector<std::string>& pair_texts,
                     std::string& grid_text_in, bool& no_warm) {
  cmd->add_option("--shell", cfg.shell, "lattice shell radius (1 = 7 sites, 2 = 19 sites)");
  cmd->add_option("--j", cfg.j, "base exchange coupling");
  cmd->add_option("--pair", pair_texts, "site pair i,j (repeatable; default: all bonded pairs)");
  cmd->add_option("--lambda", grid_text_in, "field sweep start:stop:step");
  cmd->add_option("--impurity-site", cfg.impurity_site, "site whose bonds are rescaled");
  cmd->add_option("--impurity-alpha", cfg.impurity_alpha, "bond rescale J' = (1+alpha)J");
  cmd->add_flag("--no-warm-start", no_warm, "solve every grid point from scratch");
  cmd->add_option("--output", cfg.output, "CSV output path");
  cmd->add_flag("--plot", cfg.plot, "also write a gnuplot script next to the CSV");
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"transverse-field Ising entanglement toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> pair_texts;
  std::string grid_in;
  std::string alpha_in;
  double shift_val = 0.0;
  bool no_adaptive = false;
  bool no_warm = false;

  CLI::App* sweep = app.add_subcommand("sweep", "concurrence/EoF over a lambda grid");
  add_sweep_flags(sweep, cfg, pair_texts, grid_in, no_warm);
  sweep->add_flag("--gap", cfg.want_gap, "include the E1-E0 column");
  add_solver_flags(sweep, cfg, shift_val, no_adaptive);

  CLI::App* derivative = app.add_subcommand("derivative", "sweep plus centered dC/dlambda");
  add_sweep_flags(derivative, cfg, pair_texts, grid_in, no_warm);
  add_solver_flags(derivative, cfg, shift_val, no_adaptive);

  CLI::App* gap = app.add_subcommand("gap", "energy gap over a lambda grid");
  add_sweep_flags(gap, cfg, pair_texts, grid_in, no_warm);
  add_solver_flags(gap, cfg, shift_val, no_adaptive);

  CLI::App* impurity = app.add_subcommand("impurity", "repeat a sweep over impurity strengths");
  add_sweep_flags(impurity, cfg, pair_texts, grid_in, no_warm);
  impurity->add_option("--site", cfg.scan_site, "impurity site")->required();
  impurity->add_option("--alpha", alpha_in, "comma-separated impurity strengths");
  add_solver_flags(impurity, cfg, shift_val, no_adaptive);

  CLI::App* verify = app.add_subcommand("verify", "run the cross-implementation check suite");
  verify->add_option("--trials", cfg.trials, "random instances");
  verify->add_option("--max-sites", cfg.max_sites, "largest random lattice");
  verify->add_option("--seed", cfg.solver.seed, "random seed");

  CLI::App* reproduce = app.add_subcommand("reproduce", "canned figure-level datasets");
  reproduce->add_option("figure", cfg.figure, "one of fig1..fig8")
      ->required()
      ->check(CLI::IsMember(kFigures));
  reproduce->add_flag("--plot", cfg.plot, "also write gnuplot scripts");
  add_solver_flags(reproduce, cfg, shift_val, no_adaptive);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\nRun with --help for usage.");
  }

  for (CLI::App* cmd : {sweep, derivative, gap, impurity, verify, reproduce})
    if (app.got_subcommand(cmd)) cfg.subcommand = cmd->get_name();

  if (!grid_in.empty()) cfg.grid = parse_grid(grid_in);
  for (const std::string& t : pair_texts) cfg.pairs.push_back(parse_pair(t));
  if (!alpha_in.empty()) cfg.alphas = parse_alpha_list(alpha_in);
  if (app.got_subcommand(sweep) && sweep->count("--shift")) cfg.solver.shift = shift_val;
  for (CLI::App* cmd : {derivative, gap, impurity, reproduce})
    if (app.got_subcommand(cmd) && cmd->count("--shift")) cfg.solver.shift = shift_val;
  cfg.solver.adaptive_shift = !no_adaptive;
  cfg.warm_start = !no_warm;
  if (cfg.subcommand == "gap") cfg.want_gap = true;
  if (cfg.output.empty() && cfg.subcommand != "verify" && cfg.subcommand != "reproduce")
    cfg.output = default_output(cfg.subcommand);
  return cfg;
}

std::vector<std::string> to_args(const RunConfig& config) {
  std::vector<std::string> args{config.subcommand};
  const bool sweep_family = config.subcommand == "sweep" || config.subcommand == "derivative" ||
                            config.subcommand == "gap" || config.subcommand == "impurity";
  if (sweep_family) {
    args.insert(args.end(), {"--shell", std::to_string(config.shell)});
    args.insert(args.end(), {"--j", g17(config.j)});
    args.insert(args.end(), {"--lambda", grid_text(config.grid)});
    for (const auto& [i, j] : config.pairs)
      args.insert(args.end(), {"--pair", std::to_string(i) + "," + std::to_string(j)});
    if (config.subcommand == "sweep" && config.want_gap) args.push_back("--gap");
    if (config.impurity_site != 0) {
      args.insert(args.end(), {"--impurity-site", std::to_string(config.impurity_site)});
      args.insert(args.end(), {"--impurity-alpha", g17(config.impurity_alpha)});
    }
    if (!config.warm_start) args.push_back("--no-warm-start");
    if (!config.output.empty()) args.insert(args.end(), {"--output", config.output});
    if (config.plot) args.push_back("--plot");
  }
  if (config.subcommand == "impurity") {
    args.insert(args.end(), {"--site", std::to_string(config.scan_site)});
    std::string list;
    for (double a : config.alphas) {
      if (!list.empty()) list += ",";
      list += g17(a);
    }
    args.insert(args.end(), {"--alpha", list});
  }
  if (config.subcommand == "verify") {
    args.insert(args.end(), {"--trials", std::to_string(config.trials)});
    args.insert(args.end(), {"--max-sites", std::to_string(config.max_sites)});
    args.insert(args.end(), {"--seed", std::to_string(config.solver.seed)});
  }
  if (config.subcommand == "reproduce") {
    args.push_back(config.figure);
    if (config.plot) args.push_back("--plot");
  }
  if (sweep_family || config.subcommand == "reproduce") {
    args.insert(args.end(), {"--block-size", std::to_string(config.solver.block_size)});
    args.insert(args.end(), {"--n-wanted", std::to_string(config.solver.n_wanted)});
    args.insert(args.end(), {"--outer-tol", g17(config.solver.outer_tol)});
    args.insert(args.end(), {"--inner-tol", g17(config.solver.inner_rel_tol)});
    args.insert(args.end(), {"--max-outer", std::to_string(config.solver.max_outer)});
    args.insert(args.end(), {"--max-inner", std::to_string(config.solver.max_inner)});
    args.insert(args.end(), {"--seed", std::to_string(config.solver.seed)});
    if (config.solver.shift) args.insert(args.end(), {"--shift", g17(*config.solver.shift)});
    if (!config.solver.adaptive_shift) args.push_back("--no-adaptive-shift");
    if (!config.diagnostics.empty())
      args.insert(args.end(), {"--diagnostics", config.diagnostics});
  }
  return args;
}

void write_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  std::vector<const SweepRecord*> order;
  order.reserve(records.size());
  for (const SweepRecord& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const SweepRecord* a, const SweepRecord* b) {
    return std::tie(a->alpha, a->lambda, a->site_i, a->site_j) <
           std::tie(b->alpha, b->lambda, b->site_i, b->site_j);
  });

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "'");
  out << "lambda,site_i,site_j,concurrence,eof,gap,dC_dlambda,alpha,converged\n";
  for (const SweepRecord* r : order) {
    out << g12(r->lambda) << ',' << r->site_i << ',' << r->site_j << ',' << g12(r->concurrence)
        << ',' << g12(r->eof) << ',';
    if (r->gap) out << g12(*r->gap);
    out << ',';
    if (r->d_concurrence) out << g12(*r->d_concurrence);
    out << ',' << g12(r->alpha) << ',' << (r->converged ? '1' : '0') << '\n';
  }
  out.close();
  if (out.fail()) {
    std::remove(path.c_str());
    throw std::runtime_error("write_csv: write to '" + path + "' failed; partial file removed");
  }
}

namespace {

struct CsvCurve {
  int site_i = 0;
  int site_j = 0;
  double alpha = 0.0;
  std::vector<std::pair<double, double>> points;  // lambda, plotted value
};

}  // namespace

std::string emit_plot_script(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::invalid_argument("emit_plot_script: cannot read '" + csv_path + "'");
  std::string header;
  std::getline(in, header);
  if (header.rfind("lambda,site_i,site_j", 0) != 0)
    throw std::invalid_argument("emit_plot_script: unrecognized CSV header in '" + csv_path + "'");

  bool has_gap = false;
  bool has_deriv = false;
  std::vector<CsvCurve> curves;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    while (cells.size() < 9) cells.push_back("");
    const double lambda = std::stod(cells[0]);
    const int i = std::stoi(cells[1]);
    const int j = std::stoi(cells[2]);
    const double alpha = std::stod(cells[7]);
    if (!cells[5].empty()) has_gap = true;
    if (!cells[6].empty()) has_deriv = true;
    auto it = std::find_if(curves.begin(), curves.end(), [&](const CsvCurve& c) {
      return c.site_i == i && c.site_j == j && c.alpha == alpha;
    });
    if (it == curves.end()) {
      curves.push_back({i, j, alpha, {}});
      it = curves.end() - 1;
    }
    double value = 0.0;
    bool have_value = true;
    if (has_deriv && !cells[6].empty())
      value = std::stod(cells[6]);
    else if (!has_deriv && has_gap && !cells[5].empty())
      value = std::stod(cells[5]);
    else if (!has_deriv && !has_gap)
      value = std::stod(cells[3]);
    else
      have_value = false;
    if (have_value) it->points.push_back({lambda, value});
  }

  const int column = has_deriv ? 7 : (has_gap ? 6 : 4);
  const std::string quantity = has_deriv ? "dC/dlambda" : (has_gap ? "gap" : "concurrence");
  std::string stem = csv_path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);

  std::ostringstream s;
  s << "# generated from " << csv_path << "\n";
  s << "set datafile separator ','\n";
  s << "set terminal pngcairo size 1000,700\n";
  s << "set output '" << stem << ".png'\n";
  s << "set xlabel 'lambda'\n";
  s << "set ylabel '" << quantity << "'\n";
  s << "set key outside\n";
  if (curves.empty()) {
    s << "# warning: no data rows; nothing to plot\n";
    return s.str();
  }
  if (has_deriv) {
    int tag = 1;
    for (const CsvCurve& c : curves) {
      if (c.points.empty()) continue;
      auto peak = std::max_element(c.points.begin(), c.points.end(),
                                   [](const auto& a, const auto& b) {
                                     return std::abs(a.second) < std::abs(b.second);
                                   });
      s << "set label " << tag++ << " 'peak " << g12(peak->first) << "' at " << g12(peak->first)
        << "," << g12(peak->second) << " point pt 7 offset 1,0.5\n";
    }
  }
  s << "plot ";
  bool first = true;
  for (const CsvCurve& c : curves) {
    if (!first) s << ", \\\n     ";
    first = false;
    s << "'" << csv_path << "' every ::1 using 1:($2==" << c.site_i << " && $3==" << c.site_j
      << " && abs($8-(" << g12(c.alpha) << "))<1e-9 ? $" << column
      << " : 1/0) with lines title 'pair (" << c.site_i << "," << c.site_j << ") alpha="
      << g12(c.alpha) << "'";
  }
  s << "\n";
  return s.str();
}

namespace {

std::string resolve_output(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* outdir = std::getenv("TFIM2D_OUTDIR");
  if (!outdir || !*outdir) return path;
  std::string dir(outdir);
  if (dir.back() != '/') dir += '/';
  return dir + path;
}

SweepSpec spec_from_config(const RunConfig& cfg) {
  SweepSpec spec;
  spec.lattice.shell_radius = cfg.shell;
  spec.lattice.j = cfg.j;
  if (cfg.impurity_site != 0)
    spec.lattice.impurity = Impurity{cfg.impurity_site, cfg.impurity_alpha};
  spec.grid = cfg.grid;
  spec.pairs = cfg.pairs;
  spec.want_gap = cfg.want_gap;
  spec.want_derivative = cfg.subcommand == "derivative";
  spec.solver = cfg.solver;
  spec.warm_start = cfg.warm_start;
  return spec;
}

void write_outputs(const std::vector<SweepRecord>& records, const std::string& path, bool plot) {
  write_csv(records, path);
  std::cout << "wrote " << path << " (" << records.size() << " rows)\n";
  if (plot) {
    std::string stem = path;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
    const std::string script = emit_plot_script(path);
    const std::string script_path = stem + ".gp";
    std::ofstream out(script_path);
    out << script;
    out.close();
    if (out.fail()) throw std::runtime_error("failed to write '" + script_path + "'");
    std::cout << "wrote " << script_path << "\n";
  }
}

int dispatch_sweep_family(const RunConfig& cfg) {
  SweepSpec spec = spec_from_config(cfg);
  std::ofstream diag;
  if (!cfg.diagnostics.empty()) {
    diag.open(resolve_output(cfg.diagnostics));
    if (!diag) throw std::runtime_error("cannot open diagnostics path");
    spec.solver.diagnostics = &diag;
  }
  if (cfg.subcommand == "gap" && spec.pairs.empty()) {
    const Lattice lat = build_patch(cfg.shell, cfg.j);
    int center = lat.center != 0 ? lat.center : lat.bonds.front().i;
    for (const Bond& b : lat.bonds)
      if (b.i == center || b.j == center) {
        spec.pairs.push_back({b.i, b.j});
        break;
      }
  }
  std::vector<SweepRecord> records;
  if (cfg.subcommand == "impurity")
    records = impurity_scan(spec, cfg.scan_site, cfg.alphas);
  else
    records = run_sweep(spec);
  write_outputs(records, resolve_output(cfg.output), cfg.plot);
  return 0;
}

int dispatch_verify(const RunConfig& cfg) {
  VerifyOptions opts;
  opts.trials = cfg.trials;
  opts.max_sites = cfg.max_sites;
  opts.seed = cfg.solver.seed;
  opts.progress = &std::cout;
  const std::vector<CheckResult> results = run_verification(opts);
  int failed = 0;
  for (const CheckResult& c : results) failed += c.pass ? 0 : 1;
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
            << "\n";
  return failed == 0 ? 0 : 3;
}

int dispatch_reproduce(const RunConfig& cfg) {
  struct Job {
    std::string file;
    SweepSpec spec;
    int impurity_scan_site = 0;
    std::vector<double> alphas;
  };
  std::vector<Job> jobs;
  auto add = [&](const std::string& file, int shell, LambdaGrid grid,
                 std::vector<std::pair<int, int>> pairs) -> Job& {
    Job job;
    job.file = file;
    job.spec.lattice.shell_radius = shell;
    job.spec.grid = grid;
    job.spec.pairs = std::move(pairs);
    job.spec.solver = cfg.solver;
    jobs.push_back(std::move(job));
    return jobs.back();
  };

  if (cfg.figure == "fig1") {
    add("fig1_7site.csv", 1, {0.0, 6.0, 0.01}, {{1, 4}});
    add("fig1_19site.csv", 2, {0.0, 6.0, 0.05}, {{5, 10}});
  } else if (cfg.figure == "fig2") {
    add("fig2_7site.csv", 1, {0.0, 6.0, 0.01}, {{1, 2}, {1, 4}});
    add("fig2_19site.csv", 2, {0.0, 6.0, 0.05}, {{1, 2}, {2, 5}, {5, 6}, {5, 10}});
  } else if (cfg.figure == "fig3") {
    add("fig3_7site.csv", 1, {0.0, 6.0, 0.01}, {{1, 4}}).spec.want_derivative = true;
    add("fig3_19site.csv", 2, {2.5, 3.5, 0.01}, {{5, 10}}).spec.want_derivative = true;
  } else if (cfg.figure == "fig4") {
    add("fig4_7site.csv", 1, {0.0, 6.0, 0.05}, {{1, 4}}).spec.want_gap = true;
    add("fig4_19site.csv", 2, {0.0, 4.0, 0.1}, {{5, 10}}).spec.want_gap = true;
  } else if (cfg.figure == "fig5" || cfg.figure == "fig7") {
    Job& job = add(cfg.figure + ".csv", 1, {0.0, 6.0, 0.02}, {});
    job.impurity_scan_site = cfg.figure == "fig5" ? 4 : 1;
    job.alphas = {0.0, 0.5, 1.0};
  } else if (cfg.figure == "fig6" || cfg.figure == "fig8") {
    Job& job = add(cfg.figure + ".csv", 2, {2.0, 5.0, 0.1}, {{1, 2}, {2, 5}, {5, 6}, {5, 10}});
    job.impurity_scan_site = cfg.figure == "fig6" ? 10 : 5;
    job.alphas = {0.0, 0.5, 1.0};
  }

  for (const Job& job : jobs) {
    std::vector<SweepRecord> records;
    if (job.impurity_scan_site != 0)
      records = impurity_scan(job.spec, job.impurity_scan_site, job.alphas);
    else
      records = run_sweep(job.spec);
    write_outputs(records, resolve_output(job.file), cfg.plot);
  }
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);

  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const UsageError& e) {
    if (e.exit_code == 0) {
      std::cout << e.what() << "\n";
      return 0;
    }
    std::cerr << e.what() << "\n";
    return e.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (cfg.subcommand == "verify") return dispatch_verify(cfg);
    if (cfg.subcommand == "reproduce") return dispatch_reproduce(cfg);
    return dispatch_sweep_family(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tfim2d
