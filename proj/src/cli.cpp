#include "drrbfpu/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "drrbfpu/bench.hpp"
#include "drrbfpu/pum.hpp"

namespace drrbfpu {

namespace {

Deriv parse_deriv(const std::string& s) {
  if (s == "none") return Deriv::none;
  if (s == "x") return Deriv::dx;
  if (s == "y") return Deriv::dy;
  throw std::invalid_argument("--deriv must be one of none, x, y");
}

struct StudyArgs {
  std::string function;
  StudyConfig config;
  std::string deriv = "x";
  std::string out = "study.csv";
};

void add_model_flags(CLI::App* cmd, StudyConfig& config) {
  cmd->add_option("--n-patches", config.n_patches, "Number of patches (a square number)")
      ->capture_default_str();
  cmd->add_option("--shape-c", config.shape_c, "Kernel shape parameter")->capture_default_str();
  cmd->add_option("--overlap", config.overlap, "Patch radius as a multiple of the center spacing")
      ->capture_default_str();
  cmd->add_option("--mdi-mu", config.mu, "Diagonal increment added to the kernel matrix")
      ->capture_default_str();
}

FitConfig fit_config_from(const StudyConfig& config) {
  FitConfig fc{ShapeParameter(config.shape_c)};
  fc.mu = config.mu;
  return fc;
}

int run_study(const StudyArgs& args) {
  StudyConfig config = args.config;
  config.function = TestFunction::from_name(args.function).id();
  const Deriv d = parse_deriv(args.deriv);
  if (d == Deriv::none) throw std::invalid_argument("study --deriv must be x or y");
  config.axis = d == Deriv::dx ? Axis::x : Axis::y;
  config.validate();

  const auto rows = run_convergence_study(config);
  write_study_csv(args.out, config, rows);
  for (const auto& row : rows) {
    std::printf("N=%-6ld e0=%.6e", row.n, row.e0);
    if (row.has_orders) std::printf(" order0=%.3f", row.order0);
    std::printf(" e1=%.6e", row.e1);
    if (row.has_orders) std::printf(" order1=%.3f", row.order1);
    std::printf(" (fit %.3fs, eval %.3fs)\n", row.fit_seconds, row.eval_seconds);
  }
  std::printf("wrote %s\n", args.out.c_str());
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Rational RBF partition-of-unity approximation of scattered 2-D data"};
  app.name("drrbfpu");
  app.require_subcommand(1);

  // --- study ---
  StudyArgs study;
  auto* study_cmd =
      app.add_subcommand("study", "Run a convergence study over a ladder of node counts");
  study_cmd->add_option("--function", study.function, "Test function: steep-front or tan-lines")
      ->required();
  study_cmd
      ->add_option("--n-ladder", study.config.n_ladder,
                   "Comma-separated node counts (square numbers)")
      ->delimiter(',')
      ->capture_default_str();
  add_model_flags(study_cmd, study.config);
  study_cmd->add_option("--deriv", study.deriv, "Derivative direction for e1: x or y")
      ->capture_default_str();
  study_cmd->add_option("--eval-grid", study.config.eval_grid, "Evaluation grid side")
      ->capture_default_str();
  study_cmd->add_option("--out", study.out, "Output CSV path")->capture_default_str();

  // --- fit ---
  struct {
    std::string points;
    std::string function;
    StudyConfig config;
    std::string out = "model.txt";
  } fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to a points CSV and serialize it");
  fit_cmd->add_option("--points", fit.points, "Trial points CSV (header x,y)")->required();
  fit_cmd->add_option("--function", fit.function, "Function sampled at the points")->required();
  add_model_flags(fit_cmd, fit.config);
  fit_cmd->add_option("--out", fit.out, "Output model path")->capture_default_str();

  // --- eval ---
  struct {
    std::string model;
    std::string points;
    std::string deriv = "none";
    std::string out = "eval.csv";
  } eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model at points from a CSV");
  eval_cmd->add_option("--model", eval.model, "Model file")->required();
  eval_cmd->add_option("--points", eval.points, "Evaluation points CSV (header x,y)")->required();
  eval_cmd->add_option("--deriv", eval.deriv, "none, x, or y")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Output CSV path")->capture_default_str();

  // --- dump-surface ---
  struct {
    std::string function;
    StudyConfig config;
    long n = 16641;
    std::string deriv = "none";
    std::string out = "surface.csv";
  } dump;
  auto* dump_cmd =
      app.add_subcommand("dump-surface", "Fit one rung and dump the evaluation surface");
  dump_cmd->add_option("--function", dump.function, "Test function")->required();
  dump_cmd->add_option("--n", dump.n, "Trial node count (a square number)")->capture_default_str();
  add_model_flags(dump_cmd, dump.config);
  dump_cmd->add_option("--deriv", dump.deriv, "none, x, or y")->capture_default_str();
  dump_cmd->add_option("--eval-grid", dump.config.eval_grid, "Evaluation grid side")
      ->capture_default_str();
  dump_cmd->add_option("--out", dump.out, "Output CSV path")->capture_default_str();

  // --- verify ---
  struct {
    std::string function;
    StudyConfig config;
    long n = 4225;
  } verify;
  verify.config.n_patches = 64;
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the error-bound report and partition-of-unity check");
  verify_cmd->add_option("--function", verify.function, "Test function")->required();
  verify_cmd->add_option("--n", verify.n, "Trial node count (a square number)")
      ->capture_default_str();
  add_model_flags(verify_cmd, verify.config);
  verify_cmd->add_option("--eval-grid", verify.config.eval_grid, "Evaluation grid side")
      ->capture_default_str();

  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector back to front
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << "\n";
    return 2;
  }

  try {
    if (study_cmd->parsed()) return run_study(study);

    if (fit_cmd->parsed()) {
      const TestFunction fn = TestFunction::from_name(fit.function);
      fit.config.function = fn.id();
      fit.config.validate();
      const PointSet points = read_points_csv(fit.points);
      Eigen::VectorXd values(points.size());
      for (int i = 0; i < points.size(); ++i)
        values(i) = fn.value(points.point(i).x(), points.point(i).y());
      const PatchCover cover = build_patch_cover(fit.config.n_patches, fit.config.overlap);
      const GlobalModel model = fit_global(points, values, cover, fit_config_from(fit.config));
      save_model(fit.out, model);
      std::printf("fitted %d points over %d patches, wrote %s\n", points.size(), cover.count(),
                  fit.out.c_str());
      return 0;
    }

    if (eval_cmd->parsed()) {
      const Deriv d = parse_deriv(eval.deriv);
      const GlobalModel model = load_model(eval.model);
      const PointSet points = read_points_csv(eval.points);
      std::ofstream out(eval.out);
      if (!out) throw FormatError("cannot open " + eval.out + " for writing");
      out << "x,y,value\n";
      char buf[128];
      for (int i = 0; i < points.size(); ++i) {
        const Point p = points.point(i);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.x(), p.y(),
                      eval_global(model, p, d));
        out << buf;
      }
      if (!out) throw FormatError("write failed: " + eval.out);
      std::printf("evaluated %d points, wrote %s\n", points.size(), eval.out.c_str());
      return 0;
    }

    if (dump_cmd->parsed()) {
      dump.config.function = TestFunction::from_name(dump.function).id();
      dump_surface_csv(dump.out, dump.config, dump.n, parse_deriv(dump.deriv));
      std::printf("wrote %s\n", dump.out.c_str());
      return 0;
    }

    if (verify_cmd->parsed()) {
      const TestFunction fn = TestFunction::from_name(verify.function);
      verify.config.function = fn.id();
      verify.config.n_ladder = {verify.n};
      verify.config.validate();

      const PatchCover cover = build_patch_cover(verify.config.n_patches, verify.config.overlap);
      const int side = int(std::lround(std::sqrt(double(verify.n))));
      PointSet nodes = build_uniform_grid(side);
      for (int i = 0; i < nodes.size(); ++i) nodes.coords.col(i) = fn.adjust(nodes.point(i));
      Eigen::VectorXd values(nodes.size());
      for (int i = 0; i < nodes.size(); ++i)
        values(i) = fn.value(nodes.point(i).x(), nodes.point(i).y());
      const GlobalModel model =
          fit_global(nodes, values, cover, fit_config_from(verify.config));

      PointSet eval_points = build_uniform_grid(verify.config.eval_grid);
      for (int i = 0; i < eval_points.size(); ++i)
        eval_points.coords.col(i) = fn.adjust(eval_points.point(i));

      double worst_pu = 0.0;
      for (int i = 0; i < eval_points.size(); ++i) {
        const ShepardWeights w = shepard_weights(eval_points.point(i), cover);
        worst_pu = std::max(worst_pu, std::abs(w.weights.sum() - 1.0));
      }
      std::printf("partition-of-unity: max |sum w - 1| = %.3e %s\n", worst_pu,
                  worst_pu <= 1e-12 ? "(ok)" : "(VIOLATED)");

      bool all_ok = worst_pu <= 1e-12;
      const struct {
        Deriv d;
        const char* name;
        std::function<double(double, double)> exact;
      } passes[] = {
          {Deriv::none, "value", [&](double x, double y) { return fn.value(x, y); }},
          {Deriv::dx, "d/dx", [&](double x, double y) { return fn.dx(x, y); }},
          {Deriv::dy, "d/dy", [&](double x, double y) { return fn.dy(x, y); }},
      };
      for (const auto& pass : passes) {
        const ErrorBoundReport report = error_bound_report(model, pass.exact, eval_points, pass.d);
        std::printf("error bound (%s): %d violation(s) over %d points\n", pass.name,
                    report.violations, report.n_points);
        if (report.violations != 0) {
          std::printf("  max excess %.3e at (%.17g, %.17g)\n", report.max_excess,
                      report.worst_point.x(), report.worst_point.y());
          all_ok = false;
        }
      }
      return all_ok ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // no subcommand parsed; unreachable with require_subcommand
}

}  // namespace drrbfpu
