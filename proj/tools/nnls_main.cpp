#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nnls/error.hpp"
#include "nnls/run.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  int workers = 0;
};

void add_common(CLI::App* cmd, Options& o, bool with_workers) {
  cmd->add_option("--config", o.config, "JSON run configuration")->required();
  cmd->add_option("--out", o.out, "output directory (default: the config's output entry)");
  if (with_workers) cmd->add_option("--workers", o.workers, "concurrent sweep rows (1 = sequential, warm start)");
}

void print_summary(const std::string& name, const nnls::CommandResult& r) {
  std::cout << name << ": exit " << r.exit_code << '\n';
  if (r.report.contains("hypotheses") && r.report["hypotheses"].contains("records")) {
    for (const auto& h : r.report["hypotheses"]["records"])
      std::cout << "  " << h["name"].get<std::string>() << (h["passed"].get<bool>() ? " pass" : " FAIL")
                << "  margin " << h["margin"].get<double>() << '\n';
  }
  if (r.report.contains("rows")) {
    for (const auto& row : r.report["rows"]) {
      std::cout << "  eps " << row["eps"].get<double>();
      if (row["converged"].get<bool>())
        std::cout << "  J " << std::setprecision(10) << row["energy"]["total"].get<double>() << "  residual "
                  << std::setprecision(3) << row["residual_norm"].get<double>() << "  gap "
                  << row["localization"]["total_gap"].get<double>() << '\n';
      else
        std::cout << "  failed: " << row["error"].get<std::string>() << '\n';
    }
  }
  if (r.report.contains("levels")) {
    for (const auto& l : r.report["levels"]) {
      std::cout << "  lambda " << l["lambda"].get<double>();
      if (l.contains("level"))
        std::cout << "  c " << std::setprecision(10) << l["level"].get<double>() << '\n';
      else
        std::cout << "  failed: " << l["error"].get<std::string>() << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spike solutions of coupled Schroedinger systems on a generalized Nehari manifold"};
  app.require_subcommand(1);
  Options o;
  auto* check = app.add_subcommand("check", "validate the nonlinearity hypotheses and the potential");
  auto* gs = app.add_subcommand("groundstate", "ground-state levels c(lambda) for the configured lambdas");
  auto* solve = app.add_subcommand("solve", "solve at each configured eps from the ansatz");
  auto* sweep = app.add_subcommand("sweep", "solve along a decreasing eps ladder");
  add_common(check, o, false);
  add_common(gs, o, false);
  add_common(solve, o, false);
  add_common(sweep, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nnls::kExitConfig;
  }

  try {
    const nnls::RunConfig cfg = nnls::load_config(o.config);
    const std::filesystem::path out = o.out.empty() ? std::filesystem::path(cfg.output) : std::filesystem::path(o.out);
    nnls::CommandResult r;
    std::string name;
    if (check->parsed()) {
      name = "check";
      r = nnls::cmd_check(cfg, out);
    } else if (gs->parsed()) {
      name = "groundstate";
      r = nnls::cmd_groundstate(cfg, out);
    } else if (solve->parsed()) {
      name = "solve";
      r = nnls::cmd_solve(cfg, out);
    } else {
      name = "sweep";
      r = nnls::cmd_sweep(cfg, out, o.workers > 0 ? o.workers : cfg.workers);
    }
    print_summary(name, r);
    return r.exit_code;
  } catch (const nnls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return nnls::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return nnls::kExitFailure;
  }
}
