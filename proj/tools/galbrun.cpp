// Copyright the galbrun-duct authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

// Command line driver: one run or one study per invocation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "galbrun/config.hpp"
#include "galbrun/dynamics.hpp"
#include "galbrun/io.hpp"
#include "galbrun/studies.hpp"

namespace fs = std::filesystem;
using namespace galbrun;

namespace
{

struct Options
{
  std::string config;
  std::string out;
  bool serial = false;
  int levels = 3;
};

RunConfig Load(const Options &opt)
{
  RunConfig cfg = opt.config.empty() ? RunConfig{} : io::LoadConfig(opt.config);
  if (!opt.out.empty())
  {
    cfg.output_dir = opt.out;
  }
  if (opt.serial)
  {
    cfg.serial_deterministic = true;
  }
  return cfg;
}

void PrintWarnings(const std::vector<std::string> &warnings)
{
  for (const auto &w : warnings)
  {
    std::cerr << "warning: " << w << "\n";
  }
}

int Run(const Options &opt)
{
  const RunConfig cfg = Load(opt);
  PrintWarnings(ValidateConfig(cfg));
  const RunResult r = RunSimulation(cfg);
  io::WriteRunArtifacts(cfg, r, cfg.output_dir);
  std::cout << "status " << ToString(r.status);
  if (r.status == RunStatus::Unstable)
  {
    std::cout << " step " << r.unstable_step;
  }
  std::cout << "\ndt " << r.dt << "\nsteps " << r.n_steps << "\nsnapshots "
            << r.snapshots.size() << "\noutput " << cfg.output_dir << "\n";
  return r.status == RunStatus::Stable ? 0 : 3;
}

int Report(const RunConfig &cfg, const std::string &name, const std::string &text)
{
  io::WriteText(fs::path(cfg.output_dir) / name, text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Time-domain finite element solver for the regularized Galbrun equation in a 2D duct"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", opt.config, "flat JSON config file");
    sub->add_option("--out", opt.out, "output directory (overrides output_dir)");
    sub->add_flag("--serial-deterministic", opt.serial, "single-threaded, bit-reproducible run");
  };
  auto *run = app.add_subcommand("run", "run one simulation");
  auto *conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  auto *refl = app.add_subcommand("abc-reflection", "plane-pulse reflection study");
  auto *contrast = app.add_subcommand("stability-contrast", "s = 0 versus s = 1 runs");
  for (auto *sub : {run, conv, refl, contrast})
  {
    add_common(sub);
  }
  conv->add_option("--levels", opt.levels, "number of refinement levels (>= 3)");
  refl->add_option("--levels", opt.levels, "number of refinement levels");

  CLI11_PARSE(app, argc, argv);

  try
  {
    if (run->parsed())
    {
      return Run(opt);
    }
    if (conv->parsed())
    {
      const RunConfig cfg = Load(opt);
      return Report(cfg, "convergence.txt", CmdConvergence(cfg, opt.levels).Text());
    }
    if (refl->parsed())
    {
      const RunConfig cfg = Load(opt);
      return Report(cfg, "abc_reflection.txt", CmdAbcReflection(cfg, opt.levels).Text());
    }
    if (contrast->parsed())
    {
      const RunConfig cfg = Load(opt);
      const auto rep = CmdStabilityContrast(cfg, [&](const RunConfig &c, const RunResult &r) {
        io::WriteRunArtifacts(c, r, fs::path(cfg.output_dir) / (c.s == 0.0 ? "s0" : "s1"));
      });
      return Report(cfg, "stability_contrast.txt", rep.Text());
    }
  }
  catch (const ConfigError &e)
  {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  catch (const IoError &e)
  {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
