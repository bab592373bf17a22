// Copyright 2026 The dilqr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end.
//
//   dilqr plan --builtin t-junction --out out/tj
//   dilqr plan --scenario my.json --solver centralized
//   dilqr sweep-beta --builtin intersection:12 --betas 1,1.44,1.96,2.56
//   dilqr export --builtin intersection:4 --file inter4.json

#include "dilqr/baseline.hpp"
#include "dilqr/planner.hpp"
#include "dilqr/scenario_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct ProblemArgs {
  std::string scenario;
  std::string builtin;
  std::optional<double> sigma, rho, beta;
  std::optional<int> inner_iters;
  int threads = 0;
};

void add_problem_flags(CLI::App* cmd, ProblemArgs& a) {
  auto* file = cmd->add_option("--scenario", a.scenario, "scenario JSON file");
  auto* builtin = cmd->add_option("--builtin", a.builtin, "t-junction or intersection:N");
  file->excludes(builtin);
  cmd->add_option("--sigma", a.sigma, "ADMM penalty sigma");
  cmd->add_option("--rho", a.rho, "ADMM consensus penalty rho");
  cmd->add_option("--beta", a.beta, "collision penalty weight");
  cmd->add_option("--inner-iters", a.inner_iters, "ADMM iterations per outer iteration");
  cmd->add_option("--threads", a.threads, "worker threads (0: one per agent)");
}

dilqr::LoadedScenario resolve(const ProblemArgs& a) {
  dilqr::LoadedScenario p;
  if (!a.scenario.empty()) {
    p = dilqr::load_scenario(a.scenario);
  } else {
    const std::string name = a.builtin.empty() ? "t-junction" : a.builtin;
    p.spec = dilqr::builtin_scenario(name);
    p.hyper = dilqr::builtin_hyperparams(name);
  }
  if (a.sigma) p.hyper.sigma = *a.sigma;
  if (a.rho) p.hyper.rho = *a.rho;
  if (a.beta) p.spec.beta = *a.beta;
  if (a.inner_iters) p.hyper.inner_iters = *a.inner_iters;
  auto problems = dilqr::validate_hyperparams(p.hyper);
  for (auto& s : dilqr::validate_scenario(p.spec)) problems.push_back(s);
  if (!problems.empty()) {
    std::string msg = "invalid settings:";
    for (const auto& s : problems) msg += "\n  " + s;
    throw dilqr::Error(msg);
  }
  return p;
}

dilqr::PlanResult run(const dilqr::LoadedScenario& p, const std::string& solver, int threads) {
  if (solver == "centralized") return dilqr::solve_centralized(p.spec, p.hyper);
  dilqr::PlanOptions options;
  options.threads = threads;
  return dilqr::plan_decentralized(p.spec, p.hyper, options);
}

void summarize(const dilqr::PlanResult& r, const dilqr::LoadedScenario& p) {
  std::printf("scenario        %s (%d vehicles)\n", p.spec.name.c_str(), p.spec.agents());
  std::printf("solver          %s\n", r.solver.c_str());
  std::printf("outer iters     %d%s\n", r.outer_iterations, r.converged ? "" : " (not converged)");
  std::printf("final cost      %.6f\n", r.final_cost());
  std::printf("min distance    %.4f m\n", r.min_distance);
  if (!r.consensus_variance.empty()) {
    std::printf("y variance      %.3e -> %.3e\n", r.consensus_variance.front(),
                r.consensus_variance.back());
  }
  std::printf("wall time       %.3f s\n", r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized iLQR motion planner"};
  app.require_subcommand(1);

  ProblemArgs plan_args;
  std::string solver = "decentralized";
  std::string outdir;
  auto* plan = app.add_subcommand("plan", "plan one scenario");
  add_problem_flags(plan, plan_args);
  plan->add_option("--solver", solver, "decentralized or centralized")
      ->check(CLI::IsMember({"decentralized", "centralized"}));
  plan->add_option("--out", outdir, "directory for CSV, metrics and plots");

  ProblemArgs sweep_args;
  sweep_args.builtin = "intersection:12";
  std::vector<double> betas{1.00, 1.44, 1.96, 2.56};
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep-beta", "decentralized runs over a list of beta values");
  add_problem_flags(sweep, sweep_args);
  sweep->add_option("--betas", betas, "beta values")->delimiter(',');
  sweep->add_option("--out", sweep_out, "directory for sweep.csv and per-run outputs");

  ProblemArgs export_args;
  std::string export_file;
  auto* exporter = app.add_subcommand("export", "write a scenario (with overrides) as JSON");
  add_problem_flags(exporter, export_args);
  exporter->add_option("--file", export_file, "output JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) {
      const auto problem = resolve(plan_args);
      const auto result = run(problem, solver, plan_args.threads);
      summarize(result, problem);
      if (!outdir.empty()) {
        for (const auto& f : dilqr::emit(result, problem.spec, problem.hyper, outdir)) {
          std::printf("wrote %s\n", f.string().c_str());
        }
      }
    } else if (*exporter) {
      const auto problem = resolve(export_args);
      dilqr::save_scenario(export_file, problem.spec, problem.hyper);
    } else if (*sweep) {
      auto problem = resolve(sweep_args);
      std::string csv = "beta,min_distance,outer_iterations,final_cost,converged\n";
      std::printf("%8s %14s %12s %14s\n", "beta", "min dist [m]", "iterations", "cost");
      for (double beta : betas) {
        problem.spec.beta = beta;
        const auto r = run(problem, "decentralized", sweep_args.threads);
        std::printf("%8.3f %14.4f %12d %14.4f\n", beta, r.min_distance, r.outer_iterations,
                    r.final_cost());
        char line[160];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%d,%.17g,%d\n", beta, r.min_distance,
                      r.outer_iterations, r.final_cost(), r.converged ? 1 : 0);
        csv += line;
        if (!sweep_out.empty()) {
          char sub[32];
          std::snprintf(sub, sizeof sub, "beta_%.2f", beta);
          dilqr::emit(r, problem.spec, problem.hyper, std::filesystem::path(sweep_out) / sub);
        }
      }
      if (!sweep_out.empty()) {
        std::ofstream(std::filesystem::path(sweep_out) / "sweep.csv") << csv;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
