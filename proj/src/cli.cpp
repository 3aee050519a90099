// Copyright 2026 The cvpol Authors
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

#include "cvpol/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cvpol/errors.hpp"
#include "cvpol/report_io.hpp"
#include "cvpol/scenario.hpp"

namespace cvpol {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), std::filesystem::path(path).filename().string());
  }
  if (auto text = builtin_scenario(path)) return parse_scenario(*text, path);
  throw std::invalid_argument("cannot read scenario file '" + path + "'");
}

ParamValues parse_overrides(const std::vector<std::string>& sets) {
  ParamValues out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--set expects NAME=VALUE, got '" + s + "'");
    const Expr e = parse_expr(s.substr(eq + 1));
    out[s.substr(0, eq)] = eval_expr(e, {});
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + out_path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + out_path + "'");
}

}  // namespace

std::array<EllipsePoint, 3> fig4_points(double squeezing) {
  if (!(squeezing > 0.0 && squeezing <= 1.0)) throw PhysicsError("squeezed variance must lie in (0, 1]");
  const auto scheme = build_symmetric_scheme(10.0, squeezing, 1.0 / squeezing);
  std::array<EllipsePoint, 3> out;
  for (int k = 1; k <= 3; ++k)
    out[k - 1] = conditional_ellipse(scheme.reg, scheme.beam_x, scheme.beam_y, stokes_index(k));
  return out;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian polarization-entanglement simulator"};
  app.require_subcommand(1);

  std::string file, format = "json", out_path, param, init_dir = ".";
  std::vector<std::string> sets;
  double from = 0.0, to = 0.0, squeezing = 0.1;
  int steps = 0;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario file (or a built-in: paper.pol, symmetric.pol)");
  run_cmd->add_option("file", file, "Scenario file")->required();
  run_cmd->add_option("--set", sets, "Override a parameter, NAME=VALUE (repeatable)");
  run_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--out", out_path, "Write to PATH instead of standard output");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter and write a CSV table");
  sweep_cmd->add_option("file", file, "Scenario file")->required();
  sweep_cmd->add_option("--param", param, "Parameter to sweep")->required();
  sweep_cmd->add_option("--from", from, "First value")->required();
  sweep_cmd->add_option("--to", to, "Last value")->required();
  sweep_cmd->add_option("--steps", steps, "Number of points (>= 2)")->required();
  sweep_cmd->add_option("--set", sets, "Override a parameter, NAME=VALUE (repeatable)");
  sweep_cmd->add_option("--out", out_path, "Write to PATH instead of standard output");

  auto* fig4_cmd = app.add_subcommand("fig4", "Conditional-knowledge ellipse data of the four-squeezer scheme");
  fig4_cmd->add_option("--squeezing", squeezing, "Squeezed quadrature variance V (0 < V <= 1)");
  fig4_cmd->add_option("--out", out_path, "Write to PATH instead of standard output");

  auto* init_cmd = app.add_subcommand("init", "Write the built-in scenario files to a directory");
  init_cmd->add_option("dir", init_dir, "Target directory");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run_cmd->parsed()) {
      const Report r = run(load_scenario(file), parse_overrides(sets));
      emit(format == "csv" ? report_csv(r) : report_json(r), out_path, out);
    } else if (sweep_cmd->parsed()) {
      if (steps < 2) {
        err << "sweep needs --steps >= 2\n" << sweep_cmd->help();
        return kExitUsage;
      }
      const auto table = sweep(load_scenario(file), param, from, to, steps, parse_overrides(sets));
      emit(sweep_csv(table), out_path, out);
    } else if (fig4_cmd->parsed()) {
      emit(fig4_csv(fig4_points(squeezing)), out_path, out);
    } else if (init_cmd->parsed()) {
      std::error_code ec;
      std::filesystem::create_directories(init_dir, ec);
      for (auto name : builtin_scenario_names()) {
        const auto path = (std::filesystem::path(init_dir) / name).string();
        emit(std::string(*builtin_scenario(name)), path, out);
        out << "wrote " << path << '\n';
      }
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::domain_error& e) {
    err << "physics error: " << e.what() << '\n';
    return kExitPhysics;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace cvpol
