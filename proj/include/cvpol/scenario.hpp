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

/**
 * @file scenario.hpp
 * @brief Line-oriented scenario language: optical circuits plus measurement requests.
 *
 * A scenario is an ordered list of statements executed against a fresh
 * register. Measurements are evaluated where they appear, on the state
 * reached at that point. See README.md for the grammar.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cvpol/criteria.hpp"
#include "cvpol/gaussian.hpp"
#include "cvpol/stokes.hpp"

namespace cvpol {

/// Arithmetic over decimals, `pi`, `$param` references and sqrt(...).
struct Expr {
  enum class Op { Number, Pi, Param, Neg, Add, Sub, Mul, Div, Sqrt };

  Op op = Op::Number;
  double number = 0.0;
  std::string name;
  std::vector<Expr> args;

  static Expr constant(double v) { return Expr{Op::Number, v, {}, {}}; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

using ParamValues = std::map<std::string, double, std::less<>>;

/// Parses a whitespace-free expression. Throws ParseError carrying `line`.
Expr parse_expr(std::string_view text, int line = 0);
std::string render_expr(const Expr& e);
/// Throws PhysicsError for non-finite results (division by zero, sqrt of a negative).
double eval_expr(const Expr& e, const ParamValues& params);
void collect_params(const Expr& e, std::vector<std::string>& out);

/// Source position of a statement. Compares equal to every other position so
/// that parse(render(spec)) == spec ignores layout.
struct SourceLine {
  int number = 0;
  friend bool operator==(const SourceLine&, const SourceLine&) { return true; }
};

struct ParamDecl {
  std::string name;
  Expr default_value;
  SourceLine line;
  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

struct SpectrumDecl {
  std::string name;
  Expr vmin, vmax, fc;
  SourceLine line;
  friend bool operator==(const SpectrumDecl&, const SpectrumDecl&) = default;
};

struct ModeDecl {
  enum class Kind { Vacuum, Coherent, Squeezed, SpectrumSqueezed };

  std::string name;
  Kind kind = Kind::Vacuum;
  std::optional<Expr> alpha;
  std::optional<Expr> vplus, vminus;
  std::string spectrum;
  std::optional<Expr> freq;
  SourceLine line;
  friend bool operator==(const ModeDecl&, const ModeDecl&) = default;
};

struct RotateStmt {
  std::string mode;
  Expr angle;
  SourceLine line;
  friend bool operator==(const RotateStmt&, const RotateStmt&) = default;
};

struct BeamsplitterStmt {
  std::string a, b;
  Expr eta;
  std::optional<Expr> phase;
  SourceLine line;
  friend bool operator==(const BeamsplitterStmt&, const BeamsplitterStmt&) = default;
};

struct LossStmt {
  std::string mode;
  Expr eta;
  SourceLine line;
  friend bool operator==(const LossStmt&, const LossStmt&) = default;
};

struct BeamDecl {
  std::string name, h, v;
  Expr theta;
  SourceLine line;
  friend bool operator==(const BeamDecl&, const BeamDecl&) = default;
};

struct MeasureStmt {
  enum class Kind { Duan, Insep, EprQuad, EprStokes, StokesMeans, Ellipse };

  Kind kind = Kind::Duan;
  /// Stokes indices; 0 when unused.
  int i = 0, j = 0;
  /// Two modes, two beams, or one beam depending on kind.
  std::vector<std::string> targets;
  /// Explicit `as NAME`; empty means the default name.
  std::string alias;
  SourceLine line;

  std::string name() const;
  friend bool operator==(const MeasureStmt&, const MeasureStmt&) = default;
};

using Statement =
    std::variant<ParamDecl, SpectrumDecl, ModeDecl, RotateStmt, BeamsplitterStmt, LossStmt, BeamDecl, MeasureStmt>;

struct ScenarioSpec {
  std::string name;
  std::vector<Statement> statements;

  std::vector<const ParamDecl*> params() const;
  std::vector<const MeasureStmt*> measurements() const;
  bool has_param(std::string_view name) const;

  /// Statement lists only; the display name is not part of the text.
  friend bool operator==(const ScenarioSpec& a, const ScenarioSpec& b) { return a.statements == b.statements; }
};

ScenarioSpec parse_scenario(std::string_view text, std::string name = "scenario");
/// Canonical text form; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const ScenarioSpec& spec);

using MeasurementValue = std::variant<CriterionResult, StokesMeans, EllipsePoint>;

struct ReportEntry {
  std::string name;
  MeasureStmt::Kind kind;
  MeasurementValue value;
};

struct Report {
  std::string scenario;
  /// Resolved parameter values in declaration order.
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<ReportEntry> entries;
  std::vector<std::string> warnings;

  const ReportEntry* find(std::string_view name) const;
  /// The criterion entry `name`; throws std::out_of_range if absent.
  const CriterionResult& criterion(std::string_view name) const;
};

/// Executes the scenario. Overrides must name declared parameters.
Report run(const ScenarioSpec& spec, const ParamValues& overrides = {});

struct SweepTable {
  std::string param;
  std::vector<double> values;
  std::vector<Report> rows;
};

/// steps >= 2 evenly spaced runs between from and to, in ascending order.
/// Points are evaluated concurrently; rows are merged in index order.
SweepTable sweep(const ScenarioSpec& spec, const std::string& param, double from, double to, int steps,
                 const ParamValues& overrides = {});

/// Embedded scenario text by file name (`paper.pol`, `symmetric.pol`), or nullopt.
std::optional<std::string_view> builtin_scenario(std::string_view name);
std::vector<std::string_view> builtin_scenario_names();

// Programmatic builders for the two reference set-ups.

enum class InterferencePlacement { AfterEntangler, BeforeEntangler };

struct PaperExperimentParams {
  double vplus = 0.44;
  double vminus = 2.831;
  double eta_interference = 0.978;
  double eta_pol = 0.91;
  /// alpha_V^2 / alpha_H^2 at the polarizing beam splitter.
  double ratio = 30.0;
  /// H amplitude of each beam after all losses.
  double alpha_h = 10.0;
  double theta = 1.5707963267948966;
  /// theta_y = theta_sign * theta.
  int theta_sign = 1;
  InterferencePlacement placement = InterferencePlacement::AfterEntangler;
};

struct PaperExperiment {
  Register reg;
  PolBeam beam_x, beam_y;
  ModeId h_x, h_y, v_x, v_y;
  /// Quadrature criteria on the entangled pair before the polarization stage.
  CriterionResult duan;
  CriterionResult epr_quad;
};

/// Two squeezers on a 50/50 beamsplitter with pi/2 phase, interference
/// inefficiency as loss, then each output used as the H constituent of a beam
/// with a bright coherent V constituent, polarization-stage loss on H.
PaperExperiment build_paper_experiment(const PaperExperimentParams& p = {});

struct SymmetricScheme {
  Register reg;
  PolBeam beam_x, beam_y;
  ModeId h_x, h_y, v_x, v_y;
};

/// Two entangled pairs (H and V) with alpha_H^2 = (sqrt3+1)/2 alpha^2,
/// alpha_V^2 = (sqrt3-1)/2 alpha^2, theta_x = pi/4, theta_y = -theta_sign pi/4.
SymmetricScheme build_symmetric_scheme(double alpha, double vplus, double vminus, int theta_sign = 1);

}  // namespace cvpol
