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

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

#include "cvpol/errors.hpp"
#include "cvpol/scenario.hpp"
#include "cvpol/spectrum.hpp"

namespace cvpol {

namespace {

class Executor {
 public:
  explicit Executor(Report& report, const ParamValues& overrides) : report_(report), overrides_(overrides) {}

  void operator()(const ParamDecl& d) {
    auto it = overrides_.find(d.name);
    const double v = it != overrides_.end() ? it->second : eval(d.default_value);
    params_[d.name] = v;
    report_.parameters.emplace_back(d.name, v);
  }

  void operator()(const SpectrumDecl& d) {
    spectra_.emplace(d.name, SqueezingSpectrum(eval(d.vmin), eval(d.vmax), eval(d.fc)));
  }

  void operator()(const ModeDecl& d) {
    ModeId id;
    const double alpha = d.alpha ? eval(*d.alpha) : 0.0;
    switch (d.kind) {
      case ModeDecl::Kind::Vacuum: id = reg_.add_mode(Vacuum{}); break;
      case ModeDecl::Kind::Coherent: id = reg_.add_mode(Coherent<double>{alpha}); break;
      case ModeDecl::Kind::Squeezed:
        id = reg_.add_mode(Squeezed<double>{eval(*d.vplus), eval(*d.vminus), alpha});
        break;
      case ModeDecl::Kind::SpectrumSqueezed: {
        const auto& s = spectra_.at(d.spectrum);
        const double f = eval(*d.freq);
        id = reg_.add_mode(Squeezed<double>{s.vplus(f), s.vminus(f), alpha});
        break;
      }
    }
    modes_[d.name] = id;
  }

  void operator()(const RotateStmt& s) { reg_.apply_rotation(modes_.at(s.mode), eval(s.angle)); }

  void operator()(const BeamsplitterStmt& s) {
    reg_.apply_beamsplitter(modes_.at(s.a), modes_.at(s.b), eval(s.eta), s.phase ? eval(*s.phase) : 0.0);
  }

  void operator()(const LossStmt& s) { reg_.apply_loss(modes_.at(s.mode), eval(s.eta)); }

  void operator()(const BeamDecl& d) { beams_[d.name] = make_beam(reg_, modes_.at(d.h), modes_.at(d.v), eval(d.theta)); }

  void operator()(const MeasureStmt& m) {
    ReportEntry e{m.name(), m.kind, {}};
    auto mode = [&](int k) { return modes_.at(m.targets.at(k)); };
    auto beam = [&](int k) { return beams_.at(m.targets.at(k)); };
    switch (m.kind) {
      case MeasureStmt::Kind::Duan: e.value = named(duan_quadrature(reg_, mode(0), mode(1)), e.name); break;
      case MeasureStmt::Kind::EprQuad: e.value = named(epr_product_quadrature(reg_, mode(0), mode(1)), e.name); break;
      case MeasureStmt::Kind::Insep:
        e.value = named(stokes_inseparability(reg_, beam(0), beam(1), stokes_index(m.i), stokes_index(m.j)), e.name);
        break;
      case MeasureStmt::Kind::EprStokes:
        e.value = named(epr_product_stokes(reg_, beam(0), beam(1), stokes_index(m.i), stokes_index(m.j)), e.name);
        break;
      case MeasureStmt::Kind::StokesMeans: e.value = stokes_means(reg_, beam(0)); break;
      case MeasureStmt::Kind::Ellipse: e.value = conditional_ellipse(reg_, beam(0), beam(1), stokes_index(m.i)); break;
    }
    if (const auto* c = std::get_if<CriterionResult>(&e.value)) warn(*c);
    report_.entries.push_back(std::move(e));
  }

 private:
  double eval(const Expr& e) const { return eval_expr(e, params_); }

  static CriterionResult named(CriterionResult r, const std::string& name) {
    r.name = name;
    return r;
  }

  void warn(const CriterionResult& c) {
    if (c.zero_bound) report_.warnings.push_back(c.name + ": commutator vanishes, criterion cannot certify");
    if (c.correlation_term > 1e-9 * std::max(1.0, c.commutator))
      report_.warnings.push_back(c.name + ": nonzero correlation term " + std::to_string(c.correlation_term));
  }

  Report& report_;
  const ParamValues& overrides_;
  ParamValues params_;
  Register reg_;
  std::map<std::string, ModeId> modes_;
  std::map<std::string, PolBeam> beams_;
  std::map<std::string, SqueezingSpectrum> spectra_;
};

int line_of(const Statement& s) {
  return std::visit([](const auto& st) { return st.line.number; }, s);
}

}  // namespace

const ReportEntry* Report::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

const CriterionResult& Report::criterion(std::string_view name) const {
  const auto* e = find(name);
  if (!e || !std::holds_alternative<CriterionResult>(e->value))
    throw std::out_of_range("no criterion named '" + std::string(name) + "' in report");
  return std::get<CriterionResult>(e->value);
}

Report run(const ScenarioSpec& spec, const ParamValues& overrides) {
  for (const auto& [name, value] : overrides)
    if (!spec.has_param(name)) throw std::invalid_argument("override of undeclared parameter '" + name + "'");

  Report report;
  report.scenario = spec.name;
  Executor exec(report, overrides);
  for (const auto& s : spec.statements) {
    const int line = line_of(s);
    try {
      std::visit(exec, s);
    } catch (const PhysicsError& e) {
      if (e.line() > 0) throw;
      throw PhysicsError(e.what(), line);
    } catch (const std::domain_error& e) {
      throw PhysicsError(e.what(), line);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
  }
  return report;
}

SweepTable sweep(const ScenarioSpec& spec, const std::string& param, double from, double to, int steps,
                 const ParamValues& overrides) {
  if (steps < 2) throw std::invalid_argument("a sweep needs at least 2 steps");
  if (!spec.has_param(param)) throw std::invalid_argument("sweep over undeclared parameter '" + param + "'");
  if (!std::isfinite(from) || !std::isfinite(to)) throw std::invalid_argument("sweep range must be finite");
  if (from > to) std::swap(from, to);

  SweepTable table;
  table.param = param;
  table.values.resize(static_cast<std::size_t>(steps));
  table.rows.resize(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) table.values[k] = k + 1 == steps ? to : from + (to - from) * k / (steps - 1);

  const unsigned workers = std::clamp(std::thread::hardware_concurrency(), 1u, static_cast<unsigned>(steps));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = w; k < table.values.size(); k += workers) {
            ParamValues point = overrides;
            point[param] = table.values[k];
            table.rows[k] = run(spec, point);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return table;
}

}  // namespace cvpol
