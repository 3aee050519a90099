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

#include "cvpol/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cvpol {

namespace {

using Json = nlohmann::ordered_json;

std::string stokes_label(StokesIndex i) { return "S" + std::to_string(to_int(i)); }

// Rounded to 9 significant digits so JSON and CSV agree.
Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

const char* kind_name(MeasureStmt::Kind k) {
  switch (k) {
    case MeasureStmt::Kind::Duan: return "duan";
    case MeasureStmt::Kind::Insep: return "insep";
    case MeasureStmt::Kind::EprQuad: return "epr_quad";
    case MeasureStmt::Kind::EprStokes: return "epr_stokes";
    case MeasureStmt::Kind::StokesMeans: return "stokes_means";
    case MeasureStmt::Kind::Ellipse: return "ellipse";
  }
  return "?";
}

Json to_json(const ReportEntry& e) {
  Json j;
  j["kind"] = kind_name(e.kind);
  if (const auto* c = std::get_if<CriterionResult>(&e.value)) {
    j["value"] = number(c->value);
    j["bound"] = number(c->bound);
    j["commutator"] = number(c->commutator);
    j["signs"] = {to_string(c->signs[0]), to_string(c->signs[1])};
    j["gains"] = {number(c->gains[0]), number(c->gains[1])};
    j["correlation_term"] = number(c->correlation_term);
    j["certifies"] = c->certifies();
  } else if (const auto* m = std::get_if<StokesMeans>(&e.value)) {
    j["S0"] = number(m->s0);
    j["S1"] = number(m->s1);
    j["S2"] = number(m->s2);
    j["S3"] = number(m->s3);
  } else if (const auto* p = std::get_if<EllipsePoint>(&e.value)) {
    j["conditioned_on"] = stokes_label(p->conditioned_on);
    j["observables"] = {stokes_label(p->observables[0]), stokes_label(p->observables[1])};
    j["conditional"] = {number(p->conditional[0]), number(p->conditional[1])};
    j["unconditional"] = {number(p->unconditional[0]), number(p->unconditional[1])};
    j["coherent_variance"] = number(p->coherent_variance);
    j["dashed_bound"] = number(p->dashed_bound);
  }
  j["flags"] = flags(e);
  return j;
}

std::string parameter_field(const Report& r) {
  std::string s;
  for (const auto& [name, value] : r.parameters) {
    if (!s.empty()) s += ';';
    s += name + "=" + format_number(value);
  }
  return s;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += sep;
    s += p;
  }
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<FlatValue> flatten(const ReportEntry& e) {
  std::vector<FlatValue> out;
  if (const auto* c = std::get_if<CriterionResult>(&e.value)) {
    out.push_back({e.name, c->value});
  } else if (const auto* m = std::get_if<StokesMeans>(&e.value)) {
    out.push_back({e.name + ".S0", m->s0});
    out.push_back({e.name + ".S1", m->s1});
    out.push_back({e.name + ".S2", m->s2});
    out.push_back({e.name + ".S3", m->s3});
  } else if (const auto* p = std::get_if<EllipsePoint>(&e.value)) {
    for (int k = 0; k < 2; ++k) {
      out.push_back({e.name + ".conditional_" + stokes_label(p->observables[k]), p->normalized_conditional(k)});
      out.push_back({e.name + ".unconditional_" + stokes_label(p->observables[k]), p->normalized_unconditional(k)});
    }
    out.push_back({e.name + ".dashed_bound", p->normalized_dashed_bound()});
  }
  return out;
}

std::vector<std::string> flags(const ReportEntry& e) {
  std::vector<std::string> out;
  if (const auto* c = std::get_if<CriterionResult>(&e.value)) {
    if (c->zero_bound) out.push_back("zero_bound");
    if (c->correlation_term > 1e-9 * std::max(1.0, c->commutator)) out.push_back("correlation_term");
  }
  return out;
}

std::string report_json(const Report& r) {
  Json j;
  j["scenario"] = r.scenario;
  Json params = Json::object();
  for (const auto& [name, value] : r.parameters) params[name] = number(value);
  j["parameters"] = params;
  Json measurements = Json::object();
  for (const auto& e : r.entries) measurements[e.name] = to_json(e);
  j["measurements"] = measurements;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << kReportCsvHeader << '\n';
  const std::string params = parameter_field(r);
  for (const auto& e : r.entries) {
    const std::string f = join(flags(e), ';');
    const auto* c = std::get_if<CriterionResult>(&e.value);
    for (const auto& v : flatten(e)) {
      os << r.scenario << ',' << params << ',' << v.column << ',' << format_number(v.value) << ',';
      if (c)
        os << to_string(c->signs[0]) << '/' << to_string(c->signs[1]) << ',' << format_number(c->gains[0]) << '/'
           << format_number(c->gains[1]);
      else
        os << ',';
      os << ',' << f << '\n';
    }
  }
  return os.str();
}

std::string sweep_csv(const SweepTable& t) {
  std::ostringstream os;
  os << t.param;
  if (!t.rows.empty())
    for (const auto& e : t.rows.front().entries)
      for (const auto& v : flatten(e)) os << ',' << v.column;
  os << ",flags\n";
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    os << format_number(t.values[k]);
    std::vector<std::string> all_flags;
    for (const auto& e : t.rows[k].entries) {
      for (const auto& v : flatten(e)) os << ',' << format_number(v.value);
      for (const auto& f : flags(e)) all_flags.push_back(e.name + ":" + f);
    }
    os << ',' << join(all_flags, ';') << '\n';
  }
  return os.str();
}

std::string fig4_csv(const std::array<EllipsePoint, 3>& points) {
  std::ostringstream os;
  os << kFig4CsvHeader << '\n';
  for (const auto& p : points)
    for (int k = 0; k < 2; ++k)
      os << stokes_label(p.conditioned_on) << ',' << stokes_label(p.observables[k]) << ','
         << format_number(p.normalized_conditional(k)) << ',' << format_number(p.normalized_unconditional(k)) << ','
         << format_number(p.normalized_dashed_bound()) << '\n';
  return os.str();
}

}  // namespace cvpol
