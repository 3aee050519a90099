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
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvpol/errors.hpp"
#include "cvpol/scenario.hpp"

namespace cvpol {

namespace {

enum class Symbol { Mode, Beam, Spectrum };

const char* symbol_name(Symbol s) {
  switch (s) {
    case Symbol::Mode: return "mode";
    case Symbol::Beam: return "beam";
    case Symbol::Spectrum: return "spectrum";
  }
  return "?";
}

const char* kind_keyword(MeasureStmt::Kind k) {
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

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

class LineParser {
 public:
  explicit LineParser(ScenarioSpec& spec) : spec_(spec) {}

  void parse_line(int line, std::string_view raw) {
    line_ = line;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    for (char c : raw)
      if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\r')
        fail("control character in input");
    fields_ = split_fields(raw);
    if (fields_.empty()) return;

    const std::string& kw = fields_[0];
    if (kw == "param")
      param();
    else if (kw == "spectrum")
      spectrum();
    else if (kw == "mode")
      mode();
    else if (kw == "rotate")
      rotate();
    else if (kw == "bs")
      beamsplitter();
    else if (kw == "loss")
      loss();
    else if (kw == "beam")
      beam();
    else if (kw == "measure")
      measure();
    else
      fail("unknown keyword '" + kw + "'");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  SourceLine here() const { return SourceLine{line_}; }

  // key=value arguments starting at fields_[first]. Every key must be in
  // `allowed`; duplicates are rejected.
  std::map<std::string, Expr> keyed(std::size_t first, std::initializer_list<const char*> allowed,
                                    std::map<std::string, std::string>* raw_out = nullptr) {
    std::map<std::string, Expr> out;
    for (std::size_t k = first; k < fields_.size(); ++k) {
      const std::string& f = fields_[k];
      const auto eq = f.find('=');
      if (eq == std::string::npos || eq == 0) fail("expected key=value, got '" + f + "'");
      const std::string key = f.substr(0, eq);
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        fail("unknown argument '" + key + "' for " + fields_[0]);
      if (out.count(key)) fail("argument '" + key + "' given twice");
      const std::string value = f.substr(eq + 1);
      if (raw_out) (*raw_out)[key] = value;
      if (raw_out && key == "spectrum") {
        out.emplace(key, Expr{});
        continue;
      }
      Expr e = parse_expr(value, line_);
      check_params(e);
      out.emplace(key, std::move(e));
    }
    return out;
  }

  Expr take(std::map<std::string, Expr>& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end()) fail(std::string("missing argument ") + key + "=");
    Expr e = std::move(it->second);
    args.erase(it);
    return e;
  }

  std::optional<Expr> take_optional(std::map<std::string, Expr>& args, const char* key) {
    auto it = args.find(key);
    if (it == args.end()) return std::nullopt;
    Expr e = std::move(it->second);
    args.erase(it);
    return e;
  }

  void check_params(const Expr& e) {
    std::vector<std::string> used;
    collect_params(e, used);
    for (const auto& p : used)
      if (!params_.count(p)) fail("undefined identifier $" + p);
  }

  void need_fields(std::size_t n, const char* usage) {
    if (fields_.size() < n) fail(std::string("usage: ") + usage);
  }

  std::string define(const std::string& name, Symbol s) {
    if (!valid_identifier(name)) fail("invalid name '" + name + "'");
    if (symbols_.count(name)) fail("duplicate definition of '" + name + "'");
    symbols_.emplace(name, s);
    return name;
  }

  std::string use(const std::string& name, Symbol s) {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) fail("undefined identifier '" + name + "'");
    if (it->second != s)
      fail("'" + name + "' is a " + symbol_name(it->second) + ", expected a " + symbol_name(s));
    return name;
  }

  void param() {
    need_fields(3, "param NAME default=EXPR");
    ParamDecl d;
    if (!valid_identifier(fields_[1])) fail("invalid parameter name '" + fields_[1] + "'");
    if (params_.count(fields_[1])) fail("duplicate definition of parameter '" + fields_[1] + "'");
    d.name = fields_[1];
    auto args = keyed(2, {"default"});
    d.default_value = take(args, "default");
    d.line = here();
    params_.insert(d.name);
    spec_.statements.emplace_back(std::move(d));
  }

  void spectrum() {
    need_fields(5, "spectrum NAME vmin=EXPR vmax=EXPR fc=EXPR");
    SpectrumDecl d;
    d.name = define(fields_[1], Symbol::Spectrum);
    auto args = keyed(2, {"vmin", "vmax", "fc"});
    d.vmin = take(args, "vmin");
    d.vmax = take(args, "vmax");
    d.fc = take(args, "fc");
    d.line = here();
    spec_.statements.emplace_back(std::move(d));
  }

  void mode() {
    need_fields(3, "mode NAME (vacuum | coherent alpha=EXPR | squeezed vplus=EXPR vminus=EXPR [alpha=EXPR])");
    ModeDecl d;
    const std::string name = fields_[1];
    const std::string& kind = fields_[2];
    if (kind == "vacuum") {
      if (fields_.size() > 3) fail("vacuum mode takes no arguments");
      d.kind = ModeDecl::Kind::Vacuum;
    } else if (kind == "coherent") {
      auto args = keyed(3, {"alpha"});
      d.kind = ModeDecl::Kind::Coherent;
      d.alpha = take(args, "alpha");
    } else if (kind == "squeezed") {
      std::map<std::string, std::string> raw;
      auto args = keyed(3, {"vplus", "vminus", "alpha", "spectrum", "freq"}, &raw);
      d.alpha = take_optional(args, "alpha");
      if (raw.count("spectrum")) {
        if (args.count("vplus") || args.count("vminus")) fail("give either vplus/vminus or spectrum/freq, not both");
        d.kind = ModeDecl::Kind::SpectrumSqueezed;
        d.spectrum = use(raw["spectrum"], Symbol::Spectrum);
        args.erase("spectrum");
        d.freq = take(args, "freq");
      } else {
        if (args.count("freq")) fail("freq= needs spectrum=");
        d.kind = ModeDecl::Kind::Squeezed;
        d.vplus = take(args, "vplus");
        d.vminus = take(args, "vminus");
      }
    } else {
      fail("unknown mode kind '" + kind + "'");
    }
    d.name = define(name, Symbol::Mode);
    d.line = here();
    spec_.statements.emplace_back(std::move(d));
  }

  void rotate() {
    need_fields(3, "rotate NAME angle=EXPR");
    RotateStmt s;
    s.mode = use(fields_[1], Symbol::Mode);
    auto args = keyed(2, {"angle"});
    s.angle = take(args, "angle");
    s.line = here();
    spec_.statements.emplace_back(std::move(s));
  }

  void beamsplitter() {
    need_fields(4, "bs NAME NAME eta=EXPR [phase=EXPR]");
    BeamsplitterStmt s;
    s.a = use(fields_[1], Symbol::Mode);
    s.b = use(fields_[2], Symbol::Mode);
    if (s.a == s.b) fail("identical modes in beamsplitter");
    auto args = keyed(3, {"eta", "phase"});
    s.eta = take(args, "eta");
    s.phase = take_optional(args, "phase");
    s.line = here();
    spec_.statements.emplace_back(std::move(s));
  }

  void loss() {
    need_fields(3, "loss NAME eta=EXPR");
    LossStmt s;
    s.mode = use(fields_[1], Symbol::Mode);
    auto args = keyed(2, {"eta"});
    s.eta = take(args, "eta");
    s.line = here();
    spec_.statements.emplace_back(std::move(s));
  }

  void beam() {
    need_fields(5, "beam NAME h=NAME v=NAME theta=EXPR");
    BeamDecl d;
    const std::string name = fields_[1];
    std::map<std::string, std::string> raw;
    for (std::size_t k = 2; k < fields_.size(); ++k) {
      const auto& f = fields_[k];
      const auto eq = f.find('=');
      if (eq == std::string::npos) fail("expected key=value, got '" + f + "'");
      const std::string key = f.substr(0, eq);
      if (key != "h" && key != "v" && key != "theta") fail("unknown argument '" + key + "' for beam");
      if (raw.count(key)) fail("argument '" + key + "' given twice");
      raw[key] = f.substr(eq + 1);
    }
    for (const char* key : {"h", "v", "theta"})
      if (!raw.count(key)) fail(std::string("missing argument ") + key + "=");
    d.h = use(raw["h"], Symbol::Mode);
    d.v = use(raw["v"], Symbol::Mode);
    if (d.h == d.v) fail("beam needs distinct h and v modes");
    d.theta = parse_expr(raw["theta"], line_);
    check_params(d.theta);
    d.name = define(name, Symbol::Beam);
    d.line = here();
    spec_.statements.emplace_back(std::move(d));
  }

  int stokes(const std::string& f) {
    if (f.size() != 2 || f[0] != 'S' || f[1] < '1' || f[1] > '3') fail("expected S1, S2 or S3, got '" + f + "'");
    return f[1] - '0';
  }

  void measure() {
    need_fields(2, "measure KIND ...");
    MeasureStmt m;
    m.line = here();
    std::vector<std::string> f(fields_.begin() + 1, fields_.end());
    if (f.size() >= 2 && f[f.size() - 2] == "as") {
      m.alias = f.back();
      if (!valid_identifier(m.alias)) fail("invalid measurement name '" + m.alias + "'");
      f.resize(f.size() - 2);
    }
    if (f.empty()) fail("usage: measure KIND ...");
    const std::string& kind = f[0];
    auto arity = [&](std::size_t n, const char* usage) {
      if (f.size() != n + 1) fail(std::string("usage: measure ") + usage);
    };
    auto two = [&](std::size_t at, Symbol s) {
      m.targets = {use(f[at], s), use(f[at + 1], s)};
      if (m.targets[0] == m.targets[1]) fail("measurement needs two distinct " + std::string(symbol_name(s)) + "s");
    };
    auto pair = [&] {
      m.i = stokes(f[1]);
      m.j = stokes(f[2]);
      if (m.i == m.j) fail("Stokes pair needs two different operators");
    };
    if (kind == "duan") {
      arity(2, "duan MODE MODE");
      m.kind = MeasureStmt::Kind::Duan;
      two(1, Symbol::Mode);
    } else if (kind == "epr_quad") {
      arity(2, "epr_quad MODE MODE");
      m.kind = MeasureStmt::Kind::EprQuad;
      two(1, Symbol::Mode);
    } else if (kind == "insep" || kind == "epr_stokes") {
      arity(4, kind == "insep" ? "insep S<i> S<j> BEAM BEAM" : "epr_stokes S<i> S<j> BEAM BEAM");
      m.kind = kind == "insep" ? MeasureStmt::Kind::Insep : MeasureStmt::Kind::EprStokes;
      pair();
      two(3, Symbol::Beam);
    } else if (kind == "stokes_means") {
      arity(1, "stokes_means BEAM");
      m.kind = MeasureStmt::Kind::StokesMeans;
      m.targets = {use(f[1], Symbol::Beam)};
    } else if (kind == "ellipse") {
      arity(3, "ellipse S<i> BEAM BEAM");
      m.kind = MeasureStmt::Kind::Ellipse;
      m.i = stokes(f[1]);
      two(2, Symbol::Beam);
    } else {
      fail("unknown measurement '" + kind + "'");
    }
    if (!measurement_names_.insert(m.name()).second)
      fail("duplicate measurement name '" + m.name() + "' (use 'as NAME')");
    spec_.statements.emplace_back(std::move(m));
  }

  ScenarioSpec& spec_;
  int line_ = 0;
  std::vector<std::string> fields_;
  std::map<std::string, Symbol> symbols_;
  std::set<std::string> params_;
  std::set<std::string> measurement_names_;
};

std::string arg(const char* key, const Expr& e) { return std::string(" ") + key + "=" + render_expr(e); }

struct Renderer {
  std::ostringstream& os;

  void operator()(const ParamDecl& d) { os << "param " << d.name << arg("default", d.default_value); }
  void operator()(const SpectrumDecl& d) {
    os << "spectrum " << d.name << arg("vmin", d.vmin) << arg("vmax", d.vmax) << arg("fc", d.fc);
  }
  void operator()(const ModeDecl& d) {
    os << "mode " << d.name;
    switch (d.kind) {
      case ModeDecl::Kind::Vacuum: os << " vacuum"; return;
      case ModeDecl::Kind::Coherent: os << " coherent" << arg("alpha", *d.alpha); return;
      case ModeDecl::Kind::Squeezed: os << " squeezed" << arg("vplus", *d.vplus) << arg("vminus", *d.vminus); break;
      case ModeDecl::Kind::SpectrumSqueezed: os << " squeezed spectrum=" << d.spectrum << arg("freq", *d.freq); break;
    }
    if (d.alpha) os << arg("alpha", *d.alpha);
  }
  void operator()(const RotateStmt& s) { os << "rotate " << s.mode << arg("angle", s.angle); }
  void operator()(const BeamsplitterStmt& s) {
    os << "bs " << s.a << " " << s.b << arg("eta", s.eta);
    if (s.phase) os << arg("phase", *s.phase);
  }
  void operator()(const LossStmt& s) { os << "loss " << s.mode << arg("eta", s.eta); }
  void operator()(const BeamDecl& d) {
    os << "beam " << d.name << " h=" << d.h << " v=" << d.v << arg("theta", d.theta);
  }
  void operator()(const MeasureStmt& m) {
    os << "measure " << kind_keyword(m.kind);
    if (m.i) os << " S" << m.i;
    if (m.j) os << " S" << m.j;
    for (const auto& t : m.targets) os << " " << t;
    if (!m.alias.empty()) os << " as " << m.alias;
  }
};

}  // namespace

std::string MeasureStmt::name() const {
  if (!alias.empty()) return alias;
  std::string n = kind_keyword(kind);
  switch (kind) {
    case Kind::Insep:
    case Kind::EprStokes: return n + "_S" + std::to_string(i) + "S" + std::to_string(j);
    case Kind::StokesMeans: return n + "_" + targets.at(0);
    case Kind::Ellipse: return n + "_S" + std::to_string(i);
    default: return n;
  }
}

std::vector<const ParamDecl*> ScenarioSpec::params() const {
  std::vector<const ParamDecl*> out;
  for (const auto& s : statements)
    if (auto* p = std::get_if<ParamDecl>(&s)) out.push_back(p);
  return out;
}

std::vector<const MeasureStmt*> ScenarioSpec::measurements() const {
  std::vector<const MeasureStmt*> out;
  for (const auto& s : statements)
    if (auto* m = std::get_if<MeasureStmt>(&s)) out.push_back(m);
  return out;
}

bool ScenarioSpec::has_param(std::string_view name) const {
  for (const auto* p : params())
    if (p->name == name) return true;
  return false;
}

ScenarioSpec parse_scenario(std::string_view text, std::string name) {
  ScenarioSpec spec;
  spec.name = std::move(name);
  LineParser parser(spec);
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line;
    parser.parse_line(line, text.substr(pos, end - pos));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return spec;
}

std::string render_scenario(const ScenarioSpec& spec) {
  std::ostringstream os;
  for (const auto& s : spec.statements) {
    std::visit(Renderer{os}, s);
    os << '\n';
  }
  return os.str();
}

}  // namespace cvpol
