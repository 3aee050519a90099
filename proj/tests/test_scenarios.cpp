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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "cvpol/errors.hpp"
#include "cvpol/report_io.hpp"
#include "cvpol/scenario.hpp"
#include "cvpol/spectrum.hpp"

using namespace cvpol;

namespace {

ScenarioSpec builtin(std::string_view name) { return parse_scenario(*builtin_scenario(name), std::string(name)); }

ScenarioSpec from_disk(const char* name) {
  std::ifstream in(std::filesystem::path(CVPOL_SCENARIO_DIR) / name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), name);
}

std::string swap_lines(std::string text, const std::string& a, const std::string& b) {
  const auto pa = text.find(a), pb = text.find(b);
  REQUIRE(pa != std::string::npos);
  REQUIRE(pb != std::string::npos);
  const auto ea = text.find('\n', pa), eb = text.find('\n', pb);
  const std::string la = text.substr(pa, ea - pa), lb = text.substr(pb, eb - pb);
  text.replace(pb, lb.size(), la);
  text.replace(pa, la.size(), lb);
  return text;
}

}  // namespace

TEST_CASE("experiment scenario with defaults") {
  const Report r = run(builtin("paper.pol"));
  CHECK(r.scenario == "paper.pol");
  for (const char* key : {"duan", "epr_quad", "insep_S2S3", "epr_stokes", "insep_S1S2", "insep_S1S3"})
    CHECK(r.find(key) != nullptr);
  CHECK(r.criterion("duan").value == doctest::Approx(0.44).epsilon(1e-12));
  CHECK(std::abs(r.criterion("epr_quad").value - 0.58) < 0.005);
  CHECK(r.criterion("insep_S1S3").zero_bound);
  CHECK(r.criterion("insep_S1S2").value > 1.5);
  CHECK_THROWS_AS(r.criterion("stokes_means_bx"), std::out_of_range);
  CHECK_THROWS_AS(r.criterion("missing"), std::out_of_range);
  CHECK_FALSE(r.warnings.empty());

  // Entries appear in declaration order.
  std::vector<std::string> names;
  for (const auto& e : r.entries) names.push_back(e.name);
  CHECK(names == std::vector<std::string>{"duan", "epr_quad", "stokes_means_bx", "insep_S1S2", "insep_S1S3",
                                          "insep_S2S3", "epr_stokes"});
}

TEST_CASE("scenario file and programmatic builder agree") {
  const Report r = run(builtin("paper.pol"));
  const auto e = build_paper_experiment(PaperExperimentParams{.eta_interference = 1.0});
  CHECK(r.criterion("duan").value == doctest::Approx(e.duan.value).epsilon(1e-12));
  CHECK(r.criterion("epr_quad").value == doctest::Approx(e.epr_quad.value).epsilon(1e-12));
  const auto insep = stokes_inseparability(e.reg, e.beam_x, e.beam_y, StokesIndex::S2, StokesIndex::S3);
  CHECK(r.criterion("insep_S2S3").value == doctest::Approx(insep.value).epsilon(1e-12));
  const auto& m = std::get<StokesMeans>(r.find("stokes_means_bx")->value);
  CHECK(m.s0 == doctest::Approx(3100.0).epsilon(1e-12));
}

TEST_CASE("interference loss commutes with the entangler") {
  PaperExperimentParams after;
  PaperExperimentParams before;
  before.placement = InterferencePlacement::BeforeEntangler;
  const auto a = build_paper_experiment(after);
  const auto b = build_paper_experiment(before);
  CHECK(a.duan.value == doctest::Approx(b.duan.value).epsilon(1e-12));
  CHECK(a.epr_quad.value == doctest::Approx(b.epr_quad.value).epsilon(1e-12));
  CHECK(a.duan.value == doctest::Approx(0.978 * 0.44 + 0.022).epsilon(1e-12));
}

TEST_CASE("coherent baseline of the builder") {
  const auto e = build_paper_experiment(PaperExperimentParams{.vplus = 1.0, .vminus = 1.0});
  CHECK(std::abs(e.duan.value - 1.0) < 1e-12);
  CHECK(std::abs(e.epr_quad.value - 1.0) < 1e-12);
}

TEST_CASE("builder input validation") {
  CHECK_THROWS_AS(build_paper_experiment(PaperExperimentParams{.vplus = 0.1, .vminus = 2.0}), PhysicsError);
  CHECK_THROWS_AS(build_paper_experiment(PaperExperimentParams{.eta_pol = 1.2}), PhysicsError);
  CHECK_THROWS_AS(build_paper_experiment(PaperExperimentParams{.ratio = -1.0}), PhysicsError);
  CHECK_THROWS_AS(build_symmetric_scheme(10.0, 0.1, 1.0), PhysicsError);
  CHECK_THROWS_AS(build_symmetric_scheme(-1.0, 0.1, 10.0), PhysicsError);
  CHECK_THROWS_AS(build_symmetric_scheme(1.0, 0.1, 10.0, 0), std::invalid_argument);
}

TEST_CASE("bright vertical beam turns the Stokes criterion into the quadrature one") {
  double last_gap = 1.0;
  for (double ratio : {30.0, 300.0, 3000.0, 30000.0, 3e6}) {
    const auto e = build_paper_experiment(
        PaperExperimentParams{.eta_interference = 1.0, .eta_pol = 1.0, .ratio = ratio});
    const double insep = stokes_inseparability(e.reg, e.beam_x, e.beam_y, StokesIndex::S2, StokesIndex::S3).value;
    const double gap = std::abs(insep - e.duan.value);
    CHECK(gap < last_gap);
    last_gap = gap;
  }
  CHECK(last_gap < 1e-5);
}

TEST_CASE("symmetric scheme") {
  const Report r = run(builtin("symmetric.pol"));
  const double i12 = r.criterion("insep_S1S2").value;
  CHECK(std::abs(r.criterion("insep_S1S3").value - i12) < 1e-9);
  CHECK(std::abs(r.criterion("insep_S2S3").value - i12) < 1e-9);
  CHECK(i12 == doctest::Approx(std::sqrt(3.0) * 0.1).epsilon(1e-12));

  const double v = 1.0 / std::sqrt(3.0);
  const Report at_bound = run(builtin("symmetric.pol"), {{"vplus", v}});
  CHECK(at_bound.criterion("duan").value == doctest::Approx(v).epsilon(1e-12));
  for (const char* k : {"insep_S1S2", "insep_S1S3", "insep_S2S3"})
    CHECK(at_bound.criterion(k).value == doctest::Approx(1.0).epsilon(1e-12));
  const auto& m = std::get<StokesMeans>(r.find("stokes_means_bx")->value);
  CHECK(m.s1 == doctest::Approx(100.0));
  CHECK(m.s2 == doctest::Approx(100.0));
  CHECK(m.s3 == doctest::Approx(100.0));
}

TEST_CASE("exchanging the squeezer declarations changes nothing") {
  const std::string text(*builtin_scenario("symmetric.pol"));
  const Report a = run(parse_scenario(text));
  const Report b = run(parse_scenario(swap_lines(text, "mode hx", "mode hy")));
  const Report c = run(parse_scenario(swap_lines(text, "mode vx", "mode vy")));
  for (const auto& e : a.entries) {
    if (!std::holds_alternative<CriterionResult>(e.value)) continue;
    CHECK(std::abs(b.criterion(e.name).value - a.criterion(e.name).value) <= 1e-12);
    CHECK(std::abs(c.criterion(e.name).value - a.criterion(e.name).value) <= 1e-12);
  }
}

TEST_CASE("run errors") {
  CHECK_THROWS_AS(run(builtin("paper.pol"), {{"nope", 1.0}}), std::invalid_argument);

  try {
    run(parse_scenario("mode a vacuum\n\nmode b squeezed vplus=0.1 vminus=2\n"));
    FAIL("expected a physics error");
  } catch (const PhysicsError& e) {
    CHECK(e.line() == 3);
  }
  try {
    run(parse_scenario("param eta default=2\nmode a vacuum\nloss a eta=$eta\n"));
    FAIL("expected a physics error");
  } catch (const PhysicsError& e) {
    CHECK(e.line() == 3);
  }
  try {
    run(parse_scenario("mode h coherent alpha=1\nmode v coherent alpha=1\nrotate h angle=0.5\n"
                       "beam b h=h v=v theta=0\nmeasure stokes_means b\n"));
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
  }
}

TEST_CASE("empty measurement list") {
  const Report r = run(parse_scenario("param x default=1\nmode a coherent alpha=$x\n"));
  CHECK(r.entries.empty());
  CHECK(r.parameters.size() == 1);
}

TEST_CASE("determinism") {
  const auto spec = builtin("paper.pol");
  CHECK(report_json(run(spec)) == report_json(run(spec)));
  CHECK(report_csv(run(spec)) == report_csv(run(spec)));
}

TEST_CASE("sweep") {
  const auto spec = builtin("symmetric.pol");
  const auto t = sweep(spec, "vplus", 1.0, 0.1, 10);
  REQUIRE(t.rows.size() == 10);
  CHECK(t.values.front() == 0.1);
  CHECK(t.values.back() == 1.0);
  double last = 0.0;
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const double v = t.rows[k].criterion("insep_S2S3").value;
    CHECK(v > last);
    last = v;
    const Report single = run(spec, {{"vplus", t.values[k]}});
    CHECK(report_json(single) == report_json(t.rows[k]));
  }
  CHECK_THROWS_AS(sweep(spec, "vplus", 0.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sweep(spec, "nope", 0.1, 1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(sweep(spec, "vplus", -0.5, 0.5, 3), PhysicsError);
}

TEST_CASE("frequency sweep with a squeezing spectrum") {
  const auto spec = from_disk("paper_spectrum.pol");
  const auto t = sweep(spec, "f", 2.0, 10.0, 33);
  REQUIRE(t.rows.size() == 33);
  for (std::size_t k = 1; k < t.values.size(); ++k) CHECK(t.values[k] > t.values[k - 1]);
  // The Lorentzian squeezing degrades with frequency, so every criterion rises.
  for (std::size_t k = 1; k < t.rows.size(); ++k)
    CHECK(t.rows[k].criterion("duan").value > t.rows[k - 1].criterion("duan").value);
  const SqueezingSpectrum s(0.3, 4.0, 12.0);
  CHECK(t.rows.front().criterion("duan").value == doctest::Approx(s.vplus(2.0)).epsilon(1e-12));
}

TEST_CASE("squeezing spectrum") {
  const SqueezingSpectrum s(0.3, 4.0, 12.0);
  CHECK(s.vplus(0.0) == doctest::Approx(0.3));
  CHECK(s.vminus(0.0) == doctest::Approx(4.0));
  CHECK(s.vplus(12.0) == doctest::Approx(0.65));
  CHECK(s.vplus(1e6) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.vminus(1e6) == doctest::Approx(1.0).epsilon(1e-9));
  for (double f = 0.0; f < 100.0; f += 0.5) CHECK(s.vplus(f) * s.vminus(f) >= 1.0 - 1e-12);
  CHECK_THROWS_AS(SqueezingSpectrum(0.3, 2.0, 12.0), PhysicsError);
  CHECK_THROWS_AS(SqueezingSpectrum(0.3, 4.0, 0.0), PhysicsError);
}
