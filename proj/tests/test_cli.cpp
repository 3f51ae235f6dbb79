#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ulef/commands.hpp"
#include "ulef/error.hpp"
#include "ulef/io.hpp"
#include "ulef/selftest.hpp"

using namespace ulef;

namespace {

const std::filesystem::path kData = ULEF_TEST_DATA;

json data(const std::string& name) { return read_json(kData / name); }

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ulef_test_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

int run_cli(RunConfig cfg, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int rc = run(cfg, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return rc;
}

}  // namespace

TEST_CASE("validate reports exit codes and issue categories") {
  CHECK(cmd_validate(data("torus_complex.json"), {}).exit_code == 0);
  const auto flipped = cmd_validate(data("tetrahedron_flipped.json"), {});
  CHECK(flipped.exit_code == 1);
  int orientation = 0;
  for (const auto& i : flipped.report.at("issues").at("issues")) orientation += i.at("category") == "orientation";
  CHECK(orientation == 3);
  const auto missing = cmd_validate(data("tetrahedron_missing_edge.json"), {});
  CHECK(missing.exit_code == 1);
  CHECK(missing.report.at("issues").dump().find("simplicial-complex condition") != std::string::npos);
  CHECK(cmd_validate(json("genus-2"), {}).report.at("euler_characteristic") == -2);
}

TEST_CASE("map-analyze on the sine displacement") {
  const auto out = cmd_map_analyze(data("sine_map.json"), {});
  const json& r = out.report;
  CHECK(r.at("fixed_points").size() == 4);
  CHECK(r.at("lefschetz_class") == json({{"constant", 0}, {"finite", json::array()}}));
  CHECK(r.at("certificate").at("verdict") == "zero-by-boundary");
  CHECK(r.at("certificate").at("payload").at("chain").empty());
  CHECK(r.at("certificate").at("verifier_result").at("verified") == true);
  CHECK(r.at("oracle").at("equal") == true);
  CHECK(out.plots.count("coset_sums.svg") == 1);
}

TEST_CASE("map-analyze on index data") {
  const auto sum = cmd_map_analyze(data("connected_sum_index_data.json"), {}).report;
  CHECK(sum.at("lefschetz_class").at("constant") == 2);
  CHECK(sum.at("certificate").at("verdict") == "nonzero-by-mean");
  CHECK(sum.at("certificate").at("payload").at("limit") == "2");
  CHECK(sum.at("conclusions").dump().find("infinitely many fixed points") != std::string::npos);
  const auto free = cmd_map_analyze(data("free_group_index_data.json"), {}).report;
  CHECK(free.at("certificate").at("verdict") == "zero-by-truncated-flow");
  CHECK(free.at("conclusions").dump().find("nonamenable") != std::string::npos);
}

TEST_CASE("field-analyze reports") {
  const auto sine = cmd_field_analyze(data("sine_field.json"), {});
  CHECK(sine.exit_code == 0);
  CHECK(sine.report.at("euler_characteristic") == 0);
  CHECK(sine.report.at("verdict").get<std::string>().rfind("consistent", 0) == 0);
  const auto neg = cmd_field_analyze(data("sine_field_negated.json"), {});
  CHECK(neg.report.at("verdict") == sine.report.at("verdict"));
  CHECK(neg.report.at("index_class") == sine.report.at("index_class"));
  const auto sphere = cmd_field_analyze(data("sphere_field.json"), {}).report;
  CHECK(sphere.at("index_class").at("constant") == 2);
  CHECK(sphere.at("euler_characteristic") == 2);
  const auto g2 = cmd_field_analyze(data("genus2_index_data.json"), {}).report;
  CHECK(g2.at("difference") == json({{"constant", 0}, {"finite", json::array()}}));
  // Index data that contradicts chi over an amenable group is an input-model error.
  const json bad = {{"model", "index-data"}, {"group", {{"kind", "free-abelian"}, {"rank", 2}}}, {"constant", 1},
                    {"euler_characteristic", 0}};
  const auto flagged = cmd_field_analyze(bad, {});
  CHECK(flagged.exit_code == 1);
  CHECK(flagged.report.at("input_model_error") == true);
}

TEST_CASE("amenability tables") {
  RunConfig cfg;
  cfg.radius = 6;
  const auto z2 = cmd_amenability(data("z2.json"), cfg).report;
  const auto& folner = z2.at("folner");
  for (std::size_t i = 1; i < folner.size(); ++i)
    CHECK(parse_rational(folner[i].at("ratio")) < parse_rational(folner[i - 1].at("ratio")));
  const auto f2 = cmd_amenability(data("f2.json"), cfg).report;
  CHECK(!f2.contains("folner"));
  for (const auto& row : f2.at("isoperimetric")) CHECK(parse_rational(row.at("ratio")) >= Rational(1, 2));
  for (const auto& row : f2.at("flow_for_constant_one")) CHECK(row.at("feasible") == true);
  const auto fin = cmd_amenability(data("cyclic5.json"), cfg).report;
  CHECK(fin.at("folner").at(0).at("ratio") == "0");
}

TEST_CASE("decide-class on a dipole") {
  const auto r = cmd_decide_class(data("dipole_z2.json"), {}).report;
  CHECK(r.at("certificate").at("verdict") == "zero-by-boundary");
}

TEST_CASE("run writes reports and plots and maps errors to exit codes") {
  RunConfig cfg;
  cfg.command = "map-analyze";
  cfg.inputs = {kData / "sine_map.json"};
  cfg.out = scratch("plots");
  cfg.plots = true;
  CHECK(run_cli(cfg) == 0);
  std::ifstream svg(*cfg.out / "coset_sums.svg");
  std::string head;
  std::getline(svg, head);
  CHECK(head.rfind("<svg", 0) == 0);
  const std::string first = read_json(*cfg.out / "report.json").dump();
  CHECK(run_cli(cfg) == 0);
  CHECK(read_json(*cfg.out / "report.json").dump() == first);
  std::filesystem::remove_all(*cfg.out);

  RunConfig missing;
  missing.command = "validate";
  missing.inputs = {kData / "no_such_file.json"};
  std::string err;
  CHECK(run_cli(missing, nullptr, &err) == 1);
  CHECK(json::parse(err).at("error").at("kind") == "input");

  RunConfig deep;
  deep.command = "map-analyze";
  deep.inputs = {kData / "octahedron_rotation.json"};
  deep.subdivide = 4;
  CHECK(run_cli(deep, nullptr, &err) == 2);
  CHECK(json::parse(err).at("error").at("kind") == "resource");

  RunConfig plots_only;
  plots_only.command = "decide-class";
  plots_only.inputs = {kData / "dipole_z2.json"};
  plots_only.plots = true;
  CHECK(run_cli(plots_only) == 1);
}

TEST_CASE("selftest passes, catches a planted fault, and is seed-stable") {
  SelftestOptions o;
  o.trials = 5;
  const auto clean = run_selftest(o);
  for (const auto& p : clean) CHECK_MESSAGE(p.ok(), p.name);
  o.corrupt_orientation = true;
  const auto bad = run_selftest(o);
  bool caught = false;
  for (const auto& p : bad)
    if (p.name == "fundamental cycle is a cycle") {
      caught = !p.ok();
      CHECK(p.counterexample.at("fixture") == "tetrahedron");
      CHECK(!p.counterexample.at("boundary_of_mu").empty());
    } else {
      CHECK(p.ok());
    }
  CHECK(caught);
  o.corrupt_orientation = false;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    o.seed = seed;
    const auto a = selftest_to_json(o, run_selftest(o)), b = selftest_to_json(o, run_selftest(o));
    CHECK(a == b);
    CHECK(a.at("all_passed") == true);
  }
}
