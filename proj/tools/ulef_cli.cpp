#include <iostream>

#include <CLI11.hpp>

#include "ulef/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Lefschetz and index classes on periodic complexes"};
  app.require_subcommand(1);
  ulef::RunConfig cfg;

  auto common = [&](CLI::App* sub, bool takes_input) {
    if (takes_input) sub->add_option("input", cfg.inputs, "JSON document")->required()->check(CLI::ExistingFile);
    sub->add_option("--radius", cfg.radius, "largest region radius for certificates and probes");
    sub->add_option("--capacity", cfg.capacity, "uniform edge capacity for flow certificates");
    sub->add_option("--out", cfg.out, "directory for report.json and plots");
    sub->add_flag("--plots", cfg.plots, "write SVG plots next to the report");
  };
  auto analysis = [&](CLI::App* sub) {
    sub->add_option("--subdivide", cfg.subdivide, "barycentric subdivisions of the domain")->check(CLI::Range(0, 3));
    sub->add_option("--grid", cfg.grid, "Newton starts per unit length for analytic models")->check(CLI::PositiveNumber);
  };

  common(app.add_subcommand("validate", "check a quotient complex document"), true);
  auto* map = app.add_subcommand("map-analyze", "fixed points, Lefschetz class and its certificate");
  common(map, true);
  analysis(map);
  auto* field = app.add_subcommand("field-analyze", "zeros, index class and the Poincare-Hopf comparison");
  common(field, true);
  analysis(field);
  common(app.add_subcommand("amenability", "isoperimetric, Folner and flow tables for a group"), true);
  common(app.add_subcommand("decide-class", "decide whether a class function vanishes in the coinvariants"), true);
  auto* self = app.add_subcommand("selftest", "seeded property suite");
  common(self, false);
  self->add_option("--seed", cfg.seed, "seed for the random instances");
  self->add_flag("--corrupt-orientation", cfg.corrupt_orientation, "plant a flipped simplex in one fixture");

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  return ulef::run(cfg, std::cout, std::cerr);
}
