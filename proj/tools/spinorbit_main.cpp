#include <CLI11.hpp>
#include <iostream>

#include "spinorbit/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symbolic search for second-order integrals of motion of "
               "planar spin-orbit hamiltonians"};
  app.require_subcommand(1);
  spinorbit::Command cmd;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cmd.format, "text or structured")
        ->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--output", cmd.output, "write the report to a file");
  };

  auto* derive = app.add_subcommand("derive-detsys",
                                    "derive the determining equations");
  derive->add_option("--system", cmd.system,
                     "generic, rotational, x-profile or oscillator");
  derive->add_option("--order", cmd.order, "ansatz order (1 or 2)")
      ->check(CLI::Range(1, 2));
  derive->add_option("--fixture", cmd.fixture, "fixture file to compare");
  add_common(derive);

  auto* check = app.add_subcommand("check-integral",
                                   "test [H, X] = 0 for an operator");
  check->add_option("--system", cmd.system, "hamiltonian kind");
  check->add_option("--integral", cmd.integral, "operator text")->required();
  add_common(check);

  auto* euler = app.add_subcommand("solve-euler",
                                   "solve a named equidimensional equation");
  euler->add_option("--ode", cmd.ode,
                    "simultaneous1, simultaneous2, exception or reduced")
      ->required();
  add_common(euler);

  auto* gauge = app.add_subcommand("gauge-normalize",
                                   "annul the removable part of V1");
  gauge->add_option("--v1", cmd.v1, "interaction potential expression")
      ->required();
  add_common(gauge);

  auto* lie = app.add_subcommand("lie-table",
                                 "commutator table of the symmetry algebra");
  add_common(lie);

  auto* num = app.add_subcommand("numeric-check",
                                 "floating-point verification suite");
  add_common(num);

  auto* thm = app.add_subcommand("theorem1",
                                 "run the full case-tree verification");
  thm->add_option("--system", cmd.system, "rotational or x-profile");
  thm->add_option("--fixture-dir", cmd.fixture_dir,
                  "directory with the transcribed equation fixtures");
  add_common(thm);

  CLI11_PARSE(app, argc, argv);
  for (auto* sub : {derive, check, euler, gauge, lie, num, thm})
    if (sub->parsed()) cmd.subcommand = sub->get_name();

  spinorbit::RunResult result = spinorbit::run(cmd);
  std::cout << result.rendered;
  return result.exit_code;
}
