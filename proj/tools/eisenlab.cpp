#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "eisenlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Eisenstein series and equidistribution experiments on Schottky surfaces"};
  app.require_subcommand(1, 1);
  eisenlab::CliRequest req;
  const std::map<std::string, std::string> about = {
      {"validate", "check the group, xi and bump support; report systole and delta"},
      {"delta", "critical exponent by orbit counting and by Poincare series bisection"},
      {"count", "orbit counts N(T) of o"},
      {"geodesics", "primitive and nonprimitive closed geodesics up to a length"},
      {"eisenstein", "Eisenstein series values with certified tail bounds"},
      {"equidist", "pointwise equidistribution scan D(t) at a fixed xi"},
      {"average", "boundary-averaged equidistribution scan with the trivial-group control"},
      {"trace", "spectral side against identity and closed geodesic terms"}};
  for (const auto& name : eisenlab::subcommands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("--config", req.config_path, "config file")->required();
    sub->add_option("--out", req.out_dir, "output directory");
    sub->add_option("--threads", req.threads, "worker threads")->check(CLI::NonNegativeNumber);
    sub->callback([&req, name] { req.subcommand = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    // Usage errors count as configuration errors.
    app.exit(e);
    return 2;
  }
  return eisenlab::run_subcommand(req, std::cout, std::cerr);
}
