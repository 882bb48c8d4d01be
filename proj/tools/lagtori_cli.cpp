#include <iostream>

#include "CLI11.hpp"
#include "lagtori/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lagtori: perturbations that destroy Lagrangian tori of twist maps"};
  app.require_subcommand(1);

  lagtori::RunConfig cfg;
  int n = 0;
  std::vector<int> n_list;
  int d = 0;
  std::string out;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--d", d, "dimension of the torus");
    sub->add_option("--n", n, "family parameter");
    sub->add_option("--n-list", n_list, "comma-separated family parameters")->delimiter(',');
    sub->add_option("--eps", cfg.eps, "epsilon (toy: delta of the C^(1-delta) bound)");
    sub->add_option("--sigma", cfg.sigma, "approximation tolerance");
    sub->add_option("--res", cfg.resolution, "per-axis grid resolution (power of two)");
    sub->add_option("--out", out, "output file (construct: output directory)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", cfg.seed, "seed recorded with the run");
  };
  auto* toy = app.add_subcommand("toy", "one-dimensional toy model: extrema, criterion, norm decay");
  auto* construct = app.add_subcommand("construct", "build T~_n, p~_N, Psi~_n and evaluate the criterion");
  auto* sweep = app.add_subcommand("sweep", "scaling sweep over n with fitted slopes");
  auto* graph = app.add_subcommand("graphsearch", "numerical search for invariant graphs of the toy map");
  for (auto* s : {toy, construct, sweep, graph}) add_common(s);
  graph->add_option("--omegas", cfg.omegas, "number of rotation numbers tried");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lagtori::kExitUsage;
  }

  auto* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  const bool one_dim = cfg.command == "toy" || cfg.command == "graphsearch";
  cfg.d = d != 0 ? d : (one_dim ? 1 : 2);
  if (sub->count("--n") > 0) cfg.n_list.push_back(n);
  cfg.n_list.insert(cfg.n_list.end(), n_list.begin(), n_list.end());
  if (cfg.command == "graphsearch" && cfg.n_list.empty()) cfg.n_list.push_back(1);
  cfg.out = out;
  return lagtori::run(cfg, std::cout, std::cerr);
}
