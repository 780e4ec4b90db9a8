#include <CLI11.hpp>
#include <iostream>

#include "multfun/cli.hpp"

namespace {

void add_options(CLI::App& sub, multfun::RunConfig& c) {
  sub.add_option("--function", c.function, "catalog function name");
  sub.add_option("--xi", c.xi, "xi as a/b (exact) or a real");
  sub.add_option("--modulus", c.modulus, "character modulus, or chi_of_tau base b");
  sub.add_option("--index", c.index, "character index within characters_mod");
  sub.add_option("--file", c.file, "custom_file path");
  sub.add_option("--g", c.g, "second function: one | name | name:xi | dirichlet_character:q:i");
  sub.add_option("--N", c.N, "truncation");
  sub.add_option("--P", c.P, "prime cutoff");
  sub.add_option("--s", c.s, "Gowers order");
  sub.add_option("--qmax", c.q_max, "progression or spectrum modulus bound");
  sub.add_option("--umax", c.u_max, "largest u in divisibility reports");
  sub.add_option("--kmax", c.k_max, "largest k in concentration and (k, chi) searches");
  sub.add_option("--Qmax", c.Q_max, "largest character modulus searched");
  sub.add_option("--jmax", c.J_max, "number of sequence elements averaged");
  sub.add_option("--q", c.q, "progression modulus");
  sub.add_option("--r", c.r, "progression residue");
  sub.add_option("--period", c.period, "period of the periodic approximant");
  sub.add_option("--shift", c.shift, "shift r in E - r");
  sub.add_option("--grid", c.grid, "comma-separated N grid")->delimiter(',');
  sub.add_option("--tgrid", c.tgrid, "t grid lo:hi:count");
  sub.add_option("--t", c.t, "archimedean twist");
  sub.add_option("--tol", c.tol, "float-path tolerance for level sets");
  sub.add_option("--threshold", c.threshold, "spectrum threshold");
  sub.add_option("--p", c.prob, "keep probability for random relative subsets");
  sub.add_option("--alpha", c.alpha, "torus rotation angle");
  sub.add_option("--floor", c.floor, "positivity floor");
  sub.add_option("--seed", c.seed, "seed for randomized fixtures");
  sub.add_option("--z", c.z, "level-set target: 0, 1, -1, i, -i, a/b, real, or re,im");
  sub.add_option("--set", c.set, "named set");
  sub.add_option("--m", c.m, "finite system, e.g. 4 or 2x3");
  sub.add_option("--A", c.A, "set A: points '0;1' or arcs 'lo:hi;lo:hi'");
  sub.add_option("--poly", c.poly, "polynomials in n separated by ';'");
  sub.add_option("--observable", c.observable, "comma-separated observable values on the finite system");
  sub.add_flag("--concentration", c.concentration, "add a concentration analysis");
  sub.add_flag("--u3", c.u3, "also compute U^3 norms");
  sub.add_option("--out", c.out, "JSON report path (stdout when omitted)");
  sub.add_option("--csv", c.csv, "CSV table path");
  sub.add_option("--meta", c.meta, "metadata path for timestamps");
  sub.add_option("--bitmap", c.bitmap, "level-set bitmap path");
  sub.add_option("--text", c.text, "level-set text path");
  sub.add_option("--threads", c.threads, "worker cap (0 = hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  multfun::RunConfig cfg;
  CLI::App app{"Multiplicative functions, level sets and recurrence averages"};
  app.set_version_flag("--version", multfun::kVersion);
  app.require_subcommand(1);
  for (const auto& name : multfun::command_names()) {
    auto* sub = app.add_subcommand(name);
    add_options(*sub, cfg);
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
    std::cerr << multfun::diagnostic(cfg, "input", e.what(), 2).dump() << "\n";
    return 2;
  }
  return multfun::run(cfg);
}
