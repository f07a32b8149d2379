#include <CLI11.hpp>

#include <iostream>

#include "crsegre/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact Segre-chain geometry and nondegeneracy classification"};
    app.require_subcommand(1);

    crsegre::RunConfig cfg;
    auto add_common = [&](CLI::App* sub, bool wants_name) {
        sub->add_option("-i,--input", cfg.inputs, "input file(s)")->required();
        if (wants_name) sub->add_option("name", cfg.names, "object name(s)")->required();
        sub->add_option("--order", cfg.order, "truncation order (default 8)");
        sub->add_option("--kappa-max", cfg.kappa_max, "solvability jet bound");
        sub->add_option("--gamma-bound", cfg.gamma_bound, "derivation bound");
        sub->add_option("--beta-bound", cfg.beta_bound, "theta derivation bound");
        sub->add_option("--k-max", cfg.k_max, "maximal chain length");
        sub->add_option("--nu-max", cfg.nu_max, "determination jet bound");
        sub->add_option("--family-size", cfg.family_size, "determination family size");
        sub->add_option("--seed", cfg.seed, "sampling seed");
    };

    for (const char* name :
         {"verify-manifold", "verify-map", "segre-type", "minimality", "classify-manifold",
          "classify-map", "reflect", "check-prop51", "propagate", "determine", "artin-check"}) {
        add_common(app.add_subcommand(name), true);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    crsegre::RunResult res = crsegre::run_command(cfg);
    std::cout << res.report;
    return res.exit_code;
}
