#include <CLI11.hpp>
#include <iostream>

#include "troplef/commands.hpp"

using namespace troplef;

int main(int argc, char** argv) {
    CLI::App app{"exact cellular and dihomologic cosheaf homology on CW and polyhedral complexes"};
    app.require_subcommand(1);

    CmdOptions opt;
    std::string input, coeff = "Z", mode, cosheaf = "constant", lifts;
    int p = 1;

    auto add_common = [&](CLI::App* c, bool with_input = true) {
        if (with_input) c->add_option("input", input, "complex file or fixture:<name>")->required();
        c->add_flag("--json", opt.json, "canonical JSON output");
        c->add_flag("--strict", opt.strict, "verify pairwise cell intersections");
        c->add_option("--threads", opt.threads, "worker threads for independent jobs");
    };
    auto add_coeff = [&](CLI::App* c) { c->add_option("--coeff", coeff, "coefficients: Z, Q or F<p>"); };

    CLI::App* validate = app.add_subcommand("validate", "validate a complex file");
    add_common(validate);

    CLI::App* subdivide = app.add_subcommand("subdivide", "barycentric or dihomologic subdivision");
    add_common(subdivide);
    subdivide->add_option("--mode", mode, "barycentric|dihomologic")->required();

    CLI::App* hom = app.add_subcommand("homology", "cellular homology with cosheaf coefficients");
    add_common(hom);
    add_coeff(hom);
    hom->add_option("--cosheaf", cosheaf, "constant or a cosheaf JSON file");

    CLI::App* tropical = app.add_subcommand("tropical", "tropical Hodge theory");
    tropical->require_subcommand(1);
    CLI::App* invariants = tropical->add_subcommand("invariants", "delta(P) and theta(K)");
    add_common(invariants);
    CLI::App* hodge = tropical->add_subcommand("hodge", "Hodge diamonds of X and Y");
    add_common(hodge);
    add_coeff(hodge);
    CLI::App* dual = tropical->add_subcommand("dual", "subdivision dual to a tropical polynomial");
    add_common(dual);
    dual->add_option("--lift", lifts, "comma separated coefficients (x or -inf drops a point)");
    dual->add_flag("--min-convention", opt.min_convention, "use the lower hull");

    CLI::App* verify = app.add_subcommand("verify", "constructive verifications");
    verify->require_subcommand(1);
    CLI::App* pl = verify->add_subcommand("pl", "duality between homology and dual cochains");
    add_common(pl);
    add_coeff(pl);
    pl->add_option("--cosheaf", cosheaf, "constant, f0 or f1");
    pl->add_option("--p", p, "wedge degree for f0/f1");

    CLI::App* lef = app.add_subcommand("lefschetz", "hyperplane-section map classification");
    add_common(lef);
    add_coeff(lef);
    lef->add_flag("--assert-theorem", opt.assert_theorem, "exit 1 when the verdict is not compliant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        opt.ring = parse_coeff_ring(coeff);
        CmdResult r;
        if (*validate) r = cmd_validate(input, opt);
        else if (*subdivide) r = cmd_subdivide(input, mode, opt);
        else if (*hom) r = cmd_homology(input, cosheaf, opt);
        else if (*invariants) r = cmd_tropical_invariants(input, opt);
        else if (*hodge) r = cmd_tropical_hodge(input, opt);
        else if (*dual) r = cmd_tropical_dual(input, lifts, opt);
        else if (*pl) r = cmd_verify_pl(input, cosheaf, p, opt);
        else r = cmd_lefschetz(input, opt);
        std::cout << r.output(opt.json);
        return r.exit_code;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
