#include "troplef/commands.hpp"

#include <fstream>
#include <sstream>

namespace troplef {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string cell_census(const Complex& k) {
    std::ostringstream os;
    os << k.num_cells() << " cells (";
    for (int d = 0; d <= k.dim(); ++d) os << (d ? ", " : "") << k.cells_of_dim(d).size() << " of dim " << d;
    os << ")";
    return os.str();
}

ordered_json census_json(const Complex& k) {
    ordered_json by_dim = ordered_json::array();
    for (int d = 0; d <= k.dim(); ++d) by_dim.push_back(int(k.cells_of_dim(d).size()));
    return ordered_json{{"cells", k.num_cells()}, {"by_dim", by_dim}};
}

// the requested chain complex: the constant cosheaf, a cosheaf file, or a
// tropical family member
DihomCosheaf select_dihom_cosheaf(const ParsedInput& in, const std::string& cosheaf, int p,
                                  const CoeffRing& ring) {
    if (cosheaf == "constant") {
        Cosheaf c = constant_cosheaf(in.k(), 1);
        return tensor_ring(dihom_subdivide(c, in.k()), ring);
    }
    if (cosheaf == "f0" || cosheaf == "f1") {
        if (!in.tropical) throw Error("ValidationError", "tropical cosheaves need a polytope section");
        if (cosheaf == "f0") return tensor_ring(f0_cosheaf(in.setup, p), ring);
        return tensor_ring(f1_cosheaf(in.setup, p).f1, ring);
    }
    throw Error("ParseError", "unknown cosheaf '" + cosheaf + "' (expected constant, f0 or f1)");
}

}  // namespace

CmdResult cmd_validate(const std::string& input, const CmdOptions& opt) {
    ParsedInput in = load_input(input, opt.strict);
    CmdResult r;
    std::ostringstream os;
    os << "valid " << (in.k().polyhedral ? "polyhedral" : "cw") << " complex: " << cell_census(in.k()) << "\n";
    r.report.data["mode"] = in.k().polyhedral ? "polyhedral" : "cw";
    r.report.data["complex"] = census_json(in.k());
    if (in.tropical) {
        os << "tropical setup: polytope with " << in.setup.p.num_cells() << " faces, carriers assigned\n";
        r.report.data["polytope"] = census_json(in.setup.p);
    }
    r.report.data["valid"] = true;
    r.report.text = os.str();
    return r;
}

CmdResult cmd_subdivide(const std::string& input, const std::string& mode, const CmdOptions& opt) {
    ParsedInput in = load_input(input, opt.strict);
    CmdResult r;
    if (mode == "barycentric") {
        ParsedInput out;
        out.complex = barycentric_subdivision(in.k());
        r.report.data = emit_complex(out);
        std::ostringstream os;
        os << "barycentric subdivision: " << cell_census(out.complex) << "\n";
        r.report.text = os.str();
        return r;
    }
    if (mode != "dihomologic") throw Error("ParseError", "mode must be barycentric or dihomologic");
    auto ix = dihom_index(in.k());
    ordered_json cells = ordered_json::array();
    for (const auto& c : ix.cells)
        cells.push_back(ordered_json{{"lo", c.lo},
                                     {"hi", c.hi},
                                     {"dim", in.k().cells[c.hi].dim - in.k().cells[c.lo].dim}});
    ordered_json faces = ordered_json::array();
    for (size_t i = 0; i < ix.cells.size(); ++i)
        for (const auto& [f, coeff] : dihom_faces(in.k(), ix.cells[i]))
            faces.push_back(ordered_json::array({int(i), ix.at(f.lo, f.hi), coeff}));
    r.report.data["pseudo_cells"] = cells;
    r.report.data["faces"] = faces;
    std::map<int, int> per_dim;
    for (const auto& c : ix.cells) per_dim[in.k().cells[c.hi].dim - in.k().cells[c.lo].dim] += 1;
    std::ostringstream os;
    os << "dihomologic pseudo-subdivision: " << ix.cells.size() << " pseudo-cells (";
    for (auto it = per_dim.begin(); it != per_dim.end(); ++it)
        os << (it == per_dim.begin() ? "" : ", ") << it->second << " of dim " << it->first;
    os << ")\n";
    r.report.text = os.str();
    return r;
}

CmdResult cmd_homology(const std::string& input, const std::string& cosheaf, const CmdOptions& opt) {
    ParsedInput in = load_input(input, opt.strict);
    HomologyResult h;
    if (cosheaf == "constant") {
        Cosheaf c = tensor_ring(constant_cosheaf(in.k(), 1), opt.ring);
        h = homology(chain_complex(in.k(), c));
    } else {
        std::ifstream f(cosheaf);
        if (!f) throw Error("ParseError", "cannot open cosheaf file '" + cosheaf + "'");
        json j;
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw Error("ParseError", std::string("invalid JSON: ") + e.what());
        }
        Cosheaf c = tensor_ring(parse_cosheaf_json(j, in.k()), opt.ring);
        h = homology(chain_complex(in.k(), c));
    }
    CmdResult r;
    r.report.data["coeff"] = opt.ring.str();
    r.report.data["homology"] = homology_json(h);
    std::ostringstream os;
    os << "homology over " << opt.ring.str() << "\n";
    for (int k = 0; k <= h.top(); ++k) os << "  H_" << k << " = " << group_text(h.group(k), opt.ring) << "\n";
    r.report.text = os.str();
    return r;
}

CmdResult cmd_tropical_invariants(const std::string& input, const CmdOptions& opt) {
    ParsedInput in = load_input(input, opt.strict);
    if (!in.tropical) throw Error("ValidationError", "tropical invariants need a polytope section");
    CmdResult r;
    bool simple = validate_simple(in.setup.p);
    r.report.data["simple"] = simple;
    std::ostringstream os;
    Int theta = theta_complex(in.setup.k);
    r.report.data["theta"] = theta.get_str();
    if (simple) {
        Int delta = delta_invariant(in.setup.p);
        r.report.data["delta"] = delta.get_str();
        os << "delta(P) = " << delta << "\n";
    } else {
        r.report.data["delta"] = nullptr;
        os << "delta(P) undefined: the polytope is not simple\n";
    }
    os << "theta(K) = " << theta << "\n";
    r.report.text = os.str();
    return r;
}

CmdResult cmd_tropical_hodge(const std::string& input, const CmdOptions& opt) {
    ParsedInput in = load_input(input, opt.strict);
    if (!in.tropical) throw Error("ValidationError", "hodge diamonds need a polytope section");
    HodgeDiamond x = hodge_diamond(in.setup, 'X', opt.ring, opt.threads);
    HodgeDiamond y = hodge_diamond(in.setup, 'Y', opt.ring, opt.threads);
    CmdResult r;
    r.report.data["coeff"] = opt.ring.str();
    r.report.data["X"] = diamond_json(x);
    r.report.data["Y"] = diamond_json(y);
    r.report.text = diamond_text(x) + diamond_text(y);
    return r;
}

CmdResult cmd_tropical_dual(const std::string& input, const std::string& lifts, const CmdOptions& opt) {
    std::ifstream f(input);
    if (!f) throw Error("ParseError", "cannot open '" + input + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw Error("ParseError", std::string("invalid JSON: ") + e.what());
    }
    DualInput d = parse_dual_json(j);
    if (!lifts.empty()) {
        d.lifts.clear();
        std::stringstream ss(lifts);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok == "x" || tok == "-inf") d.lifts.push_back(std::nullopt);
            else d.lifts.push_back(parse_rational(tok));
        }
    }
    if (d.lifts.size() != d.points.size())
        throw Error("ParseError", "need one lift per point (use x or -inf to drop a point)");
    TropicalSetup s = regular_subdivision(d.n, d.points, d.lifts, opt.min_convention);
    ParsedInput out;
    out.tropical = true;
    out.setup = std::move(s);
    CmdResult r;
    r.report.data = emit_complex(out);
    std::ostringstream os;
    os << "dual subdivision: " << cell_census(out.setup.k) << "\n";
    r.report.text = os.str();
    return r;
}

CmdResult cmd_verify_pl(const std::string& input, const std::string& cosheaf, int p, const CmdOptions& opt) {
    ParsedInput in = load_input(input, opt.strict);
    DihomCosheaf f = select_dihom_cosheaf(in, cosheaf, p, opt.ring);
    PlReport rep = pl_verify(in.k(), f, opt.threads);
    CmdResult r;
    r.report.data = pl_json(rep);
    r.report.data["cosheaf"] = cosheaf;
    r.report.data["coeff"] = opt.ring.str();
    std::ostringstream os;
    os << "duality check over " << opt.ring.str() << " (n = " << rep.n << ")\n";
    for (size_t k = 0; k < rep.h_total.size(); ++k)
        os << "  H_" << k << " = " << group_text(rep.h_total[k], opt.ring) << "  vs  H^"
           << (rep.n - int(k)) << "_c = " << group_text(rep.h_dual[k], opt.ring) << "  "
           << (rep.equal[k] ? "equal" : "DIFFER") << "\n";
    os << (rep.all_equal() ? "all degrees equal\n" : "MISMATCH\n");
    r.report.text = os.str();
    if (!rep.all_equal()) r.exit_code = 1;
    return r;
}

CmdResult cmd_lefschetz(const std::string& input, const CmdOptions& opt) {
    ParsedInput in = load_input(input, opt.strict);
    if (!in.tropical) throw Error("ValidationError", "the Lefschetz analysis needs a polytope section");
    LefschetzReport rep = lefschetz_analysis(in.setup, opt.ring, opt.threads);
    CmdResult r;
    r.report.data = lefschetz_json(rep);
    std::ostringstream os;
    os << "hyperplane-section maps over " << opt.ring.str() << " (n = " << rep.n << ")\n";
    for (const auto& e : rep.entries) {
        if (e.x_group.trivial() && e.y_group.trivial()) continue;
        os << "  i_{" << e.p << "," << e.q << "}: " << group_text(e.x_group, opt.ring) << " -> "
           << group_text(e.y_group, opt.ring) << "  [" << e.cls();
        if (!e.cokernel.trivial()) os << ", cokernel " << group_text(e.cokernel, opt.ring);
        if (!e.kernel.trivial()) os << ", kernel " << group_text(e.kernel, opt.ring);
        os << "]\n";
    }
    os << "verdict: " << (rep.compliant ? "compliant" : "not compliant")
       << " (isomorphism below n-1, surjective at n-1)\n";
    r.report.text = os.str();
    if (opt.assert_theorem && !rep.compliant) r.exit_code = 1;
    return r;
}

}  // namespace troplef
