#include "troplef/report.hpp"

#include <sstream>

namespace troplef {

using nlohmann::ordered_json;

ordered_json group_json(const GroupStructure& g) {
    ordered_json t = ordered_json::array();
    for (const auto& d : g.torsion) t.push_back(d.get_str());
    return ordered_json{{"rank", g.free_rank}, {"torsion", t}};
}

std::string group_text(const GroupStructure& g, const CoeffRing& ring) {
    if (ring.tag == CoeffRing::INT) return g.str();
    if (g.free_rank == 0) return "0";
    std::string s = ring.str();
    if (g.free_rank > 1) s += "^" + std::to_string(g.free_rank);
    return s;
}

ordered_json homology_json(const HomologyResult& h) {
    ordered_json out = ordered_json::array();
    for (int k = 0; k <= h.top(); ++k) out.push_back(group_json(h.group(k)));
    return out;
}

ordered_json diamond_json(const HodgeDiamond& d) {
    ordered_json rows = ordered_json::array();
    for (int p = 0; p <= d.n; ++p) {
        ordered_json row = ordered_json::array();
        for (int q = 0; q <= d.n; ++q) row.push_back(group_json(d.at(p, q)));
        rows.push_back(row);
    }
    return ordered_json{{"which", std::string(1, d.which)}, {"coeff", d.ring.str()}, {"entries", rows}};
}

std::string diamond_text(const HodgeDiamond& d) {
    std::ostringstream os;
    os << (d.which == 'Y' ? "toric variety Y" : "hypersurface X") << " over " << d.ring.str() << "\n";
    size_t width = 3;
    for (int p = 0; p <= d.n; ++p)
        for (int q = 0; q <= d.n; ++q) width = std::max(width, group_text(d.at(p, q), d.ring).size());
    for (int p = d.n; p >= 0; --p) {
        os << "  p=" << p << " |";
        for (int q = 0; q <= d.n; ++q) {
            std::string s = group_text(d.at(p, q), d.ring);
            os << " " << s << std::string(width - s.size() + 1, ' ');
        }
        os << "\n";
    }
    os << "       ";
    for (int q = 0; q <= d.n; ++q) {
        std::string label = " q=" + std::to_string(q);
        os << label << std::string(width + 2 - label.size(), ' ');
    }
    os << "\n";
    return os.str();
}

ordered_json lefschetz_json(const LefschetzReport& r) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : r.entries)
        entries.push_back(ordered_json{{"p", e.p},
                                       {"q", e.q},
                                       {"x", group_json(e.x_group)},
                                       {"y", group_json(e.y_group)},
                                       {"kernel", group_json(e.kernel)},
                                       {"cokernel", group_json(e.cokernel)},
                                       {"class", e.cls()}});
    return ordered_json{{"n", r.n}, {"coeff", r.ring.str()}, {"compliant", r.compliant}, {"maps", entries}};
}

ordered_json pl_json(const PlReport& r) {
    ordered_json deg = ordered_json::array();
    for (size_t k = 0; k < r.h_total.size(); ++k)
        deg.push_back(ordered_json{{"k", int(k)},
                                   {"homology", group_json(r.h_total[k])},
                                   {"dual_cohomology", group_json(r.h_dual[k])},
                                   {"equal", bool(r.equal[k])}});
    return ordered_json{{"n", r.n},
                        {"degrees", deg},
                        {"vanishing_above_n", r.vanishing_above_n},
                        {"all_equal", r.all_equal()}};
}

}  // namespace troplef
