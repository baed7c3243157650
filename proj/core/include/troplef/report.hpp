#pragma once

#include <json.hpp>
#include <string>

#include "troplef/homology.hpp"
#include "troplef/tropical.hpp"

namespace troplef {

/// Structured command output: canonical JSON plus an aligned text rendering.
struct Report {
    nlohmann::ordered_json data;
    std::string text;

    std::string json_text() const { return data.dump(2) + "\n"; }
};

nlohmann::ordered_json group_json(const GroupStructure& g);

/// Ring-aware display: free modules print as Z^r, Q^r or F<p>^r.
std::string group_text(const GroupStructure& g, const CoeffRing& ring);
nlohmann::ordered_json homology_json(const HomologyResult& h);
nlohmann::ordered_json diamond_json(const HodgeDiamond& d);
nlohmann::ordered_json lefschetz_json(const LefschetzReport& r);
nlohmann::ordered_json pl_json(const PlReport& r);

std::string diamond_text(const HodgeDiamond& d);

}  // namespace troplef
