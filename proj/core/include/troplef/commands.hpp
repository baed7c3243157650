#pragma once

#include "troplef/io.hpp"
#include "troplef/report.hpp"

namespace troplef {

/// Command layer shared by the CLI binary and the tests. Each command builds
/// a deterministic report; recoverable failures surface as troplef::Error and
/// map to exit code 1 at the binary level.
struct CmdOptions {
    bool strict = false;
    bool json = false;
    bool assert_theorem = false;
    bool min_convention = false;
    int threads = 1;
    CoeffRing ring = CoeffRing::Z();
};

struct CmdResult {
    int exit_code = 0;
    Report report;

    std::string output(bool as_json) const { return as_json ? report.json_text() : report.text; }
};

CmdResult cmd_validate(const std::string& input, const CmdOptions& opt);
CmdResult cmd_subdivide(const std::string& input, const std::string& mode, const CmdOptions& opt);
CmdResult cmd_homology(const std::string& input, const std::string& cosheaf, const CmdOptions& opt);
CmdResult cmd_tropical_invariants(const std::string& input, const CmdOptions& opt);
CmdResult cmd_tropical_hodge(const std::string& input, const CmdOptions& opt);
CmdResult cmd_tropical_dual(const std::string& input, const std::string& lifts, const CmdOptions& opt);
CmdResult cmd_verify_pl(const std::string& input, const std::string& cosheaf, int p, const CmdOptions& opt);
CmdResult cmd_lefschetz(const std::string& input, const CmdOptions& opt);

}  // namespace troplef
