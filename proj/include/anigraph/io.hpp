#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "anigraph/anisotropy.hpp"
#include "anigraph/classifier.hpp"
#include "anigraph/energy.hpp"
#include "anigraph/regularity.hpp"
#include "anigraph/solver.hpp"
#include "anigraph/threshold.hpp"

namespace anigraph::io {

using json = nlohmann::json;

// Parse errors surface as IngestionError; invalid shapes as InvalidAnisotropy.
json parse_json(const std::string& text, const std::string& what);
json read_json_file(const std::filesystem::path& path);

// {"kind": "euclidean"} | {"kind": "ellipse", "a", "b"} | {"kind": "lp", "q"} |
// {"kind": "polygon", "vertices": [[x, y], ...]}
Anisotropy anisotropy_from_json(const json& j);
json anisotropy_to_json(const Anisotropy& a);

// {"kind": "constant", "c"} | {"kind": "step", "a"} |
// {"kind": "csv", "path", "interp"} | {"kind": "table", "s", "g", "interp"}.
// Relative csv paths resolve against base_dir.
GSpec gspec_from_json(const json& j, const std::filesystem::path& base_dir = {});
json gspec_to_json(const GSpec& g);

SolverConfig solver_config_from_json(const json& j);
json solver_config_to_json(const SolverConfig& c);

Problem problem_from_json(const json& j, const std::filesystem::path& base_dir = {});
json problem_to_json(const Problem& p);

// "s,u" header, one row per node, 17 significant digits.
void write_profile_csv(std::ostream& out, const Profile& u);
// Rows must sit on a uniform grid; the grid is rebuilt from the first and last abscissa.
Profile read_profile_csv(std::istream& in);
Profile read_profile_csv_file(const std::filesystem::path& path);

std::string format_double(double v);

json to_json(const Vec2& v);
json to_json(const WulffMeasures& m);
json to_json(const SymmetryFlags& f);
json to_json(const BoundaryArc& a);
json to_json(const EnergyBreakdown& e);
json to_json(const SolveReport& r);  // profile values excluded (they go to CSV)
json to_json(const ThresholdReport& r);
json to_json(const RegularityReport& r);
json to_json(const RefinementStudy& s);
json to_json(const CahnHoffmanResult& r);

}  // namespace anigraph::io
