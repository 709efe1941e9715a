#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcurv/curvature.hpp"
#include "pcurv/gauge.hpp"

namespace pcurv {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "padic-curvature/1";
inline constexpr const char* kVersion = "0.1.0";

// element literals: {"digits": [[c_0..c_{f-1}], ...]} (Teichmuller pi-digits) or {"int": n}
json to_json(const Res& r);
json to_json(const Elem& x);
json to_json(const EMat& m);
json to_json(const RMat& m);
Res res_from_json(const Field& F, const json& j);
Elem elem_from_json(const Field& F, const json& j, int prec);
EMat emat_from_json(const Field& F, const json& j, int prec);
RMat rmat_from_json(const Field& F, const json& j);

uint64_t fnv1a64(const std::string& s);

struct MetricConstraints {
    bool unit_diagonal = true;
    bool diagonal = false;
    bool ad_invariant = false;
    const Cocycle* cocycle = nullptr;
};
// ConstraintUnsatisfiable after 100 draws
EMat generate_random_metric(const Field& F, const WeilMonoid& M, const Labeling& L, int n,
                            const MetricConstraints& cons, SplitMix64& rng);

// parsed top-level options; ring-valued fields stay as literals until a field exists
struct Scenario {
    json raw;
    FieldSpec field;
    json monoid, labeling, metric, secondary, torsion, point, cocycle, kn, ideal, legendre;
    std::map<std::string, std::string> invariants;
    int canonical_h = 0;
    Flavor flavor = Flavor::LeviCivita;
    SolveMethod method = SolveMethod::Christoffel;
    int samples = 5;
    uint64_t seed = 1;
    std::vector<std::string> commands;
    std::string output;
};

const std::vector<std::string>& command_catalog();

// SchemaError with a path-qualified message on any problem
Scenario parse_scenario(const json& j, std::optional<int> precision = std::nullopt,
                        std::optional<uint64_t> seed = std::nullopt);

struct RunResult {
    json report;
    bool ok = true;
};
RunResult run(const Scenario& s, const std::optional<std::vector<std::string>>& commands = std::nullopt);

// human-readable summary lines
std::vector<std::string> summarize(const json& report);

}  // namespace pcurv
