#pragma once

#include <json.hpp>
#include <string>

#include "hgs/optimize.hpp"

namespace hgs {

// Documents keep key insertion order so output is reproducible.
using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// Numbers are printed with 17 significant digits.
std::string dump_document(const Json& j);
// Throws kStructural with the parser's line and column on malformed text.
Json parse_document(const std::string& text);

// Rejects keys outside `allowed`; `where` names the object in messages.
void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where);

// Complex numbers are [re, im]; a bare number is read as real.
Json to_json(cplx z);
Json to_json(const CVec& v);
Json to_json(const CMat& m);
Json to_json(const RVec& v);
cplx complex_from_json(const Json& j, const std::string& where);
CVec vector_from_json(const Json& j, const std::string& where);
CMat matrix_from_json(const Json& j, const std::string& where);

Json to_json(const CircuitSpec& c);
CircuitSpec circuit_from_json(const Json& j);
Json to_json(const GaussianState& s);
GaussianState state_from_json(const Json& j);
Json to_json(const Gate& g);
Gate gate_from_json(const Json& j, int m);
Json to_json(const DetectionPattern& p);
DetectionPattern pattern_from_json(const Json& j);
Json to_json(const CoefficientMap& c);
Json to_json(const FockVector& v);
FockVector fock_from_json(const Json& j);
Json to_json(const HeraldedState& h);
Json to_json(const Mesh& m);
Json to_json(const StateDiagnostic& d);
Json to_json(const Health& h);
Json to_json(const OptimizationResult& r);

// Problem documents. "target" is either explicit coefficients
//   {"coefficients": [{"multi_index": [..], "re": x, "im": y}, ...], "modes": M}
// or a named state {"kind": "noon" | "w" | "cubic", ...}; an optional "gate"
// acts after the coefficients.
OptimizationProblem problem_from_json(const Json& j);

// One row per grid point: q_1..q_M, p_1..p_M, W. Lines of `meta` are
// written first as '#' comments.
std::string wigner_to_text(const WignerGrid& g, const std::vector<std::string>& meta);

}  // namespace hgs
