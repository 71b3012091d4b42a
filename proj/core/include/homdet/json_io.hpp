#pragma once

#include <nlohmann/json.hpp>

#include "homdet/experiment.hpp"
#include "homdet/hom.hpp"
#include "homdet/optics.hpp"
#include "homdet/states.hpp"
#include "homdet/witness.hpp"

// JSON wire formats. Complex numbers are two-element arrays [re, im];
// matrices are row-major nested arrays; a state record carries
// {"dims": [...], "amplitudes": [...]} or {"dims": [...], "matrix": [...]}.

namespace homdet::io {

using json = nlohmann::json;

json complex_to_json(const cxd& z);
cxd complex_from_json(const json& j);

json matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd matrix_from_json(const json& j);

json vector_to_json(const Eigen::VectorXcd& v);
Eigen::VectorXcd vector_from_json(const json& j);

json state_record(const PureState& psi);
json state_record(const DensityMatrix& rho);

/// Parses either flavor of state record. pure is set only for amplitude
/// records; density is always available.
struct ParsedState {
    std::optional<PureState> pure;
    DensityMatrix density;
};
ParsedState parse_state(const json& j);

/// Ensemble realizing a parsed state: the single pure state, or the
/// eigen-ensemble of the density matrix.
Ensemble ensemble_from_state(const ParsedState& s);

json witness_record(const Witness& w);
Witness parse_witness(const json& j);

json report_json(const ApproxWitness& aew);
json report_json(const SeparableApproxWitness& saew);
json decomposition_json(const SeparableDecomposition& d);
json report_json(const CoincidenceResult& r);
json counts_json(const ExperimentCounts& c);
json report_json(const DetectionReport& r);

json element_json(const optics::Element& e);
optics::Element element_from_json(const json& j);
json circuit_json(const std::vector<optics::NamedElement>& circuit);
std::vector<optics::Element> circuit_from_json(const json& j);

/// Rejects any non-finite number anywhere in the document.
void ensure_finite(const json& j);

} // namespace homdet::io
