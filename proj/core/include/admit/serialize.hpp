#pragma once

#include "admit/admissibility.hpp"
#include "admit/interpret.hpp"

#include <nlohmann/json.hpp>

namespace admit {

// JSON numbers are written with round-trip precision, so a UnitVector read
// back with unit_from_json is bitwise identical to the one written.
nlohmann::json to_json(const UnitVector& u);
UnitVector unit_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FeasibilityCertificate& cert);
nlohmann::json to_json(const OptimizerTrace& trace);

// {"dim", "witnesses": [[...]], "sources": [[labels]]}
nlohmann::json to_json(const WitnessSet& w);
WitnessSet witness_set_from_json(const nlohmann::json& j);

// {outcome: "approve"|"refuse", mu_star?, prior_value?, refusal_reason?,
//  refusal_evidence?, optimizer_trace}
nlohmann::json outcome_json(const Outcome& outcome);
nlohmann::json refusal_json(const Refusal& refusal);

}  // namespace admit
