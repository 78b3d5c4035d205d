#include "admit/serialize.hpp"

namespace admit {

using nlohmann::json;

json to_json(const UnitVector& u) { return u.to_vector(); }

UnitVector unit_from_json(const json& j) {
    if (!j.is_array()) throw PreconditionError("unit vector must be a JSON array");
    const auto coords = j.get<std::vector<double>>();
    return UnitVector::from_unit(std::span<const double>(coords));
}

json to_json(const FeasibilityCertificate& cert) {
    json j;
    j["status"] = to_string(cert.status);
    if (cert.center) j["center"] = to_json(*cert.center);
    j["min_margin"] = cert.min_margin;
    if (cert.witness_pair) j["witness_pair"] = {cert.witness_pair->first, cert.witness_pair->second};
    j["hull_distance"] = cert.hull_distance;
    j["duality_gap"] = cert.duality_gap;
    j["iterations"] = cert.iterations;
    j["converged"] = cert.converged;
    j["tolerance"] = cert.tolerance;
    j["generator_count"] = cert.generator_count;
    j["weights"] = cert.weights;
    return j;
}

json to_json(const OptimizerTrace& trace) {
    return {{"iterations", trace.iterations},
            {"final_gap", trace.final_gap},
            {"restarts", trace.restarts},
            {"candidates", trace.candidates}};
}

json to_json(const WitnessSet& w) {
    json vectors = json::array();
    json sources = json::array();
    for (std::size_t i = 0; i < w.size(); ++i) {
        vectors.push_back(to_json(w[i]));
        sources.push_back(w.sources(i));
    }
    return {{"dim", w.dim()}, {"witnesses", std::move(vectors)}, {"sources", std::move(sources)}};
}

WitnessSet witness_set_from_json(const json& j) {
    std::vector<UnitVector> vectors;
    std::vector<std::string> labels;
    const json& ws = j.at("witnesses");
    const json* sources = j.contains("sources") ? &j.at("sources") : nullptr;
    // A witness with several sources is repeated once per label; the
    // constructor merges the copies back into one entry.
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const UnitVector v = unit_from_json(ws[i]);
        const bool labelled = sources && i < sources->size() && !(*sources)[i].empty();
        if (!labelled) {
            vectors.push_back(v);
            labels.emplace_back();
            continue;
        }
        for (const auto& s : (*sources)[i]) {
            vectors.push_back(v);
            labels.push_back(s.get<std::string>());
        }
    }
    return WitnessSet(std::move(vectors), std::move(labels));
}

json refusal_json(const Refusal& r) {
    json evidence;
    switch (r.reason) {
    case RefusalReason::Contradiction:
        if (r.certificate) evidence = to_json(*r.certificate);
        break;
    case RefusalReason::PolicyExclusion:
        evidence["best_value"] = r.best_value;
        if (r.best_point) evidence["best_point"] = to_json(*r.best_point);
        break;
    case RefusalReason::VerificationFailure:
        evidence["roundtrip_distance"] = r.roundtrip_distance;
        if (r.best_point) evidence["mu_star"] = to_json(*r.best_point);
        break;
    }
    return {{"outcome", "refuse"},
            {"refusal_reason", to_string(r.reason)},
            {"message", r.message},
            {"refusal_evidence", std::move(evidence)},
            {"optimizer_trace", to_json(r.trace)}};
}

json outcome_json(const Outcome& outcome) {
    if (const auto* r = std::get_if<Refusal>(&outcome)) return refusal_json(*r);
    const auto& i = std::get<Interpretation>(outcome);
    return {{"outcome", "approve"},
            {"mu_star", to_json(i.point)},
            {"prior_value", i.prior_value},
            {"optimizer_trace", to_json(i.trace)}};
}

}  // namespace admit
