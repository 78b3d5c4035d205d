#include "admit/underwriting.hpp"

#include "admit/parallel.hpp"
#include "admit/serialize.hpp"

#include <istream>

namespace admit {

using nlohmann::json;

namespace {

json optimizer_json(const OptimizerOptions& o) {
    return {{"restarts", o.restarts},
            {"samples_per_restart", o.samples_per_restart},
            {"min_step", o.min_step},
            {"max_evaluations", o.max_evaluations},
            {"feasibility_tol", o.feasibility_tol},
            {"membership_tol", o.membership_tol},
            {"proposal_budget", o.proposal_budget}};
}

OptimizerOptions optimizer_from(const json& j, std::uint64_t seed) {
    OptimizerOptions o;
    o.restarts = j.at("restarts").get<std::size_t>();
    o.samples_per_restart = j.at("samples_per_restart").get<std::size_t>();
    o.min_step = j.at("min_step").get<double>();
    o.max_evaluations = j.at("max_evaluations").get<std::size_t>();
    o.feasibility_tol = j.at("feasibility_tol").get<double>();
    o.membership_tol = j.at("membership_tol").get<double>();
    o.proposal_budget = j.at("proposal_budget").get<std::size_t>();
    o.seed = seed;
    return o;
}

}  // namespace

json audit_record(const std::string& loan_id, const WitnessSet& w, const FeasibilityCertificate& cert,
                  const PolicyRegime& regime, const OptimizerOptions& opts, const Outcome& outcome) {
    json sources = json::array();
    for (std::size_t i = 0; i < w.size(); ++i) sources.push_back(w.sources(i));
    json rec;
    rec["loan_id"] = loan_id;
    rec["witness_summary"] = {{"count", w.size()}, {"sources", std::move(sources)}};
    rec["witnesses"] = to_json(w);
    rec["region_summary"] = to_json(cert);
    rec["policy_id"] = regime.name;
    rec["tau"] = regime.tau;
    rec["seed"] = opts.seed;
    rec["optimizer"] = optimizer_json(opts);
    rec["outcome"] = outcome_json(outcome);
    return rec;
}

bool replay_record(const json& record, const std::vector<PolicyRegime>& regimes) {
    const PolicyRegime& regime = find_regime(regimes, record.at("policy_id").get<std::string>());
    if (regime.tau != record.at("tau").get<double>()) return false;
    const WitnessSet w = witness_set_from_json(record.at("witnesses"));
    const OptimizerOptions o = optimizer_from(record.at("optimizer"), record.at("seed").get<std::uint64_t>());
    return outcome_json(interpret(w, regime, o)).dump() == record.at("outcome").dump();
}

AuditVerification verify_audit(std::istream& in, const std::vector<PolicyRegime>& regimes, std::size_t threads) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (line.find_first_not_of(" \r\t") != std::string::npos) lines.push_back(std::move(line));

    std::vector<unsigned char> ok(lines.size(), 0);
    std::vector<std::string> label(lines.size());
    parallel_chunks(lines.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                const json rec = json::parse(lines[i]);
                label[i] = rec.value("loan_id", std::string("?")) + "/" + rec.value("policy_id", std::string("?"));
                ok[i] = replay_record(rec, regimes) ? 1 : 0;
            } catch (const std::exception& e) {
                if (label[i].empty()) label[i] = "line " + std::to_string(i + 1);
                label[i] += " (" + std::string(e.what()) + ")";
            }
        }
    });

    AuditVerification v;
    v.total = lines.size();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (ok[i]) ++v.reproduced;
        else v.mismatches.push_back(label[i]);
    }
    return v;
}

}  // namespace admit
