#include "admit/underwriting.hpp"

#include "admit/parallel.hpp"
#include "admit/random.hpp"
#include "admit/serialize.hpp"
#include "admit/witness_info.hpp"

namespace admit {

std::uint64_t decision_seed(std::uint64_t run_seed, const std::string& loan_id) noexcept {
    return derive_stream(run_seed, token_id(loan_id));
}

BenchmarkRun run_benchmark(const std::vector<LoanRecord>& loans, const std::vector<PolicyRegime>& regimes,
                           const ExtractorRegistry& registry, const BenchmarkOptions& opts) {
    const std::size_t n = loans.size();
    const std::size_t r = regimes.size();
    std::vector<std::vector<bool>> approvals(r, std::vector<bool>(n, false));
    std::vector<std::vector<RefusalReason>> reasons(r, std::vector<RefusalReason>(n, RefusalReason::PolicyExclusion));
    std::vector<std::vector<nlohmann::json>> records(n);

    // vector<bool> is not safe for concurrent writes; collect per loan first.
    std::vector<std::vector<unsigned char>> approved_by_loan(n, std::vector<unsigned char>(r, 0));
    parallel_chunks(n, opts.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const LoanRecord& loan = loans[i];
            const WitnessSet w = extract_witnesses(loan, registry);
            OptimizerOptions o = opts.optimizer;
            o.seed = decision_seed(opts.seed, loan.loan_id);
            std::optional<FeasibilityCertificate> cert;
            if (opts.audit) cert = check_feasibility(w, o.feasibility_tol);
            for (std::size_t k = 0; k < r; ++k) {
                const Outcome outcome = interpret(w, regimes[k], o);
                approved_by_loan[i][k] = approved(outcome) ? 1 : 0;
                if (const auto* refusal = std::get_if<Refusal>(&outcome)) reasons[k][i] = refusal->reason;
                if (opts.audit) records[i].push_back(audit_record(loan.loan_id, w, *cert, regimes[k], o, outcome));
            }
        }
    });

    BenchmarkRun run;
    BenchmarkReport& rep = run.report;
    rep.dataset_size = n;
    for (const auto& l : loans) rep.defects += l.defect ? 1 : 0;
    for (std::size_t k = 0; k < r; ++k) {
        RegimeRow row;
        row.name = regimes[k].name;
        row.tau = regimes[k].tau;
        row.defects = rep.defects;
        for (std::size_t i = 0; i < n; ++i) {
            approvals[k][i] = approved_by_loan[i][k] != 0;
            if (approvals[k][i]) {
                ++row.approved;
                if (loans[i].defect) ++row.defects_approved;
            } else {
                ++row.rejected;
                if (reasons[k][i] == RefusalReason::Contradiction) ++row.contradictions;
            }
        }
        if (rep.defects > 0) {
            row.har = 100.0 * static_cast<double>(row.defects_approved) / static_cast<double>(rep.defects);
            row.defect_rejection_rate =
                100.0 * static_cast<double>(rep.defects - row.defects_approved) / static_cast<double>(rep.defects);
        }
        rep.rows.push_back(std::move(row));
    }
    for (std::size_t k = 0; k + 1 < r; ++k) {
        ApprovalDiff diff{regimes[k].name, regimes[k + 1].name, 0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            if (approvals[k + 1][i] && !approvals[k][i]) ++diff.added;
            if (approvals[k][i] && !approvals[k + 1][i]) ++diff.removed;
        }
        if (diff.removed > 0) rep.monotonicity_verdict = false;
        rep.approval_set_diffs.push_back(diff);
    }
    rep.approvals = std::move(approvals);

    if (opts.audit) {
        run.audit.reserve(n * r);
        for (auto& per_loan : records)
            for (auto& rec : per_loan) run.audit.push_back(std::move(rec));
    }
    return run;
}

nlohmann::json to_json(const BenchmarkReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"name", r.name},
                        {"tau", r.tau},
                        {"approved", r.approved},
                        {"rejected", r.rejected},
                        {"defects", r.defects},
                        {"defects_approved", r.defects_approved},
                        {"contradictions", r.contradictions},
                        {"har", r.har},
                        {"defect_rejection_rate", r.defect_rejection_rate}});
    }
    nlohmann::json diffs = nlohmann::json::array();
    for (const auto& d : report.approval_set_diffs) {
        diffs.push_back({{"from", d.from}, {"to", d.to}, {"added", d.added}, {"removed", d.removed}});
    }
    return {{"dataset_size", report.dataset_size},
            {"defects", report.defects},
            {"regimes", std::move(rows)},
            {"approval_set_diffs", std::move(diffs)},
            {"monotonicity_verdict", report.monotonicity_verdict}};
}

}  // namespace admit
