#pragma once

#include "admit/admissibility.hpp"
#include "admit/feature_axes.hpp"
#include "admit/interpret.hpp"
#include "admit/policy.hpp"
#include "admit/witness_info.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace admit {

struct LoanRecord {
    std::string loan_id;
    double ltv = 0.0;   // (0, 1.5]
    int fico = 0;       // [300, 850]
    double dti = 0.0;   // (0, 1]
    std::string property_type;
    // Occupancy may carry two conflicting reports separated by '|', e.g. "P|I".
    std::string occupancy;
    std::string purpose;
    bool defect = false;

    friend bool operator==(const LoanRecord&, const LoanRecord&) = default;
};

// Throws PreconditionError when a numeric field is out of range.
void validate(const LoanRecord& loan);

/// Synthetic loans. Clean loans follow plausible marginals; defects are either
/// internally contradictory (conflicting occupancy reports) or sit outside
/// every shipped regime (LTV in [0.98, 1.25] or FICO in [500, 610]).
/// Deterministic in seed; loan i depends only on (seed, i).
std::vector<LoanRecord> generate_dataset(std::size_t n, double defect_rate, std::uint64_t seed);

inline constexpr const char* kLoanCsvHeader = "loan_id,ltv,fico,dti,property_type,occupancy,purpose,defect";

struct LoanCsv {
    std::vector<LoanRecord> loans;
    std::vector<std::string> warnings;  // e.g. ignored columns
};

void write_loans_csv(std::ostream& out, const std::vector<LoanRecord>& loans);
// Throws CsvError on malformed rows or missing columns.
LoanCsv read_loans_csv(std::istream& in);

/// One witness per fact (ltv, fico, dti, property_type, occupancy, purpose).
/// Every witness carries the loan profile (inverse readouts on the feature
/// axes plus categorical dictionary components) and differs only in a
/// fact-specific nuisance direction, scaled so that the normalized centroid
/// of the witnesses reads back the recorded values exactly. A conflicting
/// occupancy report adds the negation of the occupancy witness.
/// Throws MissingExtractor when ltv, fico or dti is not registered.
WitnessSet extract_witnesses(const LoanRecord& loan, const ExtractorRegistry& registry);

// Discrete view of a loan for the set-overlap tools: one token per fact, with
// numeric fields bucketed (LTV by 0.05, FICO by 20 points, DTI by 0.05) and
// both occupancy reports kept when they conflict.
inline constexpr double kLtvTokenWidth = 0.05;
inline constexpr double kFicoTokenWidth = 20.0;
inline constexpr double kDtiTokenWidth = 0.05;
DiscreteWitnessSet loan_tokens(const LoanRecord& loan);

struct RegimeRow {
    std::string name;
    double tau = 0.0;
    std::size_t approved = 0;
    std::size_t rejected = 0;
    std::size_t defects = 0;
    std::size_t defects_approved = 0;
    std::size_t contradictions = 0;
    double har = 0.0;                    // percent of defects approved
    double defect_rejection_rate = 0.0;  // percent of defects refused
};

struct ApprovalDiff {
    std::string from;
    std::string to;
    std::size_t added = 0;
    std::size_t removed = 0;  // approvals lost on relaxation; nonzero breaks monotonicity
};

struct BenchmarkReport {
    std::size_t dataset_size = 0;
    std::size_t defects = 0;
    std::vector<RegimeRow> rows;
    std::vector<ApprovalDiff> approval_set_diffs;
    bool monotonicity_verdict = true;
    // Indexed [regime][loan].
    std::vector<std::vector<bool>> approvals;
};

struct BenchmarkOptions {
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    OptimizerOptions optimizer;
    bool audit = true;
};

struct BenchmarkRun {
    BenchmarkReport report;
    std::vector<nlohmann::json> audit;  // one record per (loan, regime), loan-major
};

// Seed used for one loan's decisions: the run seed mixed with the loan id.
std::uint64_t decision_seed(std::uint64_t run_seed, const std::string& loan_id) noexcept;

BenchmarkRun run_benchmark(const std::vector<LoanRecord>& loans, const std::vector<PolicyRegime>& regimes,
                           const ExtractorRegistry& registry, const BenchmarkOptions& opts);

nlohmann::json to_json(const BenchmarkReport& report);

/// Audit record: loan id, witness summary and vectors, region summary (the
/// feasibility certificate), policy id and τ, decision seed and optimizer
/// settings, and the serialized outcome.
nlohmann::json audit_record(const std::string& loan_id, const WitnessSet& w, const FeasibilityCertificate& cert,
                            const PolicyRegime& regime, const OptimizerOptions& opts, const Outcome& outcome);

struct AuditVerification {
    std::size_t total = 0;
    std::size_t reproduced = 0;
    std::vector<std::string> mismatches;  // loan_id/policy of failed records
};

// Re-decides one record from its stored inputs; true when the outcome JSON
// matches the stored one byte for byte.
bool replay_record(const nlohmann::json& record, const std::vector<PolicyRegime>& regimes);

// Reads JSONL records from `in`.
AuditVerification verify_audit(std::istream& in, const std::vector<PolicyRegime>& regimes, std::size_t threads = 1);

}  // namespace admit
