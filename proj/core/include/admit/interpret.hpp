#pragma once

#include "admit/admissibility.hpp"
#include "admit/policy.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

namespace admit {

struct OptimizerOptions {
    std::size_t restarts = 8;              // R >= 8
    std::size_t samples_per_restart = 16;  // region samples drawn per restart
    double min_step = 1e-4;                // smallest weight transfer in the ascent
    std::size_t max_evaluations = 20'000;  // per refinement
    std::uint64_t seed = 0;
    // Proposal frame for region sampling; ties are also broken in this frame.
    std::optional<Rotation> frame;
    double feasibility_tol = kDefaultFeasibilityTol;
    double membership_tol = kDefaultMembershipTol;
    std::size_t proposal_budget = 1'000'000;
};

struct OptimizerTrace {
    std::size_t iterations = 0;   // objective evaluations
    double final_gap = 0.0;       // last accepted improvement
    std::size_t restarts = 0;
    std::size_t candidates = 0;   // seed candidates considered
};

struct Interpretation {
    UnitVector point;
    double prior_value;
    double objective;  // prior value, or log-likelihood + log prior for the MAP variant
    OptimizerTrace trace;
};

enum class RefusalReason { Contradiction, PolicyExclusion, VerificationFailure };

const char* to_string(RefusalReason r) noexcept;

struct Refusal {
    RefusalReason reason;
    std::string message;
    std::optional<FeasibilityCertificate> certificate;  // Contradiction
    std::optional<UnitVector> best_point;               // PolicyExclusion
    double best_value = 0.0;
    double roundtrip_distance = 0.0;                    // VerificationFailure
    OptimizerTrace trace;
};

using Outcome = std::variant<Interpretation, Refusal>;

inline bool approved(const Outcome& o) noexcept { return std::holds_alternative<Interpretation>(o); }

inline constexpr const char* kContradictionMessage = "Evidence contradicts";
inline constexpr const char* kPolicyExclusionMessage = "No policy-compliant interpretation";
inline constexpr const char* kVerificationMessage = "Verification failed";

/// Maximizes the regime prior over the admissible region of W and applies the
/// regime threshold (inclusive). Candidates are the certificate center, every
/// generator, and the best region sample of each restart; each is refined by
/// pairwise weight transfers on the simplex. A value of 1 stops the search.
Outcome interpret(const WitnessSet& w, const PolicyRegime& regime, const OptimizerOptions& opts = {});

using LogLikelihood = std::function<double(const UnitVector&)>;

// MAP variant: maximizes log_likelihood(μ) + log ρ(μ) over the region.
// Candidates with ρ = 0 are discarded rather than scored as −∞.
Outcome map_interpret(const WitnessSet& w, const LogLikelihood& log_likelihood, const PolicyPrior& prior, double tau,
                      const OptimizerOptions& opts = {});

class Verbalizer {
public:
    virtual ~Verbalizer() = default;
    virtual std::string verbalize(const UnitVector& mu) const = 0;
};

class Encoder {
public:
    virtual ~Encoder() = default;
    virtual UnitVector encode(const std::string& text) const = 0;
};

// Writes the coordinates with 17 significant digits; the matching encoder
// parses them back without renormalizing, so the round trip is exact.
class TemplateVerbalizer : public Verbalizer {
public:
    std::string verbalize(const UnitVector& mu) const override;
};

class TemplateEncoder : public Encoder {
public:
    UnitVector encode(const std::string& text) const override;
};

// Rotates μ by a fixed angle toward a deterministic orthogonal direction before
// writing it out.
class PerturbingVerbalizer : public Verbalizer {
public:
    explicit PerturbingVerbalizer(double angle) : angle_(angle) {}
    std::string verbalize(const UnitVector& mu) const override;

private:
    double angle_;
};

inline constexpr double kDefaultRoundtripTolerance = 1e-6;

using Generation = std::variant<std::string, Refusal>;

// Feasibility, region, argmax, threshold, verbalize, then the round-trip gate
// d(encode(text), μ*) < delta.
Generation generate(const WitnessSet& query, const PolicyRegime& regime, const Verbalizer& verbalizer,
                    const Encoder& encoder, double delta = kDefaultRoundtripTolerance, const OptimizerOptions& opts = {});

}  // namespace admit
