#pragma once

#include "admit/errors.hpp"
#include "admit/sphere.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace admit {

/// Reads a scalar feature from an interpretation: offset + scale·(μ·direction).
/// The calibrated kind additionally rounds the readout to `resolution`, the
/// reporting precision of the underlying field (e.g. whole FICO points).
class FeatureExtractor {
public:
    enum class Kind { LinearProjection, CalibratedProjection };

    static FeatureExtractor linear(std::string id, UnitVector direction, double scale, double offset);
    static FeatureExtractor calibrated(std::string id, UnitVector direction, double scale, double offset,
                                       double resolution);

    const std::string& id() const noexcept { return id_; }
    Kind kind() const noexcept { return kind_; }
    const UnitVector& direction() const noexcept { return direction_; }
    double scale() const noexcept { return scale_; }
    double offset() const noexcept { return offset_; }
    double resolution() const noexcept { return resolution_; }
    std::size_t dim() const noexcept { return direction_.dim(); }

    double operator()(const UnitVector& mu) const;
    // Projection μ·direction that reads back as `value` (before rounding).
    double projection_for(double value) const noexcept { return (value - offset_) / scale_; }

private:
    FeatureExtractor(std::string id, Kind kind, UnitVector direction, double scale, double offset, double resolution);

    std::string id_;
    Kind kind_;
    UnitVector direction_;
    double scale_;
    double offset_;
    double resolution_;
};

const char* to_string(FeatureExtractor::Kind k) noexcept;

using ExtractorRegistry = std::map<std::string, FeatureExtractor, std::less<>>;

enum class Comparison { AtMost, AtLeast };

struct FeatureCondition {
    FeatureExtractor extractor;
    Comparison op;
    double value;

    bool holds(const UnitVector& mu) const { return op == Comparison::AtMost ? extractor(mu) <= value : extractor(mu) >= value; }
};

/// Immutable preference over the sphere with values in [0, 1]. Evaluation
/// sees only the interpretation μ and the prior's own parameters.
class PolicyPrior {
public:
    enum class Kind { IndicatorThreshold, SmoothCap, Product, Constant };

    static PolicyPrior indicator(std::string id, std::vector<FeatureCondition> conditions);
    // exp(κ(μ·axis − 1)); κ >= 0.
    static PolicyPrior smooth_cap(std::string id, UnitVector axis, double kappa);
    static PolicyPrior product(std::string id, std::vector<PolicyPrior> children);
    static PolicyPrior constant(std::string id, double value);

    const std::string& id() const noexcept;
    Kind kind() const noexcept;
    // Dimension fixed by extractors or axes; empty for priors that accept any dimension.
    std::optional<std::size_t> dim() const noexcept;

    double operator()(const UnitVector& mu) const;

    // Kind-specific parameters.
    const std::vector<FeatureCondition>& conditions() const;
    const UnitVector& axis() const;
    double kappa() const;
    const std::vector<PolicyPrior>& children() const;
    double constant_value() const;

private:
    struct Impl;
    explicit PolicyPrior(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

const char* to_string(PolicyPrior::Kind k) noexcept;

// Throws DimensionMismatch when μ disagrees with the prior's dimension.
double eval_prior(const PolicyPrior& prior, const UnitVector& mu);

struct PolicyRegime {
    std::string name;
    PolicyPrior prior;
    double tau;
};

// Conditions of every indicator reachable through products, in order.
std::vector<FeatureCondition> indicator_conditions(const PolicyPrior& prior);

struct RelaxationVerdict {
    enum class Status { ConfirmedOnProbes, CounterexampleFound };
    Status status = Status::ConfirmedOnProbes;
    std::optional<UnitVector> counterexample;
    std::size_t probes_checked = 0;

    bool confirmed() const noexcept { return status == Status::ConfirmedOnProbes; }
};

// Probe points for comparing two priors: `n_uniform` uniform points plus every
// corner of the indicator threshold grid (each threshold, nudged to either
// side, and midpoints between neighbouring thresholds) realised on the sphere.
std::vector<UnitVector> relaxation_probes(const PolicyPrior& a, const PolicyPrior& b, std::size_t n_uniform,
                                          std::uint64_t seed);

// Checks looser(μ) >= stricter(μ) on the given probes.
RelaxationVerdict is_relaxation_on(const PolicyPrior& stricter, const PolicyPrior& looser,
                                   const std::vector<UnitVector>& probes);

// Pointwise ρ₁ <= ρ₂ on uniform plus boundary-corner probes. A confirmation is
// evidence on the probes, not a proof. Requires n_probes >= 1000.
RelaxationVerdict is_relaxation(const PolicyPrior& stricter, const PolicyPrior& looser, std::size_t n_probes,
                                std::uint64_t seed);

// Exact check for two pure indicators: every condition of `looser` is implied
// by a condition of `stricter` on the same extractor. True means ρ₁ <= ρ₂
// everywhere; false means the sufficient condition failed.
bool indicator_thresholds_nested(const PolicyPrior& stricter, const PolicyPrior& looser);

/// Regime configuration: `{ "extractors": [...], "regimes": [...] }`. When the
/// document has no extractor list, `fallback` supplies the registry.
struct RegimeConfig {
    ExtractorRegistry extractors;
    std::vector<PolicyRegime> regimes;
};

RegimeConfig parse_regime_config(std::string_view text, const ExtractorRegistry& fallback = {});
std::vector<PolicyRegime> parse_regimes(std::string_view text, const ExtractorRegistry& fallback = {});

// The shipped STRICT / STANDARD / RELAXED configuration over the harness
// feature axes.
const std::string& default_regime_config_text();
const PolicyRegime& find_regime(const std::vector<PolicyRegime>& regimes, std::string_view name);

}  // namespace admit
