#include "admit/underwriting.hpp"

#include "admit/random.hpp"
#include "admit/witness_info.hpp"

#include <cmath>
#include <numbers>

namespace admit {

namespace {

constexpr double kCategoricalMagnitude = 0.15;

const FeatureExtractor& require(const ExtractorRegistry& registry, const char* id) {
    auto it = registry.find(id);
    if (it == registry.end()) throw MissingExtractor(id);
    if (it->second.dim() != kFeatureDim) throw DimensionMismatch(kFeatureDim, it->second.dim());
    for (std::size_t k = kCategoricalPlane; k < kFeatureDim; ++k) {
        if (it->second.direction()[k] != 0.0) {
            throw PreconditionError(std::string("extractor '") + id + "' must lie on the numeric feature axes");
        }
    }
    return it->second;
}

// Angle of a categorical code in its plane; unknown codes get a hashed angle.
double category_angle(const std::string& field, const std::string& code) {
    static const std::pair<const char*, std::vector<const char*>> dictionary[] = {
        {"property_type", {"SF", "CO", "PU", "MH"}},
        {"occupancy", {"P", "S", "I"}},
        {"purpose", {"P", "C", "N"}},
    };
    for (const auto& [name, codes] : dictionary) {
        if (field != name) continue;
        for (std::size_t i = 0; i < codes.size(); ++i)
            if (code == codes[i]) return 2.0 * std::numbers::pi * static_cast<double>(i) / 8.0;
    }
    const auto h = token_id(field + "=" + code);
    return 2.0 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53;
}

double nuisance_angle(const std::string& loan_id, std::size_t fact) {
    const auto h = mix64(token_id(loan_id) ^ mix64(fact + 1));
    return 2.0 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::pair<std::string, std::string> split_reports(const std::string& value) {
    const auto bar = value.find('|');
    if (bar == std::string::npos) return {value, {}};
    return {value.substr(0, bar), value.substr(bar + 1)};
}

}  // namespace

WitnessSet extract_witnesses(const LoanRecord& loan, const ExtractorRegistry& registry) {
    validate(loan);
    const FeatureExtractor* numeric[] = {&require(registry, "ltv"), &require(registry, "fico"), &require(registry, "dti")};
    const double values[] = {loan.ltv, static_cast<double>(loan.fico), loan.dti};
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(numeric[i]->direction().dot(numeric[j]->direction())) > 1e-12) {
                throw PreconditionError("numeric feature extractors must be orthogonal");
            }

    const auto [occupancy, conflicting] = split_reports(loan.occupancy);
    const std::string* categorical[] = {&loan.property_type, &occupancy, &loan.purpose};
    static const char* names[] = {"property_type", "occupancy", "purpose"};

    // Shared profile.
    Eigen::VectorXd profile = Eigen::VectorXd::Zero(kFeatureDim);
    for (int i = 0; i < 3; ++i) profile += numeric[i]->projection_for(values[i]) * numeric[i]->direction().coords();
    for (int c = 0; c < 3; ++c) {
        const double angle = category_angle(names[c], *categorical[c]);
        profile[static_cast<Eigen::Index>(kCategoricalPlane + 2 * c)] = kCategoricalMagnitude * std::cos(angle);
        profile[static_cast<Eigen::Index>(kCategoricalPlane + 2 * c + 1)] = kCategoricalMagnitude * std::sin(angle);
    }
    const double profile_sq = profile.squaredNorm();
    if (!(profile_sq < 1.0)) throw PreconditionError("loan " + loan.loan_id + " lies outside the encodable range");

    // With orthonormal nuisance directions the centroid of the witnesses is
    // (profile + β/n·Σ nₖ)/s, whose norm is 1/s exactly when β² = n(1 − ‖profile‖²).
    const double n = static_cast<double>(kFactCount);
    const double beta = std::sqrt(n * (1.0 - profile_sq));

    std::vector<UnitVector> witnesses;
    std::vector<std::string> labels;
    const std::string fact_labels[] = {
        "ltv=" + std::to_string(loan.ltv), "fico=" + std::to_string(loan.fico), "dti=" + std::to_string(loan.dti),
        "property_type=" + loan.property_type, "occupancy=" + occupancy, "purpose=" + loan.purpose,
    };
    for (std::size_t k = 0; k < kFactCount; ++k) {
        const double phi = nuisance_angle(loan.loan_id, k);
        Eigen::VectorXd w = profile;
        w[static_cast<Eigen::Index>(kNuisancePlane + 2 * k)] += beta * std::cos(phi);
        w[static_cast<Eigen::Index>(kNuisancePlane + 2 * k + 1)] += beta * std::sin(phi);
        witnesses.push_back(normalize(w));
        labels.push_back(fact_labels[k]);
    }
    if (!conflicting.empty() && conflicting != occupancy) {
        witnesses.push_back(-witnesses[4]);
        labels.push_back("occupancy=" + conflicting + " (conflicts with " + occupancy + ")");
    }
    return WitnessSet(std::move(witnesses), std::move(labels));
}

DiscreteWitnessSet loan_tokens(const LoanRecord& loan) {
    validate(loan);
    auto bucket = [](double value, double width) { return static_cast<long>(std::floor(value / width + 1e-9)); };
    std::vector<std::string> tokens{
        "ltv:" + std::to_string(bucket(loan.ltv, kLtvTokenWidth)),
        "fico:" + std::to_string(bucket(loan.fico, kFicoTokenWidth)),
        "dti:" + std::to_string(bucket(loan.dti, kDtiTokenWidth)),
        "property_type:" + loan.property_type,
        "purpose:" + loan.purpose,
    };
    const auto [occupancy, conflicting] = split_reports(loan.occupancy);
    tokens.push_back("occupancy:" + occupancy);
    if (!conflicting.empty()) tokens.push_back("occupancy:" + conflicting);
    return DiscreteWitnessSet::from_tokens(tokens);
}

}  // namespace admit
