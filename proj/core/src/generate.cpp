#include "admit/interpret.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace admit {

namespace {

std::string write_coords(const Eigen::VectorXd& x) {
    std::string out = "interpretation: [";
    char buf[32];
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", x[i]);
        if (i > 0) out += ", ";
        out += buf;
    }
    return out + "]";
}

}  // namespace

std::string TemplateVerbalizer::verbalize(const UnitVector& mu) const { return write_coords(mu.coords()); }

UnitVector TemplateEncoder::encode(const std::string& text) const {
    const auto open = text.find('[');
    const auto close = text.find(']', open == std::string::npos ? 0 : open);
    if (open == std::string::npos || close == std::string::npos) {
        throw PreconditionError("text carries no coordinate list");
    }
    std::vector<double> coords;
    const char* p = text.c_str() + open + 1;
    const char* end = text.c_str() + close;
    while (p < end) {
        char* next = nullptr;
        const double v = std::strtod(p, &next);
        if (next == p) throw PreconditionError("malformed coordinate in text");
        coords.push_back(v);
        p = next;
        while (p < end && (*p == ',' || *p == ' ')) ++p;
    }
    return UnitVector::from_unit(std::span<const double>(coords));
}

std::string PerturbingVerbalizer::verbalize(const UnitVector& mu) const {
    const Eigen::VectorXd& x = mu.coords();
    Eigen::Index k = 0;
    x.cwiseAbs().minCoeff(&k);
    Eigen::VectorXd v = Eigen::VectorXd::Unit(x.size(), k) - x[k] * x;
    v.normalize();
    const Eigen::VectorXd moved = std::cos(angle_) * x + std::sin(angle_) * v;
    return write_coords(moved / moved.norm());
}

Generation generate(const WitnessSet& query, const PolicyRegime& regime, const Verbalizer& verbalizer,
                    const Encoder& encoder, double delta, const OptimizerOptions& opts) {
    if (!(delta > 0.0)) throw PreconditionError("round-trip tolerance must be positive");
    Outcome outcome = interpret(query, regime, opts);
    if (auto* refusal = std::get_if<Refusal>(&outcome)) return std::move(*refusal);

    const auto& chosen = std::get<Interpretation>(outcome);
    std::string text = verbalizer.verbalize(chosen.point);
    double distance = std::numeric_limits<double>::infinity();
    try {
        distance = geodesic_distance(encoder.encode(text), chosen.point);
    } catch (const Error&) {
        // unparseable text fails the gate below
    }
    if (distance < delta) return text;

    Refusal r{RefusalReason::VerificationFailure, kVerificationMessage, std::nullopt, chosen.point, chosen.prior_value,
              distance, chosen.trace};
    return r;
}

}  // namespace admit
