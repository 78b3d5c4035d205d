#include "admit/policy.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <set>

namespace admit {

// ---------------------------------------------------------------------------
// FeatureExtractor

FeatureExtractor::FeatureExtractor(std::string id, Kind kind, UnitVector direction, double scale, double offset,
                                   double resolution)
    : id_(std::move(id)), kind_(kind), direction_(std::move(direction)), scale_(scale), offset_(offset),
      resolution_(resolution) {
    if (id_.empty()) throw PreconditionError("feature extractor id must be nonempty");
    if (!std::isfinite(scale_) || scale_ == 0.0) throw PreconditionError("extractor '" + id_ + "': scale must be finite and nonzero");
    if (!std::isfinite(offset_)) throw PreconditionError("extractor '" + id_ + "': offset must be finite");
    if (kind_ == Kind::CalibratedProjection && !(resolution_ > 0.0 && std::isfinite(resolution_))) {
        throw PreconditionError("extractor '" + id_ + "': resolution must be positive");
    }
}

FeatureExtractor FeatureExtractor::linear(std::string id, UnitVector direction, double scale, double offset) {
    return FeatureExtractor(std::move(id), Kind::LinearProjection, std::move(direction), scale, offset, 0.0);
}

FeatureExtractor FeatureExtractor::calibrated(std::string id, UnitVector direction, double scale, double offset,
                                              double resolution) {
    return FeatureExtractor(std::move(id), Kind::CalibratedProjection, std::move(direction), scale, offset, resolution);
}

double FeatureExtractor::operator()(const UnitVector& mu) const {
    const double raw = offset_ + scale_ * direction_.dot(mu);
    if (kind_ == Kind::LinearProjection) return raw;
    // Divide by an integral reciprocal when there is one so that e.g. 8000/1e4
    // lands on the same double as the literal 0.8.
    const double steps = std::round(raw / resolution_);
    const double inverse = std::round(1.0 / resolution_);
    if (inverse >= 1.0 && std::abs(inverse * resolution_ - 1.0) < 1e-12) return steps / inverse;
    return steps * resolution_;
}

const char* to_string(FeatureExtractor::Kind k) noexcept {
    return k == FeatureExtractor::Kind::LinearProjection ? "linear" : "calibrated";
}

// ---------------------------------------------------------------------------
// PolicyPrior

struct PolicyPrior::Impl {
    std::string id;
    Kind kind;
    std::optional<std::size_t> dim;
    std::vector<FeatureCondition> conditions;
    std::optional<UnitVector> axis;
    double kappa = 0.0;
    std::vector<PolicyPrior> children;
    double value = 1.0;
};

PolicyPrior PolicyPrior::indicator(std::string id, std::vector<FeatureCondition> conditions) {
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->kind = Kind::IndicatorThreshold;
    for (const auto& c : conditions) {
        if (!std::isfinite(c.value)) throw PreconditionError("indicator threshold must be finite");
        if (impl->dim && *impl->dim != c.extractor.dim()) throw DimensionMismatch(*impl->dim, c.extractor.dim());
        impl->dim = c.extractor.dim();
    }
    impl->conditions = std::move(conditions);
    return PolicyPrior(std::move(impl));
}

PolicyPrior PolicyPrior::smooth_cap(std::string id, UnitVector axis, double kappa) {
    if (!(kappa >= 0.0 && std::isfinite(kappa))) throw PreconditionError("smooth cap concentration must be >= 0");
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->kind = Kind::SmoothCap;
    impl->dim = axis.dim();
    impl->axis = std::move(axis);
    impl->kappa = kappa;
    return PolicyPrior(std::move(impl));
}

PolicyPrior PolicyPrior::product(std::string id, std::vector<PolicyPrior> children) {
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->kind = Kind::Product;
    for (const auto& c : children) {
        if (const auto cd = c.dim()) {
            if (impl->dim && *impl->dim != *cd) throw DimensionMismatch(*impl->dim, *cd);
            impl->dim = cd;
        }
    }
    impl->children = std::move(children);
    return PolicyPrior(std::move(impl));
}

PolicyPrior PolicyPrior::constant(std::string id, double value) {
    if (!(value >= 0.0 && value <= 1.0)) throw PreconditionError("constant prior value must be in [0, 1]");
    auto impl = std::make_shared<Impl>();
    impl->id = std::move(id);
    impl->kind = Kind::Constant;
    impl->value = value;
    return PolicyPrior(std::move(impl));
}

const std::string& PolicyPrior::id() const noexcept { return impl_->id; }
PolicyPrior::Kind PolicyPrior::kind() const noexcept { return impl_->kind; }
std::optional<std::size_t> PolicyPrior::dim() const noexcept { return impl_->dim; }

const std::vector<FeatureCondition>& PolicyPrior::conditions() const {
    if (impl_->kind != Kind::IndicatorThreshold) throw PreconditionError("prior is not an indicator");
    return impl_->conditions;
}
const UnitVector& PolicyPrior::axis() const {
    if (impl_->kind != Kind::SmoothCap) throw PreconditionError("prior is not a smooth cap");
    return *impl_->axis;
}
double PolicyPrior::kappa() const {
    if (impl_->kind != Kind::SmoothCap) throw PreconditionError("prior is not a smooth cap");
    return impl_->kappa;
}
const std::vector<PolicyPrior>& PolicyPrior::children() const {
    if (impl_->kind != Kind::Product) throw PreconditionError("prior is not a product");
    return impl_->children;
}
double PolicyPrior::constant_value() const {
    if (impl_->kind != Kind::Constant) throw PreconditionError("prior is not a constant");
    return impl_->value;
}

double PolicyPrior::operator()(const UnitVector& mu) const {
    if (impl_->dim && *impl_->dim != mu.dim()) throw DimensionMismatch(*impl_->dim, mu.dim());
    switch (impl_->kind) {
    case Kind::IndicatorThreshold:
        for (const auto& c : impl_->conditions)
            if (!c.holds(mu)) return 0.0;
        return 1.0;
    case Kind::SmoothCap:
        return std::clamp(std::exp(impl_->kappa * (mu.dot(*impl_->axis) - 1.0)), 0.0, 1.0);
    case Kind::Product: {
        double v = 1.0;
        for (const auto& c : impl_->children) v *= c(mu);
        return v;
    }
    case Kind::Constant:
        return impl_->value;
    }
    return 0.0;
}

const char* to_string(PolicyPrior::Kind k) noexcept {
    switch (k) {
    case PolicyPrior::Kind::IndicatorThreshold: return "indicator";
    case PolicyPrior::Kind::SmoothCap: return "smooth_cap";
    case PolicyPrior::Kind::Product: return "product";
    case PolicyPrior::Kind::Constant: return "constant";
    }
    return "?";
}

double eval_prior(const PolicyPrior& prior, const UnitVector& mu) { return prior(mu); }

// ---------------------------------------------------------------------------
// Relaxation order

std::vector<FeatureCondition> indicator_conditions(const PolicyPrior& prior) {
    std::vector<FeatureCondition> out;
    if (prior.kind() == PolicyPrior::Kind::IndicatorThreshold) {
        out = prior.conditions();
    } else if (prior.kind() == PolicyPrior::Kind::Product) {
        for (const auto& c : prior.children()) {
            auto sub = indicator_conditions(c);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }
    return out;
}

namespace {

constexpr std::size_t kMaxCorners = 1u << 14;

struct AxisValues {
    const FeatureExtractor* extractor;
    std::vector<double> values;  // feature units
};

std::vector<AxisValues> corner_axes(const std::vector<FeatureCondition>& conditions) {
    std::vector<AxisValues> axes;
    for (const auto& c : conditions) {
        auto it = std::find_if(axes.begin(), axes.end(),
                               [&](const AxisValues& a) { return a.extractor->id() == c.extractor.id(); });
        if (it == axes.end()) {
            axes.push_back({&c.extractor, {}});
            it = axes.end() - 1;
        }
        it->values.push_back(c.value);
    }
    for (auto& a : axes) {
        std::vector<double> t = a.values;
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        std::set<double> vals;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double nudge = std::max(a.extractor->resolution(), 1e-7 * std::max(1.0, std::abs(t[i])));
            vals.insert(t[i]);
            vals.insert(t[i] - nudge);
            vals.insert(t[i] + nudge);
            if (i + 1 < t.size()) vals.insert(0.5 * (t[i] + t[i + 1]));
        }
        a.values.assign(vals.begin(), vals.end());
    }
    return axes;
}

// Unit vector whose projections onto the extractor directions equal `proj`:
// the least-norm solution completed with an orthogonal direction.
std::optional<UnitVector> realize(const Eigen::MatrixXd& dirs, const Eigen::MatrixXd& gram_inv,
                                  const Eigen::VectorXd& complement, const Eigen::VectorXd& proj) {
    Eigen::VectorXd x = dirs * (gram_inv * proj);
    const double sq = x.squaredNorm();
    if (sq > 1.0) return std::nullopt;
    if (complement.size() > 0) x += std::sqrt(1.0 - sq) * complement;
    if (x.norm() <= kZeroNormThreshold) return std::nullopt;
    return normalize(x);
}

}  // namespace

std::vector<UnitVector> relaxation_probes(const PolicyPrior& a, const PolicyPrior& b, std::size_t n_uniform,
                                          std::uint64_t seed) {
    std::size_t d = 3;
    if (a.dim()) d = *a.dim();
    else if (b.dim()) d = *b.dim();
    if (a.dim() && b.dim() && *a.dim() != *b.dim()) throw DimensionMismatch(*a.dim(), *b.dim());

    std::vector<UnitVector> probes;
    if (n_uniform > 0) probes = sample_uniform_sphere(d, n_uniform, seed);

    auto conditions = indicator_conditions(a);
    auto more = indicator_conditions(b);
    conditions.insert(conditions.end(), more.begin(), more.end());
    const auto axes = corner_axes(conditions);
    if (axes.empty()) return probes;

    const auto k = static_cast<Eigen::Index>(axes.size());
    Eigen::MatrixXd dirs(static_cast<Eigen::Index>(d), k);
    for (Eigen::Index j = 0; j < k; ++j) dirs.col(j) = axes[static_cast<std::size_t>(j)].extractor->direction().coords();
    const Eigen::MatrixXd gram = dirs.transpose() * dirs;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) return probes;  // dependent feature axes; uniform probes only
    const Eigen::MatrixXd gram_inv = lu.inverse();

    Eigen::VectorXd complement;
    {
        const Eigen::MatrixXd proj_out = Eigen::MatrixXd::Identity(dirs.rows(), dirs.rows()) - dirs * gram_inv * dirs.transpose();
        Eigen::Index best = 0;
        proj_out.colwise().norm().maxCoeff(&best);
        if (proj_out.col(best).norm() > 1e-9) complement = proj_out.col(best).normalized();
    }

    std::size_t total = 1;
    for (const auto& ax : axes) total = std::min(kMaxCorners, total * ax.values.size());
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t c = 0; c < total; ++c) {
        Eigen::VectorXd proj(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto& ax = axes[static_cast<std::size_t>(j)];
            proj[j] = ax.extractor->projection_for(ax.values[idx[static_cast<std::size_t>(j)]]);
        }
        if (auto mu = realize(dirs, gram_inv, complement, proj)) probes.push_back(std::move(*mu));
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (++idx[j] < axes[j].values.size()) break;
            idx[j] = 0;
        }
    }
    return probes;
}

RelaxationVerdict is_relaxation_on(const PolicyPrior& stricter, const PolicyPrior& looser,
                                   const std::vector<UnitVector>& probes) {
    RelaxationVerdict v;
    for (const auto& mu : probes) {
        ++v.probes_checked;
        if (looser(mu) < stricter(mu)) {
            v.status = RelaxationVerdict::Status::CounterexampleFound;
            v.counterexample = mu;
            return v;
        }
    }
    return v;
}

RelaxationVerdict is_relaxation(const PolicyPrior& stricter, const PolicyPrior& looser, std::size_t n_probes,
                                std::uint64_t seed) {
    if (n_probes < 1000) throw PreconditionError("is_relaxation needs at least 1000 probes");
    return is_relaxation_on(stricter, looser, relaxation_probes(stricter, looser, n_probes, seed));
}

bool indicator_thresholds_nested(const PolicyPrior& stricter, const PolicyPrior& looser) {
    if (stricter.kind() != PolicyPrior::Kind::IndicatorThreshold ||
        looser.kind() != PolicyPrior::Kind::IndicatorThreshold) {
        return false;
    }
    for (const auto& need : looser.conditions()) {
        const bool implied = std::any_of(stricter.conditions().begin(), stricter.conditions().end(), [&](const FeatureCondition& have) {
            if (have.extractor.id() != need.extractor.id() || have.op != need.op) return false;
            return need.op == Comparison::AtMost ? have.value <= need.value : have.value >= need.value;
        });
        if (!implied) return false;
    }
    return true;
}

const PolicyRegime& find_regime(const std::vector<PolicyRegime>& regimes, std::string_view name) {
    for (const auto& r : regimes)
        if (r.name == name) return r;
    throw PreconditionError("no regime named '" + std::string(name) + "'");
}

}  // namespace admit
