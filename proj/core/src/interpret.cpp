#include "admit/interpret.hpp"

#include "admit/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace admit {

namespace {

constexpr std::uint64_t kRestartTag = 0x5245535441525453ull;  // "RESTARTS"

// Returns nullopt for points the objective refuses to score.
using Objective = std::function<std::optional<double>(const UnitVector&)>;

struct Candidate {
    Eigen::VectorXd alpha;
    UnitVector point;
    double value;
    bool scored;
};

struct SearchResult {
    std::optional<Candidate> best;
    OptimizerTrace trace;
};

class Search {
public:
    Search(const AdmissibleRegion& region, Objective objective, std::optional<double> stop_at, const OptimizerOptions& opts)
        : region_(region), g_(region.matrix()), objective_(std::move(objective)), stop_at_(stop_at), opts_(opts) {}

    SearchResult run() {
        const auto n = g_.cols();
        // Seed candidates: center, then generators, then the best draw of each restart.
        {
            Eigen::VectorXd alpha = Eigen::Map<const Eigen::VectorXd>(region_.certificate().weights.data(), n);
            if (consider(std::move(alpha))) return finish();
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            if (consider(Eigen::VectorXd::Unit(n, i))) return finish();
        }
        for (auto& alpha : restart_seeds()) {
            if (consider(std::move(alpha))) return finish();
        }
        trace_.restarts = opts_.restarts;

        for (std::size_t k = 0; k < seeds_.size(); ++k) {
            if (refine(seeds_[k])) return finish();
        }
        return finish();
    }

private:
    SearchResult finish() {
        SearchResult r;
        r.best = best_;
        r.trace = trace_;
        return r;
    }

    Candidate score(Eigen::VectorXd alpha) {
        ++trace_.iterations;
        UnitVector mu = normalize(Eigen::VectorXd(g_ * alpha));
        const auto v = objective_(mu);
        return Candidate{std::move(alpha), std::move(mu), v.value_or(0.0), v.has_value()};
    }

    bool better(const Candidate& a, const Candidate& b) const {
        if (!a.scored) return false;
        if (!b.scored) return true;
        if (a.value != b.value) return a.value > b.value;
        return less_in_frame(a.point, b.point);
    }

    bool less_in_frame(const UnitVector& a, const UnitVector& b) const {
        if (opts_.frame) return lexicographic_less(opts_.frame->apply_inverse(a), opts_.frame->apply_inverse(b));
        return lexicographic_less(a, b);
    }

    bool record(const Candidate& c) {
        if (!best_ || better(c, *best_)) best_ = c;
        return stop_at_ && c.scored && c.value >= *stop_at_;
    }

    bool consider(Eigen::VectorXd alpha) {
        ++trace_.candidates;
        Candidate c = score(std::move(alpha));
        seeds_.push_back(c);
        return record(c);
    }

    std::vector<Eigen::VectorXd> restart_seeds() {
        const std::size_t per = std::max<std::size_t>(1, opts_.samples_per_restart);
        const std::size_t total = per * opts_.restarts;
        if (total == 0) return {};
        RegionSampleOptions so;
        so.proposal_budget = opts_.proposal_budget;
        // Failing to fill the request always means the region is too thin to
        // hit by rejection, so fall back instead of raising.
        so.min_acceptance = std::max(so.min_acceptance, 2.0 * static_cast<double>(total) / static_cast<double>(so.proposal_budget));
        so.membership_tol = opts_.membership_tol;
        so.frame = opts_.frame;
        const RegionSample sample = sample_region(region_, total, derive_stream(opts_.seed, kRestartTag), so);

        std::vector<Eigen::VectorXd> out;
        for (std::size_t r = 0; r < opts_.restarts; ++r) {
            std::optional<Candidate> pick;
            for (std::size_t k = r * per; k < (r + 1) * per; ++k) {
                Eigen::VectorXd alpha = sample.weights[k];
                const double s = alpha.sum();
                if (!(s > 0.0)) continue;
                alpha /= s;
                Candidate c = score(std::move(alpha));
                if (!pick || better(c, *pick)) pick = std::move(c);
            }
            if (pick) out.push_back(std::move(pick->alpha));
        }
        return out;
    }

    // Coordinate ascent on the simplex: move weight between pairs of
    // generators, halving the transfer size when no move improves.
    bool refine(Candidate cur) {
        const auto n = cur.alpha.size();
        if (n < 2) return false;
        std::size_t evals = 0;
        for (double step = 0.5; step >= opts_.min_step && evals < opts_.max_evaluations;) {
            bool improved = false;
            for (Eigen::Index i = 0; i < n && evals < opts_.max_evaluations; ++i) {
                for (Eigen::Index j = 0; j < n && evals < opts_.max_evaluations; ++j) {
                    if (i == j || !(cur.alpha[i] > 0.0)) continue;
                    const double t = std::min(step, cur.alpha[i]);
                    Eigen::VectorXd alpha = cur.alpha;
                    alpha[i] -= t;
                    alpha[j] += t;
                    if (alpha[i] < 1e-15) alpha[i] = 0.0;
                    ++evals;
                    Candidate next = score(std::move(alpha));
                    if (better(next, cur) && (!cur.scored || next.value > cur.value)) {
                        trace_.final_gap = cur.scored ? next.value - cur.value : 0.0;
                        cur = std::move(next);
                        improved = true;
                        if (record(cur)) return true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        return record(cur);
    }

    const AdmissibleRegion& region_;
    const Eigen::MatrixXd& g_;
    Objective objective_;
    std::optional<double> stop_at_;
    const OptimizerOptions& opts_;
    std::vector<Candidate> seeds_;
    std::optional<Candidate> best_;
    OptimizerTrace trace_;
};

void check_options(const OptimizerOptions& opts) {
    if (opts.restarts < 8) throw PreconditionError("optimizer needs at least 8 restarts");
    if (opts.samples_per_restart < 1) throw PreconditionError("samples_per_restart must be >= 1");
    if (!(opts.min_step > 0.0 && opts.min_step < 0.5)) throw PreconditionError("min_step must be in (0, 0.5)");
}

Refusal contradiction(const FeasibilityCertificate& cert) {
    Refusal r{RefusalReason::Contradiction, kContradictionMessage, cert, std::nullopt, 0.0, 0.0, {}};
    return r;
}

Outcome conclude(const AdmissibleRegion& region, const SearchResult& found, const PolicyPrior& prior, double tau,
                 const OptimizerOptions& opts) {
    if (!found.best || !found.best->scored) {
        Refusal r{RefusalReason::PolicyExclusion, kPolicyExclusionMessage, std::nullopt, std::nullopt, 0.0, 0.0, found.trace};
        return r;
    }
    const Candidate& best = *found.best;
    const double value = prior(best.point);
    if (!(value >= tau)) {
        Refusal r{RefusalReason::PolicyExclusion, kPolicyExclusionMessage, std::nullopt, best.point, value, 0.0, found.trace};
        return r;
    }
    if (!contains(region, best.point, opts.membership_tol)) {
        throw std::logic_error("optimizer returned a point outside the admissible region");
    }
    return Interpretation{best.point, value, best.value, found.trace};
}

}  // namespace

const char* to_string(RefusalReason r) noexcept {
    switch (r) {
    case RefusalReason::Contradiction: return "Contradiction";
    case RefusalReason::PolicyExclusion: return "PolicyExclusion";
    case RefusalReason::VerificationFailure: return "VerificationFailure";
    }
    return "?";
}

Outcome interpret(const WitnessSet& w, const PolicyRegime& regime, const OptimizerOptions& opts) {
    check_options(opts);
    if (const auto d = regime.prior.dim(); d && *d != w.dim()) throw DimensionMismatch(*d, w.dim());
    std::optional<AdmissibleRegion> region;
    try {
        region.emplace(build_region(w, opts.feasibility_tol));
    } catch (const ContradictionError& e) {
        return contradiction(e.certificate());
    }
    const PolicyPrior& prior = regime.prior;
    Search search(*region, [&](const UnitVector& mu) { return std::optional<double>(prior(mu)); }, 1.0, opts);
    return conclude(*region, search.run(), prior, regime.tau, opts);
}

Outcome map_interpret(const WitnessSet& w, const LogLikelihood& log_likelihood, const PolicyPrior& prior, double tau,
                      const OptimizerOptions& opts) {
    check_options(opts);
    if (const auto d = prior.dim(); d && *d != w.dim()) throw DimensionMismatch(*d, w.dim());
    std::optional<AdmissibleRegion> region;
    try {
        region.emplace(build_region(w, opts.feasibility_tol));
    } catch (const ContradictionError& e) {
        return contradiction(e.certificate());
    }
    Search search(*region,
                  [&](const UnitVector& mu) -> std::optional<double> {
                      const double rho = prior(mu);
                      if (!(rho > 0.0)) return std::nullopt;
                      return log_likelihood(mu) + std::log(rho);
                  },
                  std::nullopt, opts);
    return conclude(*region, search.run(), prior, tau, opts);
}

}  // namespace admit
