#include "admit/admissibility.hpp"

#include "admit/nnls.hpp"
#include "admit/parallel.hpp"
#include "admit/random.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>

namespace admit {

namespace {

constexpr std::uint64_t kDirichletTag = 0x444952494348ull;  // "DIRICH"
constexpr std::size_t kProposalBatch = 4096;

}  // namespace

AdmissibleRegion::AdmissibleRegion(WitnessSet g, FeasibilityCertificate c)
    : generators_(std::move(g)), certificate_(std::move(c)), matrix_(generators_.matrix()) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(matrix_);
    qr.setThreshold(1e-10);
    rank_ = static_cast<std::size_t>(qr.rank());
}

AdmissibleRegion build_region(const WitnessSet& w, double tol) {
    FeasibilityCertificate cert = check_feasibility(w, tol);
    if (!cert.coherent()) throw ContradictionError(std::move(cert));
    return AdmissibleRegion(w, std::move(cert));
}

Membership membership(const AdmissibleRegion& region, const UnitVector& mu, double tol) {
    if (mu.dim() != region.dim()) throw DimensionMismatch(region.dim(), mu.dim());
    Membership m;
    // Every unit point of the cone has center·μ >= min_margin, and a point with
    // center·μ <= 0 is at distance >= margin/sqrt(1+margin²) from the cone, so
    // it is rejected without solving when that bound already exceeds tol.
    const double margin = region.certificate().min_margin;
    if (margin > 2.0 * tol && region.center().dot(mu) <= 0.0) {
        m.inside = false;
        m.residual = margin / std::sqrt(1.0 + margin * margin);
        return m;
    }
    NnlsResult fit = solve_nnls(region.matrix(), mu.coords());
    m.residual = fit.residual;
    m.inside = fit.residual <= tol && fit.x.sum() > 0.0;
    m.weights = std::move(fit.x);
    return m;
}

bool contains(const AdmissibleRegion& region, const UnitVector& mu, double tol) {
    return membership(region, mu, tol).inside;
}

double VolumeEstimate::relative_error() const noexcept {
    if (fraction > 0.0) return std_error / fraction;
    return std::numeric_limits<double>::infinity();
}

std::optional<double> VolumeEstimate::quote() const noexcept {
    if (contradictory) return fraction;
    if (relative_error() > 0.5) return std::nullopt;
    return fraction;
}

namespace {

template <typename Pred>
VolumeEstimate monte_carlo_fraction(std::size_t d, std::size_t n_samples, std::uint64_t seed,
                                    std::size_t threads, Pred&& inside) {
    std::vector<unsigned char> hit(n_samples, 0);
    parallel_chunks(n_samples, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) hit[i] = inside(sample_uniform_point(d, seed, i)) ? 1 : 0;
    });
    VolumeEstimate est;
    est.samples = n_samples;
    for (auto h : hit) est.hits += h;
    est.fraction = static_cast<double>(est.hits) / static_cast<double>(n_samples);
    est.std_error = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(n_samples));
    est.degenerate = est.hits == 0;
    return est;
}

}  // namespace

VolumeEstimate ambiguity(const WitnessSet& w, std::size_t n_samples, std::uint64_t seed,
                         const MonteCarloOptions& opts) {
    if (n_samples < 1000) throw PreconditionError("ambiguity requires at least 1000 samples");
    FeasibilityCertificate cert = check_feasibility(w, opts.feasibility_tol);
    if (!cert.coherent()) {
        VolumeEstimate est;
        est.fraction = 1.0;
        est.contradictory = true;
        return est;
    }
    const AdmissibleRegion region = build_region(w, opts.feasibility_tol);
    VolumeEstimate est = monte_carlo_fraction(region.dim(), n_samples, seed, opts.threads,
                                              [&](const UnitVector& mu) { return contains(region, mu, opts.membership_tol); });
    if (region.rank() < region.dim()) est.degenerate = true;
    return est;
}

RegionSample sample_region(const AdmissibleRegion& region, std::size_t n, std::uint64_t seed,
                           const RegionSampleOptions& opts) {
    if (n < 1) throw PreconditionError("sample count must be >= 1");
    const std::size_t d = region.dim();
    if (opts.frame && opts.frame->dim() != d) throw DimensionMismatch(d, opts.frame->dim());

    RegionSample out;
    const bool full_dimensional = region.rank() == d;
    if (full_dimensional) {
        std::vector<Membership> batch(kProposalBatch);
        std::vector<std::optional<UnitVector>> proposals(kProposalBatch);
        while (out.points.size() < n && out.proposals < opts.proposal_budget) {
            const std::size_t count = std::min(kProposalBatch, opts.proposal_budget - out.proposals);
            const std::size_t base = out.proposals;
            parallel_chunks(count, opts.threads, [&](std::size_t begin, std::size_t end) {
                for (std::size_t k = begin; k < end; ++k) {
                    UnitVector mu = sample_uniform_point(d, seed, base + k);
                    if (opts.frame) mu = opts.frame->apply(mu);
                    batch[k] = membership(region, mu, opts.membership_tol);
                    proposals[k] = std::move(mu);
                }
            });
            for (std::size_t k = 0; k < count && out.points.size() < n; ++k) {
                ++out.proposals;
                if (batch[k].inside) {
                    ++out.accepted;
                    out.points.push_back(*proposals[k]);
                    out.weights.push_back(batch[k].weights);
                }
            }
        }
        if (out.points.size() >= n) return out;

        const double acceptance =
            out.proposals > 0 ? static_cast<double>(out.accepted) / static_cast<double>(out.proposals) : 0.0;
        if (acceptance >= opts.min_acceptance) {
            throw EmptySampleBudget("rejection sampling produced " + std::to_string(out.points.size()) + " of " +
                                    std::to_string(n) + " points within the proposal budget");
        }
    }

    // Dirichlet(1, ..., 1) weights on the generators, normalized onto the sphere.
    out.uniform = false;
    out.points.clear();
    out.weights.clear();
    const Eigen::MatrixXd& g = region.matrix();
    const auto k = g.cols();
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(derive_stream(seed, kDirichletTag), i);
        Eigen::VectorXd alpha(k);
        for (Eigen::Index j = 0; j < k; ++j) alpha[j] = rng.exponential();
        alpha /= alpha.sum();
        out.points.push_back(normalize(Eigen::VectorXd(g * alpha)));
        out.weights.push_back(std::move(alpha));
    }
    return out;
}

}  // namespace admit
