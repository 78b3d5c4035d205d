#pragma once

#include "admit/errors.hpp"
#include "admit/sphere.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace admit {

inline constexpr double kDefaultFeasibilityTol = 1e-6;
inline constexpr double kDefaultMembershipTol = 1e-6;

/// Finite, ordered set of witnesses sharing one dimension. Bitwise duplicates
/// are collapsed on construction; their source labels are merged onto the
/// first occurrence.
class WitnessSet {
public:
    explicit WitnessSet(std::vector<UnitVector> witnesses, std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return witnesses_.size(); }
    std::size_t dim() const noexcept { return witnesses_.front().dim(); }
    const UnitVector& operator[](std::size_t i) const { return witnesses_.at(i); }
    const std::vector<UnitVector>& witnesses() const noexcept { return witnesses_; }
    // Provenance of witness i (possibly several after duplicate merging; possibly empty).
    const std::vector<std::string>& sources(std::size_t i) const { return sources_.at(i); }

    // d × n matrix whose columns are the witnesses.
    Eigen::MatrixXd matrix() const;

    WitnessSet rotated(const Rotation& g) const;
    WitnessSet with(const UnitVector& w, std::string label = {}) const;

private:
    WitnessSet() = default;
    std::vector<UnitVector> witnesses_;
    std::vector<std::vector<std::string>> sources_;
};

enum class Coherence { Coherent, Contradictory };

const char* to_string(Coherence c) noexcept;

/// Outcome of the hemisphere test. For a coherent set, `center` is a direction
/// with center·wᵢ >= min_margin > 0 for every witness; for a contradictory set
/// `witness_pair` names the most opposed pair when some wᵢ·wⱼ < 0.
struct FeasibilityCertificate {
    Coherence status = Coherence::Contradictory;
    std::optional<UnitVector> center;
    double min_margin = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> witness_pair;

    // Solver diagnostics: ‖p‖ for the final iterate p in conv(W), its simplex
    // weights, the Frank–Wolfe duality gap, and iterations used.
    double hull_distance = 0.0;
    std::vector<double> weights;
    double duality_gap = 0.0;
    int iterations = 0;
    bool converged = true;
    double tolerance = kDefaultFeasibilityTol;
    std::size_t generator_count = 0;

    bool coherent() const noexcept { return status == Coherence::Coherent; }
};

/// Hemisphere feasibility via the minimum-norm point of conv(W).
///
/// Runs away-step Frank–Wolfe over the simplex of weights. The set is coherent
/// iff the minimum-norm point p* satisfies ‖p*‖ > tol, in which case p*/‖p*‖ is
/// a certified hemisphere center. Iteration stops once the duality gap drops
/// below min(tol², 1e-15) or the iterate norm falls to tol (origin within tol
/// of the hull). If the iteration cap is hit first the decision falls back to
/// certified bounds and otherwise classifies as contradictory.
///
/// Throws ToleranceOutOfRange unless tol is in (0, 1e-3].
FeasibilityCertificate check_feasibility(const WitnessSet& w, double tol = kDefaultFeasibilityTol);

class ContradictionError : public Error {
public:
    explicit ContradictionError(FeasibilityCertificate cert)
        : Error("witness set is contradictory: no open hemisphere contains it"), certificate_(std::move(cert)) {}

    const FeasibilityCertificate& certificate() const noexcept { return certificate_; }

private:
    FeasibilityCertificate certificate_;
};

/// Spherical convex hull of a coherent witness set: all normalized nonnegative
/// combinations of the generators.
class AdmissibleRegion {
public:
    const WitnessSet& generators() const noexcept { return generators_; }
    const FeasibilityCertificate& certificate() const noexcept { return certificate_; }
    const UnitVector& center() const { return *certificate_.center; }
    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return generators_.dim(); }
    // Rank of the generator matrix; regions with rank < d have zero volume.
    std::size_t rank() const noexcept { return rank_; }

private:
    friend AdmissibleRegion build_region(const WitnessSet& w, double tol);
    AdmissibleRegion(WitnessSet g, FeasibilityCertificate c);

    WitnessSet generators_;
    FeasibilityCertificate certificate_;
    Eigen::MatrixXd matrix_;
    std::size_t rank_ = 0;
};

// Throws ContradictionError (carrying the certificate) when W is contradictory.
AdmissibleRegion build_region(const WitnessSet& w, double tol = kDefaultFeasibilityTol);

struct Membership {
    bool inside = false;
    double residual = 0.0;    // min over α >= 0 of ‖Gα − μ‖
    Eigen::VectorXd weights;  // the minimizing α (empty when rejected without solving)
};

// Conic-hull membership decided by nonnegative least squares of μ against the
// generators with residual threshold tol.
Membership membership(const AdmissibleRegion& region, const UnitVector& mu, double tol = kDefaultMembershipTol);
bool contains(const AdmissibleRegion& region, const UnitVector& mu, double tol = kDefaultMembershipTol);

/// Monte-Carlo fraction of the sphere with a standard error. Estimates whose
/// relative error exceeds 50% are not quoted.
struct VolumeEstimate {
    double fraction = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    std::size_t hits = 0;
    // Contradictory sets have ambiguity 1 by convention (not sampled).
    bool contradictory = false;
    // Set when the estimate is 0 or the region is lower dimensional; such a
    // region has measure zero even though ambiguity is nominally in (0, 1].
    bool degenerate = false;

    double relative_error() const noexcept;
    std::optional<double> quote() const noexcept;
};

struct MonteCarloOptions {
    std::size_t threads = 1;
    double membership_tol = kDefaultMembershipTol;
    double feasibility_tol = kDefaultFeasibilityTol;
};

// Ambiguity of W as the volume fraction of its admissible region; exactly 1
// for contradictory sets. Requires n_samples >= 1000.
VolumeEstimate ambiguity(const WitnessSet& w, std::size_t n_samples, std::uint64_t seed,
                         const MonteCarloOptions& opts = {});

struct RegionSampleOptions {
    std::size_t proposal_budget = 1'000'000;
    double min_acceptance = 1e-4;
    double membership_tol = kDefaultMembershipTol;
    // Proposals are drawn in this frame (g applied to base-frame draws).
    std::optional<Rotation> frame;
    std::size_t threads = 1;
};

struct RegionSample {
    std::vector<UnitVector> points;
    std::vector<Eigen::VectorXd> weights;  // generator weights reproducing each point
    bool uniform = true;                   // false when the Dirichlet fallback was used
    std::size_t proposals = 0;
    std::size_t accepted = 0;
};

/// Uniform samples from the region by rejection from uniform sphere proposals.
/// Falls back to normalized Dirichlet(1,…,1) combinations of the generators,
/// flagged non-uniform, when acceptance stays below min_acceptance over the
/// proposal budget, or immediately when the region is lower dimensional (its
/// acceptance probability is exactly zero). Throws EmptySampleBudget when
/// rejection is not hopeless yet still yields fewer than n points.
RegionSample sample_region(const AdmissibleRegion& region, std::size_t n, std::uint64_t seed,
                           const RegionSampleOptions& opts = {});

// ---------------------------------------------------------------------------
// Intersection-of-caps region: each witness w contributes {μ : μ·w >= cos θ}.
// Unlike the hull, this region shrinks as witnesses are added.

struct Cap {
    UnitVector axis;
    double cos_threshold;
};

class CapRegion {
public:
    explicit CapRegion(std::vector<Cap> caps);
    const std::vector<Cap>& caps() const noexcept { return caps_; }
    std::size_t dim() const { return caps_.front().axis.dim(); }

private:
    std::vector<Cap> caps_;
};

// theta in (0, pi/2]; pi/2 gives the hemisphere {μ·w >= 0} per witness.
CapRegion cap_region_from(const WitnessSet& w, double theta = std::numbers::pi / 2);
bool cap_contains(const CapRegion& region, const UnitVector& mu);
VolumeEstimate cap_volume(const CapRegion& region, std::size_t n_samples, std::uint64_t seed,
                          std::size_t threads = 1);

}  // namespace admit
