#include "admit/admissibility.hpp"

#include "admit/parallel.hpp"

#include <cmath>
#include <numbers>

namespace admit {

CapRegion::CapRegion(std::vector<Cap> caps) : caps_(std::move(caps)) {
    if (caps_.empty()) throw PreconditionError("cap region needs at least one cap");
    const std::size_t d = caps_.front().axis.dim();
    for (const auto& c : caps_) {
        if (c.axis.dim() != d) throw DimensionMismatch(d, c.axis.dim());
        if (!(c.cos_threshold > -1.0 && c.cos_threshold <= 1.0)) {
            throw PreconditionError("cap cos_threshold must be in (-1, 1]");
        }
    }
}

CapRegion cap_region_from(const WitnessSet& w, double theta) {
    if (!(theta > 0.0 && theta <= std::numbers::pi / 2)) {
        throw PreconditionError("cap half-angle must be in (0, pi/2]");
    }
    // cos(pi/2) is 6e-17 in floating point; the hemisphere boundary is exactly 0.
    const double threshold = theta == std::numbers::pi / 2 ? 0.0 : std::cos(theta);
    std::vector<Cap> caps;
    caps.reserve(w.size());
    for (const auto& axis : w.witnesses()) caps.push_back(Cap{axis, threshold});
    return CapRegion(std::move(caps));
}

bool cap_contains(const CapRegion& region, const UnitVector& mu) {
    for (const auto& cap : region.caps())
        if (!(mu.dot(cap.axis) >= cap.cos_threshold)) return false;
    return true;
}

VolumeEstimate cap_volume(const CapRegion& region, std::size_t n_samples, std::uint64_t seed, std::size_t threads) {
    if (n_samples < 1) throw PreconditionError("cap_volume needs at least one sample");
    const std::size_t d = region.dim();
    std::vector<unsigned char> hit(n_samples, 0);
    parallel_chunks(n_samples, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) hit[i] = cap_contains(region, sample_uniform_point(d, seed, i)) ? 1 : 0;
    });
    VolumeEstimate est;
    est.samples = n_samples;
    for (auto h : hit) est.hits += h;
    est.fraction = static_cast<double>(est.hits) / static_cast<double>(n_samples);
    est.std_error = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(n_samples));
    est.degenerate = est.hits == 0;
    return est;
}

}  // namespace admit
