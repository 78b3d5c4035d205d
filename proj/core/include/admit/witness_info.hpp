#pragma once

#include "admit/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace admit {

/// Finite set of opaque witness identifiers, kept sorted and unique.
class DiscreteWitnessSet {
public:
    DiscreteWitnessSet() = default;
    explicit DiscreteWitnessSet(std::vector<std::uint64_t> ids);
    // Tokens are hashed with 64-bit FNV-1a.
    static DiscreteWitnessSet from_tokens(const std::vector<std::string>& tokens);

    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }
    const std::vector<std::uint64_t>& ids() const noexcept { return ids_; }
    bool contains(std::uint64_t id) const;

private:
    std::vector<std::uint64_t> ids_;
};

std::uint64_t token_id(std::string_view token) noexcept;

std::size_t intersection_size(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b);
std::size_t union_size(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b);

// |A ∩ B| / |A ∪ B|. Throws BothEmpty.
double jaccard(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b);

// log(n·m / (n + m − |A ∩ B|)) in nats for uniform distributions on A and B,
// taking the joint entropy as log|A ∪ B|. Throws EmptySet.
double mutual_information(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b);

/// One bit per bin: elements are hashed into m bins, each bin keeps its
/// minimum hash (empty bins borrow from the next occupied bin), and the stored
/// bit is a secondary hash of that minimum. Two sets agree on a bin with
/// probability J + (1 − J)/2.
struct WitnessSketch {
    std::vector<std::uint64_t> words;
    std::size_t m = 0;
    std::uint64_t hash_seed = 0;

    bool bit(std::size_t i) const { return (words.at(i / 64) >> (i % 64)) & 1u; }
    friend bool operator==(const WitnessSketch&, const WitnessSketch&) = default;
};

// Requires m >= 8.
WitnessSketch sketch(const DiscreteWitnessSet& a, std::size_t m, std::uint64_t seed);

// Number of agreeing bins. Sketches must share m and seed.
std::size_t sketch_agreement(const WitnessSketch& a, const WitnessSketch& b);

// 2·(agreement / m) − 1: the agreement rate with the 1/2 accidental collision
// rate removed. Unclamped, so it can fall slightly below 0.
double estimate_overlap(const WitnessSketch& a, const WitnessSketch& b);

struct CapacityOptions {
    // Elements per set; 0 picks ceil(64 / Δ²) (at least 256) so that sets stay
    // larger than the sketch sizes the sweep reaches.
    std::size_t set_size = 0;
    double base_overlap = 0.1;  // Jaccard of non-neighbours with the query
    double target_accuracy = 0.95;
    std::size_t m_min = 8;
    std::size_t m_max = 1u << 16;
    double grid_factor = 1.189207115002721;  // 2^(1/4)
    std::size_t threads = 1;
};

struct CapacityRow {
    std::size_t n_items;
    double delta_gap;
    std::size_t m;
    double accuracy;
    bool m_star;
};

struct CapacityResult {
    std::size_t n_items = 0;
    double delta_gap = 0.0;
    std::size_t trials = 0;
    std::size_t set_size = 0;
    std::vector<CapacityRow> rows;
    std::optional<std::size_t> m_star;
};

/// Plants one true neighbour (Jaccard base + Δ with the query) among N items
/// (the rest at the base overlap) and sweeps m on a geometric grid, scoring a
/// trial as correct when the neighbour has strictly the highest sketch
/// agreement. Each trial keeps its sets and hash seed across the sweep. The
/// sweep stops once two consecutive grid points reach the target accuracy;
/// m* is the first of them. Requires N >= 16 and Δ in (0, 0.5).
CapacityResult capacity_experiment(std::size_t n_items, double delta_gap, std::size_t trials, std::uint64_t seed,
                                   const CapacityOptions& opts = {});

// Header N,delta_gap,m,accuracy,m_star_flag then one line per row.
std::string capacity_csv(const std::vector<CapacityResult>& results);

}  // namespace admit
