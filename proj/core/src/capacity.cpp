#include "admit/witness_info.hpp"

#include "admit/parallel.hpp"
#include "admit/random.hpp"
#include "sketch_bins.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace admit {

namespace {

// Shared element count giving Jaccard j between two sets of size s.
std::size_t shared_for(double j, std::size_t s) {
    return static_cast<std::size_t>(std::llround(2.0 * static_cast<double>(s) * j / (1.0 + j)));
}

struct TrialSets {
    std::vector<std::uint64_t> query;  // element hashes
    std::vector<std::uint64_t> items;  // n_items rows of set_size hashes
};

TrialSets build_trial(std::size_t n_items, std::size_t set_size, std::size_t shared_true, std::size_t shared_other,
                      std::uint64_t trial_seed) {
    TrialSets t;
    t.query.resize(set_size);
    for (std::size_t e = 0; e < set_size; ++e) t.query[e] = detail::element_hash(e, trial_seed);
    t.items.resize(n_items * set_size);

    CounterRng rng(trial_seed, 0);
    std::vector<std::size_t> order(set_size);
    std::uint64_t fresh = set_size;
    for (std::size_t k = 0; k < n_items; ++k) {
        const std::size_t shared = k == 0 ? shared_true : shared_other;
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = 0; i < shared; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(set_size - i));
            std::swap(order[i], order[j]);
        }
        std::uint64_t* row = t.items.data() + k * set_size;
        for (std::size_t i = 0; i < shared; ++i) row[i] = t.query[order[i]];
        for (std::size_t i = shared; i < set_size; ++i) row[i] = detail::element_hash(fresh++, trial_seed);
    }
    return t;
}

std::vector<std::size_t> m_grid(const CapacityOptions& opts) {
    std::vector<std::size_t> grid;
    for (double m = static_cast<double>(opts.m_min); m <= static_cast<double>(opts.m_max) + 0.5; m *= opts.grid_factor) {
        const auto v = static_cast<std::size_t>(std::llround(m));
        if (grid.empty() || v > grid.back()) grid.push_back(v);
    }
    return grid;
}

}  // namespace

CapacityResult capacity_experiment(std::size_t n_items, double delta_gap, std::size_t trials, std::uint64_t seed,
                                   const CapacityOptions& opts) {
    if (n_items < 16) throw PreconditionError("capacity experiment needs N >= 16");
    if (!(delta_gap > 0.0 && delta_gap < 0.5)) throw PreconditionError("delta_gap must be in (0, 0.5)");
    if (trials < 1) throw PreconditionError("capacity experiment needs at least one trial");
    if (opts.m_min < 8 || !(opts.grid_factor > 1.0)) throw PreconditionError("invalid m grid");
    if (!(opts.base_overlap >= 0.0 && opts.base_overlap + delta_gap <= 1.0)) {
        throw PreconditionError("base overlap plus gap must stay within [0, 1]");
    }

    CapacityResult result;
    result.n_items = n_items;
    result.delta_gap = delta_gap;
    result.trials = trials;
    result.set_size = opts.set_size > 0
                          ? opts.set_size
                          : std::max<std::size_t>(256, static_cast<std::size_t>(std::ceil(64.0 / (delta_gap * delta_gap))));
    const std::size_t shared_true = shared_for(opts.base_overlap + delta_gap, result.set_size);
    const std::size_t shared_other = shared_for(opts.base_overlap, result.set_size);

    // Trial sets depend only on the trial seed, so each build is scored
    // against a block of consecutive grid points.
    constexpr std::size_t kBlock = 4;
    const std::vector<std::size_t> grid = m_grid(opts);
    std::size_t consecutive = 0;
    for (std::size_t first = 0; first < grid.size() && !result.m_star; first += kBlock) {
        const std::vector<std::size_t> block(grid.begin() + static_cast<std::ptrdiff_t>(first),
                                             grid.begin() + static_cast<std::ptrdiff_t>(std::min(grid.size(), first + kBlock)));
        std::vector<unsigned char> correct(trials * block.size(), 0);
        parallel_chunks(trials, opts.threads, [&](std::size_t begin, std::size_t end) {
            std::vector<std::uint64_t> mins, query_bits, item_bits;
            for (std::size_t t = begin; t < end; ++t) {
                const std::uint64_t trial_seed = derive_stream(seed, t);
                const TrialSets sets = build_trial(n_items, result.set_size, shared_true, shared_other, trial_seed);
                for (std::size_t b = 0; b < block.size(); ++b) {
                    const std::size_t m = block[b];
                    detail::sketch_bits(sets.query.data(), sets.query.size(), m, trial_seed, mins, query_bits);
                    std::size_t best_other = 0;
                    std::size_t truth = 0;
                    for (std::size_t k = 0; k < n_items; ++k) {
                        detail::sketch_bits(sets.items.data() + k * result.set_size, result.set_size, m, trial_seed,
                                            mins, item_bits);
                        std::size_t differ = 0;
                        for (std::size_t w = 0; w < item_bits.size(); ++w) {
                            differ += static_cast<std::size_t>(std::popcount(item_bits[w] ^ query_bits[w]));
                        }
                        const std::size_t agree = m - differ;
                        if (k == 0) truth = agree;
                        else best_other = std::max(best_other, agree);
                    }
                    correct[b * trials + t] = truth > best_other ? 1 : 0;  // ties count as misses
                }
            }
        });
        for (std::size_t b = 0; b < block.size(); ++b) {
            const auto row_begin = correct.begin() + static_cast<std::ptrdiff_t>(b * trials);
            const double accuracy = static_cast<double>(std::accumulate(row_begin, row_begin + static_cast<std::ptrdiff_t>(trials), std::size_t{0})) /
                                    static_cast<double>(trials);
            result.rows.push_back(CapacityRow{n_items, delta_gap, block[b], accuracy, false});
            consecutive = accuracy >= opts.target_accuracy ? consecutive + 1 : 0;
            if (consecutive == 2) {
                auto& hit = result.rows[result.rows.size() - 2];
                hit.m_star = true;
                result.m_star = hit.m;
                break;
            }
        }
    }
    return result;
}

std::string capacity_csv(const std::vector<CapacityResult>& results) {
    std::string out = "N,delta_gap,m,accuracy,m_star_flag\n";
    char line[128];
    for (const auto& r : results) {
        for (const auto& row : r.rows) {
            std::snprintf(line, sizeof line, "%zu,%.6g,%zu,%.6f,%d\n", row.n_items, row.delta_gap, row.m, row.accuracy,
                          row.m_star ? 1 : 0);
            out += line;
        }
    }
    return out;
}

}  // namespace admit
