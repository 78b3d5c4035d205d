#include "admit/witness_info.hpp"

#include "sketch_bins.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace admit {

DiscreteWitnessSet::DiscreteWitnessSet(std::vector<std::uint64_t> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

std::uint64_t token_id(std::string_view token) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

DiscreteWitnessSet DiscreteWitnessSet::from_tokens(const std::vector<std::string>& tokens) {
    std::vector<std::uint64_t> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(token_id(t));
    return DiscreteWitnessSet(std::move(ids));
}

bool DiscreteWitnessSet::contains(std::uint64_t id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

std::size_t intersection_size(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b) {
    std::size_t count = 0;
    auto i = a.ids().begin();
    auto j = b.ids().begin();
    while (i != a.ids().end() && j != b.ids().end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

std::size_t union_size(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b) {
    return a.size() + b.size() - intersection_size(a, b);
}

double jaccard(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b) {
    if (a.empty() && b.empty()) throw BothEmpty();
    return static_cast<double>(intersection_size(a, b)) / static_cast<double>(union_size(a, b));
}

double mutual_information(const DiscreteWitnessSet& a, const DiscreteWitnessSet& b) {
    if (a.empty() || b.empty()) throw EmptySet();
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double overlap = static_cast<double>(intersection_size(a, b));
    return std::log(n * m / (n + m - overlap));
}

WitnessSketch sketch(const DiscreteWitnessSet& a, std::size_t m, std::uint64_t seed) {
    if (m < 8) throw PreconditionError("sketch needs at least 8 bits");
    std::vector<std::uint64_t> hashes;
    hashes.reserve(a.size());
    for (auto id : a.ids()) hashes.push_back(detail::element_hash(id, seed));
    WitnessSketch s;
    s.m = m;
    s.hash_seed = seed;
    std::vector<std::uint64_t> mins;
    detail::sketch_bits(hashes.data(), hashes.size(), m, seed, mins, s.words);
    return s;
}

std::size_t sketch_agreement(const WitnessSketch& a, const WitnessSketch& b) {
    if (a.m != b.m || a.hash_seed != b.hash_seed) throw PreconditionError("sketches differ in size or seed");
    std::size_t differ = 0;
    for (std::size_t w = 0; w < a.words.size(); ++w) differ += static_cast<std::size_t>(std::popcount(a.words[w] ^ b.words[w]));
    return a.m - differ;
}

double estimate_overlap(const WitnessSketch& a, const WitnessSketch& b) {
    const double agree = static_cast<double>(sketch_agreement(a, b)) / static_cast<double>(a.m);
    return 2.0 * agree - 1.0;
}

}  // namespace admit
