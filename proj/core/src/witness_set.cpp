#include "admit/admissibility.hpp"

namespace admit {

WitnessSet::WitnessSet(std::vector<UnitVector> witnesses, std::vector<std::string> labels) {
    if (witnesses.empty()) throw PreconditionError("witness set must be nonempty");
    if (!labels.empty() && labels.size() != witnesses.size()) {
        throw PreconditionError("witness labels must match witness count");
    }
    const std::size_t d = witnesses.front().dim();
    for (std::size_t i = 0; i < witnesses.size(); ++i) {
        if (witnesses[i].dim() != d) throw DimensionMismatch(d, witnesses[i].dim());
        std::size_t existing = witnesses_.size();
        for (std::size_t j = 0; j < witnesses_.size(); ++j) {
            if (witnesses_[j] == witnesses[i]) {
                existing = j;
                break;
            }
        }
        if (existing == witnesses_.size()) {
            witnesses_.push_back(witnesses[i]);
            sources_.emplace_back();
        }
        if (!labels.empty() && !labels[i].empty()) sources_[existing].push_back(labels[i]);
    }
}

Eigen::MatrixXd WitnessSet::matrix() const {
    Eigen::MatrixXd g(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(size()));
    for (std::size_t j = 0; j < size(); ++j) g.col(static_cast<Eigen::Index>(j)) = witnesses_[j].coords();
    return g;
}

WitnessSet WitnessSet::rotated(const Rotation& g) const {
    WitnessSet out;
    out.sources_ = sources_;
    out.witnesses_.reserve(size());
    for (const auto& w : witnesses_) out.witnesses_.push_back(g.apply(w));
    return out;
}

WitnessSet WitnessSet::with(const UnitVector& w, std::string label) const {
    if (w.dim() != dim()) throw DimensionMismatch(dim(), w.dim());
    WitnessSet out = *this;
    for (std::size_t j = 0; j < out.size(); ++j) {
        if (out.witnesses_[j] == w) {
            if (!label.empty()) out.sources_[j].push_back(std::move(label));
            return out;
        }
    }
    out.witnesses_.push_back(w);
    out.sources_.emplace_back();
    if (!label.empty()) out.sources_.back().push_back(std::move(label));
    return out;
}

}  // namespace admit
