#include "admit/admissibility.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace admit {

namespace {

constexpr int kMaxIterations = 50'000;
constexpr double kGapFloor = 1e-15;

// Minimum-norm point of the affine hull of the active vertices. Accepted only
// when its barycentric weights are strictly positive, i.e. it lies in the
// relative interior of the active face.
bool polish_on_face(const Eigen::MatrixXd& g, Eigen::VectorXd& alpha) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        if (alpha[i] > 0.0) active.push_back(i);
    const auto k = static_cast<Eigen::Index>(active.size());
    if (k < 2) return false;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = g.col(active[a]).dot(g.col(active[b]));
        kkt(a, k) = 1.0;
        kkt(k, a) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
    rhs[k] = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible()) return false;
    const Eigen::VectorXd sol = lu.solve(rhs);
    if (!sol.allFinite()) return false;
    for (Eigen::Index a = 0; a < k; ++a)
        if (!(sol[a] > 0.0)) return false;

    Eigen::VectorXd candidate = Eigen::VectorXd::Zero(alpha.size());
    for (Eigen::Index a = 0; a < k; ++a) candidate[active[a]] = sol[a];
    candidate /= candidate.sum();
    if ((g * candidate).squaredNorm() > (g * alpha).squaredNorm()) return false;
    alpha = candidate;
    return true;
}

std::optional<std::pair<std::size_t, std::size_t>> most_opposed_pair(const Eigen::MatrixXd& g) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    double best_dot = 0.0;
    for (Eigen::Index i = 0; i < g.cols(); ++i) {
        for (Eigen::Index j = i + 1; j < g.cols(); ++j) {
            const double dot = g.col(i).dot(g.col(j));
            if (dot < best_dot) {
                best_dot = dot;
                best = std::make_pair(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        }
    }
    return best;
}

struct FwState {
    Eigen::VectorXd alpha;
    Eigen::VectorXd p;
    Eigen::VectorXd grad;  // Gᵀp
    double gap = std::numeric_limits<double>::infinity();
};

void refresh(const Eigen::MatrixXd& g, FwState& s) {
    s.p = g * s.alpha;
    s.grad = g.transpose() * s.p;
    Eigen::Index fw_vertex = 0;
    s.grad.minCoeff(&fw_vertex);
    s.gap = s.p.squaredNorm() - s.grad[fw_vertex];
}

}  // namespace

const char* to_string(Coherence c) noexcept {
    return c == Coherence::Coherent ? "Coherent" : "Contradictory";
}

FeasibilityCertificate check_feasibility(const WitnessSet& w, double tol) {
    if (!(tol > 0.0 && tol <= 1e-3)) throw ToleranceOutOfRange(tol);

    const Eigen::MatrixXd g = w.matrix();
    const Eigen::Index n = g.cols();
    const double gap_target = std::min(tol * tol, kGapFloor);

    FwState s;
    s.alpha = Eigen::VectorXd::Zero(n);
    s.alpha[0] = 1.0;
    refresh(g, s);

    FeasibilityCertificate cert;
    cert.tolerance = tol;
    cert.generator_count = w.size();

    int it = 0;
    bool polished = false;
    for (; it < kMaxIterations; ++it) {
        if (s.gap <= gap_target) {
            // Snap to the exact minimizer on the current face, then re-check.
            if (!polished && polish_on_face(g, s.alpha)) {
                polished = true;
                refresh(g, s);
                continue;
            }
            break;
        }
        if (s.p.norm() <= tol) break;

        Eigen::Index fw = 0;
        s.grad.minCoeff(&fw);
        Eigen::Index away = -1;
        double away_val = -std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (s.alpha[i] > 0.0 && s.grad[i] > away_val) {
                away_val = s.grad[i];
                away = i;
            }
        }
        const double pp = s.p.squaredNorm();
        const double gap_fw = pp - s.grad[fw];
        const double gap_away = away_val - pp;

        Eigen::VectorXd dir;
        double max_step;
        const bool fw_step = gap_fw >= gap_away || s.alpha[away] >= 1.0;
        if (fw_step) {
            dir = g.col(fw) - s.p;
            max_step = 1.0;
        } else {
            dir = s.p - g.col(away);
            max_step = s.alpha[away] / (1.0 - s.alpha[away]);
        }
        const double dd = dir.squaredNorm();
        if (!(dd > 0.0)) break;
        const double step = std::clamp(-s.p.dot(dir) / dd, 0.0, max_step);
        if (!(step > 0.0)) break;

        if (fw_step) {
            s.alpha *= (1.0 - step);
            s.alpha[fw] += step;
        } else {
            s.alpha *= (1.0 + step);
            s.alpha[away] -= step;
            if (step >= max_step) s.alpha[away] = 0.0;
        }
        for (Eigen::Index i = 0; i < n; ++i)
            if (s.alpha[i] < 0.0) s.alpha[i] = 0.0;
        s.alpha /= s.alpha.sum();

        if ((it & 63) == 63) {
            refresh(g, s);
        } else {
            s.p += step * dir;
            s.grad = g.transpose() * s.p;
            s.gap = s.p.squaredNorm() - s.grad.minCoeff();
        }
    }
    refresh(g, s);

    const double norm = s.p.norm();
    cert.iterations = it;
    cert.hull_distance = norm;
    cert.duality_gap = s.gap;
    cert.weights.assign(s.alpha.data(), s.alpha.data() + n);
    cert.converged = s.gap <= tol * tol || norm <= tol;

    bool coherent = false;
    if (norm > tol) {
        const double margin = s.grad.minCoeff() / norm;  // certified lower bound on ‖p*‖
        coherent = cert.converged ? margin > 0.0 : margin > tol;
    }

    if (coherent) {
        cert.status = Coherence::Coherent;
        cert.center = normalize(s.p);
        cert.min_margin = (g.transpose() * cert.center->coords()).minCoeff();
        if (!(cert.min_margin > 0.0)) cert.status = Coherence::Contradictory;
    }
    if (cert.status == Coherence::Contradictory) {
        cert.center.reset();
        cert.min_margin = 0.0;
        cert.witness_pair = most_opposed_pair(g);
    }
    return cert;
}

}  // namespace admit
