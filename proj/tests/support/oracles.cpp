#include "oracles.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace oracle {

MinNormPoint min_norm_point(const Eigen::MatrixXd& g) {
    const int n = static_cast<int>(g.cols());
    MinNormPoint best;
    best.norm = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> cols;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) cols.push_back(i);
        const int k = static_cast<int>(cols.size());
        if (k > g.rows() + 1) continue;
        // [GᵀG 1; 1ᵀ 0] [λ; ν] = [0; 1]
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) kkt(a, b) = g.col(cols[a]).dot(g.col(cols[b]));
            kkt(a, k) = kkt(k, a) = 1.0;
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
        rhs[k] = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) continue;
        const Eigen::VectorXd sol = lu.solve(rhs);
        bool feasible = true;
        for (int a = 0; a < k; ++a)
            if (sol[a] < -1e-12) feasible = false;
        if (!feasible) continue;
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        for (int a = 0; a < k; ++a) w[cols[a]] = std::max(0.0, sol[a]);
        w /= w.sum();
        const Eigen::VectorXd p = g * w;
        if (p.norm() < best.norm) {
            best.norm = p.norm();
            best.point = p;
            best.weights = w;
        }
    }
    return best;
}

NnlsSolution nnls_enumerate(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(a.cols());
    NnlsSolution best;
    best.x = Eigen::VectorXd::Zero(n);
    best.residual = b.norm();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> cols;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) cols.push_back(i);
        Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
        const Eigen::VectorXd z = sub.completeOrthogonalDecomposition().solve(b);
        if ((z.array() < 0.0).any()) continue;
        const double r = (sub * z - b).norm();
        if (r < best.residual) {
            best.residual = r;
            best.x.setZero();
            for (std::size_t k = 0; k < cols.size(); ++k) best.x[cols[k]] = z[static_cast<Eigen::Index>(k)];
        }
    }
    return best;
}

std::vector<Eigen::VectorXd> sphere_grid(int d, std::size_t n) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(n);
    if (d == 2) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
            out.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
        }
        return out;
    }
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(i);
        out.push_back(Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z));
    }
    return out;
}

Eigen::VectorXd random_unit(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::VectorXd v(d);
    do {
        for (int i = 0; i < d; ++i) v[i] = normal(rng);
    } while (v.norm() < 1e-9);
    return v.normalized();
}

double best_center_margin(const Eigen::MatrixXd& g, std::size_t grid_points, std::uint64_t seed) {
    const int d = static_cast<int>(g.rows());
    auto margin = [&](const Eigen::VectorXd& u) { return (g.transpose() * u).minCoeff(); };
    const auto grid = sphere_grid(d, grid_points);
    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) scored.emplace_back(margin(grid[i]), i);
    const std::size_t keep = std::min<std::size_t>(8, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });

    std::mt19937_64 rng(seed);
    double best = scored.front().first;
    for (std::size_t s = 0; s < keep; ++s) {
        Eigen::VectorXd u = grid[scored[s].second];
        double f = scored[s].first;
        for (double step = 0.05; step > 1e-10; step *= 0.5) {
            bool moved = true;
            while (moved) {
                moved = false;
                for (int t = 0; t < 48; ++t) {
                    const Eigen::VectorXd cand = (u + step * random_unit(d, rng)).normalized();
                    const double fc = margin(cand);
                    if (fc > f) {
                        u = cand;
                        f = fc;
                        moved = true;
                    }
                }
            }
        }
        best = std::max(best, f);
    }
    return best;
}

double entropy_mutual_information(std::size_t n, std::size_t m, std::size_t overlap) {
    auto uniform_entropy = [](std::size_t size) {
        const double p = 1.0 / static_cast<double>(size);
        double h = 0.0;
        for (std::size_t i = 0; i < size; ++i) h -= p * std::log(p);
        return h;
    };
    return uniform_entropy(n) + uniform_entropy(m) - uniform_entropy(n + m - overlap);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_critical(std::size_t n, double alpha) {
    const double c = alpha <= 0.01 ? 1.628 : 1.358;
    return c / std::sqrt(static_cast<double>(n));
}

namespace {

double mean_pair_distance(const std::vector<Eigen::VectorXd>& pts, const std::vector<std::size_t>& a,
                          const std::vector<std::size_t>& b) {
    double s = 0.0;
    for (auto i : a)
        for (auto j : b) s += (pts[i] - pts[j]).norm();
    return s / static_cast<double>(a.size() * b.size());
}

double energy_from_split(const std::vector<Eigen::VectorXd>& pts, const std::vector<std::size_t>& idx, std::size_t nx) {
    const std::vector<std::size_t> a(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(nx));
    const std::vector<std::size_t> b(idx.begin() + static_cast<std::ptrdiff_t>(nx), idx.end());
    return 2.0 * mean_pair_distance(pts, a, b) - mean_pair_distance(pts, a, a) - mean_pair_distance(pts, b, b);
}

}  // namespace

double energy_distance(const std::vector<Eigen::VectorXd>& x, const std::vector<Eigen::VectorXd>& y) {
    std::vector<Eigen::VectorXd> pts(x);
    pts.insert(pts.end(), y.begin(), y.end());
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return energy_from_split(pts, idx, x.size());
}

double energy_permutation_pvalue(const std::vector<Eigen::VectorXd>& x, const std::vector<Eigen::VectorXd>& y,
                                 std::size_t permutations, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> pts(x);
    pts.insert(pts.end(), y.begin(), y.end());
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const double observed = energy_from_split(pts, idx, x.size());
    std::mt19937_64 rng(seed);
    std::size_t at_least = 0;
    for (std::size_t p = 0; p < permutations; ++p) {
        std::shuffle(idx.begin(), idx.end(), rng);
        if (energy_from_split(pts, idx, x.size()) >= observed) ++at_least;
    }
    return static_cast<double>(at_least + 1) / static_cast<double>(permutations + 1);
}

Eigen::VectorXd arc_argmax(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                           const std::function<double(const Eigen::VectorXd&)>& f, std::size_t steps) {
    const double omega = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
    Eigen::VectorXd best = a;
    double best_f = f(a);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(steps);
        const Eigen::VectorXd p =
            ((std::sin((1.0 - t) * omega) * a + std::sin(t * omega) * b) / std::sin(omega)).normalized();
        const double fp = f(p);
        if (fp > best_f) {
            best_f = fp;
            best = p;
        }
    }
    return best;
}

}  // namespace oracle
