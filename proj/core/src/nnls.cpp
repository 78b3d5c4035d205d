#include "admit/nnls.hpp"

#include "admit/errors.hpp"

#include <Eigen/QR>

#include <limits>
#include <vector>

namespace admit {

namespace {

// Least squares restricted to the passive columns; returns a full-length vector
// with zeros outside the passive set.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    if (cols.empty()) return Eigen::VectorXd::Zero(a.cols());

    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);

    const Eigen::VectorXd z = sub.colPivHouseholderQr().solve(b);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(a.cols());
    for (std::size_t k = 0; k < cols.size(); ++k) full[cols[k]] = z[static_cast<Eigen::Index>(k)];
    return full;
}

}  // namespace

NnlsResult solve_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    if (a.rows() != b.size()) {
        throw DimensionMismatch(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.size()));
    }
    const Eigen::Index n = a.cols();
    NnlsResult result;
    result.x = Eigen::VectorXd::Zero(n);
    if (n == 0) {
        result.residual = b.norm();
        return result;
    }

    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm());
    const double dual_tol = 10.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(a.rows());

    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    Eigen::VectorXd& x = result.x;
    Eigen::VectorXd w = a.transpose() * (b - a * x);

    const int max_outer = 3 * static_cast<int>(n);
    for (;;) {
        Eigen::Index best = -1;
        double best_w = dual_tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) break;
        if (result.iterations >= max_outer) {
            result.converged = false;
            break;
        }
        ++result.iterations;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner <= 3 * static_cast<int>(n); ++inner) {
            Eigen::VectorXd z = passive_solve(a, b, passive);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) feasible = false;
            if (feasible) {
                x = z;
                break;
            }
            double step = 1.0;
            Eigen::Index limiting = -1;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
                    const double denom = x[j] - z[j];
                    const double ratio = denom > 0.0 ? x[j] / denom : 0.0;
                    if (limiting < 0 || ratio < step) {
                        step = ratio;
                        limiting = j;
                    }
                }
            }
            x += step * (z - x);
            x[limiting] = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x[j] <= 0.0) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x[j] = 0.0;
                }
            }
        }
        w = a.transpose() * (b - a * x);
        // A column that just failed to enter would be selected again forever.
        if (!passive[static_cast<std::size_t>(best)]) w[best] = 0.0;
    }

    result.residual = (a * x - b).norm();
    return result;
}

}  // namespace admit
