#include "spherocurve/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace spherocurve {

Mat fornberg_weights(double x0, std::span<const double> nodes, int max_order) {
    const int n = static_cast<int>(nodes.size());
    Mat c = Mat::Zero(max_order + 1, n);
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c(k, i) = c1 * (k * c(k - 1, i - 1) - c5 * c(k, i - 1)) / c2;
                }
                c(0, i) = -c1 * c5 * c(0, i - 1) / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c(k, j) = (c4 * c(k, j) - k * c(k - 1, j)) / c3;
            }
            c(0, j) = c4 * c(0, j) / c3;
        }
        c1 = c2;
    }
    return c;
}

std::size_t stencil_start(std::span<const double> grid, double t, int width) {
    const auto n = grid.size();
    const auto it = std::lower_bound(grid.begin(), grid.end(), t);
    auto nearest = static_cast<std::ptrdiff_t>(it - grid.begin());
    if (nearest > 0 && (nearest == static_cast<std::ptrdiff_t>(n) ||
                        std::abs(grid[nearest - 1] - t) <= std::abs(grid[nearest] - t))) {
        --nearest;
    }
    const std::ptrdiff_t half = width / 2;
    const std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - width;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(nearest - half, 0, hi));
}

Mat reorthonormalize_rows(const Mat& m) {
    Mat out = m;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            out.row(i) -= out.row(i).dot(out.row(j)) * out.row(j);
        }
        out.row(i).normalize();
    }
    return out;
}

double orthogonality_defect(const Mat& m) {
    const Mat gram = m.transpose() * m - Mat::Identity(m.rows(), m.cols());
    return std::max(gram.cwiseAbs().maxCoeff(), std::abs(m.determinant() - 1.0));
}

Mat skew_part(const Mat& m) { return 0.5 * (m - m.transpose()); }

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SPHEROCURVE_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(cap));
        } catch (...) {
            // unparsable value: ignore the cap
        }
    }
    return hw;
}

} // namespace spherocurve
