#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace spherocurve {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
/// Returns w with w(k, j) the weight of node j for the k-th derivative at x0,
/// k = 0..max_order.
Mat fornberg_weights(double x0, std::span<const double> nodes, int max_order);

/// Indices [first, first + width) of the `width` grid nodes nearest to t,
/// shifted inward at the ends of the grid. Requires grid.size() >= width.
std::size_t stencil_start(std::span<const double> grid, double t, int width);

/// Nearest special-orthogonal matrix by Gram-Schmidt on the rows.
Mat reorthonormalize_rows(const Mat& m);

/// max |M^T M - I| and |det M - 1|.
double orthogonality_defect(const Mat& m);

Mat skew_part(const Mat& m);

/// Number of worker threads: SPHEROCURVE_THREADS if set (>= 1), else the
/// hardware concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, n). Results must be written to per-index slots;
/// the call returns after every index finished.
template <typename Body>
void parallel_for(std::size_t n, Body&& body);

} // namespace spherocurve

#include "spherocurve/detail/parallel_impl.hpp"
