#include "spherocurve/convexity.hpp"

#include "spherocurve/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace spherocurve {

namespace {

constexpr double kEndpointGuard = 1e-7;
constexpr double kClusterRadius = 1e-6;

std::string at(double t) {
    std::ostringstream s;
    s << "t = " << t;
    return s.str();
}

template <typename F>
double bisect(F&& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 80 && b - a > 1e-15; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

// Unit normals of hyperplanes containing the given points (rows).
std::vector<Vec> normals_through(const Mat& points) {
    const Eigen::JacobiSVD<Mat> svd(points, Eigen::ComputeFullV);
    const Vec& sv = svd.singularValues();
    const Mat& v = svd.matrixV();
    const auto d = v.cols();
    const double top = sv.size() > 0 ? sv[0] : 0.0;
    std::vector<Vec> null;
    for (Eigen::Index c = d - 1; c >= 0; --c) {
        const double s = c < sv.size() ? sv[c] : 0.0;
        if (s <= 1e-8 * top) null.push_back(v.col(c));
    }
    return null;
}

} // namespace

Hyperplane::Hyperplane(const Vec& normal) {
    const double n = normal.norm();
    if (!(n > 1e-14)) throw ZeroVectorError("hyperplane normal vanishes");
    normal_ = normal / n;
}

IntersectionCounter::IntersectionCounter(CurveSpec curve, int grid)
    : curve_(std::move(curve)), ts_(uniform_grid(grid)) {
    points_.resize(ts_.size());
    velocities_.resize(ts_.size());
    parallel_for(ts_.size(), [&](std::size_t i) {
        const Jet j = curve_.jet(ts_[i]);
        points_[i] = j[0];
        velocities_[i] = j[1];
    });
}

int IntersectionCounter::candidate_count(const Hyperplane& h) const {
    const Vec& n = h.normal();
    const std::size_t m = ts_.size();
    const double step = ts_[1] - ts_[0];
    int count = 0;
    double fprev = n.dot(points_[0]), gprev = n.dot(velocities_[0]);
    for (std::size_t i = 1; i < m; ++i) {
        const double f = n.dot(points_[i]), g = n.dot(velocities_[i]);
        if (opposite(fprev, f)) {
            ++count;
        } else if (opposite(gprev, g) &&
                   std::min(std::abs(fprev), std::abs(f)) <= (std::abs(gprev) + std::abs(g)) * step) {
            count += 2;
        } else if (f == 0.0 && i + 1 < m) {
            ++count;
        }
        fprev = f;
        gprev = g;
    }
    return count;
}

IntersectionReport IntersectionCounter::count(const Hyperplane& h, double tol) const {
    const Vec& n = h.normal();
    const std::size_t m = ts_.size();
    std::vector<double> f(m), g(m);
    double fmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        f[i] = n.dot(points_[i]);
        g[i] = n.dot(velocities_[i]);
        fmax = std::max(fmax, std::abs(f[i]));
    }
    if (fmax < tol) throw ResolutionError("the curve lies in the hyperplane");

    auto value = [&](double t) { return n.dot(curve_.point(t)); };
    auto slope = [&](double t) { return n.dot(curve_.jet(t)[1]); };

    struct Candidate {
        double t;
        bool crossing;
        bool critical;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (opposite(f[i], f[i + 1])) {
            cands.push_back({bisect(value, ts_[i], ts_[i + 1]), true, false});
        } else if (opposite(g[i], g[i + 1])) {
            const double t = bisect(slope, ts_[i], ts_[i + 1]);
            const Jet j = curve_.jet(t);
            if (std::abs(n.dot(j[0])) < tol * j[1].norm()) cands.push_back({t, false, true});
        }
        if (i > 0 && f[i] == 0.0) cands.push_back({ts_[i], opposite(f[i - 1], f[i + 1]), false});
    }
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) { return a.t < b.t; });

    IntersectionReport rep;
    std::vector<Jet> jets;
    const double min_gap = 0.5 * (ts_[1] - ts_[0]);
    const double mult_tol = std::sqrt(tol);
    for (std::size_t i = 0; i < cands.size();) {
        std::size_t k = i;
        int crossings = 0;
        double t = cands[i].t;
        bool critical = false;
        while (k < cands.size() && cands[k].t - cands[i].t <= kClusterRadius) {
            crossings += cands[k].crossing ? 1 : 0;
            if (cands[k].critical && !critical) {
                critical = true;
                t = cands[k].t;
            }
            ++k;
        }
        i = k;
        if (t < kEndpointGuard || t > 1.0 - kEndpointGuard) continue;
        if (!rep.hits.empty() && t - rep.hits.back().t < min_gap) {
            throw ResolutionError("zeros at " + at(rep.hits.back().t) + " and " + at(t) +
                                  " are closer than the grid resolves");
        }
        const Jet j = curve_.jet(t);
        const double v = std::max(j[1].norm(), 1e-300);
        int mult = 1;
        while (mult <= 3 && std::abs(n.dot(j[mult])) < mult_tol * std::pow(v, mult)) ++mult;
        const bool crossing = crossings % 2 == 1;
        // Parity of the multiplicity must agree with the sign behaviour.
        if (crossing != (mult % 2 == 1)) ++mult;
        rep.hits.push_back({t, mult, crossing});
        jets.push_back(j);
    }

    // Near a cluster of distinct zeros the low derivatives are small too, which
    // mimics a multiple zero. At a genuine k-fold zero the k-th Taylor term
    // dominates out to the neighbouring zeros inside the range 1 / |gamma'|; if the
    // lower terms are comparable there, the zeros are simple ones that happen to be close.
    for (std::size_t a = 0; a < rep.hits.size(); ++a) {
        IntersectionHit& hit = rep.hits[a];
        const int base = hit.crossing ? 1 : 2;
        if (hit.multiplicity <= base) continue;
        const Jet& j = jets[a];
        const int k = std::min(hit.multiplicity, 3);
        const double reach = 1.0 / std::max(j[1].norm(), 1e-300);
        for (std::size_t b = 0; b < rep.hits.size(); ++b) {
            const double d = std::abs(rep.hits[b].t - hit.t);
            if (b == a || d > reach) continue;
            double lower = 0.0, fact = 1.0;
            for (int l = 0; l < k; ++l) {
                if (l > 0) fact *= l;
                lower += std::abs(n.dot(j[l])) * std::pow(d, l) / fact;
            }
            const double top = std::abs(n.dot(j[k])) * std::pow(d, k) / (fact * k);
            if (lower > 0.1 * top) {
                hit.multiplicity = base;
                break;
            }
        }
    }
    for (const auto& hit : rep.hits) {
        rep.total += hit.multiplicity;
        rep.crossings += hit.crossing ? 1 : 0;
    }
    return rep;
}

IntersectionReport count_intersections(const CurveSpec& curve, const Hyperplane& h, double tol) {
    return IntersectionCounter(curve).count(h, tol);
}

WitnessSearch find_nonconvexity_witness(const CurveSpec& curve, long budget, double tol) {
    const int d = curve.dim();
    const IntersectionCounter counter(curve);
    WitnessSearch out;

    struct Attempt {
        std::optional<Hyperplane> plane;
        IntersectionReport report;
    };
    auto try_tuple = [&](const std::array<double, 4>& tuple) {
        Mat pts(4, d);
        for (int r = 0; r < 4; ++r) pts.row(r) = curve.point(tuple[r]).transpose();
        std::vector<Vec> normals = normals_through(pts);
        if (normals.size() >= 2) {
            const Vec a = normals[0], b = normals[1];
            normals = {a, b, (a + b) / std::sqrt(2.0), (a - b) / std::sqrt(2.0)};
        } else if (normals.empty()) {
            normals = normals_through(pts.topRows(3));
        }
        Attempt best;
        for (const Vec& nv : normals) {
            const Hyperplane h(nv);
            if (counter.candidate_count(h) < 4) continue;
            try {
                IntersectionReport rep = counter.count(h, tol);
                if (rep.crossings >= 4) return Attempt{h, std::move(rep)};
            } catch (const ResolutionError&) {
                // Unresolvable planes are simply not witnesses.
            }
        }
        return best;
    };

    constexpr std::size_t kBatch = 64;
    std::vector<std::array<double, 4>> batch;
    auto flush = [&]() {
        std::vector<Attempt> results(batch.size());
        parallel_for(batch.size(), [&](std::size_t i) { results[i] = try_tuple(batch[i]); });
        for (std::size_t i = 0; i < batch.size(); ++i) {
            if (results[i].plane) {
                out.tuples_tried += static_cast<long>(i) + 1;
                out.witness = results[i].plane;
                out.report = std::move(results[i].report);
                out.tuple.assign(batch[i].begin(), batch[i].end());
                return true;
            }
        }
        out.tuples_tried += static_cast<long>(batch.size());
        batch.clear();
        return false;
    };

    long queued = 0;
    for (int level = 5; queued < budget; ++level) {
        const int k = level - 1;
        for (int a = 1; a <= k && queued < budget; ++a)
            for (int b = a + 1; b <= k && queued < budget; ++b)
                for (int c = b + 1; c <= k && queued < budget; ++c)
                    for (int e = c + 1; e <= k && queued < budget; ++e) {
                        const double nl = level;
                        batch.push_back({a / nl, b / nl, c / nl, e / nl});
                        ++queued;
                        if (batch.size() == kBatch && flush()) return out;
                    }
    }
    if (!batch.empty()) flush();
    return out;
}

MomentCertificate moment_curve_convexity_proof(const CurveSpec& curve, int grid,
                                               std::uint64_t seed) {
    const int d = curve.dim();
    if (d != 4) throw PreconditionError("the moment-curve certificate needs a curve in S^3");
    MomentCertificate cert;

    std::vector<double> ts;
    std::vector<Vec> pts;
    for (int i = 1; i < grid; ++i) {
        ts.push_back(static_cast<double>(i) / grid);
        pts.push_back(curve.point(ts.back()));
    }
    for (int axis = 0; axis < d && cert.chart_axis < 0; ++axis) {
        for (int sign : {1, -1}) {
            const bool positive = std::all_of(pts.begin(), pts.end(),
                                              [&](const Vec& p) { return sign * p[axis] > 1e-9; });
            if (positive) {
                cert.chart_axis = axis;
                cert.chart_sign = sign;
                break;
            }
        }
    }
    if (cert.chart_axis < 0) {
        throw ChartError("no coordinate keeps a constant sign on the open parameter range");
    }

    const std::size_t n = pts.size();
    std::vector<Vec> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = pts[i] / pts[i][cert.chart_axis];

    // Fit the remaining coordinates as cubics in u = x / X for each strictly monotone
    // coordinate x, in homogeneous form: gamma_c l^2 = sum_k c_k l^(3-k) (gamma_x / X)^k
    // with l the chart value. No division by l, which loses precision near the
    // chart boundary.
    bool any_monotone = false;
    cert.fit_residual = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < d; ++axis) {
        if (axis == cert.chart_axis) continue;
        bool inc = true, dec = true;
        for (std::size_t i = 1; i < n; ++i) {
            inc = inc && y[i][axis] > y[i - 1][axis];
            dec = dec && y[i][axis] < y[i - 1][axis];
        }
        if (!inc && !dec) continue;
        any_monotone = true;

        double scale = 0.0;
        for (const Vec& v : y) scale = std::max(scale, std::abs(v[axis]));
        Mat a(n, 4);
        Vec w(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double l = cert.chart_sign * pts[i][cert.chart_axis];
            const double g = cert.chart_sign * pts[i][axis] / scale;
            w[i] = l * l * cert.chart_sign;
            a.row(static_cast<Eigen::Index>(i)) << l * l * l, l * l * g, l * g * g, g * g * g;
        }
        const auto qr = a.colPivHouseholderQr();
        Eigen::Matrix4d coeff = Eigen::Matrix4d::Zero();
        coeff(cert.chart_axis, 0) = 1.0;
        coeff(axis, 1) = 1.0;
        double residual = 0.0;
        for (int other = 0; other < d; ++other) {
            if (other == cert.chart_axis || other == axis) continue;
            Vec b(n);
            for (std::size_t i = 0; i < n; ++i) b[static_cast<Eigen::Index>(i)] = w[i] * pts[i][other];
            const Vec c = qr.solve(b);
            residual = std::max(residual, (a * c - b).cwiseAbs().maxCoeff() /
                                              std::max(b.cwiseAbs().maxCoeff(), 1e-300));
            coeff.row(other) = c.transpose();
        }
        for (int r = 0; r < 4; ++r) coeff.row(r).normalize();
        if (residual < cert.fit_residual) {
            cert.fit_residual = residual;
            cert.parameter_axis = axis;
            cert.coefficient_det = coeff.determinant();
        }
    }
    if (!any_monotone) {
        cert.reason = "no strictly monotone coordinate after projection";
        return cert;
    }
    cert.min_derivative_det = local_convexity_check(curve, grid).min_det;

    const IntersectionCounter counter(curve);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vec normal(d);
        if (trial % 2 == 0) {
            for (int k = 0; k < d; ++k) normal[k] = gauss(rng);
        } else {
            Mat three(3, d);
            for (int r = 0; r < 3; ++r) three.row(r) = curve.point(uniform(rng)).transpose();
            normal = normals_through(three).front();
        }
        cert.max_random_hits = std::max(cert.max_random_hits, counter.count(Hyperplane(normal)).total);
    }

    if (cert.fit_residual >= 1e-8) {
        cert.reason = "coordinates are not cubic in the moment parameter";
    } else if (!(std::abs(cert.coefficient_det) > 1e-8)) {
        cert.reason = "coefficient matrix is singular";
    } else if (!(cert.min_derivative_det > 0.0)) {
        cert.reason = "curve is not locally convex";
    } else if (cert.max_random_hits > 3) {
        cert.reason = "a test hyperplane meets the curve more than 3 times";
    } else {
        cert.certified = true;
    }
    return cert;
}

Eigen::Matrix4d SignedPermutation::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int j = 0; j < 4; ++j) m(rows[j], j) = signs[j];
    return m;
}

SignedPermutation SignedPermutation::from_matrix(const Eigen::Matrix4d& m) {
    SignedPermutation p;
    std::array<bool, 4> seen{};
    for (int j = 0; j < 4; ++j) {
        int found = -1;
        for (int i = 0; i < 4; ++i) {
            if (std::abs(std::abs(m(i, j)) - 1.0) < 1e-12) {
                if (found >= 0) found = 4;
                else found = i;
            } else if (std::abs(m(i, j)) > 1e-12) {
                found = 4;
            }
        }
        if (found < 0 || found > 3 || seen[found]) {
            throw PreconditionError("matrix is not a signed permutation");
        }
        seen[found] = true;
        p.rows[j] = found;
        p.signs[j] = m(found, j) > 0 ? 1 : -1;
    }
    if (std::abs(p.matrix().determinant() - 1.0) > 1e-12) {
        throw PreconditionError("signed permutation has determinant -1");
    }
    return p;
}

std::string to_string(const SignedPermutation& p) {
    std::ostringstream s;
    s << '[';
    for (int j = 0; j < 4; ++j) s << (j ? " " : "") << (p.signs[j] > 0 ? '+' : '-') << p.rows[j] + 1;
    s << ']';
    return s.str();
}

std::vector<SignedPermutation> all_signed_permutations() {
    std::vector<SignedPermutation> out;
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
        for (int mask = 0; mask < 16; ++mask) {
            SignedPermutation p;
            p.rows = perm;
            for (int j = 0; j < 4; ++j) p.signs[j] = (mask >> j) & 1 ? -1 : 1;
            if (p.matrix().determinant() > 0.0) out.push_back(p);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

SignedPermutation top_cell_permutation() {
    SignedPermutation p;
    p.rows = {3, 2, 1, 0};
    p.signs = {1, -1, 1, -1};
    return p;
}

BruhatCell bruhat_cell(const Eigen::Matrix4d& q) {
    Eigen::Matrix4d m = q;
    const double scale = m.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw PreconditionError("zero matrix has no Bruhat cell");
    BruhatCell cell;
    cell.min_pivot = std::numeric_limits<double>::infinity();
    std::array<bool, 4> used{};
    for (int j = 0; j < 4; ++j) {
        int r = -1;
        for (int i = 3; i >= 0; --i) {
            if (!used[i] && std::abs(m(i, j)) > 1e-10 * scale) {
                r = i;
                break;
            }
        }
        if (r < 0) throw PreconditionError("matrix is singular");
        const double piv = m(r, j);
        cell.min_pivot = std::min(cell.min_pivot, std::abs(piv) / scale);
        for (int i = 0; i < r; ++i) m.row(i) -= (m(i, j) / piv) * m.row(r);
        for (int k = j + 1; k < 4; ++k) m.col(k) -= (m(r, k) / piv) * m.col(j);
        used[r] = true;
        cell.permutation.rows[j] = r;
        cell.permutation.signs[j] = piv > 0.0 ? 1 : -1;
    }
    cell.boundary = cell.min_pivot < 1e-8;
    return cell;
}

SignedPermutation bruhat_cell_of(const Eigen::Matrix4d& q) { return bruhat_cell(q).permutation; }

TopCellFactorization top_cell_factorize(const Eigen::Matrix4d& q) {
    const Eigen::Matrix4d a = top_cell_permutation().matrix();
    const Eigen::Matrix4d b = a.transpose() * q;
    const double scale = b.cwiseAbs().maxCoeff();
    TopCellFactorization out{Eigen::Matrix4d::Identity(), Eigen::Matrix4d::Zero(), 0.0};
    for (int k = 0; k < 4; ++k) {
        for (int j = k; j < 4; ++j) {
            out.u(k, j) = b(k, j) - out.l.row(k).head(k).dot(out.u.col(j).head(k));
        }
        if (!(out.u(k, k) > 1e-14 * scale)) {
            std::ostringstream msg;
            msg << "pivot " << k + 1 << " is " << out.u(k, k) << "; the matrix is not in the cell of "
                << to_string(top_cell_permutation());
            throw CellError(msg.str());
        }
        for (int i = k + 1; i < 4; ++i) {
            out.l(i, k) = (b(i, k) - out.l.row(i).head(k).dot(out.u.col(k).head(k))) / out.u(k, k);
        }
    }
    out.residual = (a * out.l * out.u - q).cwiseAbs().maxCoeff();
    return out;
}

MonitorReport convexity_monitor(const FrameCurve& fc) {
    if (fc.dim() != 4) throw PreconditionError("the convexity monitor needs frames in SO_4");
    if (fc.size() < 3) throw PreconditionError("the convexity monitor needs interior samples");
    MonitorReport rep;
    const std::size_t n = fc.size() - 2;
    rep.ts.assign(fc.ts.begin() + 1, fc.ts.end() - 1);
    std::vector<char> in_cell(n, 0), pattern(n, 0);
    std::vector<double> worst(n, 0.0);
    rep.h.assign(n, std::numeric_limits<double>::quiet_NaN());
    parallel_for(n, [&](std::size_t k) {
        const std::size_t i = k + 1;
        TopCellFactorization f;
        try {
            f = top_cell_factorize(fc.frames[i]);
        } catch (const CellError&) {
            return;
        }
        in_cell[k] = 1;
        rep.h[k] = f.l(1, 0) + f.l(3, 2);
        // Exact log-derivative of a Frenet frame from its remainder.
        const Mat& r = fc.remainders[i];
        Eigen::Matrix4d lambda = Eigen::Matrix4d::Zero();
        const double sub[3] = {r(1, 1), r(2, 2) / r(1, 1), r(3, 3) / r(2, 2)};
        for (int j = 0; j < 3; ++j) {
            lambda(j + 1, j) = sub[j];
            lambda(j, j + 1) = -sub[j];
        }
        const Eigen::Matrix4d uinv = f.u.inverse();
        const Eigen::Matrix4d x = f.u * lambda * uinv;
        const double bound = 1e-6 * f.u.norm() * uinv.norm() * lambda.norm();
        bool ok = true;
        double off = 0.0;
        for (int row = 1; row < 4; ++row) {
            for (int col = 0; col < row; ++col) {
                if (row == col + 1) {
                    ok = ok && x(row, col) > 0.0;
                } else {
                    off = std::max(off, std::abs(x(row, col)) / bound);
                }
            }
        }
        worst[k] = off;
        pattern[k] = ok && off <= 1.0;
    });
    rep.in_top_cell.assign(in_cell.begin(), in_cell.end());
    rep.pattern_ok.assign(pattern.begin(), pattern.end());
    rep.all_in_top_cell = std::all_of(in_cell.begin(), in_cell.end(), [](char c) { return c; });
    rep.sign_pattern_ok = std::all_of(pattern.begin(), pattern.end(), [](char c) { return c; });
    rep.worst_off_pattern = *std::max_element(worst.begin(), worst.end());
    rep.h_increasing = rep.all_in_top_cell;
    for (std::size_t k = 0; k < n; ++k) {
        const bool h_ok = k == 0 || !(in_cell[k] && in_cell[k - 1]) || rep.h[k] > rep.h[k - 1];
        if (!h_ok) rep.h_increasing = false;
        if ((!in_cell[k] || !pattern[k] || !h_ok) && !rep.first_failure_t) {
            rep.first_failure_t = rep.ts[k];
        }
    }
    return rep;
}

MonitorReport convexity_monitor(const CurveSpec& curve, int grid) {
    return convexity_monitor(frame_curve(curve, grid));
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::ConvexCertified: return "convex-certified";
    case Verdict::NonconvexWitness: return "nonconvex-witness";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

ConvexityReport analyze_convexity(const CurveSpec& curve, const ConvexityOptions& options) {
    ConvexityReport rep;
    rep.monitor = convexity_monitor(curve, options.samples + 1);
    try {
        rep.certificate = moment_curve_convexity_proof(curve, options.samples, options.seed);
    } catch (const ChartError& e) {
        rep.certificate_error = e.what();
    }
    if (rep.certificate && rep.certificate->certified && rep.monitor.passes()) {
        rep.verdict = Verdict::ConvexCertified;
        return rep;
    }
    rep.witness = find_nonconvexity_witness(curve, options.budget, options.root_tol);
    rep.verdict = rep.witness->witness ? Verdict::NonconvexWitness : Verdict::Inconclusive;
    return rep;
}

} // namespace spherocurve
