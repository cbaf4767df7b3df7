#pragma once

#include "spherocurve/curves.hpp"
#include "spherocurve/frenet.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace spherocurve {

/// Hyperplane through the origin given by its unit normal.
class Hyperplane {
public:
    /// Normalizes; ZeroVectorError for a vanishing normal.
    explicit Hyperplane(const Vec& normal);
    const Vec& normal() const { return normal_; }

private:
    Vec normal_;
};

struct IntersectionHit {
    double t = 0.0;
    int multiplicity = 1;
    /// f = n . gamma changes sign at t.
    bool crossing = true;
};

struct IntersectionReport {
    std::vector<IntersectionHit> hits;
    /// Sum of multiplicities over (0, 1).
    int total = 0;
    int crossings = 0;
};

inline constexpr double kRootTolerance = 1e-9;

/// Tabulates the curve once so that many hyperplanes can be tested cheaply.
class IntersectionCounter {
public:
    explicit IntersectionCounter(CurveSpec curve, int grid = 2048);

    /// Zeros of f(t) = n . gamma(t) in (0, 1): sign changes refined by bisection plus
    /// tangencies at critical points with |f| < tol |gamma'|. Multiplicity is the
    /// first k with |f^(k)| >= sqrt(tol) |gamma'|^k. ResolutionError if f vanishes
    /// identically or two zeros fall within half a grid cell.
    IntersectionReport count(const Hyperplane& h, double tol = kRootTolerance) const;

    /// Zeros of f on the open grid cells, without refinement; a cheap upper-bound filter.
    int candidate_count(const Hyperplane& h) const;

    const CurveSpec& curve() const { return curve_; }

private:
    CurveSpec curve_;
    std::vector<double> ts_;
    std::vector<Vec> points_;
    std::vector<Vec> velocities_;
};

IntersectionReport count_intersections(const CurveSpec& curve, const Hyperplane& h,
                                       double tol = kRootTolerance);

struct WitnessSearch {
    std::optional<Hyperplane> witness;
    IntersectionReport report;
    /// Parameters of the sample points that generated the witness.
    std::vector<double> tuple;
    long tuples_tried = 0;
};

/// Coarse-to-fine search over 4-tuples of interior grid points {k / N}, N = 5, 6, ...
/// A tuple whose points span a hyperplane yields its normals (null space of the
/// point matrix, several combinations when it is more than one-dimensional);
/// otherwise the hyperplane through the first three points is tried. A witness has
/// at least 4 interior crossings. The budget counts tuples.
WitnessSearch find_nonconvexity_witness(const CurveSpec& curve, long budget = 20000,
                                        double tol = kRootTolerance);

struct MomentCertificate {
    bool certified = false;
    /// Chart functional sign * e_axis, positive on the open parameter range.
    int chart_axis = -1;
    int chart_sign = 0;
    /// Coordinate of the projected curve used as the moment parameter.
    int parameter_axis = -1;
    double fit_residual = 0.0;
    /// Determinant of the coefficient matrix in the monomial basis 1, x, x^2, x^3.
    double coefficient_det = 0.0;
    double min_derivative_det = 0.0;
    /// Largest total multiplicity among the random test hyperplanes.
    int max_random_hits = 0;
    std::string reason;
};

/// Projects through a chart e_a or -e_a positive on the open range and checks that
/// the image is a linear image of (1, x, x^2, x^3) in a strictly monotone
/// coordinate x, that the curve is locally convex, and that 200 seeded random
/// hyperplanes meet it at most 3 times. ChartError when no chart exists.
MomentCertificate moment_curve_convexity_proof(const CurveSpec& curve, int grid = kVerificationGrid,
                                               std::uint64_t seed = 1);

/// Element of B4+: one entry +-1 per row and column, determinant +1.
struct SignedPermutation {
    /// Column j has its entry in row rows[j] with sign signs[j].
    std::array<int, 4> rows{0, 1, 2, 3};
    std::array<int, 4> signs{1, 1, 1, 1};

    Eigen::Matrix4d matrix() const;
    static SignedPermutation from_matrix(const Eigen::Matrix4d& m);
    friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;
};

std::string to_string(const SignedPermutation& p);

/// All 192 elements of B4+.
std::vector<SignedPermutation> all_signed_permutations();

/// The antidiagonal signed permutation labelling the top cell.
SignedPermutation top_cell_permutation();

struct BruhatCell {
    SignedPermutation permutation;
    /// Some pivot is within 1e-8 of vanishing.
    bool boundary = false;
    double min_pivot = 0.0;
};

/// Q = U1 P U2 with U1, U2 upper triangular with positive diagonal. Columns are
/// processed left to right, pivoting on the lowest unused row with a nonzero entry.
BruhatCell bruhat_cell(const Eigen::Matrix4d& q);
SignedPermutation bruhat_cell_of(const Eigen::Matrix4d& q);

struct TopCellFactorization {
    Eigen::Matrix4d l;
    Eigen::Matrix4d u;
    double residual = 0.0;
};

/// Q = A L U with A the top-cell permutation, L lower unitriangular and U upper
/// triangular with positive diagonal. CellError outside the top cell.
TopCellFactorization top_cell_factorize(const Eigen::Matrix4d& q);

struct MonitorReport {
    /// Interior parameters.
    std::vector<double> ts;
    std::vector<bool> in_top_cell;
    std::vector<bool> pattern_ok;
    /// l21 + l43, NaN outside the top cell.
    std::vector<double> h;
    bool all_in_top_cell = false;
    bool sign_pattern_ok = false;
    bool h_increasing = false;
    std::optional<double> first_failure_t;
    /// Largest off-pattern entry of L^-1 L' relative to its conditioning bound.
    double worst_off_pattern = 0.0;

    bool passes() const { return all_in_top_cell && sign_pattern_ok && h_increasing; }
};

/// Factorizes every interior frame as A L U and checks that L^-1 L' has positive
/// subdiagonal and vanishing other entries, using L^-1 L' = lower(U Lambda U^-1).
/// Reports failures per sample instead of throwing.
MonitorReport convexity_monitor(const FrameCurve& frames);
MonitorReport convexity_monitor(const CurveSpec& curve, int grid = kVerificationGrid + 1);

enum class Verdict { ConvexCertified, NonconvexWitness, Inconclusive };
std::string_view to_string(Verdict v);

struct ConvexityReport {
    Verdict verdict = Verdict::Inconclusive;
    MonitorReport monitor;
    std::optional<MomentCertificate> certificate;
    /// Why the certificate route was unavailable.
    std::string certificate_error;
    std::optional<WitnessSearch> witness;
};

struct ConvexityOptions {
    int samples = kVerificationGrid;
    long budget = 20000;
    std::uint64_t seed = 1;
    double root_tol = kRootTolerance;
};

/// Convex-certified needs the moment-curve certificate and a passing monitor;
/// otherwise a witness search decides between nonconvex-witness and inconclusive.
ConvexityReport analyze_convexity(const CurveSpec& curve, const ConvexityOptions& options = {});

} // namespace spherocurve
