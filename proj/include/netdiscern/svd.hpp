#pragma once

// One-sided Jacobi SVD and the rank/null-space/least-squares helpers
// built on it.  One kernel serves every rank decision in the library so
// that all subspace computations share a single numerical convention:
//
//   rank threshold  tau = max(m, n) * sigma_max * rel
//
// with rel = 1e-12 unless a caller overrides it.  The implementation
// rotates pairs of columns until they are mutually orthogonal; for
// matrices with fewer rows than columns the input is padded with zero
// rows (right-multiplication by rotations keeps those rows zero), which
// costs a little arithmetic but keeps the kernel branch-free.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "netdiscern/errors.hpp"
#include "netdiscern/matrix.hpp"

namespace netdiscern {

struct SvdResult {
    Matrix u;       ///< m x n, columns for vanishing singular values are zero
    Vector sigma;   ///< n singular values, descending
    Matrix v;       ///< n x n orthogonal
    std::size_t sweeps = 0;
    bool converged = false;
};

namespace detail {

inline constexpr double kOrthogonalityTol = 1.0e-15;
inline constexpr std::size_t kMaxJacobiSweeps = 128;

} // namespace detail

inline SvdResult svd(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (n == 0 || m == 0) {
        SvdResult r;
        r.u = Matrix(m, n);
        r.sigma = Vector(n, 0.0);
        r.v = Matrix::identity(n);
        r.converged = true;
        return r;
    }

    // Work on a square-or-tall copy; extra rows are zero and stay zero.
    const std::size_t mw = std::max(m, n);
    Matrix w(mw, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = a(i, j);
    Matrix v = Matrix::identity(n);

    // Column dot products carry rounding noise that grows with the row
    // count, so the orthogonality target must scale with it or tall
    // stacked matrices dither at rounding level without ever counting
    // as converged.
    const double eps = std::numeric_limits<double>::epsilon();
    const double ortho_tol =
        std::max(detail::kOrthogonalityTol, static_cast<double>(mw) * eps);

    // Rank-deficient inputs (every wide matrix is one after padding)
    // drive the null-direction columns toward zero without ever reaching
    // it; once such a column is pure rounding noise the relative test
    // above keeps "orthogonalizing" it against everything forever.  A
    // column whose norm is at rounding level relative to the whole
    // matrix is numerically zero, so snap it to exactly zero: that is a
    // backward perturbation of at most sqrt(n)*eps*normF(a), orders of
    // magnitude below the rank threshold.
    double fro2 = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) fro2 += w(i, j) * w(i, j);
    const double deflate2 = fro2 * static_cast<double>(n) * eps * eps;

    std::size_t sweeps = 0;
    bool converged = false;
    while (sweeps < detail::kMaxJacobiSweeps) {
        ++sweeps;
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < mw; ++i) {
                    alpha += w(i, p) * w(i, p);
                    beta += w(i, q) * w(i, q);
                    gamma += w(i, p) * w(i, q);
                }
                if (alpha <= deflate2) {
                    for (std::size_t i = 0; i < mw; ++i) w(i, p) = 0.0;
                    alpha = 0.0;
                }
                if (beta <= deflate2) {
                    for (std::size_t i = 0; i < mw; ++i) w(i, q) = 0.0;
                    beta = 0.0;
                }
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= ortho_tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < mw; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) {
            converged = true;
            break;
        }
    }

    Vector sigma(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < mw; ++i) s += w(i, j) * w(i, j);
        sigma[j] = std::sqrt(s);
    }

    // Order by descending singular value.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SvdResult r;
    r.u = Matrix(m, n);
    r.sigma = Vector(n);
    r.v = Matrix(n, n);
    for (std::size_t jj = 0; jj < n; ++jj) {
        const std::size_t j = order[jj];
        r.sigma[jj] = sigma[j];
        for (std::size_t i = 0; i < n; ++i) r.v(i, jj) = v(i, j);
        if (sigma[j] > 0.0)
            for (std::size_t i = 0; i < m; ++i) r.u(i, jj) = w(i, j) / sigma[j];
    }
    r.sweeps = sweeps;
    r.converged = converged;
    if (!converged) throw contract_violation("svd: column orthogonalization did not converge");
    return r;
}

/// Threshold below which singular values count as zero.
inline double rank_threshold(std::size_t m, std::size_t n, double sigma_max,
                             double rel = 1.0e-12) {
    return static_cast<double>(std::max(m, n)) * sigma_max * rel;
}

/// scale_floor anchors the threshold when the matrix is a fragment of
/// something larger: selected rows of an orthonormal basis can consist
/// entirely of rounding noise (structurally zero components stored as
/// ~1e-16), and a threshold relative to the fragment's own largest
/// singular value would then count that noise as full rank.  Passing
/// the parent scale (1.0 for orthonormal columns) keeps the cutoff at
/// scale * rel * max(m, n) no matter how small the fragment is.
inline std::size_t numerical_rank(const SvdResult& r, std::size_t m, std::size_t n,
                                  double rel = 1.0e-12, double scale_floor = 0.0) {
    if (r.sigma.empty()) return 0;
    const double tau = rank_threshold(m, n, std::max(r.sigma.front(), scale_floor), rel);
    std::size_t rank = 0;
    while (rank < r.sigma.size() && r.sigma[rank] > tau) ++rank;
    return rank;
}

inline std::size_t numerical_rank(const Matrix& a, double rel = 1.0e-12,
                                  double scale_floor = 0.0) {
    if (a.empty()) return 0;
    return numerical_rank(svd(a), a.rows(), a.cols(), rel, scale_floor);
}

/// Orthonormal basis of { x : a x = 0 }, returned as n x (n - rank).
inline Matrix null_space(const Matrix& a, double rel = 1.0e-12, double scale_floor = 0.0) {
    if (a.cols() == 0) return Matrix(0, 0);
    if (a.rows() == 0) return Matrix::identity(a.cols());
    const SvdResult r = svd(a);
    const std::size_t rank = numerical_rank(r, a.rows(), a.cols(), rel, scale_floor);
    Matrix basis(a.cols(), a.cols() - rank);
    for (std::size_t j = rank; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.cols(); ++i) basis(i, j - rank) = r.v(i, j);
    return basis;
}

/// Orthonormal basis of the column space, returned as m x rank.
inline Matrix range_basis(const Matrix& a, double rel = 1.0e-12) {
    if (a.empty()) return Matrix(a.rows(), 0);
    const SvdResult r = svd(a);
    const std::size_t rank = numerical_rank(r, a.rows(), a.cols(), rel);
    Matrix basis(a.rows(), rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) basis(i, j) = r.u(i, j);
    return basis;
}

struct LeastSquaresResult {
    Vector solution;        ///< minimum-norm minimizer of ||a x - b||
    double residual_norm;   ///< ||a x - b|| at the minimizer
    std::size_t rank;
};

inline LeastSquaresResult solve_least_squares(const Matrix& a, const Vector& b,
                                              double rel = 1.0e-12) {
    if (a.rows() != b.size())
        throw contract_violation("solve_least_squares: right-hand side length differs");
    const SvdResult r = svd(a);
    const std::size_t rank = numerical_rank(r, a.rows(), a.cols(), rel);

    // x = sum_{j < rank} (u_j . b / sigma_j) v_j
    Vector x(a.cols(), 0.0);
    for (std::size_t j = 0; j < rank; ++j) {
        double uj_b = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) uj_b += r.u(i, j) * b[i];
        const double coef = uj_b / r.sigma[j];
        for (std::size_t i = 0; i < a.cols(); ++i) x[i] += coef * r.v(i, j);
    }

    Vector resid = a * x;
    for (std::size_t i = 0; i < b.size(); ++i) resid[i] -= b[i];
    return {std::move(x), norm(resid), rank};
}

} // namespace netdiscern
