#pragma once

// Symmetric eigendecomposition with eigenvalue clustering, plus the
// matrix exponential expressed through it.
//
// The eigensolver is cyclic Jacobi: repeated 2x2 rotations annihilate
// off-diagonal entries until the off-diagonal Frobenius norm falls
// below jacobi_off_rel * ||A||_F.  Jacobi is unconditionally stable on
// symmetric input, delivers orthogonal eigenvectors to machine
// precision, and needs no external dependency; all matrices here are
// desk-scale, so its O(n^3) sweeps are irrelevant.
//
// Clustering turns the raw eigenvalue list into groups of "equal"
// eigenvalues: consecutive sorted values closer than the clustering
// tolerance share a group.  Everything downstream (shared spectra,
// eigenspace bases, exponentials) works on these groups.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "netdiscern/errors.hpp"
#include "netdiscern/matrix.hpp"
#include "netdiscern/tolerances.hpp"

namespace netdiscern {

struct JacobiEigenResult {
    Vector values;    ///< ascending
    Matrix vectors;   ///< orthogonal, column j pairs with values[j]
    std::size_t sweeps = 0;
};

namespace detail {

inline constexpr std::size_t kMaxEigenSweeps = 64;

inline double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace detail

/// Full eigensystem of a symmetric matrix by cyclic Jacobi rotations.
/// Throws contract_violation if the input is measurably asymmetric.
inline JacobiEigenResult jacobi_eigensystem(const Matrix& input,
                                            double off_rel = 1.0e-14,
                                            double asymmetry_rel = 1.0e-12) {
    if (input.rows() != input.cols())
        throw contract_violation("jacobi_eigensystem: matrix not square");
    const std::size_t n = input.rows();

    const double scale = std::max(1.0, max_abs(input));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(input(i, j) - input(j, i)) > asymmetry_rel * scale)
                throw contract_violation("jacobi_eigensystem: input is not symmetric");

    // Work on the symmetrized copy so tiny representational asymmetry
    // cannot leak into the rotations.
    Matrix a = input;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (input(i, j) + input(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }

    Matrix v = Matrix::identity(n);
    const double norm_ref = frobenius_norm(a);
    const double stop = off_rel * norm_ref;

    std::size_t sweeps = 0;
    while (sweeps < detail::kMaxEigenSweeps && detail::off_diagonal_norm(a) > stop) {
        ++sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double zeta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    if (detail::off_diagonal_norm(a) > stop)
        throw contract_violation("jacobi_eigensystem: sweep limit reached before convergence");

    JacobiEigenResult r;
    r.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.values[i] = a(i, i);
    r.sweeps = sweeps;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return r.values[i] < r.values[j]; });

    Vector sorted(n);
    Matrix vectors(n, n);
    for (std::size_t jj = 0; jj < n; ++jj) {
        sorted[jj] = r.values[order[jj]];
        for (std::size_t i = 0; i < n; ++i) vectors(i, jj) = v(i, order[jj]);
    }
    r.values = std::move(sorted);
    r.vectors = std::move(vectors);
    return r;
}

/// One distinct eigenvalue: a representative value and an orthonormal
/// basis of its eigenspace.
struct EigenGroup {
    double value = 0.0;
    Matrix basis;   ///< n x multiplicity

    std::size_t multiplicity() const { return basis.cols(); }
};

/// Eigendecomposition with equal-within-tolerance eigenvalues merged
/// into one group.  Group representatives ascend strictly.
class EigenStructure {
public:
    EigenStructure() = default;
    EigenStructure(std::vector<EigenGroup> groups, std::size_t n, double cluster_gap)
        : groups_(std::move(groups)), n_(n), cluster_gap_(cluster_gap) {}

    std::size_t dimension() const { return n_; }
    double cluster_gap() const { return cluster_gap_; }
    const std::vector<EigenGroup>& groups() const { return groups_; }

    /// Eigenvalues expanded with multiplicity, ascending.
    Vector eigenvalues() const {
        Vector out;
        out.reserve(n_);
        for (const auto& g : groups_)
            out.insert(out.end(), g.multiplicity(), g.value);
        return out;
    }

    /// e^{A t} x  =  sum over groups of e^{lambda t} S (S' x).
    Vector exp_action(double t, const Vector& x) const {
        if (x.size() != n_) throw contract_violation("exp_action: dimension mismatch");
        Vector y(n_, 0.0);
        for (const auto& g : groups_) {
            const double w = std::exp(g.value * t);
            for (std::size_t c = 0; c < g.basis.cols(); ++c) {
                const Vector col = g.basis.column(c);
                const double coef = w * dot(col, x);
                for (std::size_t i = 0; i < n_; ++i) y[i] += coef * col[i];
            }
        }
        return y;
    }

    /// Dense e^{A t}.
    Matrix exp_dense(double t) const {
        Matrix y(n_, n_);
        for (const auto& g : groups_) {
            const double w = std::exp(g.value * t);
            for (std::size_t c = 0; c < g.basis.cols(); ++c) {
                const Vector col = g.basis.column(c);
                for (std::size_t i = 0; i < n_; ++i)
                    for (std::size_t j = 0; j < n_; ++j)
                        y(i, j) += w * col[i] * col[j];
            }
        }
        return y;
    }

    /// Sum of lambda * S(lambda) S(lambda)' — reconstructs the matrix.
    Matrix reconstruct() const {
        Matrix y(n_, n_);
        for (const auto& g : groups_)
            for (std::size_t c = 0; c < g.basis.cols(); ++c) {
                const Vector col = g.basis.column(c);
                for (std::size_t i = 0; i < n_; ++i)
                    for (std::size_t j = 0; j < n_; ++j)
                        y(i, j) += g.value * col[i] * col[j];
            }
        return y;
    }

private:
    std::vector<EigenGroup> groups_;
    std::size_t n_ = 0;
    double cluster_gap_ = 0.0;
};

/// Decompose a symmetric matrix and cluster its eigenvalues.
inline EigenStructure spectral_decompose(const Matrix& a, const Tolerances& tol = {}) {
    const JacobiEigenResult eig =
        jacobi_eigensystem(a, tol.jacobi_off_rel);
    const std::size_t n = a.rows();

    double lambda_max = 0.0;
    for (double v : eig.values) lambda_max = std::max(lambda_max, std::abs(v));
    const double gap = tol.cluster_gap(lambda_max);

    std::vector<EigenGroup> groups;
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && eig.values[stop] - eig.values[stop - 1] <= gap) ++stop;

        EigenGroup g;
        g.basis = Matrix(n, stop - start);
        double mean = 0.0;
        for (std::size_t j = start; j < stop; ++j) {
            mean += eig.values[j];
            for (std::size_t i = 0; i < n; ++i) g.basis(i, j - start) = eig.vectors(i, j);
        }
        g.value = mean / static_cast<double>(stop - start);
        groups.push_back(std::move(g));
        start = stop;
    }
    return EigenStructure(std::move(groups), n, gap);
}

} // namespace netdiscern
