#pragma once

// Subspace algebra on orthonormal bases: spans, intersections,
// projections, principal angles.  A subspace of R^n is represented by
// an n x d matrix with orthonormal columns; d == 0 encodes the trivial
// subspace {0}.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "netdiscern/errors.hpp"
#include "netdiscern/matrix.hpp"
#include "netdiscern/svd.hpp"

namespace netdiscern {

/// Orthonormal basis of the span of the given columns (duplicates and
/// near-dependent columns are compressed away).
inline Matrix span_of(const Matrix& columns, double rel = 1.0e-12) {
    if (columns.cols() == 0) return Matrix(columns.rows(), 0);
    return range_basis(columns, rel);
}

/// Orthonormal basis of span(u) .. intersected with .. span(w).
///
/// Solved via the null space of [u  -w]: every null vector (a; b)
/// satisfies u a = w b, and u a enumerates the intersection.
inline Matrix intersection(const Matrix& u, const Matrix& w, double rel = 1.0e-12) {
    if (u.rows() != w.rows()) throw contract_violation("intersection: ambient dimensions differ");
    const std::size_t n = u.rows();
    if (u.cols() == 0 || w.cols() == 0) return Matrix(n, 0);

    Matrix minus_w = -1.0 * w;
    const Matrix paired = hcat(u, minus_w);
    const Matrix nul = null_space(paired, rel);
    if (nul.cols() == 0) return Matrix(n, 0);

    Matrix raw(n, nul.cols());
    for (std::size_t c = 0; c < nul.cols(); ++c) {
        Vector a(u.cols());
        for (std::size_t i = 0; i < u.cols(); ++i) a[i] = nul(i, c);
        raw.set_column(c, u * a);
    }
    return span_of(raw, rel);
}

/// Orthogonal projection of x onto the subspace spanned by basis.
inline Vector project_onto(const Matrix& basis, const Vector& x) {
    Vector p(x.size(), 0.0);
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        const Vector bj = basis.column(j);
        const double c = dot(bj, x);
        for (std::size_t i = 0; i < x.size(); ++i) p[i] += c * bj[i];
    }
    return p;
}

/// Distance from x to the subspace spanned by basis.
inline double distance_to(const Matrix& basis, const Vector& x) {
    return norm(sub(x, project_onto(basis, x)));
}

/// Whether x lies in span(basis) up to tol * ||x||.
inline bool contains(const Matrix& basis, const Vector& x, double rel_tol = 1.0e-10) {
    const double nx = norm(x);
    if (nx == 0.0) return true;
    return distance_to(basis, x) <= rel_tol * nx;
}

/// Principal angles between two subspaces, ascending, in radians.
/// Both arguments must have orthonormal columns.  Returns
/// min(dim u, dim w) angles; an empty input yields no angles.
inline Vector principal_angles(const Matrix& u, const Matrix& w) {
    if (u.rows() != w.rows())
        throw contract_violation("principal_angles: ambient dimensions differ");
    const std::size_t k = std::min(u.cols(), w.cols());
    if (k == 0) return {};
    const Matrix cross = u.transposed() * w;
    const SvdResult r = svd(cross);
    Vector angles(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double c = std::clamp(r.sigma[i], 0.0, 1.0);
        angles[i] = std::acos(c);
    }
    // Singular values descend, so angles already ascend.
    return angles;
}

/// True when the two spans agree: equal dimension and every principal
/// angle below tol (radians).
inline bool same_subspace(const Matrix& u, const Matrix& w, double tol = 1.0e-8) {
    if (u.cols() != w.cols()) return false;
    const Vector angles = principal_angles(u, w);
    for (double a : angles)
        if (a > tol) return false;
    return true;
}

} // namespace netdiscern
