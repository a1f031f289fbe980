#pragma once

namespace netdiscern {

/// Numeric thresholds shared across the library.  Every analysis entry
/// point accepts a Tolerances value so a caller can tighten or relax a
/// decision boundary; the defaults are the ones all shipped tests and
/// reports use.
struct Tolerances {
    /// Eigenvalues within eigen_cluster_rel * max(1, |lambda|_max) of
    /// each other are treated as one repeated eigenvalue.  Discernibility
    /// verdicts can flip at this boundary, which is why it is a knob.
    double eigen_cluster_rel = 1.0e-7;

    /// Componentwise eigenvector tests treat |q| <= component_rel * ||x||
    /// as zero.
    double component_rel = 1.0e-8;

    /// Singular values above max(m, n) * sigma_max * rank_rel count
    /// toward the numerical rank.
    double rank_rel = 1.0e-12;

    /// Jacobi sweeps stop once the off-diagonal Frobenius norm drops
    /// below jacobi_off_rel * ||A||_F.
    double jacobi_off_rel = 1.0e-14;

    /// Verdicts decided within this factor of their threshold are
    /// reported as marginal.
    double marginal_band = 10.0;

    /// Detection verdicts with |pi - E_v| below
    /// detect_marginal_abs * (1 + E_v) are flagged marginal.
    double detect_marginal_abs = 1.0e-6;

    double cluster_gap(double lambda_max_abs) const {
        const double scale = lambda_max_abs > 1.0 ? lambda_max_abs : 1.0;
        return eigen_cluster_rel * scale;
    }
};

} // namespace netdiscern
