//! Numerical rank of the discrete observability matrix.

use nalgebra::DMatrix;

/// Relative singular-value threshold for the numerical rank.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// Stacked observability matrix `[H; H·F; …; H·Fⁿ⁻¹]`.
pub fn observability_matrix(f: &DMatrix<f64>, h: &DMatrix<f64>) -> DMatrix<f64> {
    let n = f.nrows();
    let m = h.nrows();
    let mut o = DMatrix::zeros(m * n, n);
    let mut block = h.clone();
    for i in 0..n {
        o.view_mut((i * m, 0), (m, n)).copy_from(&block);
        block = &block * f;
    }
    o
}

/// Rank of the observability matrix, counting singular values above
/// [`RANK_TOLERANCE`]`·σ_max` after scaling every column to unit norm (the
/// state mixes metres, radians and their rates, so the raw matrix is badly
/// balanced).
pub fn observability_rank(f: &DMatrix<f64>, h: &DMatrix<f64>) -> usize {
    let mut o = observability_matrix(f, h);
    for mut col in o.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    let sv = o.singular_values();
    let max = sv.max();
    if !(max > 0.0) {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_TOLERANCE * max).count()
}
