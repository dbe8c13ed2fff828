use crate::graph::{has_spanning_tree, laplacian, MixedGraph};

use super::DynamicsError;

/// Nonnegative `w` with `w^T L = 0` and `sum(w) = 1`.
///
/// Solves `L^T w = 0` with one (redundant, since `1^T L^T = 0`) equation
/// replaced by the normalization, using Gaussian elimination with partial
/// pivoting.
pub fn left_zero_eigenvector(m: &MixedGraph) -> Result<Vec<f64>, DynamicsError> {
    if !has_spanning_tree(m) {
        return Err(DynamicsError::NoSpanningTree);
    }
    let l = laplacian(m).total;
    let n = l.nrows();
    // Augmented system [L^T | e_0] with row 0 replaced by ones.
    let mut a = vec![vec![0.0; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = l[[j, i]];
        }
    }
    a[0] = vec![1.0; n + 1];

    for col in 0..n {
        let piv = (col..n).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).expect("non-empty pivot range");
        if a[piv][col].abs() < 1e-14 {
            return Err(DynamicsError::NoSpanningTree);
        }
        a.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                let (top, bottom) = a.split_at_mut(r);
                for (dst, src) in bottom[0][col..=n].iter_mut().zip(&top[col][col..=n]) {
                    *dst -= f * src;
                }
            }
        }
    }
    let mut w = vec![0.0; n];
    for i in (0..n).rev() {
        let tail: f64 = (i + 1..n).map(|j| a[i][j] * w[j]).sum();
        w[i] = (a[i][n] - tail) / a[i][i];
    }
    // Clear rounding noise on entries that are exactly zero in theory.
    for z in &mut w {
        if *z < 0.0 {
            *z = 0.0;
        }
    }
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|z| z / total).collect())
}
