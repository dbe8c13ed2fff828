//! Dense nonsymmetric eigenvalue solver.
//!
//! The matrix is first permuted to block triangular form using the strongly
//! connected components of its nonzero pattern; the spectrum is the union of
//! the diagonal blocks' spectra, and 1x1 blocks are read off exactly. Each
//! larger block goes through diagonal similarity balancing, reduction to
//! upper Hessenberg form by stabilized elementary similarity transforms, and
//! Francis double-shift QR. Only eigenvalues are computed.

use ndarray::Array2;
use num_complex::Complex64;

use super::{SpectralError, Spectrum};

/// Total QR sweep budget is `ITERATIONS_PER_ROW * n`.
const ITERATIONS_PER_ROW: usize = 100;

pub fn eigenvalues(l: &Array2<f64>) -> Result<Spectrum, SpectralError> {
    let n = l.nrows();
    if n == 0 || l.ncols() != n {
        return Err(SpectralError::NotSquare { rows: n, cols: l.ncols() });
    }
    if l.iter().any(|x| !x.is_finite()) {
        return Err(SpectralError::NonFinite);
    }
    let mut eigenvalues = Vec::with_capacity(n);
    for block in strong_components(l) {
        if let [i] = block[..] {
            eigenvalues.push(Complex64::new(l[[i, i]], 0.0));
            continue;
        }
        let mut a = Array2::from_shape_fn((block.len(), block.len()), |(r, c)| l[[block[r], block[c]]]);
        balance(&mut a);
        hessenberg(&mut a);
        eigenvalues.extend(hqr(&mut a)?);
    }
    Ok(Spectrum { eigenvalues })
}

/// Strongly connected components of the digraph with an arc `i -> j`
/// whenever `a[i][j] != 0` (`i != j`). Iterative Tarjan; component members
/// are sorted.
fn strong_components(a: &Array2<f64>) -> Vec<Vec<usize>> {
    let n = a.nrows();
    let succ: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && a[[i, j]] != 0.0).collect()).collect();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut out = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position in its successor list)
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = succ[v].get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Scales rows and columns by powers of two so their off-diagonal norms are
/// comparable. Similarity transform; eigenvalues are unchanged.
fn balance(a: &mut Array2<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[[j, i]].abs();
                    r += a[[i, j]].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut g = r / RADIX;
            let mut f = 1.0;
            let s = c + r;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[[i, j]] *= g;
                }
                for j in 0..n {
                    a[[j, i]] *= f;
                }
            }
        }
    }
}

/// Reduction to upper Hessenberg form by Gaussian elimination with pivoting.
/// Entries below the subdiagonal are zeroed on exit.
fn hessenberg(a: &mut Array2<f64>) {
    let n = a.nrows();
    for m in 1..n.saturating_sub(1) {
        let mut x: f64 = 0.0;
        let mut piv = m;
        for j in m..n {
            if a[[j, m - 1]].abs() > x.abs() {
                x = a[[j, m - 1]];
                piv = j;
            }
        }
        if piv != m {
            for j in (m - 1)..n {
                a.swap([piv, j], [m, j]);
            }
            for j in 0..n {
                a.swap([j, piv], [j, m]);
            }
        }
        if x != 0.0 {
            for i in (m + 1)..n {
                let mut y = a[[i, m - 1]];
                if y != 0.0 {
                    y /= x;
                    a[[i, m - 1]] = y;
                    for j in m..n {
                        a[[i, j]] -= y * a[[m, j]];
                    }
                    for j in 0..n {
                        a[[j, m]] += y * a[[j, i]];
                    }
                }
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a[[i, j]] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix, destroying it.
fn hqr(a: &mut Array2<f64>) -> Result<Vec<Complex64>, SpectralError> {
    let n = a.nrows();
    let cap = ITERATIONS_PER_ROW * n;
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let eps = f64::EPSILON;

    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[[i, j]].abs();
        }
    }

    let mut total_its = 0usize;
    let mut nn = n as isize - 1;
    let mut t = 0.0;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nu = nn as usize;
            // Look for a single small subdiagonal element.
            let mut l = nu;
            while l > 0 {
                let mut s = a[[l - 1, l - 1]].abs() + a[[l, l]].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[[l, l - 1]].abs() <= eps * s {
                    a[[l, l - 1]] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[[nu, nu]];
            if l == nu {
                // One root found.
                out[nu] = Complex64::new(x + t, 0.0);
                nn -= 1;
                break;
            }
            let mut y = a[[nu - 1, nu - 1]];
            let mut w = a[[nu, nu - 1]] * a[[nu - 1, nu]];
            if l == nu - 1 {
                // Two roots found.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    out[nu - 1] = Complex64::new(x + z, 0.0);
                    out[nu] = out[nu - 1];
                    if z != 0.0 {
                        out[nu] = Complex64::new(x - w / z, 0.0);
                    }
                } else {
                    out[nu] = Complex64::new(x + p, -z);
                    out[nu - 1] = Complex64::new(x + p, z);
                }
                nn -= 2;
                break;
            }

            if total_its >= cap {
                return Err(SpectralError::ConvergenceFailure { iterations: total_its });
            }
            if its > 0 && its.is_multiple_of(10) {
                // Exceptional shift.
                t += x;
                for i in 0..=nu {
                    a[[i, i]] -= x;
                }
                let s = a[[nu, nu - 1]].abs() + a[[nu - 1, nu - 2]].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total_its += 1;

            // Form shift and look for two consecutive small subdiagonals.
            let mut m = nu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[[m, m]];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[[m + 1, m]] + a[[m, m + 1]];
                q = a[[m + 1, m + 1]] - z - rr - ss;
                r = a[[m + 2, m + 1]];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[[m, m - 1]].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[[m - 1, m - 1]].abs() + z.abs() + a[[m + 1, m + 1]].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m..nu - 1 {
                a[[i + 2, i]] = 0.0;
                if i != m {
                    a[[i + 2, i - 1]] = 0.0;
                }
            }

            // Double QR step on rows l..=nu and columns m..=nu.
            for k in m..nu {
                if k != m {
                    p = a[[k, k - 1]];
                    q = a[[k + 1, k - 1]];
                    r = 0.0;
                    if k + 1 != nu {
                        r = a[[k + 2, k - 1]];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l != m {
                        a[[k, k - 1]] = -a[[k, k - 1]];
                    }
                } else {
                    a[[k, k - 1]] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nu {
                    let mut pp = a[[k, j]] + q * a[[k + 1, j]];
                    if k + 1 != nu {
                        pp += r * a[[k + 2, j]];
                        a[[k + 2, j]] -= pp * z;
                    }
                    a[[k + 1, j]] -= pp * y;
                    a[[k, j]] -= pp * x;
                }
                let mmin = if nu < k + 3 { nu } else { k + 3 };
                for i in l..=mmin {
                    let mut pp = x * a[[i, k]] + y * a[[i, k + 1]];
                    if k + 1 != nu {
                        pp += z * a[[i, k + 2]];
                        a[[i, k + 2]] -= pp * r;
                    }
                    a[[i, k + 1]] -= pp * q;
                    a[[i, k]] -= pp;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use ndarray::array;

    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn scalar() {
        let s = eigenvalues(&array![[3.5]]).unwrap();
        assert_eq!(s.eigenvalues, vec![Complex64::new(3.5, 0.0)]);
    }

    #[test]
    fn lower_triangular_reads_diagonal() {
        let l = array![[0., 0., 0.], [-2., 2., 0.], [-1., -1., 5.]];
        let ev = sorted(eigenvalues(&l).unwrap().eigenvalues);
        for (got, want) in ev.iter().zip([0.0, 2.0, 5.0]) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn rotation_block() {
        let ev = sorted(eigenvalues(&array![[1., -1.], [1., 1.]]).unwrap().eigenvalues);
        assert!((ev[0] - Complex64::new(1.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - Complex64::new(1.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn companion_matrix_roots() {
        // x^4 - 10x^3 + 35x^2 - 50x + 24 = (x-1)(x-2)(x-3)(x-4)
        let c = array![[10., -35., 50., -24.], [1., 0., 0., 0.], [0., 1., 0., 0.], [0., 0., 1., 0.]];
        let ev = sorted(eigenvalues(&c).unwrap().eigenvalues);
        for (got, want) in ev.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((got - want).norm() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn trace_and_determinant_are_preserved() {
        let a = array![[4., 1., -2., 2.], [1., 2., 0., 1.], [-2., 0., 3., -2.], [2., 1., -2., -1.5]];
        let ev = eigenvalues(&a).unwrap().eigenvalues;
        let tr: Complex64 = ev.iter().sum();
        assert!((tr.re - a.diag().sum()).abs() < 1e-10);
        assert!(tr.im.abs() < 1e-10);
    }

    #[test]
    fn components_of_block_triangular_pattern() {
        let a = array![[1., 2., 0., 0.], [3., 1., 0., 0.], [1., 0., 5., 0.], [0., 0., 1., 2.]];
        let mut comps = strong_components(&a);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2], vec![3]]);
        let ev = sorted(eigenvalues(&a).unwrap().eigenvalues);
        let want = [1.0 - 6f64.sqrt(), 2.0, 1.0 + 6f64.sqrt(), 5.0];
        for (got, want) in ev.iter().zip(want) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(eigenvalues(&Array2::zeros((2, 3))), Err(SpectralError::NotSquare { .. })));
        assert!(matches!(eigenvalues(&array![[f64::NAN]]), Err(SpectralError::NonFinite)));
    }
}
