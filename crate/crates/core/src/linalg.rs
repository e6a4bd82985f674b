//! Small dense symmetric eigenvalue routines for the local alignment
//! measure. Only singular values are needed, so a cyclic Jacobi sweep on
//! the smaller Gram matrix is enough.

/// Eigenvalues of a small dense symmetric matrix (row-major, n x n),
/// computed by cyclic Jacobi rotations. Ascending order.
pub(crate) fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a[0]];
    }
    let idx = |i: usize, j: usize| i * n + j;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[idx(i, j)] * a[idx(i, j)];
            }
        }
        let scale: f64 = (0..n).map(|i| a[idx(i, i)].abs()).fold(0.0, f64::max);
        if off.sqrt() <= 1e-14 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..n {
                    let arp = a[idx(r, p)];
                    let arq = a[idx(r, q)];
                    a[idx(r, p)] = c * arp - s * arq;
                    a[idx(r, q)] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[idx(p, r)];
                    let aqr = a[idx(q, r)];
                    a[idx(p, r)] = c * apr - s * aqr;
                    a[idx(q, r)] = s * apr + c * aqr;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    eig.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Sum of the singular values of a dense row-major `rows x cols` matrix,
/// via the eigenvalues of the smaller Gram matrix.
pub(crate) fn singular_value_sum(m: &[f64], rows: usize, cols: usize) -> f64 {
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let (g, n) = if cols <= rows {
        // G = M^T M (cols x cols)
        let mut g = vec![0.0; cols * cols];
        for i in 0..cols {
            for j in i..cols {
                let mut s = 0.0;
                for r in 0..rows {
                    s += m[r * cols + i] * m[r * cols + j];
                }
                g[i * cols + j] = s;
                g[j * cols + i] = s;
            }
        }
        (g, cols)
    } else {
        // G = M M^T (rows x rows)
        let mut g = vec![0.0; rows * rows];
        for i in 0..rows {
            for j in i..rows {
                let mut s = 0.0;
                for c in 0..cols {
                    s += m[i * cols + c] * m[j * cols + c];
                }
                g[i * rows + j] = s;
                g[j * rows + i] = s;
            }
        }
        (g, rows)
    };
    let eig = symmetric_eigenvalues(g, n);
    // Eigenvalues carry O(eps * ||G||) noise; without a relative floor a
    // true zero would contribute sqrt(eps * ||G||) to the sum.
    let floor = eig.last().copied().unwrap_or(0.0).max(0.0) * 1e-12;
    eig.into_iter()
        .map(|e| if e > floor { e.sqrt() } else { 0.0 })
        .sum()
}
