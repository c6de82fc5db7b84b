//! Implicit QL iteration for symmetric tridiagonal matrices.
//!
//! Follows the EISPACK `tql2` structure: Wilkinson-style shifts, Givens
//! rotations accumulated into the eigenvector matrix. Eigenvectors are kept
//! column-major so each rotation touches two contiguous columns.

/// Maximum QL sweeps per eigenvalue before giving up.
const MAX_SWEEPS: usize = 60;

/// Diagonalizes in place.
///
/// `d` holds the diagonal, `e[i]` the coupling between rows `i` and `i + 1`
/// (length `n`, last entry ignored). `z` must hold the `n x n` identity in
/// column-major order on entry. On success `d` holds the (unsorted)
/// eigenvalues and column `j` of `z` the eigenvector for `d[j]`. On failure the
/// index of the eigenvalue that did not converge is returned.
pub(crate) fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<(), usize> {
    let n = d.len();
    debug_assert_eq!(e.len(), n);
    debug_assert_eq!(z.len(), n * n);
    if n <= 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(l);
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // underflow: split the matrix and restart this l
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (lo, hi) = z.split_at_mut((i + 1) * n);
                let zi = &mut lo[i * n..];
                let zi1 = &mut hi[..n];
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let t = *b;
                    *b = s * *a + c * t;
                    *a = c * *a - s * t;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
