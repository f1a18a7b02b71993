use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

fn norm1(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Solves `a x = b` by row-pivoted LU and returns `x` with the 1-norm
/// condition number `‖A‖₁‖A⁻¹‖₁`. Fails when the estimate exceeds `limit`.
pub(crate) fn solve(a: DMatrix<f64>, b: &DVector<f64>, limit: f64) -> Result<(DVector<f64>, f64)> {
    let size = a.nrows();
    if size == 0 {
        return Ok((DVector::zeros(0), 1.0));
    }
    let anorm = norm1(&a);
    let lu = a.lu();
    let estimate = match lu.try_inverse() {
        Some(inv) => anorm * norm1(&inv),
        None => f64::INFINITY,
    };
    if !(estimate <= limit) {
        return Err(Error::IllConditioned { size, estimate });
    }
    let x = lu
        .solve(b)
        .ok_or(Error::IllConditioned { size, estimate })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::IllConditioned { size, estimate });
    }
    Ok((x, estimate))
}

/// Diagonal similarity scaling (Parlett–Reinsch) that equalises row and
/// column norms before the eigenvalue iteration.
fn balance(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    const RADIX: f64 = 2.0;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of a real square matrix, `None` if the Schur iteration stalls.
pub(crate) fn eigenvalues(mut m: DMatrix<f64>) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    if n == 1 {
        return Some(vec![Complex64::new(m[(0, 0)], 0.0)]);
    }
    balance(&mut m);
    let schur = Schur::try_new(m, f64::EPSILON, 200 * n)?;
    let ev = schur.complex_eigenvalues();
    let out: Vec<Complex64> = ev.iter().map(|z| Complex64::new(z.re, z.im)).collect();
    out.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(out)
}
