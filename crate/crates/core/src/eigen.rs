//! Thin wrapper around the dense nonsymmetric eigensolver, returning
//! deterministically ordered eigenpairs as ndarray data.

use faer::prelude::*;
use faer::Mat;
use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};

pub struct Eigensystem {
    /// Eigenvalues sorted by descending real part, then descending
    /// imaginary part.
    pub values: Vec<Complex64>,
    /// Right eigenvectors as columns, in the same order.
    pub vectors: CMatrix,
}

pub fn eigensystem(a: &CMatrix) -> Result<Eigensystem> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::Shape(format!("eigensystem needs square input, got {rows}x{cols}")));
    }
    let m = Mat::<c64>::from_fn(rows, cols, |i, j| {
        let z = a[(i, j)];
        c64::new(z.re, z.im)
    });
    let evd = m
        .eigen()
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let mut order: Vec<usize> = (0..rows).collect();
    let val = |k: usize| {
        let v = s[k];
        Complex64::new(v.re, v.im)
    };
    order.sort_by(|&i, &j| {
        let (a, b) = (val(i), val(j));
        b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
    });
    let values: Vec<Complex64> = order.iter().map(|&k| val(k)).collect();
    let vectors = CMatrix::from_shape_fn((rows, rows), |(i, k)| {
        let z = u[(i, order[k])];
        Complex64::new(z.re, z.im)
    });
    Ok(Eigensystem { values, vectors })
}

/// Largest residual |A v - lambda v| over the returned eigenpairs, with
/// columns normalized; a cheap health check on the solver output.
pub fn eigen_residual(a: &CMatrix, es: &Eigensystem) -> f64 {
    let av = a.dot(&es.vectors);
    let mut worst = 0.0f64;
    for (k, lam) in es.values.iter().enumerate() {
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..a.dim().0 {
            num = num.max((av[(i, k)] - lam * es.vectors[(i, k)]).norm());
            den = den.max(es.vectors[(i, k)].norm());
        }
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{identity, rel_residual};

    #[test]
    fn recovers_clock_spectrum() {
        let root = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 4.0);
        let x = crate::weyl::shift(4);
        let es = eigensystem(&x).unwrap();
        // Shift eigenvalues are the fourth roots of unity.
        for (k, v) in es.values.iter().enumerate() {
            let mut best = f64::MAX;
            for j in 0..4 {
                best = best.min((v - root.powi(j)).norm());
            }
            assert!(best < 1e-12, "eigenvalue {k} = {v} not a 4th root");
        }
        assert!(eigen_residual(&x, &es) < 1e-12);
        assert!(rel_residual(&identity(4), &identity(4)) == 0.0);
    }
}
