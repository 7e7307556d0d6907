//! Dense complex matrices and the small set of operations everything else
//! builds on: tensor products, commutators, scale-normalized residuals.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// All operators in the crate are dense square matrices over C.
pub type CMatrix = Array2<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default cap on chain operator dimensions; large enough for every chain
/// used in the checks, small enough to catch runaway tensor products.
pub const DIM_CAP: usize = 4096;

pub fn identity(dim: usize) -> CMatrix {
    Array2::eye(dim)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    Array2::zeros((rows, cols))
}

/// Kronecker product with the first factor slowest, so basis states of
/// `kron(a, b)` are ordered (i_a, i_b).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = zeros(ra * rb, ca * cb);
    for ia in 0..ra {
        for ja in 0..ca {
            let f = a[(ia, ja)];
            if f == ZERO {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out[(ia * rb + ib, ja * cb + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a list of factors, left factor slowest.
///
/// Fails if the resulting dimension would exceed `cap`; chain builders pass
/// [`DIM_CAP`] so a mistyped site count cannot eat the machine.
pub fn kron_chain(factors: &[CMatrix], cap: usize) -> Result<CMatrix> {
    if factors.is_empty() {
        return Ok(identity(1));
    }
    let mut rows = 1usize;
    let mut cols = 1usize;
    for f in factors {
        rows = rows
            .checked_mul(f.dim().0)
            .ok_or(Error::DimensionCap { got: usize::MAX, cap })?;
        cols = cols
            .checked_mul(f.dim().1)
            .ok_or(Error::DimensionCap { got: usize::MAX, cap })?;
        if rows.max(cols) > cap {
            return Err(Error::DimensionCap { got: rows.max(cols), cap });
        }
    }
    let mut out = factors[0].clone();
    for f in &factors[1..] {
        out = kron(&out, f);
    }
    Ok(out)
}

/// Operator acting as `op` on one site of a uniform chain and as identity
/// elsewhere. Sites are numbered from 0 starting at the leftmost tensor
/// factor.
pub fn site_operator(op: &CMatrix, site: usize, sites: usize, cap: usize) -> Result<CMatrix> {
    let dim = op.dim().0;
    let factors: Vec<CMatrix> = (0..sites)
        .map(|l| if l == site { op.clone() } else { identity(dim) })
        .collect();
    kron_chain(&factors, cap)
}

/// Same single-site operator on every site of the chain, multiplied together.
pub fn global_product(op: &CMatrix, sites: usize, cap: usize) -> Result<CMatrix> {
    let factors: Vec<CMatrix> = (0..sites).map(|_| op.clone()).collect();
    kron_chain(&factors, cap)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.dot(b) - b.dot(a)
}

/// Largest entry modulus.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

/// Entrywise distance normalized by max(1, |A|, |B|), so residuals stay
/// meaningful whether the matrices are tiny or huge.
pub fn rel_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    max_abs(&diff) / 1.0f64.max(max_abs(a)).max(max_abs(b))
}

/// Commutator size normalized the same way as [`rel_residual`].
pub fn comm_residual(a: &CMatrix, b: &CMatrix) -> f64 {
    let ab = a.dot(b);
    let ba = b.dot(a);
    rel_residual(&ab, &ba)
}

/// Fit the best single scalar lambda with `b ~ lambda * a` and report the
/// residual of `b - lambda a` (scale-normalized) together with lambda.
///
/// Used for identities that hold up to one global constant coming from a
/// root branch choice; the residual doubles as a constancy check on the
/// entrywise ratio.
pub fn scalar_match(a: &CMatrix, b: &CMatrix) -> (Complex64, f64) {
    let mut best = ZERO;
    let mut best_abs = 0.0f64;
    for (za, _) in a.iter().zip(b.iter()) {
        if za.norm() > best_abs {
            best_abs = za.norm();
        }
    }
    if best_abs == 0.0 {
        return (ONE, max_abs(b).min(1.0));
    }
    for (za, zb) in a.iter().zip(b.iter()) {
        if za.norm() >= 0.5 * best_abs {
            best = zb / za;
            break;
        }
    }
    let scaled = a.mapv(|z| z * best);
    (best, rel_residual(&scaled, b))
}

/// Error out if any entry is NaN or infinite.
pub fn ensure_finite(a: &CMatrix) -> Result<()> {
    for ((i, j), z) in a.indexed_iter() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite(i, j));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small(dim: usize, seed: u64) -> CMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_shape_fn((dim, dim), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn kron_identity_is_identity() {
        let a = identity(3);
        let b = identity(4);
        assert_eq!(rel_residual(&kron(&a, &b), &identity(12)), 0.0);
    }

    #[test]
    fn kron_chain_caps_dimension() {
        let f = identity(8);
        let err = kron_chain(&vec![f.clone(), f.clone(), f.clone(), f.clone(), f], 4096);
        assert!(matches!(err, Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn site_operator_places_factor() {
        let x = small(2, 1);
        let op = site_operator(&x, 1, 3, 64).unwrap();
        let direct = kron(&kron(&identity(2), &x), &identity(2));
        assert!(rel_residual(&op, &direct) < 1e-15);
    }

    #[test]
    fn scalar_match_recovers_scale() {
        let a = small(4, 2);
        let lam = Complex64::new(0.3, -1.7);
        let b = a.mapv(|z| z * lam);
        let (got, res) = scalar_match(&a, &b);
        assert!((got - lam).norm() < 1e-12);
        assert!(res < 1e-12);
    }

    proptest! {
        // Mixed product rule (A kron B)(C kron D) = AC kron BD.
        #[test]
        fn kron_mixed_product(sa in 0u64..50, sb in 50u64..100) {
            let a = small(2, sa);
            let b = small(3, sa + 1000);
            let c = small(2, sb);
            let d = small(3, sb + 1000);
            let lhs = kron(&a, &b).dot(&kron(&c, &d));
            let rhs = kron(&a.dot(&c), &b.dot(&d));
            prop_assert!(rel_residual(&lhs, &rhs) < 1e-12);
        }
    }
}
