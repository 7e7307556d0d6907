//! Weyl pairs (clock and shift matrices), discrete Fourier maps, and the
//! bookkeeping of the two roots of unity the models run on: omega of order N
//! for the clock algebra and q with q^2 = 1/omega for the quantum group.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::cmatrix::{self, CMatrix};
use crate::error::{Error, Result};

const ROOT_TOL: f64 = 1e-9;

/// Checks that `root` is a primitive d-th root of unity.
pub fn check_primitive(root: Complex64, d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::BadRoot("order must be positive".into()));
    }
    let mut p = Complex64::new(1.0, 0.0);
    for j in 1..=d {
        p *= root;
        let dist = (p - 1.0).norm();
        if j < d && dist < ROOT_TOL {
            return Err(Error::BadRoot(format!(
                "root has order {j}, expected primitive order {d}"
            )));
        }
        if j == d && dist > ROOT_TOL {
            return Err(Error::BadRoot(format!(
                "root^{d} differs from 1 by {dist:.2e}"
            )));
        }
    }
    Ok(())
}

/// Cyclic shift on C^d: X e_k = e_{k+1 mod d}.
pub fn shift(d: usize) -> CMatrix {
    let mut x = cmatrix::zeros(d, d);
    for k in 0..d {
        x[((k + 1) % d, k)] = cmatrix::ONE;
    }
    x
}

/// Clock matrix on C^d: Z e_k = root^k e_k.
pub fn clock(d: usize, root: Complex64) -> CMatrix {
    let mut z = cmatrix::zeros(d, d);
    let mut p = Complex64::new(1.0, 0.0);
    for k in 0..d {
        z[(k, k)] = p;
        p *= root;
    }
    z
}

/// Weyl pair (X, Z) on C^d with X Z = root^{-1} Z X.
pub fn weyl_pair(d: usize, root: Complex64) -> Result<(CMatrix, CMatrix)> {
    check_primitive(root, d)?;
    Ok((shift(d), clock(d, root)))
}

/// Integer power of the shift, X^k e_sigma = e_{sigma+k mod d}, valid for
/// negative k.
pub fn shift_pow(d: usize, k: i64) -> CMatrix {
    let mut x = cmatrix::zeros(d, d);
    let kk = k.rem_euclid(d as i64) as usize;
    for s in 0..d {
        x[((s + kk) % d, s)] = cmatrix::ONE;
    }
    x
}

/// Integer power of the clock, Z^k e_sigma = root^{k sigma} e_sigma.
/// Exponents are reduced mod d, so `root` must be a d-th root of unity.
pub fn clock_pow(d: usize, root: Complex64, k: i64) -> CMatrix {
    let mut z = cmatrix::zeros(d, d);
    for s in 0..d {
        z[(s, s)] = root.powi((k * s as i64).rem_euclid(d as i64) as i32);
    }
    z
}

/// Fourier map whose column k is the hat vector
/// d^{-1/2} sum_sigma root^{-k sigma} e_sigma.
///
/// In the hat basis the pair trades places: X acts as a clock
/// (X hat_k = root^k hat_k) and Z^{-1} acts as a shift
/// (Z^{-1} hat_k = hat_{k+1}).
pub fn fourier(d: usize, root: Complex64) -> CMatrix {
    let scale = 1.0 / (d as f64).sqrt();
    CMatrix::from_shape_fn((d, d), |(sigma, k)| {
        root.powi(-((k * sigma) as i32)) * scale
    })
}

/// The clock-algebra operators in the hat basis, as matrices on the original
/// basis: hat-Z = X and hat-X = Z^{-1}.
pub fn hat_pair(x: &CMatrix, z: &CMatrix) -> (CMatrix, CMatrix) {
    let zinv = z.mapv(|v| if v == cmatrix::ZERO { v } else { 1.0 / v });
    (x.clone(), zinv)
}

/// The two commuting roots of unity used throughout: omega = e^{2 pi i / N}
/// of order N (the clock order) and q of order n with q^{-2} = omega.
///
/// Two regimes exist: n = N odd, where q = -e^{-i pi / N} also has order N,
/// and n = 2N, where q = e^{-i pi / N} has order 2N (for even N the opposite
/// sign -e^{-i pi / N} is primitive of order 2N as well and may be selected).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSetup {
    /// Clock order N.
    pub base: usize,
    /// Order n of q: either N (odd case) or 2N (doubled case).
    pub ext: usize,
    pub omega: Complex64,
    pub q: Complex64,
}

impl RootSetup {
    fn omega_of(base: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI / base as f64)
    }

    /// Odd regime n = N: q = -e^{-i pi / N}.
    pub fn odd(base: usize) -> Result<Self> {
        if base % 2 == 0 || base < 3 {
            return Err(Error::Param(format!(
                "odd regime needs odd N >= 3, got {base}"
            )));
        }
        let omega = Self::omega_of(base);
        let q = -Complex64::from_polar(1.0, -PI / base as f64);
        let s = Self { base, ext: base, omega, q };
        s.validate()?;
        Ok(s)
    }

    /// Doubled regime n = 2N with the default sign q = e^{-i pi / N}.
    pub fn doubled(base: usize) -> Result<Self> {
        Self::doubled_signed(base, true)
    }

    /// Doubled regime with an explicit sign choice for q = ±e^{-i pi / N}.
    /// The minus sign is only primitive of order 2N when N is even.
    pub fn doubled_signed(base: usize, plus: bool) -> Result<Self> {
        if base < 2 {
            return Err(Error::Param(format!("doubled regime needs N >= 2, got {base}")));
        }
        let omega = Self::omega_of(base);
        let mut q = Complex64::from_polar(1.0, -PI / base as f64);
        if !plus {
            q = -q;
        }
        let s = Self { base, ext: 2 * base, omega, q };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        check_primitive(self.omega, self.base)?;
        check_primitive(self.q, self.ext)?;
        let rel = (self.q * self.q * self.omega - 1.0).norm();
        if rel > ROOT_TOL {
            return Err(Error::BadRoot(format!("q^2 omega differs from 1 by {rel:.2e}")));
        }
        Ok(())
    }

    pub fn is_doubled(&self) -> bool {
        self.ext == 2 * self.base
    }

    pub fn omega_pow(&self, k: i64) -> Complex64 {
        self.omega.powi(k as i32)
    }

    pub fn q_pow(&self, k: i64) -> Complex64 {
        self.q.powi(k as i32)
    }

    /// Fixed branch e^{i pi / N} for the square root of omega.
    pub fn omega_half(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI / self.base as f64)
    }

    /// Fixed branch e^{i pi / (2N)} for the N-th root of i, used by the
    /// rapidity duality map.
    pub fn i_root(&self) -> Complex64 {
        Complex64::from_polar(1.0, PI / (2.0 * self.base as f64))
    }

    /// Weyl pair of the clock order N.
    pub fn base_pair(&self) -> (CMatrix, CMatrix) {
        (shift(self.base), clock(self.base, self.omega))
    }

    /// Weyl pair of order n built on q: X' Z' = q^{-1} Z' X'.
    pub fn ext_pair(&self) -> (CMatrix, CMatrix) {
        (shift(self.ext), clock(self.ext, self.q))
    }

    pub fn base_fourier(&self) -> CMatrix {
        fourier(self.base, self.omega)
    }

    pub fn ext_fourier(&self) -> CMatrix {
        fourier(self.ext, self.q)
    }
}
