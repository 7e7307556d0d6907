//! Lax operators of the six-vertex / tau2 family and their Yang-Baxter
//! relations.
//!
//! A Lax operator is a 2x2 matrix over the quantum space whose entries are
//! Laurent polynomials in the spectral variable. Five constructions live
//! here: the six-vertex operator attached to any q-convention representation
//! (variable s), the tau2 operator attached to any w-convention
//! representation (variable t = s^2), the five-parameter operator on the
//! clock space C^N, and the doubled-space operators on C^n in both the
//! t and s pictures. Two 4x4 R matrices intertwine them.

use num_complex::Complex64;

use crate::cmatrix::{self, CMatrix};
use crate::error::{Error, Result};
use crate::qgroups::{c_of, minus_gauge, ParamTriple, UqGenerators, UwGenerators};
use crate::weyl::{clock_pow, shift_pow, RootSetup};

/// Matrix-valued Laurent polynomial sum_k coeffs[k] z^{min_pow + k}.
#[derive(Debug, Clone)]
pub struct MatPoly {
    min_pow: i64,
    coeffs: Vec<CMatrix>,
    dim: usize,
}

impl MatPoly {
    pub fn zero(dim: usize) -> Self {
        MatPoly { min_pow: 0, coeffs: vec![], dim }
    }

    pub fn term(pow: i64, m: CMatrix) -> Self {
        let dim = m.dim().0;
        MatPoly { min_pow: pow, coeffs: vec![m], dim }
    }

    pub fn from_terms(dim: usize, terms: Vec<(i64, CMatrix)>) -> Self {
        let mut out = MatPoly::zero(dim);
        for (p, m) in terms {
            out = out.add(&MatPoly::term(p, m));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn min_pow(&self) -> i64 {
        self.min_pow
    }

    pub fn max_pow(&self) -> i64 {
        self.min_pow + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, pow: i64) -> CMatrix {
        if pow < self.min_pow || pow > self.max_pow() {
            cmatrix::zeros(self.dim, self.dim)
        } else {
            self.coeffs[(pow - self.min_pow) as usize].clone()
        }
    }

    pub fn eval(&self, z: Complex64) -> CMatrix {
        let mut out = cmatrix::zeros(self.dim, self.dim);
        for (k, c) in self.coeffs.iter().enumerate() {
            let zp = z.powi((self.min_pow + k as i64) as i32);
            out = out + c.mapv(|v| v * zp);
        }
        out
    }

    pub fn add(&self, other: &MatPoly) -> MatPoly {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.min_pow.min(other.min_pow);
        let hi = self.max_pow().max(other.max_pow());
        let coeffs = (lo..=hi).map(|p| self.coeff(p) + other.coeff(p)).collect();
        MatPoly { min_pow: lo, coeffs, dim: self.dim }
    }

    pub fn mul(&self, other: &MatPoly) -> MatPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return MatPoly::zero(self.dim);
        }
        let lo = self.min_pow + other.min_pow;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![cmatrix::zeros(self.dim, self.dim); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &a.dot(b);
            }
        }
        MatPoly { min_pow: lo, coeffs, dim: self.dim }
    }

    pub fn scale(&self, c: Complex64) -> MatPoly {
        MatPoly {
            min_pow: self.min_pow,
            coeffs: self.coeffs.iter().map(|m| m.mapv(|v| v * c)).collect(),
            dim: self.dim,
        }
    }

    /// Product in the spectral variable with coefficients combined by tensor
    /// product instead of matrix product; the building block of monodromy
    /// matrices, where successive sites live on fresh tensor factors.
    pub fn kron_mul(&self, other: &MatPoly) -> MatPoly {
        let dim = self.dim * other.dim;
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return MatPoly::zero(dim);
        }
        let lo = self.min_pow + other.min_pow;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![cmatrix::zeros(dim, dim); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &cmatrix::kron(a, b);
            }
        }
        MatPoly { min_pow: lo, coeffs, dim }
    }

    /// Substitute z -> c z, scaling each coefficient by c^power.
    pub fn scale_arg(&self, c: Complex64) -> MatPoly {
        MatPoly {
            min_pow: self.min_pow,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, m)| {
                    let f = c.powi((self.min_pow + k as i64) as i32);
                    m.mapv(|v| v * f)
                })
                .collect(),
            dim: self.dim,
        }
    }

    /// Left-multiply every coefficient by a fixed matrix.
    pub fn lmul_mat(&self, m: &CMatrix) -> MatPoly {
        MatPoly {
            min_pow: self.min_pow,
            coeffs: self.coeffs.iter().map(|c| m.dot(c)).collect(),
            dim: self.dim,
        }
    }
}

/// 2x2 auxiliary matrix of [`MatPoly`] blocks over one quantum space.
#[derive(Debug, Clone)]
pub struct LaxOperator {
    pub blocks: [[MatPoly; 2]; 2],
}

/// Which auxiliary slot of the doubled auxiliary space C^2 x C^2 a Lax
/// operator occupies in a Yang-Baxter product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxSlot {
    First,
    Second,
}

impl LaxOperator {
    pub fn dim_q(&self) -> usize {
        self.blocks[0][0].dim()
    }

    pub fn eval(&self, z: Complex64) -> [[CMatrix; 2]; 2] {
        [
            [self.blocks[0][0].eval(z), self.blocks[0][1].eval(z)],
            [self.blocks[1][0].eval(z), self.blocks[1][1].eval(z)],
        ]
    }

    /// Full matrix on aux (x) quantum with the auxiliary index slowest.
    pub fn as_matrix(&self, z: Complex64) -> CMatrix {
        let b = self.eval(z);
        let d = self.dim_q();
        let mut out = cmatrix::zeros(2 * d, 2 * d);
        for m in 0..2 {
            for mp in 0..2 {
                for i in 0..d {
                    for j in 0..d {
                        out[(m * d + i, mp * d + j)] = b[m][mp][(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Matrix on aux1 (x) aux2 (x) quantum with the operator acting in one
    /// auxiliary slot and as identity in the other.
    pub fn in_slot(&self, z: Complex64, slot: AuxSlot) -> CMatrix {
        let b = self.eval(z);
        let d = self.dim_q();
        let e2 = cmatrix::identity(2);
        let mut out = cmatrix::zeros(4 * d, 4 * d);
        for m in 0..2 {
            for mp in 0..2 {
                let mut unit = cmatrix::zeros(2, 2);
                unit[(m, mp)] = cmatrix::ONE;
                let aux = match slot {
                    AuxSlot::First => cmatrix::kron(&unit, &e2),
                    AuxSlot::Second => cmatrix::kron(&e2, &unit),
                };
                out = out + cmatrix::kron(&aux, &b[m][mp]);
            }
        }
        out
    }

    /// Conjugate by a 2x2 matrix acting on the auxiliary space only.
    pub fn aux_conjugate(&self, g: &CMatrix, g_inv: &CMatrix) -> LaxOperator {
        let d = self.dim_q();
        let mut blocks = [
            [MatPoly::zero(d), MatPoly::zero(d)],
            [MatPoly::zero(d), MatPoly::zero(d)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = MatPoly::zero(d);
                for k in 0..2 {
                    for l in 0..2 {
                        let f = g[(i, k)] * g_inv[(l, j)];
                        if f != cmatrix::ZERO {
                            acc = acc.add(&self.blocks[k][l].scale(f));
                        }
                    }
                }
                blocks[i][j] = acc;
            }
        }
        LaxOperator { blocks }
    }

    /// Conjugate every block by a fixed quantum-space matrix.
    pub fn q_conjugate(&self, g: &CMatrix, g_inv: &CMatrix) -> LaxOperator {
        let d = self.dim_q();
        let mut blocks = [
            [MatPoly::zero(d), MatPoly::zero(d)],
            [MatPoly::zero(d), MatPoly::zero(d)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                blocks[i][j] = MatPoly {
                    min_pow: self.blocks[i][j].min_pow,
                    coeffs: self.blocks[i][j].coeffs.iter().map(|c| g.dot(c).dot(g_inv)).collect(),
                    dim: d,
                };
            }
        }
        LaxOperator { blocks }
    }

    /// Substitute z -> c z in every block.
    pub fn scale_arg(&self, c: Complex64) -> LaxOperator {
        LaxOperator {
            blocks: [
                [self.blocks[0][0].scale_arg(c), self.blocks[0][1].scale_arg(c)],
                [self.blocks[1][0].scale_arg(c), self.blocks[1][1].scale_arg(c)],
            ],
        }
    }

    pub fn scale(&self, c: Complex64) -> LaxOperator {
        LaxOperator {
            blocks: [
                [self.blocks[0][0].scale(c), self.blocks[0][1].scale(c)],
                [self.blocks[1][0].scale(c), self.blocks[1][1].scale(c)],
            ],
        }
    }
}

/// Symmetric six-vertex R matrix in the spectral variable s, basis order
/// (00, 01, 10, 11).
pub fn r_xxz(q: Complex64, s: Complex64) -> CMatrix {
    let si = 1.0 / s;
    let qi = 1.0 / q;
    let mut r = cmatrix::zeros(4, 4);
    r[(0, 0)] = si * q - s * qi;
    r[(3, 3)] = r[(0, 0)];
    r[(1, 1)] = si - s;
    r[(2, 2)] = si - s;
    r[(1, 2)] = q - qi;
    r[(2, 1)] = q - qi;
    r
}

/// Asymmetric R matrix of the tau2 family in the variable t, with
/// anisotropy w (the clock root omega).
pub fn r_tau(w: Complex64, t: Complex64) -> CMatrix {
    let mut r = cmatrix::zeros(4, 4);
    r[(0, 0)] = t * w - 1.0;
    r[(3, 3)] = t * w - 1.0;
    r[(1, 1)] = t - 1.0;
    r[(1, 2)] = w - 1.0;
    r[(2, 1)] = t * (w - 1.0);
    r[(2, 2)] = (t - 1.0) * w;
    r
}

/// Six-vertex Lax operator of a q-convention representation, variable s:
/// [[ s nu^{1/2} K^{-1/2} / rho - K^{1/2} / (s nu^{1/2}), (q - 1/q) e- ],
///  [ (q - 1/q) e+, s nu^{1/2} K^{1/2} - rho K^{-1/2} / (s nu^{1/2}) ]].
pub fn lax_xxz(gen: &UqGenerators, rho: Complex64, nu: Complex64) -> LaxOperator {
    let nh = nu.sqrt();
    let qd = gen.q - 1.0 / gen.q;
    let d = gen.dim();
    let b00 = MatPoly::from_terms(
        d,
        vec![
            (1, gen.khalf_inv.mapv(|z| z * nh / rho)),
            (-1, gen.khalf.mapv(|z| -z / nh)),
        ],
    );
    let b01 = MatPoly::term(0, gen.eminus.mapv(|z| z * qd));
    let b10 = MatPoly::term(0, gen.eplus.mapv(|z| z * qd));
    let b11 = MatPoly::from_terms(
        d,
        vec![
            (1, gen.khalf.mapv(|z| z * nh)),
            (-1, gen.khalf_inv.mapv(|z| -z * rho / nh)),
        ],
    );
    LaxOperator { blocks: [[b00, b01], [b10, b11]] }
}

/// tau2 Lax operator of a w-convention representation, variable t:
/// [[ 1 - t nu K^{-1} / rho, (1 - w) E- ],
///  [ -t nu (1 - w) E+, -t nu + rho K^{-1} ]].
pub fn lax_tau(gen: &UwGenerators, rho: Complex64, nu: Complex64) -> LaxOperator {
    let d = gen.dim();
    let w1 = 1.0 - gen.w;
    let b00 = MatPoly::from_terms(
        d,
        vec![
            (0, cmatrix::identity(d)),
            (1, gen.k_inv.mapv(|z| -z * nu / rho)),
        ],
    );
    let b01 = MatPoly::term(0, gen.eminus.mapv(|z| z * w1));
    let b10 = MatPoly::term(1, gen.eplus.mapv(|z| -z * nu * w1));
    let b11 = MatPoly::from_terms(
        d,
        vec![
            (1, cmatrix::identity(d).mapv(|z| -z * nu)),
            (0, gen.k_inv.mapv(|z| z * rho)),
        ],
    );
    LaxOperator { blocks: [[b00, b01], [b10, b11]] }
}

/// Five-parameter Lax operator on the clock space C^N, variable t, built
/// from a pair of vertex triples through the hat operators of the order-N
/// Weyl pair:
/// [[ 1 - t (c/b'b) Z,  (1/b - omega (ac/b'b) Z) X^{-1} ],
///  [ -t (1/b' - (a'c/b'b) Z) X,  -t/(b'b) + omega (a'ac/b'b) Z ]]
/// with Z the shift and X the inverse clock on C^N, c = d'd.
pub fn lax_cpm(setup: &RootSetup, p_prime: &ParamTriple, p: &ParamTriple) -> LaxOperator {
    let nb = setup.base;
    let om = setup.omega;
    let c = c_of(p_prime, p);
    let bb = p_prime.b * p.b;
    let z1 = shift_pow(nb, 1);
    let x1 = clock_pow(nb, om, -1);
    let xm1 = clock_pow(nb, om, 1);
    let b00 = MatPoly::from_terms(
        nb,
        vec![(0, cmatrix::identity(nb)), (1, z1.mapv(|v| -v * c / bb))],
    );
    let b01 = MatPoly::term(
        0,
        (cmatrix::identity(nb).mapv(|v| v / p.b) - z1.mapv(|v| v * om * p.a * c / bb)).dot(&xm1),
    );
    let b10 = MatPoly::term(
        1,
        (cmatrix::identity(nb).mapv(|v| v / p_prime.b) - z1.mapv(|v| v * p_prime.a * c / bb))
            .dot(&x1)
            .mapv(|v| -v),
    );
    let b11 = MatPoly::from_terms(
        nb,
        vec![
            (1, cmatrix::identity(nb).mapv(|v| -v / bb)),
            (0, z1.mapv(|v| v * om * p_prime.a * p.a * c / bb)),
        ],
    );
    LaxOperator { blocks: [[b00, b01], [b10, b11]] }
}

/// Doubled-space tau2 Lax operator on C^n, variable t. Same entry pattern
/// as [`lax_cpm`] with the shift replaced by hat-Z'^{-2} and the clock step
/// by hat-X'^{±1} of the order-n pair.
pub fn lax_big_tau(setup: &RootSetup, p_prime: &ParamTriple, p: &ParamTriple) -> LaxOperator {
    let n = setup.ext;
    let q = setup.q;
    let om = setup.omega;
    let c = c_of(p_prime, p);
    let bb = p_prime.b * p.b;
    let z2 = shift_pow(n, -2);
    let x1 = clock_pow(n, q, -1);
    let xm1 = clock_pow(n, q, 1);
    let b00 = MatPoly::from_terms(
        n,
        vec![(0, cmatrix::identity(n)), (1, z2.mapv(|v| -v * c / bb))],
    );
    let b01 = MatPoly::term(
        0,
        (cmatrix::identity(n).mapv(|v| v / p.b) - z2.mapv(|v| v * om * p.a * c / bb)).dot(&xm1),
    );
    let b10 = MatPoly::term(
        1,
        (cmatrix::identity(n).mapv(|v| v / p_prime.b) - z2.mapv(|v| v * p_prime.a * c / bb))
            .dot(&x1)
            .mapv(|v| -v),
    );
    let b11 = MatPoly::from_terms(
        n,
        vec![
            (1, cmatrix::identity(n).mapv(|v| -v / bb)),
            (0, z2.mapv(|v| v * om * p_prime.a * p.a * c / bb)),
        ],
    );
    LaxOperator { blocks: [[b00, b01], [b10, b11]] }
}

/// Conjugate doubled-space Lax operator on C^n, variable t: the entry
/// pattern of [`lax_cpm`] with the shift replaced by hat-Z' and the clock
/// step by hat-X'^{∓2}.
pub fn lax_dagger(setup: &RootSetup, p_prime: &ParamTriple, p: &ParamTriple) -> LaxOperator {
    let n = setup.ext;
    let q = setup.q;
    let om = setup.omega;
    let c = c_of(p_prime, p);
    let bb = p_prime.b * p.b;
    let z1 = shift_pow(n, 1);
    let x2 = clock_pow(n, q, -2);
    let xm2 = clock_pow(n, q, 2);
    let b00 = MatPoly::from_terms(
        n,
        vec![(0, cmatrix::identity(n)), (1, z1.mapv(|v| -v * c / bb))],
    );
    let b01 = MatPoly::term(
        0,
        (cmatrix::identity(n).mapv(|v| v / p.b) - z1.mapv(|v| v * om * p.a * c / bb)).dot(&x2),
    );
    let b10 = MatPoly::term(
        1,
        (cmatrix::identity(n).mapv(|v| v / p_prime.b) - z1.mapv(|v| v * p_prime.a * c / bb))
            .dot(&xm2)
            .mapv(|v| -v),
    );
    let b11 = MatPoly::from_terms(
        n,
        vec![
            (1, cmatrix::identity(n).mapv(|v| -v / bb)),
            (0, z1.mapv(|v| v * om * p_prime.a * p.a * c / bb)),
        ],
    );
    LaxOperator { blocks: [[b00, b01], [b10, b11]] }
}

/// Doubled-space six-vertex Lax operator on C^n, variable s, with the
/// normalizing fourth root (b'^3 b^3 / (omega a'a c^2))^{1/4} on the
/// principal branch:
/// [[ -Z'/s + s (c/b'b) Z'^{-1}, (q / (b'b)^{1/2}) (Z'/b - omega (ac/b'b) Z'^{-1}) X'^{-1} ],
///  [ -((b'b)^{1/2} / q) (Z'/b' - (a'c/b'b) Z'^{-1}) X', s Z'/(b'b) - omega (a'ac/b'b) Z'^{-1}/s ]]
/// written in the hat operators of the order-n pair.
pub fn lax_big_xxz(setup: &RootSetup, p_prime: &ParamTriple, p: &ParamTriple) -> LaxOperator {
    let n = setup.ext;
    let q = setup.q;
    let om = setup.omega;
    let c = c_of(p_prime, p);
    let bb = p_prime.b * p.b;
    let pref = (p_prime.b.powi(3) * p.b.powi(3) / (om * p_prime.a * p.a * c * c)).powf(0.25);
    let bbh = bb.sqrt();
    let z1 = shift_pow(n, 1);
    let zm1 = shift_pow(n, -1);
    let x1 = clock_pow(n, q, -1);
    let xm1 = clock_pow(n, q, 1);
    let b00 = MatPoly::from_terms(
        n,
        vec![
            (-1, z1.mapv(|v| -v * pref)),
            (1, zm1.mapv(|v| v * pref * c / bb)),
        ],
    );
    let b01 = MatPoly::term(
        0,
        (z1.mapv(|v| v / p.b) - zm1.mapv(|v| v * om * p.a * c / bb))
            .dot(&xm1)
            .mapv(|v| v * pref * q / bbh),
    );
    let b10 = MatPoly::term(
        0,
        (z1.mapv(|v| v / p_prime.b) - zm1.mapv(|v| v * p_prime.a * c / bb))
            .dot(&x1)
            .mapv(|v| -v * pref * bbh / q),
    );
    let b11 = MatPoly::from_terms(
        n,
        vec![
            (1, z1.mapv(|v| v * pref / bb)),
            (-1, zm1.mapv(|v| -v * pref * om * p_prime.a * p.a * c / bb)),
        ],
    );
    LaxOperator { blocks: [[b00, b01], [b10, b11]] }
}

/// Normalized residual of the Yang-Baxter relation
/// R(z1/z2) L_1(z1) L_2(z2) = L_2(z2) L_1(z1) R(z1/z2)
/// for an R matrix function of the spectral ratio.
pub fn yb_residual(
    r_of: &dyn Fn(Complex64) -> CMatrix,
    lax: &LaxOperator,
    z1: Complex64,
    z2: Complex64,
) -> f64 {
    let r = r_of(z1 / z2);
    let ri = cmatrix::kron(&r, &cmatrix::identity(lax.dim_q()));
    let l1 = lax.in_slot(z1, AuxSlot::First);
    let l2 = lax.in_slot(z2, AuxSlot::Second);
    let lhs = ri.dot(&l1).dot(&l2);
    let rhs = l2.dot(&l1).dot(&ri);
    cmatrix::rel_residual(&lhs, &rhs)
}

/// Residual of the gauge relation connecting the t and s pictures of the
/// six-vertex operator of a q-convention representation:
/// L_t(s^2) = G ( -s nu^{1/2} K^{-1/2} L_s(s) ) G^{-1},
/// G = diag(1, -s nu^{1/2} q) on the auxiliary space.
pub fn gauge_tau_vs_xxz(
    gen: &UqGenerators,
    rho: Complex64,
    nu: Complex64,
    s: Complex64,
) -> f64 {
    use crate::qgroups::induced_uw;
    let nh = nu.sqrt();
    let lt = lax_tau(&induced_uw(gen), rho, nu).as_matrix(s * s);
    let ls = lax_xxz(gen, rho, nu).as_matrix(s);
    let kk = cmatrix::kron(&cmatrix::identity(2), &gen.khalf_inv);
    let scaled = kk.dot(&ls).mapv(|z| z * (-s) * nh);
    let mut g = cmatrix::identity(2);
    g[(1, 1)] = -s * nh * gen.q;
    let mut gi = cmatrix::identity(2);
    gi[(1, 1)] = 1.0 / g[(1, 1)];
    let gq = cmatrix::kron(&g, &cmatrix::identity(gen.dim()));
    let gqi = cmatrix::kron(&gi, &cmatrix::identity(gen.dim()));
    let rhs = gq.dot(&scaled).dot(&gqi);
    cmatrix::rel_residual(&lt, &rhs)
}

/// Residuals of the two companion-triple relations on C^N: with
/// (p'_-, p_-) = ((a'/q, b' q, d'), (a q, b/q, d)),
///   L(t; p'_-, p_-) = diag(1, 1/q) L(t; p', p) diag(1, q)
/// and the clock conjugation
///   Z L(t; p', p) Z^{-1} = diag(1, 1/q) L(t; p'_-, p_-) diag(1, q).
pub fn minus_gauge_residuals(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    t: Complex64,
) -> (f64, f64) {
    let q = setup.q;
    let (pm_prime, pm) = minus_gauge(p_prime, p, q);
    let lp = lax_cpm(setup, p_prime, p);
    let lm = lax_cpm(setup, &pm_prime, &pm);
    let mut g = cmatrix::identity(2);
    g[(1, 1)] = 1.0 / q;
    let mut gi = cmatrix::identity(2);
    gi[(1, 1)] = q;
    let conj = |l: &LaxOperator| l.aux_conjugate(&g, &gi).as_matrix(t);
    let r1 = cmatrix::rel_residual(&lm.as_matrix(t), &conj(&lp));

    let zc = shift_pow(setup.base, 1);
    let zci = shift_pow(setup.base, -1);
    let lhs = lp.q_conjugate(&zc, &zci).as_matrix(t);
    let r2 = cmatrix::rel_residual(&lhs, &conj(&lm));
    (r1, r2)
}

/// Residuals of the doubled-space analogue: both C^n operators turn their
/// companion-triple shift into a clock conjugation,
///   L(.; p'_-, p_-) = Z'^{-1} L(.; p', p) Z'
/// for the s picture and the t picture, and the conjugate operator uses the
/// step matrix instead: Ldag(t; p', p_- with d q) = X'^{-1} Ldag(t; p', p) X'.
pub fn doubled_minus_residuals(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    s: Complex64,
) -> (f64, f64, f64) {
    let q = setup.q;
    let n = setup.ext;
    let t = s * s;
    let (pm_prime, pm) = minus_gauge(p_prime, p, q);
    let zc = shift_pow(n, 1);
    let zci = shift_pow(n, -1);

    let lb = lax_big_xxz(setup, p_prime, p);
    let lbm = lax_big_xxz(setup, &pm_prime, &pm);
    let conj_s = lb.q_conjugate(&zci, &zc).as_matrix(s);
    let r_s = cmatrix::rel_residual(&lbm.as_matrix(s), &conj_s);

    let lt = lax_big_tau(setup, p_prime, p);
    let ltm = lax_big_tau(setup, &pm_prime, &pm);
    let conj_t = lt.q_conjugate(&zci, &zc).as_matrix(t);
    let r_t = cmatrix::rel_residual(&ltm.as_matrix(t), &conj_t);

    let pd = p.d_shift(1, q);
    let ld = lax_dagger(setup, p_prime, p);
    let ldm = lax_dagger(setup, p_prime, &pd);
    let xc = clock_pow(n, q, -1);
    let xci = clock_pow(n, q, 1);
    let conj_d = ld.q_conjugate(&xci, &xc).as_matrix(t);
    let r_d = cmatrix::rel_residual(&ldm.as_matrix(t), &conj_d);
    (r_s, r_t, r_d)
}

/// Residuals of the parameter-shift conjugations on C^n: moving a factor
/// q^l between a and b on both lines is a power of the clock,
///   L(t; p'(-l), p(l)) = Z'^{-l} L(t; p', p) Z'^{l},
/// and moving q^{l} into both third components is a power of the step,
///   Ldag(t; p'[l'], p[l]) = X'^{-(l'+l)} Ldag(t; p', p) X'^{l'+l}.
pub fn shift_conjugation_residuals(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    t: Complex64,
    l: i64,
    l_prime: i64,
) -> (f64, f64) {
    let q = setup.q;
    let n = setup.ext;
    let lt = lax_big_tau(setup, &p_prime.ab_shift(-l, q), &p.ab_shift(l, q));
    let zc = shift_pow(n, -l);
    let zci = shift_pow(n, l);
    let conj = lax_big_tau(setup, p_prime, p).q_conjugate(&zc, &zci).as_matrix(t);
    let r1 = cmatrix::rel_residual(&lt.as_matrix(t), &conj);

    let m = l_prime + l;
    let ld = lax_dagger(setup, &p_prime.d_shift(l_prime, q), &p.d_shift(l, q));
    let xc = clock_pow(n, q, m);
    let xci = clock_pow(n, q, -m);
    let conjd = lax_dagger(setup, p_prime, p).q_conjugate(&xc, &xci).as_matrix(t);
    let r2 = cmatrix::rel_residual(&ld.as_matrix(t), &conjd);
    (r1, r2)
}

/// Residual of the relation between the two doubled-space pictures:
/// L_t(s^2) = G ( -s (omega a'a c^2 / b'^3 b^3)^{1/4} Z'^{-1} L_s(s) ) G^{-1}
/// with G = diag(1, -s q / (b'b)^{1/2}), up to one global scalar from the
/// fourth-root branches; the returned pair is (scalar, residual).
pub fn doubled_gauge_residual(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    s: Complex64,
) -> (Complex64, f64) {
    let q = setup.q;
    let n = setup.ext;
    let om = setup.omega;
    let c = c_of(p_prime, p);
    let pref = (om * p_prime.a * p.a * c * c / (p_prime.b.powi(3) * p.b.powi(3))).powf(0.25);
    let lt = lax_big_tau(setup, p_prime, p).as_matrix(s * s);
    let ls = lax_big_xxz(setup, p_prime, p).as_matrix(s);
    let zi = cmatrix::kron(&cmatrix::identity(2), &shift_pow(n, -1));
    let scaled = zi.dot(&ls).mapv(|z| z * (-s) * pref);
    let mut g = cmatrix::identity(2);
    g[(1, 1)] = -s * q / (p_prime.b * p.b).sqrt();
    let mut gi = cmatrix::identity(2);
    gi[(1, 1)] = 1.0 / g[(1, 1)];
    let gq = cmatrix::kron(&g, &cmatrix::identity(n));
    let gqi = cmatrix::kron(&gi, &cmatrix::identity(n));
    let rhs = gq.dot(&scaled).dot(&gqi);
    cmatrix::scalar_match(&rhs, &lt)
}

/// A perturbed copy of a Lax operator with `bump` added to one entry of the
/// constant coefficient of block (0, 0); used as a negative control to show
/// the Yang-Baxter residual actually detects broken operators.
pub fn perturbed(lax: &LaxOperator, bump: f64) -> LaxOperator {
    let mut out = lax.clone();
    let mut c = out.blocks[0][0].coeff(out.blocks[0][0].min_pow());
    c[(0, 0)] += Complex64::new(bump, 0.0);
    let min = out.blocks[0][0].min_pow();
    let dim = out.blocks[0][0].dim();
    let mut terms = vec![(min, c)];
    for p in (min + 1)..=out.blocks[0][0].max_pow() {
        terms.push((p, out.blocks[0][0].coeff(p)));
    }
    out.blocks[0][0] = MatPoly::from_terms(dim, terms);
    out
}

/// Check one operator family against its R matrix at a list of spectral
/// points; returns the worst residual.
pub fn yb_sweep(
    r_of: &dyn Fn(Complex64) -> CMatrix,
    lax: &LaxOperator,
    points: &[(Complex64, Complex64)],
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Param("yb_sweep needs at least one point".into()));
    }
    let mut worst = 0.0f64;
    for (z1, z2) in points {
        worst = worst.max(yb_residual(r_of, lax, *z1, *z2));
    }
    Ok(worst)
}
