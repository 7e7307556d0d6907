//! Monodromy matrices, twisted-trace transfer matrices of the four model
//! families, charge sector bases, and the relations tying the t and s
//! pictures of a chain together.
//!
//! Site 1 of a chain is both the leftmost tensor factor of the quantum space
//! and the leftmost matrix factor of the monodromy product.

use num_complex::Complex64;

use crate::cmatrix::{self, CMatrix};
use crate::eigen;
use crate::error::{Error, Result};
use crate::lax::{lax_tau, lax_xxz, LaxOperator, MatPoly};
use crate::qgroups::{induced_uw, UqGenerators};
use crate::weyl::{shift_pow, RootSetup};

/// 2x2 auxiliary matrix of chain operators, entries Laurent in the spectral
/// variable: A = (0,0), B = (0,1), C = (1,0), D = (1,1).
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub blocks: [[MatPoly; 2]; 2],
}

impl Monodromy {
    pub fn dim(&self) -> usize {
        self.blocks[0][0].dim()
    }

    pub fn block(&self, i: usize, j: usize) -> &MatPoly {
        &self.blocks[i][j]
    }

    /// A(z) + twist * D(z).
    pub fn twisted_trace(&self, twist: Complex64, z: Complex64) -> CMatrix {
        self.blocks[0][0].eval(z) + self.blocks[1][1].eval(z).mapv(|v| v * twist)
    }
}

/// Monodromy of an arbitrary list of site operators (site 1 first).
pub fn chain_mixed(site_ops: &[LaxOperator], cap: usize) -> Result<Monodromy> {
    let first = site_ops
        .first()
        .ok_or_else(|| Error::Param("chain needs at least one site".into()))?;
    // Reject an over-cap chain before any multiplication: intermediate
    // monodromy blocks carry one coefficient matrix per polynomial degree,
    // so building them only to discard the final product wastes gigabytes.
    let mut full = 1usize;
    for site in site_ops {
        full = full
            .checked_mul(site.dim_q())
            .ok_or(Error::DimensionCap { got: usize::MAX, cap })?;
    }
    if full > cap {
        return Err(Error::DimensionCap { got: full, cap });
    }
    let mut blocks = first.blocks.clone();
    for site in &site_ops[1..] {
        let dim = blocks[0][0].dim() * site.dim_q();
        if dim > cap {
            return Err(Error::DimensionCap { got: dim, cap });
        }
        let mut next = [
            [MatPoly::zero(dim), MatPoly::zero(dim)],
            [MatPoly::zero(dim), MatPoly::zero(dim)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = MatPoly::zero(dim);
                for k in 0..2 {
                    acc = acc.add(&blocks[i][k].kron_mul(&site.blocks[k][j]));
                }
                next[i][j] = acc;
            }
        }
        blocks = next;
    }
    Ok(Monodromy { blocks })
}

/// Homogeneous chain of `sites` copies of one Lax operator.
pub fn chain(lax: &LaxOperator, sites: usize, cap: usize) -> Result<Monodromy> {
    let ops = vec![lax.clone(); sites];
    chain_mixed(&ops, cap)
}

/// Homogeneous chain with the spectral argument scaled per site by xi_l,
/// i.e. site l carries L(xi_l z).
pub fn chain_scaled(lax: &LaxOperator, xi: &[Complex64], cap: usize) -> Result<Monodromy> {
    let ops: Vec<LaxOperator> = xi.iter().map(|&x| lax.scale_arg(x)).collect();
    chain_mixed(&ops, cap)
}

/// tau2 transfer matrix A(omega t) + omega^r D(omega t).
pub fn tau2_transfer(m: &Monodromy, omega: Complex64, r: i64, t: Complex64) -> CMatrix {
    m.twisted_trace(omega.powi(r as i32), omega * t)
}

/// Six-vertex spin-chain transfer matrix A(s) + q^{-2r} D(s).
pub fn spin_transfer(m: &Monodromy, q: Complex64, r: i64, s: Complex64) -> CMatrix {
    m.twisted_trace(q.powi(-2 * r as i32), s)
}

/// Doubled-space six-vertex transfer matrix A(s) + q^{-r'} D(s).
pub fn xxz_transfer(m: &Monodromy, q: Complex64, r_prime: i64, s: Complex64) -> CMatrix {
    m.twisted_trace(q.powi(-(r_prime as i32)), s)
}

/// Doubled-space tau2 transfer matrix A(omega t) + q^{-r'} D(omega t).
pub fn t2_transfer(m: &Monodromy, setup: &RootSetup, r_prime: i64, t: Complex64) -> CMatrix {
    m.twisted_trace(setup.q_pow(-r_prime), setup.omega * t)
}

/// Conjugate doubled-space transfer matrix A(omega t) + omega^{-r'} D(omega t).
pub fn t2dag_transfer(m: &Monodromy, setup: &RootSetup, r_prime: i64, t: Complex64) -> CMatrix {
    m.twisted_trace(setup.omega_pow(-r_prime), setup.omega * t)
}

/// The boundary exponent of the doubled-space picture matching a clock
/// boundary exponent r: r' = 2r mod n.
pub fn doubled_twist_of(setup: &RootSetup, r: i64) -> i64 {
    (2 * r).rem_euclid(setup.ext as i64)
}

/// Residual of the block relations between the t picture and the s picture
/// of a spin chain with t = s^2:
///   A, D(t) = (-s)^L nu^{L/2} K^{-1/2} A_s, D_s(s),
///   B(t) = (-s)^{L-1} nu^{(L-1)/2} q^{-1} K^{-1/2} B_s(s),
///   C(t) = (-s)^{L+1} nu^{(L+1)/2} q K^{-1/2} C_s(s),
/// where K^{-1/2} is the chain product of the site K^{-1/2}.
pub fn monodromy_t_vs_s_residual(
    gen: &UqGenerators,
    rho: Complex64,
    nu: Complex64,
    sites: usize,
    s: Complex64,
    cap: usize,
) -> Result<f64> {
    let q = gen.q;
    let nh = nu.sqrt();
    let mt = chain(&lax_tau(&induced_uw(gen), rho, nu), sites, cap)?;
    let ms = chain(&lax_xxz(gen, rho, nu), sites, cap)?;
    let khalf_inv = cmatrix::global_product(&gen.khalf_inv, sites, cap)?;
    let t = s * s;
    let lf = sites as i32;
    let mut worst = 0.0f64;
    for (i, j, extra) in [
        (0usize, 0usize, Complex64::new(1.0, 0.0)),
        (1, 1, Complex64::new(1.0, 0.0)),
        (0, 1, 1.0 / ((-s) * nh * q)),
        (1, 0, (-s) * nh * q),
    ] {
        let lhs = mt.block(i, j).eval(t);
        let base = ((-s) * nh).powi(lf) * extra;
        let rhs = khalf_inv.dot(&ms.block(i, j).eval(s)).mapv(|v| v * base);
        worst = worst.max(cmatrix::rel_residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// Residual of the trace relation tying the two pictures of the spin chain:
/// tau2(t) = (-s/q)^L nu^{L/2} K^{-1/2} T(s/q) with t = s^2 and
/// T(s) = A_s(s) + q^{-2r} D_s(s).
pub fn spin_tau_t_residual(
    gen: &UqGenerators,
    rho: Complex64,
    nu: Complex64,
    r: i64,
    sites: usize,
    s: Complex64,
    cap: usize,
) -> Result<f64> {
    let q = gen.q;
    let omega = 1.0 / (q * q);
    let mt = chain(&lax_tau(&induced_uw(gen), rho, nu), sites, cap)?;
    let ms = chain(&lax_xxz(gen, rho, nu), sites, cap)?;
    let khalf_inv = cmatrix::global_product(&gen.khalf_inv, sites, cap)?;
    let lhs = tau2_transfer(&mt, omega, r, s * s);
    let big_t = spin_transfer(&ms, q, r, s / q);
    let factor = ((-s / q) * nu.sqrt()).powi(sites as i32);
    let rhs = khalf_inv.dot(&big_t).mapv(|v| v * factor);
    Ok(cmatrix::rel_residual(&lhs, &rhs))
}

/// Residual of the per-site absorption of inhomogeneity into the spectral
/// argument for the t picture (exact) and the s picture (exact up to a
/// global sign from square-root branches; the sign is part of the returned
/// scalar).
pub fn inhomogeneous_reduction(
    gen_t: &LaxOperator,
    gen_t_scalednu: &[LaxOperator],
    xi: &[Complex64],
    z: Complex64,
    cap: usize,
) -> Result<f64> {
    let direct = chain_mixed(gen_t_scalednu, cap)?;
    let scaled = chain_scaled(gen_t, xi, cap)?;
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let a = direct.block(i, j).eval(z);
            let b = scaled.block(i, j).eval(z);
            worst = worst.max(cmatrix::rel_residual(&a, &b));
        }
    }
    Ok(worst)
}

/// Orthonormal bases of one charge sector of a uniform chain: the hat
/// product basis (labels k with sum = charge mod d) and the face basis
/// (labels n with sum = face_sum mod d), which span the same subspace.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub dim_site: usize,
    pub sites: usize,
    pub charge: i64,
    pub face_sum: i64,
    /// Columns: hat product vectors, label order lexicographic.
    pub hat: CMatrix,
    pub hat_labels: Vec<Vec<i64>>,
    /// Columns: face vectors, label order lexicographic.
    pub face: CMatrix,
    pub face_labels: Vec<Vec<i64>>,
}

fn tuples_with_sum(d: usize, sites: usize, total: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; sites];
    fn rec(d: i64, pos: usize, sites: usize, total: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if pos == sites - 1 {
            let partial: i64 = cur[..sites - 1].iter().sum();
            cur[sites - 1] = (total - partial).rem_euclid(d);
            out.push(cur.clone());
            return;
        }
        for v in 0..d {
            cur[pos] = v;
            rec(d, pos + 1, sites, total, cur, out);
        }
    }
    rec(d as i64, 0, sites, total, &mut cur, &mut out);
    out.sort();
    out
}

/// Build the two bases of the charge sector. `root` must be the primitive
/// d-th root the site clocks run on.
pub fn sector_basis(
    d: usize,
    root: Complex64,
    sites: usize,
    charge: i64,
    face_sum: i64,
    cap: usize,
) -> Result<SectorBasis> {
    let dim: usize = d
        .checked_pow(sites as u32)
        .ok_or(Error::DimensionCap { got: usize::MAX, cap })?;
    if dim > cap {
        return Err(Error::DimensionCap { got: dim, cap });
    }
    let scale = 1.0 / (d as f64).sqrt();

    let hat_labels = tuples_with_sum(d, sites, charge);
    let mut hat = cmatrix::zeros(dim, hat_labels.len());
    for (col, ks) in hat_labels.iter().enumerate() {
        // Tensor product of single-site hat vectors.
        let mut vec = vec![cmatrix::ONE];
        for k in ks {
            let mut next = vec![cmatrix::ZERO; vec.len() * d];
            for (i, v) in vec.iter().enumerate() {
                for sigma in 0..d {
                    let ph = root.powi(-((k * sigma as i64).rem_euclid(d as i64)) as i32) * scale;
                    next[i * d + sigma] = v * ph;
                }
            }
            vec = next;
        }
        for (i, v) in vec.iter().enumerate() {
            hat[(i, col)] = *v;
        }
    }

    let face_labels = tuples_with_sum(d, sites, face_sum);
    let mut face = cmatrix::zeros(dim, face_labels.len());
    for (col, ns) in face_labels.iter().enumerate() {
        for sigma1 in 0..d as i64 {
            let mut idx = 0usize;
            let mut sigma = sigma1;
            for (l, n) in ns.iter().enumerate() {
                idx = idx * d + sigma.rem_euclid(d as i64) as usize;
                if l + 1 < sites {
                    sigma -= n;
                }
            }
            let ph = root.powi(-((charge * sigma1).rem_euclid(d as i64)) as i32) * scale;
            face[(idx, col)] += ph;
        }
    }

    Ok(SectorBasis {
        dim_site: d,
        sites,
        charge: charge.rem_euclid(d as i64),
        face_sum: face_sum.rem_euclid(d as i64),
        hat,
        hat_labels,
        face,
        face_labels,
    })
}

/// Restriction B^dagger M B of a sector-preserving operator to the hat
/// basis of the sector.
pub fn sector_restrict(op: &CMatrix, basis: &SectorBasis) -> CMatrix {
    cmatrix::dagger(&basis.hat).dot(op).dot(&basis.hat)
}

/// Leakage of `op` out of the sector: ||(1 - B B^dagger) M B|| normalized
/// by the size of M B.
pub fn off_sector_residual(op: &CMatrix, basis: &SectorBasis) -> f64 {
    let mb = op.dot(&basis.hat);
    let proj = basis.hat.dot(&cmatrix::dagger(&basis.hat)).dot(&mb);
    let leak = &mb - &proj;
    cmatrix::max_abs(&leak) / 1.0f64.max(cmatrix::max_abs(&mb))
}

/// Eigenvalues of the sector restriction, deterministically ordered.
pub fn sector_spectrum(op: &CMatrix, basis: &SectorBasis) -> Result<Vec<Complex64>> {
    let r = sector_restrict(op, basis);
    Ok(eigen::eigensystem(&r)?.values)
}

/// Global clock charge, the product of single-site shifts; transfer
/// matrices of the family commute with it and sectors are its eigenspaces.
pub fn charge_operator(d: usize, sites: usize, cap: usize) -> Result<CMatrix> {
    cmatrix::global_product(&shift_pow(d, 1), sites, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{comm_residual, identity, rel_residual, DIM_CAP};
    use crate::lax::{lax_big_tau, lax_cpm, r_tau, yb_residual};
    use crate::qgroups::{params_from_triples, spin_rep, ParamTriple};
    use rand::{Rng, SeedableRng};

    fn random_triple(rng: &mut impl Rng) -> ParamTriple {
        let mut c = || {
            Complex64::from_polar(
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.0..2.0 * std::f64::consts::PI),
            )
        };
        ParamTriple::new(c(), c(), c())
    }

    #[test]
    fn monodromy_of_one_site_is_lax() {
        let setup = RootSetup::odd(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let p1 = random_triple(&mut rng);
        let p2 = random_triple(&mut rng);
        let lax = lax_cpm(&setup, &p1, &p2);
        let m = chain(&lax, 1, DIM_CAP).unwrap();
        let z = Complex64::new(0.4, 0.8);
        for i in 0..2 {
            for j in 0..2 {
                assert!(rel_residual(&m.block(i, j).eval(z), &lax.eval(z)[i][j]) < 1e-14);
            }
        }
    }

    #[test]
    fn transfer_family_commutes() {
        let setup = RootSetup::odd(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let p1 = random_triple(&mut rng);
        let p2 = random_triple(&mut rng);
        let m = chain(&lax_cpm(&setup, &p1, &p2), 2, DIM_CAP).unwrap();
        let t1 = Complex64::new(0.7, 0.2);
        let t2 = Complex64::new(-0.3, 1.1);
        for r in 0..3 {
            let a = tau2_transfer(&m, setup.omega, r, t1);
            let b = tau2_transfer(&m, setup.omega, r, t2);
            assert!(comm_residual(&a, &b) < 1e-12, "r = {r}");
        }
    }

    #[test]
    fn transfer_commutes_with_charge() {
        let setup = RootSetup::doubled(2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        let p1 = random_triple(&mut rng);
        let p2 = random_triple(&mut rng);
        let m = chain(&lax_big_tau(&setup, &p1, &p2), 2, DIM_CAP).unwrap();
        let t = Complex64::new(0.6, -0.4);
        let tr = t2_transfer(&m, &setup, 1, t);
        let charge = charge_operator(setup.ext, 2, DIM_CAP).unwrap();
        assert!(comm_residual(&tr, &charge) < 1e-12);
    }

    #[test]
    fn spin_chain_trace_relation() {
        let q = Complex64::from_polar(1.05, 0.31);
        let rho = Complex64::new(1.2, -0.4);
        let nu = Complex64::new(0.9, 0.6);
        let s = Complex64::new(0.8, 0.35);
        for d in [2usize, 3] {
            let gen = spin_rep(d, q).unwrap();
            let mres = monodromy_t_vs_s_residual(&gen, rho, nu, 2, s, DIM_CAP).unwrap();
            assert!(mres < 1e-12, "blocks d = {d}: {mres:.2e}");
            for r in 0..2 {
                let tres = spin_tau_t_residual(&gen, rho, nu, r, 2, s, DIM_CAP).unwrap();
                assert!(tres < 1e-12, "trace d = {d} r = {r}: {tres:.2e}");
            }
        }
    }

    #[test]
    fn inhomogeneity_absorbs_into_argument() {
        let setup = RootSetup::odd(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(34);
        let p1 = random_triple(&mut rng);
        let p2 = random_triple(&mut rng);
        let par = params_from_triples(&p1, &p2, &setup).unwrap();
        let base = lax_tau(&crate::qgroups::cyclic_uw(&setup, &par), par.rho, par.nu);
        let xi = [Complex64::new(1.0, 0.0), setup.omega, setup.omega * setup.omega];
        let scaled_sites: Vec<_> = xi
            .iter()
            .map(|&x| lax_tau(&crate::qgroups::cyclic_uw(&setup, &par), par.rho, par.nu * x))
            .collect();
        let res = inhomogeneous_reduction(&base, &scaled_sites, &xi, Complex64::new(0.5, 0.7), DIM_CAP).unwrap();
        assert!(res < 1e-13, "{res:.2e}");
    }

    #[test]
    fn sector_bases_span_same_space() {
        let setup = RootSetup::doubled(2).unwrap();
        for (d, root) in [(setup.base, setup.omega), (setup.ext, setup.q)] {
            for charge in 0..2i64 {
                let b = sector_basis(d, root, 2, charge, 1, DIM_CAP).unwrap();
                let m = b.hat.dim().1;
                assert_eq!(m, d.pow(1));
                let gram = cmatrix::dagger(&b.hat).dot(&b.hat);
                assert!(rel_residual(&gram, &identity(m)) < 1e-12);
                let gram_f = cmatrix::dagger(&b.face).dot(&b.face);
                assert!(rel_residual(&gram_f, &identity(m)) < 1e-12);
                let ph = b.hat.dot(&cmatrix::dagger(&b.hat));
                let pf = b.face.dot(&cmatrix::dagger(&b.face));
                assert!(rel_residual(&ph, &pf) < 1e-12, "d={d} charge={charge}");
            }
        }
    }

    #[test]
    fn face_vectors_carry_charge() {
        let setup = RootSetup::odd(3).unwrap();
        let d = setup.base;
        let charge_op = charge_operator(d, 3, DIM_CAP).unwrap();
        for q in 0..3i64 {
            let b = sector_basis(d, setup.omega, 3, q, 2, DIM_CAP).unwrap();
            let want = setup.omega_pow(q);
            let lhs = charge_op.dot(&b.face);
            let rhs = b.face.mapv(|v| v * want);
            assert!(rel_residual(&lhs, &rhs) < 1e-12, "q = {q}");
            let lhs_h = charge_op.dot(&b.hat);
            let rhs_h = b.hat.mapv(|v| v * want);
            assert!(rel_residual(&lhs_h, &rhs_h) < 1e-12);
        }
    }

    #[test]
    fn sector_restriction_and_leakage() {
        let setup = RootSetup::odd(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(35);
        let p1 = random_triple(&mut rng);
        let p2 = random_triple(&mut rng);
        let lax = lax_cpm(&setup, &p1, &p2);
        let om = setup.omega;
        assert!(yb_residual(&move |t| r_tau(om, t), &lax, Complex64::new(1.2, 0.1), Complex64::new(0.4, -0.6)) < 1e-12);
        let m = chain(&lax, 2, DIM_CAP).unwrap();
        let r = 1i64;
        let tr = tau2_transfer(&m, setup.omega, r, Complex64::new(0.5, 0.25));
        for q in 0..3i64 {
            let b = sector_basis(setup.base, setup.omega, 2, q, r, DIM_CAP).unwrap();
            assert!(off_sector_residual(&tr, &b) < 1e-12, "q = {q}");
            let vals = sector_spectrum(&tr, &b).unwrap();
            assert_eq!(vals.len(), 3);
        }
    }
}
