//! Decomposition of the doubled-space chain C^n (n = 2N) into copies of the
//! clock chain C^N: per-site embeddings and projections for the two invariant
//! subspaces in both the plain and conjugate pictures, the blockwise descent
//! of the doubled transfer matrices onto clock-space transfer matrices, and
//! the eigenvector pairing between the doubled six-vertex operator and the
//! descended tau2 operator.
//!
//! For odd n = N the same maps exist but both "subspaces" are all of C^N, so
//! the complementarity checks are skipped while the descent identities still
//! hold verbatim.

use num_complex::Complex64;

use crate::cmatrix::{self, CMatrix};
use crate::eigen;
use crate::error::Result;
use crate::lax::{lax_big_tau, lax_big_xxz, lax_cpm, lax_dagger, LaxOperator};
use crate::qgroups::{minus_gauge, ParamTriple, Parity};
use crate::report::Check;
use crate::transfer::{
    chain, chain_mixed, sector_basis, t2_transfer, t2dag_transfer, tau2_transfer, xxz_transfer,
    Monodromy,
};
use crate::weyl::{clock_pow, shift_pow, RootSetup};

/// One-site embedding C^N -> C^n and its left inverse.
#[derive(Debug, Clone)]
pub struct SiteMaps {
    pub embed: CMatrix,
    pub project: CMatrix,
}

fn site_scale(setup: &RootSetup) -> f64 {
    if setup.is_doubled() {
        1.0 / 2.0f64.sqrt()
    } else {
        1.0
    }
}

/// Plain-picture maps: the embedding sends basis vector sigma of C^N to
/// c e_{-2 sigma} (plus) or c e_{-2 sigma + 1} (minus) of C^n, and the
/// projection is the scaled transpose, a left inverse.
pub fn site_maps(setup: &RootSetup, parity: Parity) -> SiteMaps {
    let n = setup.ext;
    let nb = setup.base;
    let c = site_scale(setup);
    let off = match parity {
        Parity::Plus => 0i64,
        Parity::Minus => 1,
    };
    let mut embed = cmatrix::zeros(n, nb);
    let mut project = cmatrix::zeros(nb, n);
    for sigma in 0..nb as i64 {
        let j = (-2 * sigma + off).rem_euclid(n as i64) as usize;
        embed[(j, sigma as usize)] = Complex64::new(c, 0.0);
        project[(sigma as usize, j)] = Complex64::new(1.0 / c, 0.0);
    }
    SiteMaps { embed, project }
}

/// Conjugate-picture maps: the embedding sends sigma to
/// (e_sigma + e_{sigma+N}) / 2 (plus) or (q^{-sigma} e_sigma +
/// q^{-sigma-N} e_{sigma+N}) / 2 (minus); the projection sums residue
/// classes mod N, with clock weights q^{sigma_n} in the minus case.
pub fn site_maps_dagger(setup: &RootSetup, parity: Parity) -> SiteMaps {
    let n = setup.ext;
    let nb = setup.base;
    let q = setup.q;
    let mut embed = cmatrix::zeros(n, nb);
    let mut project = cmatrix::zeros(nb, n);
    for sigma in 0..nb {
        for rep in 0..(n / nb) {
            let j = sigma + rep * nb;
            let (we, wp) = match parity {
                Parity::Plus => (Complex64::new(0.5, 0.0), cmatrix::ONE),
                Parity::Minus => (q.powi(-(j as i32)) * 0.5, q.powi(j as i32)),
            };
            embed[(j, sigma)] += we;
            project[(sigma, j)] = wp;
        }
    }
    if !setup.is_doubled() {
        // n = N: the residue class is a single point, so the half weights
        // above would halve the vector; rebuild without them.
        let mut e = cmatrix::zeros(n, nb);
        let mut p = cmatrix::zeros(nb, n);
        for sigma in 0..nb {
            let (we, wp) = match parity {
                Parity::Plus => (cmatrix::ONE, cmatrix::ONE),
                Parity::Minus => (q.powi(-(sigma as i32)), q.powi(sigma as i32)),
            };
            e[(sigma, sigma)] = we;
            p[(sigma, sigma)] = wp;
        }
        return SiteMaps { embed: e, project: p };
    }
    SiteMaps { embed, project }
}

/// Tensor product of per-site maps over a chain with the given parity
/// pattern.
pub fn chain_maps(
    setup: &RootSetup,
    signs: &[Parity],
    conjugate: bool,
    cap: usize,
) -> Result<SiteMaps> {
    let maps: Vec<SiteMaps> = signs
        .iter()
        .map(|&p| {
            if conjugate {
                site_maps_dagger(setup, p)
            } else {
                site_maps(setup, p)
            }
        })
        .collect();
    let embeds: Vec<CMatrix> = maps.iter().map(|m| m.embed.clone()).collect();
    let projects: Vec<CMatrix> = maps.iter().map(|m| m.project.clone()).collect();
    Ok(SiteMaps {
        embed: cmatrix::kron_chain(&embeds, cap)?,
        project: cmatrix::kron_chain(&projects, cap)?,
    })
}

/// Per-site structure checks of the embeddings and the operator
/// intertwinings they satisfy.
pub fn intertwining_checks(setup: &RootSetup) -> Vec<Check> {
    let n = setup.ext;
    let nb = setup.base;
    let q = setup.q;
    let tol = 1e-12;
    let id_n = cmatrix::identity(n);
    let id_b = cmatrix::identity(nb);
    let zp = shift_pow(n, 1);
    let xp = clock_pow(n, q, -1);
    let zb = shift_pow(nb, 1);
    let xb = clock_pow(nb, setup.omega, -1);
    let mut out = Vec::new();

    let plus = site_maps(setup, Parity::Plus);
    let minus = site_maps(setup, Parity::Minus);
    let dplus = site_maps_dagger(setup, Parity::Plus);
    let dminus = site_maps_dagger(setup, Parity::Minus);

    for (name, m) in [("plain+", &plus), ("plain-", &minus), ("conj+", &dplus), ("conj-", &dminus)] {
        let r = cmatrix::rel_residual(&m.project.dot(&m.embed), &id_b);
        out.push(Check::new(format!("embed/left-inverse/{name}"), format!("n = {n}"), r, tol));
    }

    if setup.is_doubled() {
        for (name, a, b) in [("plain", (&plus, &minus)), ("conj", (&dplus, &dminus))]
            .map(|(s, p)| (s, p.0, p.1))
        {
            let r1 = cmatrix::max_abs(&a.project.dot(&b.embed));
            let r2 = cmatrix::max_abs(&b.project.dot(&a.embed));
            out.push(Check::new(
                format!("embed/cross-kill/{name}"),
                "projection annihilates the opposite subspace",
                r1.max(r2),
                tol,
            ));
            let sum = a.embed.dot(&a.project) + b.embed.dot(&b.project);
            out.push(Check::new(
                format!("embed/completeness/{name}"),
                "the two subspaces fill C^n",
                cmatrix::rel_residual(&sum, &id_n),
                tol,
            ));
        }
    }

    // Subspace relations: the minus maps are clock translates of the plus
    // maps, by the shift in the plain picture and the clock in the
    // conjugate picture.
    out.push(Check::new(
        "embed/minus-is-shifted-plus/plain",
        "E_- = Z' E_+",
        cmatrix::rel_residual(&minus.embed, &zp.dot(&plus.embed)),
        tol,
    ));
    out.push(Check::new(
        "embed/minus-is-shifted-plus/conj",
        "E_- = X' E_+",
        cmatrix::rel_residual(&dminus.embed, &xp.dot(&dplus.embed)),
        tol,
    ));

    // Operator intertwinings: the descent replaces hat-X' by the clock-space
    // hat-X (with one q on the minus copy) and hat-Z'^{-2} by hat-Z.
    let z2 = shift_pow(n, -2);
    for (name, m, fac) in [("plus", &plus, cmatrix::ONE), ("minus", &minus, 1.0 / q)] {
        let lhs = m.project.dot(&xp);
        let rhs = xb.dot(&m.project).mapv(|v| v * fac);
        out.push(Check::new(
            format!("intertwine/plain-step/{name}"),
            "P X' = q^{-(1∓1)/2} X P",
            cmatrix::rel_residual(&lhs, &rhs),
            tol,
        ));
        let lhs2 = m.project.dot(&z2);
        let rhs2 = zb.dot(&m.project);
        out.push(Check::new(
            format!("intertwine/plain-clock/{name}"),
            "P Z'^{-2} = Z P",
            cmatrix::rel_residual(&lhs2, &rhs2),
            tol,
        ));
    }
    let xm2 = clock_pow(n, q, 2);
    for (name, m, fac) in [("plus", &dplus, cmatrix::ONE), ("minus", &dminus, q)] {
        let lhs = m.project.dot(&xm2);
        let rhs = xb.dot(&m.project);
        out.push(Check::new(
            format!("intertwine/conj-step/{name}"),
            "P X'^{-2} = X P",
            cmatrix::rel_residual(&lhs, &rhs),
            tol,
        ));
        let lhs2 = m.project.dot(&zp);
        let rhs2 = zb.dot(&m.project).mapv(|v| v * fac);
        out.push(Check::new(
            format!("intertwine/conj-clock/{name}"),
            "P Z' = q^{(1∓1)/2} Z P",
            cmatrix::rel_residual(&lhs2, &rhs2),
            tol,
        ));
    }
    out
}

/// The clock-space vertex triples equivalent to one site of the doubled
/// chain restricted to a parity: plus keeps (p', p), minus applies the
/// companion gauge in the plain picture and shifts d by q in the conjugate
/// picture.
pub fn descended_triples(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    parity: Parity,
    conjugate: bool,
) -> (ParamTriple, ParamTriple) {
    match (parity, conjugate) {
        (Parity::Plus, _) => (*p_prime, *p),
        (Parity::Minus, false) => minus_gauge(p_prime, p, setup.q),
        (Parity::Minus, true) => (*p_prime, p.d_shift(1, setup.q)),
    }
}

fn descended_chain(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    signs: &[Parity],
    conjugate: bool,
    cap: usize,
) -> Result<Monodromy> {
    let ops: Vec<LaxOperator> = signs
        .iter()
        .map(|&par| {
            let (pp, pq) = descended_triples(setup, p_prime, p, par, conjugate);
            lax_cpm(setup, &pp, &pq)
        })
        .collect();
    chain_mixed(&ops, cap)
}

fn signs_label(signs: &[Parity]) -> String {
    signs.iter().map(|s| s.label()).collect()
}

/// Blockwise descent of the doubled tau2 chain onto the clock chain: each
/// monodromy block restricts to the block of the chain of five-parameter
/// operators with parity-dependent triples, the blocks leave the subspace
/// invariant, the twisted traces match (boundary exponent r' = 2r), and the
/// minus slices are shift conjugates of the plus slice.
pub fn verify_t2_descent(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    signs: &[Parity],
    r: i64,
    t: Complex64,
    cap: usize,
) -> Result<Vec<Check>> {
    let tol = 1e-10;
    let sites = signs.len();
    let label = format!("sites {} pattern {}", sites, signs_label(signs));
    let big = chain(&lax_big_tau(setup, p_prime, p), sites, cap)?;
    let small = descended_chain(setup, p_prime, p, signs, false, cap)?;
    let maps = chain_maps(setup, signs, false, cap)?;
    let z = setup.omega * t;
    let mut out = Vec::new();

    let mut worst_block = 0.0f64;
    let mut worst_leak = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let bm = big.block(i, j).eval(z);
            let restricted = maps.project.dot(&bm).dot(&maps.embed);
            let target = small.block(i, j).eval(z);
            worst_block = worst_block.max(cmatrix::rel_residual(&restricted, &target));
            let me = bm.dot(&maps.embed);
            let back = maps.embed.dot(&maps.project).dot(&me);
            worst_leak = worst_leak
                .max(cmatrix::max_abs(&(&me - &back)) / 1.0f64.max(cmatrix::max_abs(&me)));
        }
    }
    out.push(Check::new("descent/blocks", label.clone(), worst_block, tol));
    out.push(Check::new("descent/invariance", label.clone(), worst_leak, tol));

    let r_prime = crate::transfer::doubled_twist_of(setup, r);
    let big_t = t2_transfer(&big, setup, r_prime, t);
    let restricted = maps.project.dot(&big_t).dot(&maps.embed);
    let target = tau2_transfer(&small, setup.omega, r, t);
    out.push(Check::new(
        "descent/transfer",
        format!("{label}, r = {r}"),
        cmatrix::rel_residual(&restricted, &target),
        tol,
    ));

    // A minus site equals a shift-conjugated plus site, so the whole slice
    // is reachable from the all-plus slice by clock translation.
    let all_plus = vec![Parity::Plus; sites];
    let plus_maps = chain_maps(setup, &all_plus, false, cap)?;
    let shifts: Vec<CMatrix> = signs
        .iter()
        .map(|&s| match s {
            Parity::Plus => cmatrix::identity(setup.ext),
            Parity::Minus => shift_pow(setup.ext, 1),
        })
        .collect();
    let zvec = cmatrix::kron_chain(&shifts, cap)?;
    let zvec_inv: Vec<CMatrix> = signs
        .iter()
        .map(|&s| match s {
            Parity::Plus => cmatrix::identity(setup.ext),
            Parity::Minus => shift_pow(setup.ext, -1),
        })
        .collect();
    let zvec_inv = cmatrix::kron_chain(&zvec_inv, cap)?;
    let conjugated = zvec_inv.dot(&big_t).dot(&zvec);
    let via_plus = plus_maps.project.dot(&conjugated).dot(&plus_maps.embed);
    out.push(Check::new(
        "descent/slice-conjugation",
        label,
        cmatrix::rel_residual(&via_plus, &restricted),
        tol,
    ));
    Ok(out)
}

/// Same structure for the conjugate picture: the conjugate doubled chain
/// restricts through the conjugate embeddings, with minus sites shifting d
/// by q, and the boundary exponent maps to r = -r' mod N.
pub fn verify_dagger_descent(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    signs: &[Parity],
    r_prime: i64,
    t: Complex64,
    cap: usize,
) -> Result<Vec<Check>> {
    let tol = 1e-10;
    let sites = signs.len();
    let label = format!("sites {} pattern {}", sites, signs_label(signs));
    let big = chain(&lax_dagger(setup, p_prime, p), sites, cap)?;
    let small = descended_chain(setup, p_prime, p, signs, true, cap)?;
    let maps = chain_maps(setup, signs, true, cap)?;
    let z = setup.omega * t;
    let mut out = Vec::new();

    let mut worst_block = 0.0f64;
    let mut worst_leak = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let bm = big.block(i, j).eval(z);
            let restricted = maps.project.dot(&bm).dot(&maps.embed);
            let target = small.block(i, j).eval(z);
            worst_block = worst_block.max(cmatrix::rel_residual(&restricted, &target));
            let me = bm.dot(&maps.embed);
            let back = maps.embed.dot(&maps.project).dot(&me);
            worst_leak = worst_leak
                .max(cmatrix::max_abs(&(&me - &back)) / 1.0f64.max(cmatrix::max_abs(&me)));
        }
    }
    out.push(Check::new("descent-conj/blocks", label.clone(), worst_block, tol));
    out.push(Check::new("descent-conj/invariance", label.clone(), worst_leak, tol));

    let r = (-r_prime).rem_euclid(setup.base as i64);
    let big_t = t2dag_transfer(&big, setup, r_prime, t);
    let restricted = maps.project.dot(&big_t).dot(&maps.embed);
    let target = tau2_transfer(&small, setup.omega, r, t);
    out.push(Check::new(
        "descent-conj/transfer",
        format!("{label}, r' = {r_prime}"),
        cmatrix::rel_residual(&restricted, &target),
        tol,
    ));

    let all_plus = vec![Parity::Plus; sites];
    let plus_maps = chain_maps(setup, &all_plus, true, cap)?;
    let steps: Vec<CMatrix> = signs
        .iter()
        .map(|&s| match s {
            Parity::Plus => cmatrix::identity(setup.ext),
            Parity::Minus => clock_pow(setup.ext, setup.q, -1),
        })
        .collect();
    let xvec = cmatrix::kron_chain(&steps, cap)?;
    let steps_inv: Vec<CMatrix> = signs
        .iter()
        .map(|&s| match s {
            Parity::Plus => cmatrix::identity(setup.ext),
            Parity::Minus => clock_pow(setup.ext, setup.q, 1),
        })
        .collect();
    let xvec_inv = cmatrix::kron_chain(&steps_inv, cap)?;
    let conjugated = xvec_inv.dot(&big_t).dot(&xvec);
    let via_plus = plus_maps.project.dot(&conjugated).dot(&plus_maps.embed);
    out.push(Check::new(
        "descent-conj/slice-conjugation",
        label,
        cmatrix::rel_residual(&via_plus, &restricted),
        tol,
    ));
    Ok(out)
}

/// Eigenvector pairing between the doubled six-vertex transfer matrix and
/// the descended tau2 operator: with v the lift of a clock-sector
/// eigenvector and u± = v ± q^{-Q} Z' v, the u± are eigenvectors of the
/// six-vertex operator with eigenvalues ±q^Q Phi lambda and carry doubled
/// charges Q and Q+N. Phi is the global scalar relating the two pictures,
/// estimated from the operator identity and checked for constancy.
pub fn verify_pairing(
    setup: &RootSetup,
    p_prime: &ParamTriple,
    p: &ParamTriple,
    sites: usize,
    r_prime: i64,
    s: Complex64,
    cap: usize,
) -> Result<Vec<Check>> {
    let tol_scalar = 1e-10;
    let tol_eigen = 1e-8;
    let q = setup.q;
    let n = setup.ext;
    let t = s * s;
    let mut out = Vec::new();

    let ms = chain(&lax_big_xxz(setup, p_prime, p), sites, cap)?;
    let big_s = xxz_transfer(&ms, q, r_prime, s);
    let mt = chain(&lax_big_tau(setup, p_prime, p), sites, cap)?;
    let big_t_arg = t / setup.omega;
    let big_t = t2_transfer(&mt, setup, r_prime, big_t_arg);

    let zchain = cmatrix::global_product(&shift_pow(n, 1), sites, cap)?;
    let m2 = zchain.dot(&big_t);
    let (phi, scal_res) = cmatrix::scalar_match(&m2, &big_s);
    out.push(Check::new(
        "pairing/global-scalar",
        format!("sites {sites}, r' = {r_prime}"),
        scal_res,
        tol_scalar,
    ));
    let c = crate::qgroups::c_of(p_prime, p);
    let pref = (p_prime.b.powi(3) * p.b.powi(3) / (setup.omega * p_prime.a * p.a * c * c)).powf(0.25);
    let expect_mod = ((pref / s).norm()).powi(sites as i32);
    out.push(Check::new(
        "pairing/scalar-modulus",
        "measured |Phi| against the closed form",
        (phi.norm() - expect_mod).abs() / 1.0f64.max(expect_mod),
        tol_scalar,
    ));
    out.push(Check::new(
        "pairing/charge-commute",
        "six-vertex transfer commutes with the doubled charge",
        cmatrix::comm_residual(&big_s, &zchain),
        tol_scalar,
    ));

    let all_plus = vec![Parity::Plus; sites];
    let maps = chain_maps(setup, &all_plus, false, cap)?;
    let restricted = maps.project.dot(&big_t).dot(&maps.embed);

    for qq in 0..setup.base as i64 {
        let basis = sector_basis(setup.base, setup.omega, sites, qq, 0, cap)?;
        let m_res = cmatrix::dagger(&basis.hat).dot(&restricted).dot(&basis.hat);
        let es = eigen::eigensystem(&m_res)?;
        let mut worst_eig = 0.0f64;
        let mut worst_charge = 0.0f64;
        for (k, lam) in es.values.iter().enumerate() {
            let w = es.vectors.column(k).to_owned();
            let vtil = basis.hat.dot(&w);
            let v = maps.embed.dot(&vtil);
            let zv = zchain.dot(&v);
            for (sign, sgn) in [(1.0, "+"), (-1.0, "-")] {
                let u: ndarray::Array1<Complex64> =
                    &v + &zv.mapv(|x| x * sign * q.powi(-(qq as i32)));
                let norm = u.iter().fold(0.0f64, |m, z| m.max(z.norm()));
                if norm < 1e-10 {
                    out.push(Check::fact(
                        format!("pairing/degenerate/Q{qq}{sgn}"),
                        "paired vector vanished; parameters degenerate",
                        false,
                    ));
                    continue;
                }
                let want = phi * lam * sign * q.powi(qq as i32);
                let lhs = big_s.dot(&u);
                let diff = &lhs - &u.mapv(|x| x * want);
                let r_eig = diff.iter().fold(0.0f64, |m, z| m.max(z.norm()))
                    / norm.max(lhs.iter().fold(0.0f64, |m, z| m.max(z.norm())));
                worst_eig = worst_eig.max(r_eig);
                let zu = zchain.dot(&u);
                let want_c = sign * q.powi(qq as i32);
                let diffc = &zu - &u.mapv(|x| x * want_c);
                let r_ch = diffc.iter().fold(0.0f64, |m, z| m.max(z.norm())) / norm;
                worst_charge = worst_charge.max(r_ch);
            }
        }
        out.push(Check::new(
            format!("pairing/eigen/Q{qq}"),
            format!("{} eigenpairs, both signs", es.values.len()),
            worst_eig,
            tol_eigen,
        ));
        out.push(Check::new(
            format!("pairing/charge/Q{qq}"),
            "doubled charges are ±q^Q",
            worst_charge,
            tol_eigen,
        ));
    }
    Ok(out)
}
