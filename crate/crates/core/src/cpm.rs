//! Chiral Potts transfer matrices over rapidity curves: curve moduli and
//! on-curve rapidities, Boltzmann weights with their clock periodicity,
//! the column transfer matrices T and T-hat, star-triangle commutation,
//! the functional relation tying the clock transfer matrix to T through
//! rapidity shifts, the rapidity form of the parameter duality with
//! Fourier-transformed weights, and the curve memberships of the shifted
//! parameters produced by the doubled-space decomposition.

use num_complex::Complex64;

use crate::cmatrix::{self, CMatrix, ONE, ZERO};
use crate::duality::product_transfer;
use crate::error::{Error, Result};
use crate::lax::lax_cpm;
use crate::qgroups::{minus_gauge, ParamTriple};
use crate::report::Check;
use crate::transfer::{chain, chain_mixed, sector_basis, tau2_transfer};
use crate::weyl::{shift, RootSetup};

/// Moduli (k', k) of a rapidity curve with k^2 + k'^2 = 1.
#[derive(Debug, Clone, Copy)]
pub struct CurveModuli {
    pub k_prime: Complex64,
    pub k: Complex64,
}

impl CurveModuli {
    /// Build moduli from k', with k the principal square root of 1 - k'^2.
    pub fn new(k_prime: Complex64) -> Result<Self> {
        let k2 = ONE - k_prime * k_prime;
        if k_prime.norm() < 1e-12 || k2.norm() < 1e-12 {
            return Err(Error::Param(format!(
                "degenerate curve moduli: k' = {k_prime}"
            )));
        }
        Ok(CurveModuli { k_prime, k: k2.sqrt() })
    }

    /// Moduli of the dual curve: (1/k', i k / k').
    pub fn dual(&self) -> CurveModuli {
        CurveModuli {
            k_prime: 1.0 / self.k_prime,
            k: cmatrix::I * self.k / self.k_prime,
        }
    }

    /// Same curve family with the sign of k flipped.
    pub fn flip_k(&self) -> CurveModuli {
        CurveModuli { k_prime: self.k_prime, k: -self.k }
    }

    /// Same curve family with the sign of k' flipped.
    pub fn flip_k_prime(&self) -> CurveModuli {
        CurveModuli { k_prime: -self.k_prime, k: self.k }
    }
}

/// A rapidity (x, y, mu); on the curve it satisfies k x^N = 1 - k' mu^{-N}
/// and k y^N = 1 - k' mu^N.
#[derive(Debug, Clone, Copy)]
pub struct Rapidity {
    pub x: Complex64,
    pub y: Complex64,
    pub mu: Complex64,
}

impl Rapidity {
    /// Solve the curve equations for x and y given mu, taking principal
    /// N-th roots times the clock-root branches bx, by.
    pub fn from_mu(
        m: &CurveModuli,
        n: usize,
        omega: Complex64,
        mu: Complex64,
        bx: i64,
        by: i64,
    ) -> Result<Rapidity> {
        let ni = n as i32;
        let xn = (ONE - m.k_prime * mu.powi(-ni)) / m.k;
        let yn = (ONE - m.k_prime * mu.powi(ni)) / m.k;
        if xn.norm() < 1e-12 || yn.norm() < 1e-12 {
            return Err(Error::Param("rapidity branch point: x^N or y^N vanishes".into()));
        }
        let x = xn.powf(1.0 / n as f64) * omega.powi(bx.rem_euclid(n as i64) as i32);
        let y = yn.powf(1.0 / n as f64) * omega.powi(by.rem_euclid(n as i64) as i32);
        Ok(Rapidity { x, y, mu })
    }

    /// The spectral variable t = x y.
    pub fn t(&self) -> Complex64 {
        self.x * self.y
    }

    /// The shift automorphism (x, y, mu) -> (omega x, y, mu).
    pub fn map_u(&self, omega: Complex64) -> Rapidity {
        Rapidity { x: omega * self.x, y: self.y, mu: self.mu }
    }

    /// The shift automorphism (x, y, mu) -> (x, omega y, mu).
    pub fn map_u_prime(&self, omega: Complex64) -> Rapidity {
        Rapidity { x: self.x, y: omega * self.y, mu: self.mu }
    }

    /// The dual rapidity (alpha x mu, alpha y / mu, 1/mu) with alpha the
    /// fixed N-th root of i; it lies on the dual curve.
    pub fn dual(&self, alpha: Complex64) -> Rapidity {
        Rapidity {
            x: alpha * self.x * self.mu,
            y: alpha * self.y / self.mu,
            mu: 1.0 / self.mu,
        }
    }

    /// The parameter triple (a, b, d) = (x, y, mu) of the clock-space
    /// Lax operator with this vertical rapidity.
    pub fn triple(&self) -> ParamTriple {
        ParamTriple::new(self.x, self.y, self.mu)
    }
}

/// Largest defect of the two curve equations.
pub fn curve_residual(m: &CurveModuli, p: &Rapidity, n: usize) -> f64 {
    let ni = n as i32;
    let r1 = (m.k * p.x.powi(ni) - ONE + m.k_prime * p.mu.powi(-ni)).norm();
    let r2 = (m.k * p.y.powi(ni) - ONE + m.k_prime * p.mu.powi(ni)).norm();
    r1.max(r2)
}

fn weight_w_raw(n: usize, omega: Complex64, p: &Rapidity, q: &Rapidity, s: i64) -> Complex64 {
    let _ = n;
    let mut val = (p.mu / q.mu).powi(s as i32);
    for j in 1..=s {
        val *= (q.y - omega.powi(j as i32) * p.x) / (p.y - omega.powi(j as i32) * q.x);
    }
    val
}

fn weight_wbar_raw(n: usize, omega: Complex64, p: &Rapidity, q: &Rapidity, s: i64) -> Complex64 {
    let _ = n;
    let mut val = (p.mu * q.mu).powi(s as i32);
    for j in 1..=s {
        val *= (omega * p.x - omega.powi(j as i32) * q.x) / (q.y - omega.powi(j as i32) * p.y);
    }
    val
}

/// Boltzmann weight W_{pq}(sigma), normalized to W_{pq}(0) = 1, with sigma
/// reduced mod N.
pub fn weight_w(n: usize, omega: Complex64, p: &Rapidity, q: &Rapidity, sigma: i64) -> Complex64 {
    weight_w_raw(n, omega, p, q, sigma.rem_euclid(n as i64))
}

/// Boltzmann weight Wbar_{pq}(sigma), normalized to Wbar_{pq}(0) = 1, with
/// sigma reduced mod N.
pub fn weight_wbar(n: usize, omega: Complex64, p: &Rapidity, q: &Rapidity, sigma: i64) -> Complex64 {
    weight_wbar_raw(n, omega, p, q, sigma.rem_euclid(n as i64))
}

/// Fourier transform of a weight family: N^{-1/2} sum_sigma omega^{k sigma}
/// w(sigma).
fn weight_fourier<F>(n: usize, omega: Complex64, k: i64, w: F) -> Complex64
where
    F: Fn(i64) -> Complex64,
{
    let scale = 1.0 / (n as f64).sqrt();
    let mut sum = ZERO;
    for sigma in 0..n as i64 {
        sum += omega.powi(((k * sigma).rem_euclid(n as i64)) as i32) * w(sigma);
    }
    sum * scale
}

/// Fourier transform of W_{pq} at mode k.
pub fn weight_w_fourier(
    n: usize,
    omega: Complex64,
    p: &Rapidity,
    q: &Rapidity,
    k: i64,
) -> Complex64 {
    weight_fourier(n, omega, k, |s| weight_w(n, omega, p, q, s))
}

/// Fourier transform of Wbar_{pq} at mode k.
pub fn weight_wbar_fourier(
    n: usize,
    omega: Complex64,
    p: &Rapidity,
    q: &Rapidity,
    k: i64,
) -> Complex64 {
    weight_fourier(n, omega, k, |s| weight_wbar(n, omega, p, q, s))
}

/// Clock periodicity of the weights: the literal products at sigma and
/// sigma + N agree exactly when both rapidities sit on the curve.
pub fn periodicity_checks(
    n: usize,
    omega: Complex64,
    p: &Rapidity,
    q: &Rapidity,
) -> Vec<Check> {
    let tol = 1e-10;
    let mut worst_w = 0.0f64;
    let mut worst_wbar = 0.0f64;
    for s in 0..n as i64 {
        let a = weight_w_raw(n, omega, p, q, s);
        let b = weight_w_raw(n, omega, p, q, s + n as i64);
        worst_w = worst_w.max((a - b).norm() / 1.0f64.max(a.norm()));
        let a = weight_wbar_raw(n, omega, p, q, s);
        let b = weight_wbar_raw(n, omega, p, q, s + n as i64);
        worst_wbar = worst_wbar.max((a - b).norm() / 1.0f64.max(a.norm()));
    }
    vec![
        Check::new("cpm/periodicity-w", "W(sigma + N) = W(sigma)", worst_w, tol),
        Check::new("cpm/periodicity-wbar", "Wbar(sigma + N) = Wbar(sigma)", worst_wbar, tol),
    ]
}

/// Transfer matrix T(q): site factor W_{p_l q}(row_l - col_l)
/// Wbar_{p'_{l+1} q}(row_{l+1} - col_l), boundary row_{L+1} = row_1 - r.
pub fn cpm_transfer(
    n: usize,
    omega: Complex64,
    p_primes: &[Rapidity],
    ps: &[Rapidity],
    q: &Rapidity,
    r: i64,
) -> CMatrix {
    let sites = ps.len();
    product_transfer(n, sites, -r, |l, a, d, b, _c| {
        weight_w(n, omega, &ps[l], q, a - d)
            * weight_wbar(n, omega, &p_primes[(l + 1) % sites], q, b - d)
    })
}

/// Transfer matrix T-hat(q): site factor Wbar_{p_l q}(row_l - col_l)
/// W_{p'_{l+1} q}(row_l - col_{l+1}), boundary col_{L+1} = col_1 - r.
pub fn cpm_transfer_hat(
    n: usize,
    omega: Complex64,
    p_primes: &[Rapidity],
    ps: &[Rapidity],
    q: &Rapidity,
    r: i64,
) -> CMatrix {
    let sites = ps.len();
    product_transfer(n, sites, -r, |l, a, d, _b, c| {
        weight_wbar(n, omega, &ps[l], q, a - d)
            * weight_w(n, omega, &p_primes[(l + 1) % sites], q, a - c)
    })
}

/// Star-triangle commutation: products T-hat(q) T(r) with different
/// horizontal rapidities commute, and so do products T(q) T-hat(r); both
/// families also commute with the global clock charge.
pub fn verify_star_triangle(
    n: usize,
    omega: Complex64,
    p_prime: &Rapidity,
    p: &Rapidity,
    sites: usize,
    r: i64,
    qs: &[Rapidity],
    cap: usize,
) -> Result<Vec<Check>> {
    if qs.len() < 4 {
        return Err(Error::Param("star-triangle needs four horizontal rapidities".into()));
    }
    let tol = 1e-9;
    let pp = vec![*p_prime; sites];
    let ps = vec![*p; sites];
    let t = |q: &Rapidity| cpm_transfer(n, omega, &pp, &ps, q, r);
    let th = |q: &Rapidity| cpm_transfer_hat(n, omega, &pp, &ps, q, r);

    let mut out = Vec::new();
    let a = th(&qs[0]).dot(&t(&qs[1]));
    let b = th(&qs[2]).dot(&t(&qs[3]));
    out.push(Check::new(
        "star-triangle/hat-t",
        format!("sites {sites}, r = {r}"),
        cmatrix::comm_residual(&a, &b),
        tol,
    ));
    let a = t(&qs[0]).dot(&th(&qs[1]));
    let b = t(&qs[2]).dot(&th(&qs[3]));
    out.push(Check::new(
        "star-triangle/t-hat",
        format!("sites {sites}, r = {r}"),
        cmatrix::comm_residual(&a, &b),
        tol,
    ));
    let x_global = cmatrix::global_product(&shift(n), sites, cap)?;
    out.push(Check::new(
        "star-triangle/charge-t",
        "T commutes with the global clock charge",
        cmatrix::comm_residual(&t(&qs[0]), &x_global),
        1e-10,
    ));
    out.push(Check::new(
        "star-triangle/charge-hat",
        "T-hat commutes with the global clock charge",
        cmatrix::comm_residual(&th(&qs[0]), &x_global),
        1e-10,
    ));
    Ok(out)
}

fn phi_plain(
    p_primes: &[Rapidity],
    ps: &[Rapidity],
    q: &Rapidity,
    omega: Complex64,
) -> Complex64 {
    let tq = q.t();
    let mut val = ONE;
    for (pp, p) in p_primes.iter().zip(ps.iter()) {
        val *= (pp.t() - tq) * (p.y - omega * q.x) / (p.y * pp.y * (pp.x - q.x));
    }
    val
}

fn phi_bar(
    p_primes: &[Rapidity],
    ps: &[Rapidity],
    q: &Rapidity,
    omega: Complex64,
) -> Complex64 {
    let tq = q.t();
    let mut val = ONE;
    for (pp, p) in p_primes.iter().zip(ps.iter()) {
        val *= omega * pp.mu * p.mu * (p.t() - tq) * (pp.x - q.x)
            / (p.y * pp.y * (p.y - omega * q.x));
    }
    val
}

fn phi_prime(
    p_primes: &[Rapidity],
    ps: &[Rapidity],
    q: &Rapidity,
    omega: Complex64,
) -> Complex64 {
    let tq = q.t();
    let mut val = ONE;
    for (pp, p) in p_primes.iter().zip(ps.iter()) {
        val *= omega * p.mu * pp.mu * (pp.t() - tq) * (p.x - q.y)
            / (p.y * pp.y * (pp.y - q.y));
    }
    val
}

fn phi_bar_prime(p_primes: &[Rapidity], ps: &[Rapidity], q: &Rapidity) -> Complex64 {
    let tq = q.t();
    let mut val = ONE;
    for (pp, p) in p_primes.iter().zip(ps.iter()) {
        val *= (p.t() - tq) * (pp.y - q.y) / (p.y * pp.y * (p.x - q.y));
    }
    val
}

/// Functional relation between the clock transfer matrix and T: applying
/// the clock transfer matrix at t_q to T at a shifted rapidity produces a
/// two-term combination of T at neighbouring shifts, with closed scalar
/// coefficients and one charge-operator insertion.
pub fn verify_tau_t(
    setup: &RootSetup,
    p_primes: &[Rapidity],
    ps: &[Rapidity],
    q: &Rapidity,
    r: i64,
    cap: usize,
) -> Result<Vec<Check>> {
    let tol = 1e-8;
    let n = setup.base;
    let omega = setup.omega;
    let sites = ps.len();
    if p_primes.len() != sites {
        return Err(Error::Param("vertical rapidity lists differ in length".into()));
    }
    let rr = r.rem_euclid(n as i64);

    let ops: Vec<_> = (0..sites)
        .map(|l| lax_cpm(setup, &p_primes[l].triple(), &ps[l].triple()))
        .collect();
    let tau = tau2_transfer(&chain_mixed(&ops, cap)?, omega, rr, q.t());
    let x_global = cmatrix::global_product(&shift(n), sites, cap)?;
    let tw = omega.powi(rr as i32);
    let mut out = Vec::new();

    let uq = q.map_u(omega);
    let u2q = uq.map_u(omega);
    let lhs = tau.dot(&cpm_transfer(n, omega, p_primes, ps, &uq, rr));
    let c1 = phi_plain(p_primes, ps, q, omega);
    let c2 = tw * phi_bar(p_primes, ps, &uq, omega);
    let rhs = cpm_transfer(n, omega, p_primes, ps, q, rr).mapv(|z| z * c1)
        + x_global
            .dot(&cpm_transfer(n, omega, p_primes, ps, &u2q, rr))
            .mapv(|z| z * c2);
    out.push(Check::new(
        "tau-t/x-shift",
        format!("sites {sites}, r = {rr}"),
        cmatrix::rel_residual(&lhs, &rhs),
        tol,
    ));

    let vq = q.map_u_prime(omega);
    let v2q = vq.map_u_prime(omega);
    let lhs = tau.dot(&cpm_transfer(n, omega, p_primes, ps, &vq, rr));
    let c1 = tw * phi_prime(p_primes, ps, q, omega);
    let c2 = phi_bar_prime(p_primes, ps, &vq);
    let rhs = x_global
        .dot(&cpm_transfer(n, omega, p_primes, ps, q, rr))
        .mapv(|z| z * c1)
        + cpm_transfer(n, omega, p_primes, ps, &v2q, rr).mapv(|z| z * c2);
    out.push(Check::new(
        "tau-t/y-shift",
        format!("sites {sites}, r = {rr}"),
        cmatrix::rel_residual(&lhs, &rhs),
        tol,
    ));
    Ok(out)
}

/// Rapidity form of the parameter duality: Fourier-transformed weights of
/// dual rapidities reproduce the conjugate weight family, the clock
/// transfer matrix obeys the duality with dual rapidities and the scaled
/// spectral variable, and T itself maps to the dual T with a closed
/// product of zero-mode Fourier weights.
pub fn verify_cpm_duality(
    setup: &RootSetup,
    moduli: &CurveModuli,
    p_primes: &[Rapidity],
    ps: &[Rapidity],
    q: &Rapidity,
    r: i64,
    q_charge: i64,
    cap: usize,
) -> Result<Vec<Check>> {
    let n = setup.base;
    let nb = n as i64;
    let omega = setup.omega;
    let alpha = setup.i_root();
    let sites = ps.len();
    let rr = r.rem_euclid(nb);
    let qq = q_charge.rem_euclid(nb);
    let mut out = Vec::new();

    let dual_m = moduli.dual();
    let q_star = q.dual(alpha);
    let ps_star: Vec<Rapidity> = ps.iter().map(|p| p.dual(alpha)).collect();
    let pp_star: Vec<Rapidity> = p_primes.iter().map(|p| p.dual(alpha)).collect();
    out.push(Check::new(
        "cpm-duality/dual-on-curve",
        "dual rapidities satisfy the dual curve equations",
        ps_star
            .iter()
            .chain(pp_star.iter())
            .chain(std::iter::once(&q_star))
            .map(|p| curve_residual(&dual_m, p, n))
            .fold(0.0f64, f64::max),
        1e-10,
    ));
    out.push(Check::new(
        "cpm-duality/spectral-scale",
        "t of the dual rapidity is e^{i pi/N} t",
        (q_star.t() - setup.omega_half() * q.t()).norm(),
        1e-12,
    ));

    let mut worst = 0.0f64;
    for k in 0..nb {
        let lhs = weight_wbar_fourier(n, omega, &ps[0], q, k)
            / weight_wbar_fourier(n, omega, &ps[0], q, 0);
        let rhs = weight_w(n, omega, &ps_star[0], &q_star, k);
        worst = worst.max((lhs - rhs).norm());
        let lhs = weight_w_fourier(n, omega, &p_primes[0], q, k)
            / weight_w_fourier(n, omega, &p_primes[0], q, 0);
        let rhs = weight_wbar(n, omega, &pp_star[0], &q_star, nb - k);
        worst = worst.max((lhs - rhs).norm());
    }
    out.push(Check::new(
        "cpm-duality/fourier-weights",
        "Fourier weight ratios reproduce the dual weights",
        worst,
        1e-10,
    ));

    let face_side = sector_basis(n, omega, sites, qq, rr, cap)?;
    let hat_side = sector_basis(n, omega, sites, rr, qq, cap)?;

    let ops:Vec<_> = (0..sites)
        .map(|l| lax_cpm(setup, &p_primes[l].triple(), &ps[l].triple()))
        .collect();
    let m1 = tau2_transfer(&chain_mixed(&ops, cap)?, omega, rr, q.t());
    let dual_ops: Vec<_> = (0..sites)
        .map(|l| {
            lax_cpm(
                setup,
                &ps_star[l].triple(),
                &pp_star[(l + 1) % sites].triple(),
            )
        })
        .collect();
    let m2 = tau2_transfer(
        &chain_mixed(&dual_ops, cap)?,
        omega,
        qq,
        setup.omega_half() * q.t(),
    );
    let lhs = cmatrix::dagger(&face_side.face).dot(&m1).dot(&face_side.face);
    let rhs = cmatrix::dagger(&hat_side.hat).dot(&m2).dot(&hat_side.hat);
    out.push(Check::new(
        "cpm-duality/clock-transfer",
        format!("sites {sites}, (r, Q) = ({rr}, {qq})"),
        cmatrix::rel_residual(&lhs, &rhs),
        1e-9,
    ));

    let t_orig = cpm_transfer(n, omega, p_primes, ps, q, rr);
    let dual_unprimed: Vec<Rapidity> =
        (0..sites).map(|l| pp_star[(l + 1) % sites]).collect();
    let t_dual = cpm_transfer(n, omega, &ps_star, &dual_unprimed, &q_star, qq);
    let mut pref = ONE;
    for l in 0..sites {
        pref *= weight_w_fourier(n, omega, &pp_star[l], &q_star, 0)
            / weight_w_fourier(n, omega, &ps[l], q, 0);
    }
    let lhs = cmatrix::dagger(&hat_side.hat).dot(&t_dual).dot(&hat_side.hat);
    let rhs = cmatrix::dagger(&face_side.face)
        .dot(&t_orig)
        .dot(&face_side.face)
        .mapv(|z| z * pref);
    out.push(Check::new(
        "cpm-duality/t-transfer",
        format!("sites {sites}, (r, Q) = ({rr}, {qq})"),
        cmatrix::rel_residual(&lhs, &rhs),
        1e-9,
    ));

    let that_orig = cpm_transfer_hat(n, omega, p_primes, ps, q, rr);
    let that_dual = cpm_transfer_hat(n, omega, &ps_star, &dual_unprimed, &q_star, qq);
    let mut pref = ONE;
    for l in 0..sites {
        pref *= weight_w_fourier(n, omega, &ps_star[l], &q_star, 0)
            / weight_w_fourier(n, omega, &p_primes[l], q, 0);
    }
    let lhs = cmatrix::dagger(&hat_side.hat).dot(&that_dual).dot(&hat_side.hat);
    let rhs = cmatrix::dagger(&face_side.face)
        .dot(&that_orig)
        .dot(&face_side.face)
        .mapv(|z| z * pref);
    out.push(Check::new(
        "cpm-duality/t-hat-transfer",
        format!("sites {sites}, (r, Q) = ({rr}, {qq})"),
        cmatrix::rel_residual(&lhs, &rhs),
        1e-9,
    ));
    Ok(out)
}

/// Curve memberships and identifications of the shifted parameters from
/// the doubled-space decomposition, in rapidity language.
///
/// For odd n the shifted parameters stay on the same curve and coincide
/// with the algebraic shift. For n = 2N the raw shifted pair lands on the
/// flipped-k curve; its standard representative back on the (k', k) curve
/// differs from the algebraic shift by a factor q on all four letters,
/// which trades the site operator for the one at spectral argument
/// omega t conjugated by a diagonal gauge, and for homogeneous chains
/// shifts the transfer-matrix argument by omega. On T the all-shifted
/// chain equals omega^{-r} times T at the y-shifted horizontal rapidity.
pub fn verify_minus_rapidities(
    setup: &RootSetup,
    moduli: &CurveModuli,
    p_prime: &Rapidity,
    p: &Rapidity,
    horizontal: &Rapidity,
    sites: usize,
    r: i64,
    cap: usize,
) -> Result<Vec<Check>> {
    let n = setup.base;
    let omega = setup.omega;
    let qroot = setup.q;
    let rr = r.rem_euclid(n as i64);
    let mut out = Vec::new();

    let (alg_p, alg_q) = minus_gauge(&p_prime.triple(), &p.triple(), qroot);
    let alg_p_rap = Rapidity { x: alg_p.a, y: alg_p.b, mu: alg_p.d };
    let alg_q_rap = Rapidity { x: alg_q.a, y: alg_q.b, mu: alg_q.d };
    let dag_rap = Rapidity { x: p.x, y: p.y, mu: qroot * p.mu };

    if !setup.is_doubled() {
        let worst = curve_residual(moduli, &alg_p_rap, n)
            .max(curve_residual(moduli, &alg_q_rap, n))
            .max(curve_residual(moduli, &dag_rap, n));
        out.push(Check::new(
            "cpm-minus/odd-membership",
            "all shifted parameters stay on the same curve",
            worst,
            1e-12,
        ));
        let drift = (alg_p_rap.x - p_prime.x / qroot)
            .norm()
            .max((alg_p_rap.y - p_prime.y * qroot).norm())
            .max((alg_q_rap.x - p.x * qroot).norm())
            .max((alg_q_rap.y - p.y / qroot).norm());
        out.push(Check::new(
            "cpm-minus/odd-coincide",
            "algebraic shift equals the rapidity shift",
            drift,
            1e-14,
        ));
    } else {
        out.push(Check::new(
            "cpm-minus/raw-flipped-curve",
            "raw shifted pair lies on the flipped-k curve",
            curve_residual(&moduli.flip_k(), &alg_p_rap, n)
                .max(curve_residual(&moduli.flip_k(), &alg_q_rap, n)),
            1e-10,
        ));
        out.push(Check::new(
            "cpm-minus/dagger-flipped-curve",
            "shifted conjugate parameter lies on the flipped-k' curve",
            curve_residual(&moduli.flip_k_prime(), &dag_rap, n),
            1e-10,
        ));

        let cpm_pm = Rapidity { x: p_prime.x, y: p_prime.y / omega, mu: p_prime.mu };
        let cpm_m = Rapidity { x: p.x / omega, y: p.y, mu: p.mu };
        out.push(Check::new(
            "cpm-minus/identified-membership",
            "identified representatives lie on the original curve",
            curve_residual(moduli, &cpm_pm, n).max(curve_residual(moduli, &cpm_m, n)),
            1e-10,
        ));
        let drift = (cpm_pm.x - qroot * alg_p_rap.x)
            .norm()
            .max((cpm_pm.y - qroot * alg_p_rap.y).norm())
            .max((cpm_m.x - qroot * alg_q_rap.x).norm())
            .max((cpm_m.y - qroot * alg_q_rap.y).norm());
        out.push(Check::new(
            "cpm-minus/identified-scale",
            "identified representatives are the algebraic shift times q",
            drift,
            1e-13,
        ));

        let t_probe = Complex64::new(0.37, 0.61);
        let l_cpm = lax_cpm(setup, &cpm_pm.triple(), &cpm_m.triple()).as_matrix(t_probe);
        let l_alg =
            lax_cpm(setup, &alg_p, &alg_q).as_matrix(omega * t_probe);
        let mut g = cmatrix::zeros(2, 2);
        g[(0, 0)] = ONE;
        g[(1, 1)] = qroot;
        let mut g_inv = cmatrix::zeros(2, 2);
        g_inv[(0, 0)] = ONE;
        g_inv[(1, 1)] = 1.0 / qroot;
        let eye = cmatrix::identity(setup.base);
        let g_full = cmatrix::kron(&g, &eye);
        let g_inv_full = cmatrix::kron(&g_inv, &eye);
        let rhs = g_full.dot(&l_alg).dot(&g_inv_full);
        out.push(Check::new(
            "cpm-minus/site-gauge",
            "identified site operator is the gauged algebraic one at omega t",
            cmatrix::rel_residual(&l_cpm, &rhs),
            1e-12,
        ));

        let t_cpm = tau2_transfer(
            &chain(&lax_cpm(setup, &cpm_pm.triple(), &cpm_m.triple()), sites, cap)?,
            omega,
            rr,
            t_probe,
        );
        let t_alg = tau2_transfer(
            &chain(&lax_cpm(setup, &alg_p, &alg_q), sites, cap)?,
            omega,
            rr,
            omega * t_probe,
        );
        out.push(Check::new(
            "cpm-minus/transfer-shift",
            format!("sites {sites}, r = {rr}: identified chain = algebraic chain at omega t"),
            cmatrix::rel_residual(&t_cpm, &t_alg),
            1e-10,
        ));

        let pp_list = vec![*p_prime; sites];
        let p_list = vec![*p; sites];
        let pm_list = vec![cpm_pm; sites];
        let m_list = vec![cpm_m; sites];
        let lhs = cpm_transfer(n, omega, &pm_list, &m_list, horizontal, rr);
        let flip = horizontal.map_u_prime(omega);
        let rhs = cpm_transfer(n, omega, &pp_list, &p_list, &flip, rr)
            .mapv(|z| z * omega.powi(-(rr as i32)));
        out.push(Check::new(
            "cpm-minus/homogeneous-flip",
            format!("sites {sites}, r = {rr}: shifted chain = omega^-r T at shifted horizontal"),
            cmatrix::rel_residual(&lhs, &rhs),
            1e-10,
        ));
    }
    Ok(out)
}

/// Negative control: push a rapidity off the curve and confirm both the
/// curve residual and the weight periodicity defect become visible.
pub fn off_curve_control(
    m: &CurveModuli,
    n: usize,
    omega: Complex64,
    p: &Rapidity,
    q: &Rapidity,
) -> Vec<Check> {
    let bad = Rapidity { x: p.x, y: p.y * Complex64::new(1.001, 0.0), mu: p.mu };
    let mut worst = 0.0f64;
    for s in 0..n as i64 {
        let a = weight_w_raw(n, omega, &bad, q, s);
        let b = weight_w_raw(n, omega, &bad, q, s + n as i64);
        worst = worst.max((a - b).norm() / 1.0f64.max(a.norm()));
    }
    vec![
        Check::floor(
            "cpm/off-curve-residual",
            "perturbed rapidity violates the curve equations",
            curve_residual(m, &bad, n),
            1e-5,
        ),
        Check::floor(
            "cpm/off-curve-periodicity",
            "perturbed rapidity breaks weight periodicity",
            worst,
            1e-5,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::DIM_CAP;
    use crate::report::all_pass;
    use rand::{Rng, SeedableRng};

    fn random_mu(rng: &mut impl Rng) -> Complex64 {
        Complex64::from_polar(
            rng.gen_range(0.85..1.2),
            rng.gen_range(0.0..2.0 * std::f64::consts::PI),
        )
    }

    fn sample(m: &CurveModuli, n: usize, omega: Complex64, rng: &mut impl Rng) -> Rapidity {
        let bx = rng.gen_range(0..n as i64);
        let by = rng.gen_range(0..n as i64);
        Rapidity::from_mu(m, n, omega, random_mu(rng), bx, by).unwrap()
    }

    #[test]
    fn curve_weights_and_controls() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for k_prime in [Complex64::new(0.7, 0.0), Complex64::new(0.6, 0.3)] {
            let m = CurveModuli::new(k_prime).unwrap();
            assert!((m.k * m.k + m.k_prime * m.k_prime - ONE).norm() < 1e-14);
            let setup = RootSetup::odd(3).unwrap();
            let p = sample(&m, 3, setup.omega, &mut rng);
            let q = sample(&m, 3, setup.omega, &mut rng);
            assert!(curve_residual(&m, &p, 3) < 1e-12);
            assert!(curve_residual(&m, &q, 3) < 1e-12);
            let checks = periodicity_checks(3, setup.omega, &p, &q);
            assert!(all_pass(&checks), "{checks:?}");
            let controls = off_curve_control(&m, 3, setup.omega, &p, &q);
            assert!(all_pass(&controls), "{controls:?}");
        }
    }

    #[test]
    fn star_triangle_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let setup = RootSetup::odd(3).unwrap();
        let m = CurveModuli::new(Complex64::new(0.7, 0.0)).unwrap();
        let pp = sample(&m, 3, setup.omega, &mut rng);
        let p = sample(&m, 3, setup.omega, &mut rng);
        let qs: Vec<Rapidity> = (0..4).map(|_| sample(&m, 3, setup.omega, &mut rng)).collect();
        let checks =
            verify_star_triangle(3, setup.omega, &pp, &p, 3, 1, &qs, DIM_CAP).unwrap();
        assert!(all_pass(&checks), "{checks:?}");
    }

    #[test]
    fn tau_t_relation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let setup = RootSetup::odd(3).unwrap();
        let m = CurveModuli::new(Complex64::new(0.6, 0.3)).unwrap();
        let pps: Vec<Rapidity> = (0..2).map(|_| sample(&m, 3, setup.omega, &mut rng)).collect();
        let ps: Vec<Rapidity> = (0..2).map(|_| sample(&m, 3, setup.omega, &mut rng)).collect();
        let q = sample(&m, 3, setup.omega, &mut rng);
        for r in 0..3 {
            let checks = verify_tau_t(&setup, &pps, &ps, &q, r, DIM_CAP).unwrap();
            assert!(all_pass(&checks), "r = {r}: {checks:?}");
        }
    }

    #[test]
    fn cpm_duality_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        let setup = RootSetup::odd(3).unwrap();
        let m = CurveModuli::new(Complex64::new(0.7, 0.0)).unwrap();
        let pps: Vec<Rapidity> = (0..2).map(|_| sample(&m, 3, setup.omega, &mut rng)).collect();
        let ps: Vec<Rapidity> = (0..2).map(|_| sample(&m, 3, setup.omega, &mut rng)).collect();
        let q = sample(&m, 3, setup.omega, &mut rng);
        let checks = verify_cpm_duality(&setup, &m, &pps, &ps, &q, 1, 2, DIM_CAP).unwrap();
        assert!(all_pass(&checks), "{checks:?}");
    }

    #[test]
    fn minus_rapidities_both_regimes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for setup in [RootSetup::odd(3).unwrap(), RootSetup::doubled(2).unwrap()] {
            let n = setup.base;
            let m = CurveModuli::new(Complex64::new(0.6, 0.3)).unwrap();
            let pp = sample(&m, n, setup.omega, &mut rng);
            let p = sample(&m, n, setup.omega, &mut rng);
            let h = sample(&m, n, setup.omega, &mut rng);
            let checks =
                verify_minus_rapidities(&setup, &m, &pp, &p, &h, 2, 1, DIM_CAP).unwrap();
            assert!(all_pass(&checks), "base {n}: {checks:?}");
        }
    }
}
