//! Quantum group generators: the spin representation of the q-deformed sl2,
//! three-parameter cyclic representations at a root of unity, the rescaled
//! generators closing in the w = q^{-2} convention, and the descents of the
//! cyclic representation to the clock space C^N.
//!
//! Two generator conventions appear. The q convention uses K^{1/2}, e+, e-
//! with
//!   K^{1/2} e± K^{-1/2} = q^{±1} e±,
//!   [e+, e-] = (K - K^{-1}) / (q - q^{-1}).
//! The w convention uses K, E+, E- with w = q^{-2} and
//!   K E± K^{-1} = w^{∓1} E±,
//!   w E+E- - E-E+ = (K^{-2} - 1) / (1 - w),
//! and is reached from the q convention by E+ = -q^2 K^{-1/2} e+,
//! E- = K^{-1/2} e-.

use num_complex::Complex64;

use crate::cmatrix::{self, CMatrix};
use crate::error::{Error, Result};
use crate::weyl::{clock_pow, shift_pow, RootSetup};

/// Which of the two embedded copies of C^N inside C^{2N} a descent targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Plus,
    Minus,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Plus => 1,
            Parity::Minus => -1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Plus => "+",
            Parity::Minus => "-",
        }
    }
}

/// Generators in the q convention.
#[derive(Debug, Clone)]
pub struct UqGenerators {
    pub khalf: CMatrix,
    pub khalf_inv: CMatrix,
    pub eplus: CMatrix,
    pub eminus: CMatrix,
    pub q: Complex64,
}

impl UqGenerators {
    pub fn dim(&self) -> usize {
        self.khalf.dim().0
    }

    pub fn k(&self) -> CMatrix {
        self.khalf.dot(&self.khalf)
    }

    pub fn k_inv(&self) -> CMatrix {
        self.khalf_inv.dot(&self.khalf_inv)
    }

    /// Worst residual over the defining relations.
    pub fn relations_residual(&self) -> f64 {
        let q = self.q;
        let lhs1 = self.khalf.dot(&self.eplus).dot(&self.khalf_inv);
        let rhs1 = self.eplus.mapv(|z| z * q);
        let lhs2 = self.khalf.dot(&self.eminus).dot(&self.khalf_inv);
        let rhs2 = self.eminus.mapv(|z| z / q);
        let lhs3 = cmatrix::commutator(&self.eplus, &self.eminus);
        let rhs3 = (self.k() - self.k_inv()).mapv(|z| z / (q - 1.0 / q));
        let inv = cmatrix::rel_residual(
            &self.khalf.dot(&self.khalf_inv),
            &cmatrix::identity(self.dim()),
        );
        cmatrix::rel_residual(&lhs1, &rhs1)
            .max(cmatrix::rel_residual(&lhs2, &rhs2))
            .max(cmatrix::rel_residual(&lhs3, &rhs3))
            .max(inv)
    }
}

/// Generators in the w convention.
#[derive(Debug, Clone)]
pub struct UwGenerators {
    pub k: CMatrix,
    pub k_inv: CMatrix,
    pub eplus: CMatrix,
    pub eminus: CMatrix,
    pub w: Complex64,
}

impl UwGenerators {
    pub fn dim(&self) -> usize {
        self.k.dim().0
    }

    /// Worst residual over the defining relations.
    pub fn relations_residual(&self) -> f64 {
        let w = self.w;
        let lhs1 = self.k.dot(&self.eplus).dot(&self.k_inv);
        let rhs1 = self.eplus.mapv(|z| z / w);
        let lhs2 = self.k.dot(&self.eminus).dot(&self.k_inv);
        let rhs2 = self.eminus.mapv(|z| z * w);
        let lhs3 = self.eplus.dot(&self.eminus).mapv(|z| z * w) - self.eminus.dot(&self.eplus);
        let ki2 = self.k_inv.dot(&self.k_inv);
        let rhs3 = (ki2 - cmatrix::identity(self.dim())).mapv(|z| z / (1.0 - w));
        let inv = cmatrix::rel_residual(&self.k.dot(&self.k_inv), &cmatrix::identity(self.dim()));
        cmatrix::rel_residual(&lhs1, &rhs1)
            .max(cmatrix::rel_residual(&lhs2, &rhs2))
            .max(cmatrix::rel_residual(&lhs3, &rhs3))
            .max(inv)
    }
}

/// q-integer [m] = (q^m - q^{-m}) / (q - q^{-1}).
pub fn q_int(m: i64, q: Complex64) -> Complex64 {
    (q.powi(m as i32) - q.powi(-(m as i32))) / (q - 1.0 / q)
}

/// Spin-(d-1)/2 highest weight representation on C^d in the q convention:
/// K^{1/2} e_k = q^{(d-1-2k)/2} e_k, e+ e_k = [k] e_{k-1},
/// e- e_k = [d-1-k] e_{k+1}. The square root of q is the principal branch.
pub fn spin_rep(d: usize, q: Complex64) -> Result<UqGenerators> {
    if d < 2 {
        return Err(Error::Param(format!("spin representation needs d >= 2, got {d}")));
    }
    let s = q.sqrt();
    let mut khalf = cmatrix::zeros(d, d);
    let mut khalf_inv = cmatrix::zeros(d, d);
    let mut eplus = cmatrix::zeros(d, d);
    let mut eminus = cmatrix::zeros(d, d);
    for k in 0..d {
        let expo = (d as i32 - 1) - 2 * k as i32;
        khalf[(k, k)] = s.powi(expo);
        khalf_inv[(k, k)] = s.powi(-expo);
        if k > 0 {
            eplus[(k - 1, k)] = q_int(k as i64, q);
        }
        if k + 1 < d {
            eminus[(k + 1, k)] = q_int(d as i64 - 1 - k as i64, q);
        }
    }
    Ok(UqGenerators { khalf, khalf_inv, eplus, eminus, q })
}

/// Rescale q-convention generators into the w convention:
/// E+ = -q^2 K^{-1/2} e+, E- = K^{-1/2} e-, K unchanged.
pub fn induced_uw(gen: &UqGenerators) -> UwGenerators {
    let q2 = gen.q * gen.q;
    UwGenerators {
        k: gen.k(),
        k_inv: gen.k_inv(),
        eplus: gen.khalf_inv.dot(&gen.eplus).mapv(|z| -q2 * z),
        eminus: gen.khalf_inv.dot(&gen.eminus),
        w: 1.0 / q2,
    }
}

/// Vertex parameter triple of one rapidity line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamTriple {
    pub a: Complex64,
    pub b: Complex64,
    pub d: Complex64,
}

impl ParamTriple {
    pub fn new(a: Complex64, b: Complex64, d: Complex64) -> Self {
        ParamTriple { a, b, d }
    }

    /// Shift moving weight between a and b: (a q^l, b q^{-l}, d).
    pub fn ab_shift(&self, l: i64, q: Complex64) -> Self {
        ParamTriple {
            a: self.a * q.powi(l as i32),
            b: self.b * q.powi(-(l as i32)),
            d: self.d,
        }
    }

    /// Shift on the third component only: (a, b, d q^l).
    pub fn d_shift(&self, l: i64, q: Complex64) -> Self {
        ParamTriple { a: self.a, b: self.b, d: self.d * q.powi(l as i32) }
    }

    /// Twist by a power of omega: (a omega^m, b omega^{-m}, d).
    pub fn omega_twist(&self, m: i64, omega: Complex64) -> Self {
        ParamTriple {
            a: self.a * omega.powi(m as i32),
            b: self.b * omega.powi(-(m as i32)),
            d: self.d,
        }
    }
}

/// The paired-line product c = d' d that the L-operator entries depend on.
pub fn c_of(p_prime: &ParamTriple, p: &ParamTriple) -> Complex64 {
    p_prime.d * p.d
}

/// The companion triples reaching the second embedded copy of C^N:
/// p'_- = (a'/q, b' q, d'), p_- = (a q, b/q, d).
pub fn minus_gauge(p_prime: &ParamTriple, p: &ParamTriple, q: Complex64) -> (ParamTriple, ParamTriple) {
    (p_prime.ab_shift(-1, q), p.ab_shift(1, q))
}

/// Parameters of a cyclic representation, stored as the root powers the
/// matrix entries actually contain so every construction stays exact:
/// q_eps = q^epsilon, q_phi = q^phi, q_mphip = q^{-phi'},
/// half_diff = q^{(phi'-phi)/2}, plus the Lax scalars rho and nu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicParams {
    pub q_eps: Complex64,
    pub q_phi: Complex64,
    pub q_mphip: Complex64,
    pub half_diff: Complex64,
    pub rho: Complex64,
    pub nu: Complex64,
}

impl CyclicParams {
    /// Build with the principal branch of the half difference.
    pub fn new(
        q_eps: Complex64,
        q_phi: Complex64,
        q_mphip: Complex64,
        rho: Complex64,
        nu: Complex64,
    ) -> Result<Self> {
        for (name, v) in [("q_eps", q_eps), ("q_phi", q_phi), ("q_mphip", q_mphip), ("rho", rho), ("nu", nu)] {
            if v.norm() < 1e-12 {
                return Err(Error::Param(format!("cyclic parameter {name} must be nonzero")));
            }
        }
        let half_diff = (1.0 / (q_phi * q_mphip)).sqrt();
        Ok(CyclicParams { q_eps, q_phi, q_mphip, half_diff, rho, nu })
    }

    /// q^{(phi+phi')/2}, derived from the stored branch of the half
    /// difference so that identities relying on it are exact.
    pub fn half_sum(&self) -> Complex64 {
        self.half_diff * self.q_phi
    }

    /// q^{phi'}.
    pub fn q_phip(&self) -> Complex64 {
        1.0 / self.q_mphip
    }

    /// Twist the representation by omega^{-m} on q_eps; equivalent to a
    /// clock conjugation on the generators.
    pub fn twisted(&self, m: i64, omega: Complex64) -> Self {
        CyclicParams { q_eps: self.q_eps * omega.powi(-(m as i32)), ..*self }
    }
}

/// Cyclic representation in the q convention on C^n, acting through the hat
/// operators of the order-n Weyl pair (hat-Z' is the shift, hat-X' the
/// inverse clock):
/// K^{1/2} = q^{(phi'-phi)/2} hat-Z',
/// e+ = q^eps (q^{phi+1} hat-Z'^{-1} - q^{-phi-1} hat-Z') hat-X' / (q - q^{-1}),
/// e- = q^{-eps} (q^{phi'+1} hat-Z' - q^{-phi'-1} hat-Z'^{-1}) hat-X'^{-1} / (q - q^{-1}).
pub fn cyclic_rep_uq(setup: &RootSetup, par: &CyclicParams) -> UqGenerators {
    let n = setup.ext;
    let q = setup.q;
    let zp = |k: i64| shift_pow(n, k);
    let xp = |k: i64| clock_pow(n, q, -k);
    let denom = q - 1.0 / q;

    let khalf = zp(1).mapv(|z| z * par.half_diff);
    let khalf_inv = zp(-1).mapv(|z| z / par.half_diff);

    let cp1 = par.q_eps * q * par.q_phi / denom;
    let cp2 = par.q_eps / (q * par.q_phi) / denom;
    let eplus = (zp(-1).mapv(|z| z * cp1) - zp(1).mapv(|z| z * cp2)).dot(&xp(1));

    let cm1 = q * par.q_phip() / par.q_eps / denom;
    let cm2 = par.q_mphip / (q * par.q_eps) / denom;
    let eminus = (zp(1).mapv(|z| z * cm1) - zp(-1).mapv(|z| z * cm2)).dot(&xp(-1));

    UqGenerators { khalf, khalf_inv, eplus, eminus, q }
}

/// Closed form of the same cyclic representation in the w convention:
/// K = q^{phi'-phi} hat-Z'^2,
/// E+ = (q_eps / hs) (1 - u hat-Z'^{-2}) hat-X' / (1 - omega)  with
///     u = (q q^phi)^2 and hs = q^{(phi+phi')/2},
/// E- = (hs / q_eps) (1 - v hat-Z'^{-2}) hat-X'^{-1} / (1 - omega) with
///     v = (q^{-phi'} / q)^2,
/// where omega = q^{-2} coincides with w.
pub fn cyclic_uw(setup: &RootSetup, par: &CyclicParams) -> UwGenerators {
    let n = setup.ext;
    let q = setup.q;
    let omega = setup.omega;
    let zp = |k: i64| shift_pow(n, k);
    let xp = |k: i64| clock_pow(n, q, -k);
    let hd2 = par.half_diff * par.half_diff;
    let hs = par.half_sum();
    let denom = 1.0 - omega;

    let k = zp(2).mapv(|z| z * hd2);
    let k_inv = zp(-2).mapv(|z| z / hd2);

    let u = (q * par.q_phi) * (q * par.q_phi);
    let cplus = par.q_eps / hs;
    let eplus = (cmatrix::identity(n) - zp(-2).mapv(|z| z * u))
        .dot(&xp(1))
        .mapv(|z| z * cplus / denom);

    let v = (par.q_mphip / q) * (par.q_mphip / q);
    let cminus = hs / par.q_eps;
    let eminus = (cmatrix::identity(n) - zp(-2).mapv(|z| z * v))
        .dot(&xp(-1))
        .mapv(|z| z * cminus / denom);

    UwGenerators { k, k_inv, eplus, eminus, w: 1.0 / (q * q) }
}

/// Descent of the cyclic w-convention representation to the clock space C^N,
/// acting through the hat operators of the order-N pair. The parity selects
/// which embedded copy of C^N is used; the minus copy divides q_eps by q.
pub fn descended_rep(setup: &RootSetup, par: &CyclicParams, parity: Parity) -> UwGenerators {
    let nb = setup.base;
    let q = setup.q;
    let omega = setup.omega;
    let zp = |k: i64| shift_pow(nb, k);
    let xp = |k: i64| clock_pow(nb, omega, -k);
    let hd2 = par.half_diff * par.half_diff;
    let hs = par.half_sum();
    let denom = 1.0 - omega;
    let eps_eff = match parity {
        Parity::Plus => par.q_eps,
        Parity::Minus => par.q_eps / q,
    };

    let k = zp(-1).mapv(|z| z * hd2);
    let k_inv = zp(1).mapv(|z| z / hd2);

    let u = (q * par.q_phi) * (q * par.q_phi);
    let eplus = (cmatrix::identity(nb) - zp(1).mapv(|z| z * u))
        .dot(&xp(1))
        .mapv(|z| z * (eps_eff / hs) / denom);

    let v = (par.q_mphip / q) * (par.q_mphip / q);
    let eminus = (cmatrix::identity(nb) - zp(1).mapv(|z| z * v))
        .dot(&xp(-1))
        .mapv(|z| z * (hs / eps_eff) / denom);

    UwGenerators { k, k_inv, eplus, eminus, w: 1.0 / (q * q) }
}

/// The conjugate cyclic representation on C^n in the w convention, with the
/// clock roles of shift and step squared/swapped relative to [`cyclic_uw`]:
/// K = q^{phi'-phi} hat-Z'^{-1}, E+ steps by hat-X'^{-2}, E- by hat-X'^2.
pub fn dagger_rep(setup: &RootSetup, par: &CyclicParams) -> UwGenerators {
    let n = setup.ext;
    let q = setup.q;
    let omega = setup.omega;
    let zp = |k: i64| shift_pow(n, k);
    let xp = |k: i64| clock_pow(n, q, -k);
    let hd2 = par.half_diff * par.half_diff;
    let hs = par.half_sum();
    let denom = 1.0 - omega;

    let k = zp(-1).mapv(|z| z * hd2);
    let k_inv = zp(1).mapv(|z| z / hd2);

    let u = (q * par.q_phi) * (q * par.q_phi);
    let eplus = (cmatrix::identity(n) - zp(1).mapv(|z| z * u))
        .dot(&xp(-2))
        .mapv(|z| z * (par.q_eps / hs) / denom);

    let v = (par.q_mphip / q) * (par.q_mphip / q);
    let eminus = (cmatrix::identity(n) - zp(1).mapv(|z| z * v))
        .dot(&xp(2))
        .mapv(|z| z * (hs / par.q_eps) / denom);

    UwGenerators { k, k_inv, eplus, eminus, w: 1.0 / (q * q) }
}

/// Descent of the conjugate representation to C^N. The minus copy inserts
/// one factor of q into each clock coefficient and divides the K prefactor
/// by q, matching the twisted embedding it lives on.
pub fn descended_dagger_rep(setup: &RootSetup, par: &CyclicParams, parity: Parity) -> UwGenerators {
    let nb = setup.base;
    let q = setup.q;
    let omega = setup.omega;
    let zp = |k: i64| shift_pow(nb, k);
    let xp = |k: i64| clock_pow(nb, omega, -k);
    let hd2 = par.half_diff * par.half_diff;
    let hs = par.half_sum();
    let denom = 1.0 - omega;
    let zfac = match parity {
        Parity::Plus => cmatrix::ONE,
        Parity::Minus => q,
    };

    let k = zp(-1).mapv(|z| z * hd2 / zfac);
    let k_inv = zp(1).mapv(|z| z * zfac / hd2);

    let u = (q * par.q_phi) * (q * par.q_phi) * zfac;
    let eplus = (cmatrix::identity(nb) - zp(1).mapv(|z| z * u))
        .dot(&xp(1))
        .mapv(|z| z * (par.q_eps / hs) / denom);

    let v = (par.q_mphip / q) * (par.q_mphip / q) * zfac;
    let eminus = (cmatrix::identity(nb) - zp(1).mapv(|z| z * v))
        .dot(&xp(-1))
        .mapv(|z| z * (hs / par.q_eps) / denom);

    UwGenerators { k, k_inv, eplus, eminus, w: 1.0 / (q * q) }
}

/// Recover the stored representation parameters from a pair of vertex
/// triples. All square roots take the principal branch; the branch freedom
/// is a gauge that cancels in every operator built from the result.
pub fn params_from_triples(p_prime: &ParamTriple, p: &ParamTriple, setup: &RootSetup) -> Result<CyclicParams> {
    let q = setup.q;
    for (name, v) in [
        ("a'", p_prime.a),
        ("b'", p_prime.b),
        ("d'", p_prime.d),
        ("a", p.a),
        ("b", p.b),
        ("d", p.d),
    ] {
        if v.norm() < 1e-12 {
            return Err(Error::Param(format!("vertex parameter {name} must be nonzero")));
        }
    }
    let c = c_of(p_prime, p);
    let nu = 1.0 / (p_prime.b * p.b);
    let rho = (p_prime.a * p.a * nu).sqrt() / q;
    let hs = (rho / (p.a * nu * p.b)).sqrt();
    let q_eps = p.b * hs;
    let half_diff = (1.0 / (c * rho)).sqrt();
    let q_phi = hs / half_diff;
    let q_mphip = q_phi / (hs * hs);
    Ok(CyclicParams { q_eps, q_phi, q_mphip, half_diff, rho, nu })
}

/// Inverse of [`params_from_triples`] given the split of c = d' d.
pub fn triples_from_params(
    par: &CyclicParams,
    setup: &RootSetup,
    d_prime: Complex64,
) -> Result<(ParamTriple, ParamTriple)> {
    if d_prime.norm() < 1e-12 {
        return Err(Error::Param("d' must be nonzero".into()));
    }
    let q = setup.q;
    let hs = par.half_sum();
    let b = par.q_eps / hs;
    let a = par.rho / (par.nu * hs * par.q_eps);
    let b_prime = 1.0 / (par.nu * b);
    let a_prime = par.rho * q * q * hs * par.q_eps;
    let c = 1.0 / (par.rho * par.half_diff * par.half_diff);
    let d = c / d_prime;
    Ok((ParamTriple::new(a_prime, b_prime, d_prime), ParamTriple::new(a, b, d)))
}

/// Scalar value of (E+)^n and (E-)^n, which are central in the cyclic
/// representation: each is the product over k of the clock factors
/// C (1 - u omega^k) / (1 - omega).
pub fn eplus_power_scalar(setup: &RootSetup, par: &CyclicParams) -> Complex64 {
    let u = (setup.q * par.q_phi) * (setup.q * par.q_phi);
    let c = par.q_eps / par.half_sum();
    power_scalar(setup, c, u)
}

pub fn eminus_power_scalar(setup: &RootSetup, par: &CyclicParams) -> Complex64 {
    let v = (par.q_mphip / setup.q) * (par.q_mphip / setup.q);
    let c = par.half_sum() / par.q_eps;
    power_scalar(setup, c, v)
}

fn power_scalar(setup: &RootSetup, coeff: Complex64, u: Complex64) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    for k in 0..setup.ext {
        out *= coeff * (1.0 - u * setup.omega_pow(k as i64)) / (1.0 - setup.omega);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmatrix::{identity, rel_residual};
    use rand::{Rng, SeedableRng};

    pub(crate) fn random_triple(rng: &mut impl Rng) -> ParamTriple {
        let mut c = || {
            Complex64::from_polar(
                rng.gen_range(0.5..1.5),
                rng.gen_range(0.0..2.0 * std::f64::consts::PI),
            )
        };
        ParamTriple::new(c(), c(), c())
    }

    fn setups() -> Vec<RootSetup> {
        vec![
            RootSetup::odd(3).unwrap(),
            RootSetup::doubled(2).unwrap(),
            RootSetup::doubled(3).unwrap(),
        ]
    }

    #[test]
    fn spin_rep_satisfies_relations() {
        for d in [2usize, 3, 4, 5] {
            let q = Complex64::from_polar(1.0, 0.37) * 1.1;
            let gen = spin_rep(d, q).unwrap();
            assert!(gen.relations_residual() < 1e-12, "d = {d}");
            let uw = induced_uw(&gen);
            assert!(uw.relations_residual() < 1e-12, "w convention, d = {d}");
        }
    }

    #[test]
    fn cyclic_rep_satisfies_relations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for setup in setups() {
            for _ in 0..4 {
                let p1 = random_triple(&mut rng);
                let p2 = random_triple(&mut rng);
                let par = params_from_triples(&p1, &p2, &setup).unwrap();
                let uq = cyclic_rep_uq(&setup, &par);
                assert!(uq.relations_residual() < 1e-12);
                let uw = cyclic_uw(&setup, &par);
                assert!(uw.relations_residual() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_matches_induced() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for setup in setups() {
            let p1 = random_triple(&mut rng);
            let p2 = random_triple(&mut rng);
            let par = params_from_triples(&p1, &p2, &setup).unwrap();
            let closed = cyclic_uw(&setup, &par);
            let derived = induced_uw(&cyclic_rep_uq(&setup, &par));
            assert!(rel_residual(&closed.k, &derived.k) < 1e-13);
            assert!(rel_residual(&closed.eplus, &derived.eplus) < 1e-13);
            assert!(rel_residual(&closed.eminus, &derived.eminus) < 1e-13);
        }
    }

    #[test]
    fn descended_reps_satisfy_relations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for setup in setups() {
            let p1 = random_triple(&mut rng);
            let p2 = random_triple(&mut rng);
            let par = params_from_triples(&p1, &p2, &setup).unwrap();
            for parity in [Parity::Plus, Parity::Minus] {
                assert!(descended_rep(&setup, &par, parity).relations_residual() < 1e-12);
                assert!(descended_dagger_rep(&setup, &par, parity).relations_residual() < 1e-12);
            }
            assert!(dagger_rep(&setup, &par).relations_residual() < 1e-12);
        }
    }

    #[test]
    fn triples_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        for setup in setups() {
            for _ in 0..4 {
                let p1 = random_triple(&mut rng);
                let p2 = random_triple(&mut rng);
                let par = params_from_triples(&p1, &p2, &setup).unwrap();
                let (q1, q2) = triples_from_params(&par, &setup, p1.d).unwrap();
                for (x, y) in [
                    (p1.a, q1.a),
                    (p1.b, q1.b),
                    (p1.d, q1.d),
                    (p2.a, q2.a),
                    (p2.b, q2.b),
                    (p2.d, q2.d),
                ] {
                    assert!((x - y).norm() < 1e-12, "{x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn twist_is_clock_conjugation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(15);
        for setup in setups() {
            let p1 = random_triple(&mut rng);
            let p2 = random_triple(&mut rng);
            let par = params_from_triples(&p1, &p2, &setup).unwrap();
            let m = 1i64;
            let twisted = cyclic_uw(&setup, &par.twisted(m, setup.omega));
            let plain = cyclic_uw(&setup, &par);
            let g = shift_pow(setup.ext, 2 * m);
            let ginv = shift_pow(setup.ext, -2 * m);
            for (t, p) in [
                (&twisted.eplus, &plain.eplus),
                (&twisted.eminus, &plain.eminus),
                (&twisted.k, &plain.k),
            ] {
                let conj = g.dot(p).dot(&ginv);
                assert!(rel_residual(t, &conj) < 1e-13);
            }
        }
    }

    #[test]
    fn cyclic_powers_are_scalars() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(16);
        for setup in setups() {
            let p1 = random_triple(&mut rng);
            let p2 = random_triple(&mut rng);
            let par = params_from_triples(&p1, &p2, &setup).unwrap();
            let uw = cyclic_uw(&setup, &par);
            let n = setup.ext;
            let mut pp = identity(n);
            let mut pm = identity(n);
            for _ in 0..n {
                pp = pp.dot(&uw.eplus);
                pm = pm.dot(&uw.eminus);
            }
            let sp = eplus_power_scalar(&setup, &par);
            let sm = eminus_power_scalar(&setup, &par);
            assert!(rel_residual(&pp, &identity(n).mapv(|z| z * sp)) < 1e-11);
            assert!(rel_residual(&pm, &identity(n).mapv(|z| z * sm)) < 1e-11);
        }
    }
}
