//! Run configuration: a TOML file plus command-line overrides, resolved into
//! a fully validated description of what to verify.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

use tau2_core::qgroups::ParamTriple;
use tau2_core::weyl::RootSetup;

use crate::suites::SuiteId;

/// Parse a complex number written as "re", "imi", or "re+imi" (for example
/// "0.3+0.1i", "-1.5i", "2e-3-4i", "0.7").
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        bail!("empty complex literal");
    }
    if !s.ends_with('i') && !s.ends_with('I') {
        let re: f64 = s
            .parse()
            .map_err(|_| anyhow!("cannot parse '{text}' as a real number"))?;
        return Ok(Complex64::new(re, 0.0));
    }
    let body = &s[..s.len() - 1];
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let coeff = |part: &str| -> Result<f64> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => other
                .parse()
                .map_err(|_| anyhow!("cannot parse '{text}' as a complex number")),
        }
    };
    match split {
        None => Ok(Complex64::new(0.0, coeff(body)?)),
        Some(i) => {
            let re: f64 = body[..i]
                .parse()
                .map_err(|_| anyhow!("cannot parse '{text}' as a complex number"))?;
            Ok(Complex64::new(re, coeff(&body[i..])?))
        }
    }
}

/// Format a complex number in the same "re+imi" shape the parser accepts.
pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub setup: Option<RawSetup>,
    pub chain: Option<RawChain>,
    pub suites: Option<Vec<String>>,
    pub tolerances: Option<RawTolerances>,
    pub seed: Option<u64>,
    pub eigen: Option<bool>,
    pub cpm: Option<RawCpm>,
    pub spectra: Option<RawSpectra>,
    pub output: Option<RawOutput>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSetup {
    /// Clock order N.
    pub base: Option<usize>,
    /// Order n of the finer root: n = N (odd regime) or n = 2N (doubled).
    pub ext: Option<usize>,
    /// Sign choice for the doubled-regime root: "plus" or "minus".
    pub sign: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChain {
    pub sites: Option<usize>,
    pub r: Option<i64>,
    pub r_prime: Option<i64>,
    pub q_charge: Option<i64>,
    /// One entry: homogeneous chain. `sites` entries: one pair per site.
    pub params: Option<Vec<RawSitePair>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSitePair {
    pub p_prime: RawTriple,
    pub p: RawTriple,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTriple {
    pub a: String,
    pub b: String,
    pub d: String,
}

impl RawTriple {
    fn resolve(&self, what: &str) -> Result<ParamTriple> {
        let a = parse_complex(&self.a).with_context(|| format!("{what}.a"))?;
        let b = parse_complex(&self.b).with_context(|| format!("{what}.b"))?;
        let d = parse_complex(&self.d).with_context(|| format!("{what}.d"))?;
        for (name, v) in [("a", a), ("b", b), ("d", d)] {
            if v.norm() < 1e-12 {
                bail!("{what}.{name} must be nonzero");
            }
        }
        Ok(ParamTriple::new(a, b, d))
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTolerances {
    pub default: Option<f64>,
    pub yb: Option<f64>,
    pub qgroup: Option<f64>,
    pub closed_form: Option<f64>,
    pub gauge: Option<f64>,
    pub eigen: Option<f64>,
    pub leak: Option<f64>,
    pub on_curve: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCpm {
    /// Elliptic-type modulus k' of the rapidity curve, as "re+imi".
    pub k_prime: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpectra {
    pub families: Option<Vec<String>>,
    pub t: Option<String>,
    pub s: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Sign choice for the doubled-regime root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QSign {
    Plus,
    Minus,
}

impl QSign {
    pub fn as_str(&self) -> &'static str {
        match self {
            QSign::Plus => "plus",
            QSign::Minus => "minus",
        }
    }
}

/// Transfer-matrix families the spectra suite can diagonalize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Clock-space operator on C^N per site.
    Tau2,
    /// Extended operator on C^n per site.
    T2,
    /// Conjugate extended operator on C^n per site.
    T2Dag,
    /// Six-vertex style operator on C^n per site.
    Xxz,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Tau2, Family::T2, Family::T2Dag, Family::Xxz];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::Tau2 => "tau2",
            Family::T2 => "t2",
            Family::T2Dag => "t2dag",
            Family::Xxz => "xxz",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| {
                anyhow!(
                    "unknown family '{s}'; expected one of {}",
                    Family::ALL.map(|f| f.as_str()).join(", ")
                )
            })
    }
}

/// Per-kind tolerances for the checks the driver assembles itself; checks
/// produced inside the core library carry their own pinned thresholds.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub default: f64,
    pub yb: f64,
    pub qgroup: f64,
    pub closed_form: f64,
    pub gauge: f64,
    pub eigen: f64,
    pub leak: f64,
    pub on_curve: f64,
}

/// Command-line overrides applied on top of the (optional) config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub suites: Vec<String>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub eigen: bool,
    pub out_json: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
    pub base: Option<usize>,
    pub ext: Option<usize>,
    pub sign: Option<String>,
    pub sites: Option<usize>,
    pub r: Option<i64>,
    pub r_prime: Option<i64>,
    pub q_charge: Option<i64>,
    pub families: Vec<String>,
    pub t: Option<String>,
    pub s: Option<String>,
    pub k_prime: Option<String>,
}

/// Fully resolved, validated run description.
#[derive(Debug, Clone)]
pub struct Config {
    pub base: usize,
    pub ext: usize,
    pub sign: QSign,
    pub sites: usize,
    pub r: i64,
    pub r_prime: i64,
    pub q_charge: i64,
    /// Per-site parameter pairs (p', p); empty means "draw from the seed".
    pub params: Vec<(ParamTriple, ParamTriple)>,
    pub suites: Vec<SuiteId>,
    pub tol: Tolerances,
    pub seed: u64,
    pub eigen: bool,
    pub k_prime: Complex64,
    pub spectra_families: Vec<Family>,
    pub spectra_t: Option<Complex64>,
    pub spectra_s: Option<Complex64>,
    pub out_json: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
}

impl Config {
    /// Load the file (when given), layer the overrides, validate everything.
    pub fn resolve(path: Option<&Path>, over: &Overrides) -> Result<Config> {
        let raw: RawConfig = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read config file {}", p.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("malformed config file {}", p.display()))?
            }
            None => RawConfig::default(),
        };
        Self::from_raw(raw, over)
    }

    fn from_raw(raw: RawConfig, over: &Overrides) -> Result<Config> {
        let setup = raw.setup.unwrap_or_default();
        let chain = raw.chain.unwrap_or_default();
        let tols = raw.tolerances.unwrap_or_default();
        let cpm = raw.cpm.unwrap_or_default();
        let spectra = raw.spectra.unwrap_or_default();
        let output = raw.output.unwrap_or_default();

        let base = over.base.or(setup.base).unwrap_or(3);
        let ext = over.ext.or(setup.ext).unwrap_or(base);
        let sign_text = over
            .sign
            .clone()
            .or(setup.sign)
            .unwrap_or_else(|| "plus".to_string());
        let sign = match sign_text.as_str() {
            "plus" | "+" => QSign::Plus,
            "minus" | "-" => QSign::Minus,
            other => bail!("unknown sign '{other}'; expected 'plus' or 'minus'"),
        };
        if ext != base && ext != 2 * base {
            bail!("ext (= order of the finer root) must equal base or 2*base, got base {base}, ext {ext}");
        }

        let sites = over.sites.or(chain.sites).unwrap_or(2);
        if sites == 0 {
            bail!("chain needs at least one site");
        }
        let r = over.r.or(chain.r).unwrap_or(0);
        let r_prime = over.r_prime.or(chain.r_prime).unwrap_or(0);
        let q_charge = over.q_charge.or(chain.q_charge).unwrap_or(0);

        let mut params = Vec::new();
        if let Some(list) = &chain.params {
            for (i, pair) in list.iter().enumerate() {
                let pp = pair.p_prime.resolve(&format!("chain.params[{i}].p_prime"))?;
                let p = pair.p.resolve(&format!("chain.params[{i}].p"))?;
                params.push((pp, p));
            }
            if params.len() == 1 && sites > 1 {
                let only = params[0];
                params = vec![only; sites];
            }
            if !params.is_empty() && params.len() != sites {
                bail!(
                    "chain.params must have one entry (homogeneous) or {sites} entries, got {}",
                    params.len()
                );
            }
        }

        let suite_names: Vec<String> = if !over.suites.is_empty() {
            over.suites.clone()
        } else {
            raw.suites.unwrap_or_default()
        };
        let mut suites = Vec::new();
        for name in &suite_names {
            let id = SuiteId::parse(name)
                .ok_or_else(|| anyhow!("unknown suite '{name}'; run with --list to see the catalogue"))?;
            if !suites.contains(&id) {
                suites.push(id);
            }
        }

        let default = over.tol.or(tols.default).unwrap_or(1e-10);
        let tol = Tolerances {
            default,
            yb: tols.yb.unwrap_or(default),
            qgroup: tols.qgroup.unwrap_or(default),
            closed_form: tols.closed_form.unwrap_or(1e-11),
            gauge: tols.gauge.unwrap_or(default),
            eigen: tols.eigen.unwrap_or(1e-8),
            leak: tols.leak.unwrap_or(default),
            on_curve: tols.on_curve.unwrap_or(1e-12),
        };
        for (name, v) in [
            ("default", tol.default),
            ("yb", tol.yb),
            ("qgroup", tol.qgroup),
            ("closed_form", tol.closed_form),
            ("gauge", tol.gauge),
            ("eigen", tol.eigen),
            ("leak", tol.leak),
            ("on_curve", tol.on_curve),
        ] {
            if !(v > 0.0) {
                bail!("tolerance '{name}' must be positive, got {v}");
            }
        }

        let k_prime = match over.k_prime.clone().or(cpm.k_prime) {
            Some(s) => parse_complex(&s).context("cpm.k_prime")?,
            None => Complex64::new(0.7, 0.0),
        };

        let family_names: Vec<String> = if !over.families.is_empty() {
            over.families.clone()
        } else {
            spectra.families.unwrap_or_default()
        };
        let spectra_families = if family_names.is_empty() {
            Family::ALL.to_vec()
        } else {
            family_names
                .iter()
                .map(|s| Family::parse(s))
                .collect::<Result<Vec<_>>>()?
        };
        let spectra_t = match over.t.clone().or(spectra.t) {
            Some(s) => Some(parse_complex(&s).context("spectra.t")?),
            None => None,
        };
        let spectra_s = match over.s.clone().or(spectra.s) {
            Some(s) => Some(parse_complex(&s).context("spectra.s")?),
            None => None,
        };

        let cfg = Config {
            base,
            ext,
            sign,
            sites,
            r,
            r_prime,
            q_charge,
            params,
            suites,
            tol,
            seed: over.seed.or(raw.seed).unwrap_or(42),
            eigen: over.eigen || raw.eigen.unwrap_or(false),
            k_prime,
            spectra_families,
            spectra_t,
            spectra_s,
            out_json: over.out_json.clone().or(output.json),
            out_csv: over.out_csv.clone().or(output.csv),
        };
        // Fail early if the root orders cannot form a valid setup.
        cfg.build_setup()?;
        Ok(cfg)
    }

    /// Construct the root-of-unity setup this config describes.
    pub fn build_setup(&self) -> Result<RootSetup> {
        let setup = if self.ext == self.base {
            RootSetup::odd(self.base)
        } else {
            RootSetup::doubled_signed(self.base, self.sign == QSign::Plus)
        };
        setup.map_err(|e| anyhow!("invalid root setup (base {}, ext {}): {e}", self.base, self.ext))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals_round_trip() {
        for (text, want) in [
            ("0.3+0.1i", Complex64::new(0.3, 0.1)),
            ("0.3-0.1i", Complex64::new(0.3, -0.1)),
            ("-1.5i", Complex64::new(0.0, -1.5)),
            ("i", Complex64::new(0.0, 1.0)),
            ("-i", Complex64::new(0.0, -1.0)),
            ("0.7", Complex64::new(0.7, 0.0)),
            ("2e-3-4i", Complex64::new(2e-3, -4.0)),
            ("1e-3+2e-4i", Complex64::new(1e-3, 2e-4)),
            (" 1 + 2 i ", Complex64::new(1.0, 2.0)),
        ] {
            let got = parse_complex(text).unwrap();
            assert!((got - want).norm() < 1e-15, "{text}: {got}");
            let again = parse_complex(&format_complex(got)).unwrap();
            assert!((again - got).norm() < 1e-15);
        }
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn defaults_and_validation() {
        let cfg = Config::resolve(None, &Overrides::default()).unwrap();
        assert_eq!(cfg.base, 3);
        assert_eq!(cfg.ext, 3);
        assert_eq!(cfg.sites, 2);
        assert_eq!(cfg.seed, 42);
        assert!(cfg.suites.is_empty());
        assert!(cfg.build_setup().is_ok());

        let over = Overrides { base: Some(3), ext: Some(5), ..Default::default() };
        assert!(Config::resolve(None, &over).is_err());

        let over = Overrides {
            suites: vec!["no-such-suite".into()],
            ..Default::default()
        };
        assert!(Config::resolve(None, &over).is_err());

        let over = Overrides { base: Some(2), ext: Some(4), ..Default::default() };
        let cfg = Config::resolve(None, &over).unwrap();
        assert_eq!(cfg.ext, 4);
        assert!(cfg.build_setup().is_ok());
    }

    #[test]
    fn toml_parsing_and_homogeneous_expansion() {
        let text = r#"
            seed = 7
            suites = ["yb", "duality"]

            [setup]
            base = 2
            ext = 4

            [chain]
            sites = 3
            r = 1
            r_prime = 2

            [[chain.params]]
            p_prime = { a = "1.1+0.2i", b = "0.9-0.1i", d = "1" }
            p = { a = "0.8+0.3i", b = "1.2", d = "0.95-0.2i" }

            [tolerances]
            default = 1e-9

            [cpm]
            k_prime = "0.6+0.3i"
        "#;
        let raw: RawConfig = toml::from_str(text).unwrap();
        let cfg = Config::from_raw(raw, &Overrides::default()).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.suites.len(), 2);
        assert_eq!(cfg.params.len(), 3);
        assert_eq!(cfg.params[0].0.a, Complex64::new(1.1, 0.2));
        assert_eq!(cfg.tol.default, 1e-9);
        assert_eq!(cfg.tol.yb, 1e-9);
        assert_eq!(cfg.tol.closed_form, 1e-11);
        assert_eq!(cfg.k_prime, Complex64::new(0.6, 0.3));

        let bad: std::result::Result<RawConfig, _> = toml::from_str("nonsense = true");
        assert!(bad.is_err());
    }
}
