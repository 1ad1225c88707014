//! Plain-text experiment configuration.
//!
//! One `key = value` per line; `#` starts a comment; blank lines are
//! ignored. Unknown and repeated keys are errors. Lists are comma-separated.
//!
//! | key            | meaning                                                      | default |
//! |----------------|--------------------------------------------------------------|---------|
//! | `kind`         | experiment kind (see [`ExperimentKind`])                     | required |
//! | `q`            | field size, a prime power                                    | required |
//! | `psi`          | additive character `ψ_m`, `1 ≤ m < p`                        | 1 |
//! | `family`       | family kind, e.g. `polynomial-fd`, `ordinary-hg`             | per kind |
//! | `d`            | list of `d` (degree of `g` for `ordinary-hg`)                | per kind |
//! | `g`            | `auto` or coefficients of monic `g`, low to high             | `auto` |
//! | `a`            | twist parameter of `ordinary-hg-twist` (element index)       | 1 |
//! | `shape`        | `triangle`, `trapezoid`, `raised-cosine`                     | `triangle` |
//! | `beta`         | support of `Φ̂`                                               | 0.5 |
//! | `plateau`      | trapezoid plateau                                            | 0 |
//! | `rmax`         | largest trace order for `trace-means`                        | 6 |
//! | `tolerance`    | zero side vs Fourier/formula side                            | 1e-8 |
//! | `rh_tolerance` | bound on `max ||ρ| − 1|`                                     | 1e-9 |
//! | `compare_rmt`  | claim comparison with the random-matrix limit                | true |
//! | `budget`       | largest family processed in full                             | 10⁷ |
//! | `seed`         | seed for subsampling and random lattices                     | 0 |
//! | `lattices`     | random lattices in `lattice-suite`                           | 200 |
//! | `combinations` | random combinations in `lattice-suite`                       | 500 |
//! | `r_half`       | list of degrees for `chebotarev-count`                       | 1,2,3 |
//! | `workers`      | worker threads (not part of the hash)                        | all cores |
//! | `output`       | extra directory for the record and CSV (not part of the hash) | none |
//!
//! When `g` is `auto`, the family uses the first monic squarefree `g` of the
//! required degree in the canonical polynomial order.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::field::is_prime;
use crate::asfamilies::{FamilyKind, DEFAULT_ENUMERATION_BUDGET};
use crate::error::{Error, Result};
use crate::zerostats::TestFunction;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VerifyIdentities,
    #[serde(rename = "density-1level")]
    Density1Level,
    #[serde(rename = "density-2level")]
    Density2Level,
    TraceMeans,
    LatticeSuite,
    ChebotarevCount,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::VerifyIdentities,
        ExperimentKind::Density1Level,
        ExperimentKind::Density2Level,
        ExperimentKind::TraceMeans,
        ExperimentKind::LatticeSuite,
        ExperimentKind::ChebotarevCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::VerifyIdentities => "verify-identities",
            ExperimentKind::Density1Level => "density-1level",
            ExperimentKind::Density2Level => "density-2level",
            ExperimentKind::TraceMeans => "trace-means",
            ExperimentKind::LatticeSuite => "lattice-suite",
            ExperimentKind::ChebotarevCount => "chebotarev-count",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment kind `{s}`")))
    }
}

pub fn family_name(k: FamilyKind) -> &'static str {
    match k {
        FamilyKind::OrdinaryFull => "ordinary-full",
        FamilyKind::OrdinaryFixedG => "ordinary-fixed-g",
        FamilyKind::OrdinaryHg => "ordinary-hg",
        FamilyKind::OrdinaryHgTwist => "ordinary-hg-twist",
        FamilyKind::PolynomialAs0 => "polynomial-as0",
        FamilyKind::PolynomialFd => "polynomial-fd",
        FamilyKind::OddPolynomial => "odd-polynomial",
    }
}

fn parse_family(s: &str) -> Result<FamilyKind> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| Error::Config(format!("unknown family `{s}`")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GSpec {
    Auto,
    /// Coefficients, low to high.
    Coeffs(Vec<u32>),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Triangle,
    Trapezoid,
    RaisedCosine,
}

impl Shape {
    fn name(self) -> &'static str {
        match self {
            Shape::Triangle => "triangle",
            Shape::Trapezoid => "trapezoid",
            Shape::RaisedCosine => "raised-cosine",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub q: u32,
    pub p: u32,
    pub k: u32,
    pub psi: u32,
    pub family: FamilyKind,
    pub d: Vec<usize>,
    pub g: GSpec,
    pub a: u32,
    pub shape: Shape,
    pub beta: f64,
    pub plateau: f64,
    pub rmax: usize,
    pub tolerance: f64,
    pub rh_tolerance: f64,
    pub compare_rmt: bool,
    pub budget: u64,
    pub seed: u64,
    pub lattices: usize,
    pub combinations: usize,
    pub r_half: Vec<usize>,
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
}

const KEYS: [&str; 21] = [
    "kind", "q", "psi", "family", "d", "g", "a", "shape", "beta", "plateau", "rmax", "tolerance",
    "rh_tolerance", "compare_rmt", "budget", "seed", "lattices", "combinations", "r_half", "workers",
    "output",
];

fn cfg_err(key: &str, v: &str) -> Error {
    Error::Config(format!("bad value `{v}` for `{key}`"))
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| cfg_err(key, v))
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').map(|s| num(key, s.trim())).collect()
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|&p| q % p == 0)?;
    if !is_prime(p as u64) {
        return None;
    }
    let (mut n, mut k) = (q, 0);
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (n == 1).then_some((p, k))
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("line {}: unknown key `{k}`", n + 1)));
            }
            if kv.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", n + 1)));
            }
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let kind: ExperimentKind = get("kind").ok_or_else(|| Error::Config("missing `kind`".into()))?.parse()?;
        let qs = get("q").ok_or_else(|| Error::Config("missing `q`".into()))?;
        let q: u32 = num("q", qs)?;
        let (p, k) = prime_power(q).ok_or_else(|| Error::Config(format!("q = {q} is not a prime power")))?;
        let default_family = match kind {
            ExperimentKind::Density1Level => FamilyKind::OrdinaryHg,
            _ => FamilyKind::PolynomialFd,
        };
        let family = get("family").map(parse_family).transpose()?.unwrap_or(default_family);
        let d = match get("d") {
            Some(v) => list("d", v)?,
            None => match kind {
                ExperimentKind::VerifyIdentities => vec![2, 4, 5],
                _ => vec![4],
            },
        };
        let g = match get("g") {
            None | Some("auto") => GSpec::Auto,
            Some(v) => GSpec::Coeffs(list("g", v)?),
        };
        let shape = match get("shape").unwrap_or("triangle") {
            "triangle" => Shape::Triangle,
            "trapezoid" => Shape::Trapezoid,
            "raised-cosine" => Shape::RaisedCosine,
            s => return Err(cfg_err("shape", s)),
        };
        let compare_rmt = match get("compare_rmt").unwrap_or("true") {
            "true" => true,
            "false" => false,
            s => return Err(cfg_err("compare_rmt", s)),
        };
        let cfg = ExperimentConfig {
            kind,
            q,
            p,
            k,
            psi: get("psi").map(|v| num("psi", v)).transpose()?.unwrap_or(1),
            family,
            d,
            g,
            a: get("a").map(|v| num("a", v)).transpose()?.unwrap_or(1),
            shape,
            beta: get("beta").map(|v| num("beta", v)).transpose()?.unwrap_or(0.5),
            plateau: get("plateau").map(|v| num("plateau", v)).transpose()?.unwrap_or(0.0),
            rmax: get("rmax").map(|v| num("rmax", v)).transpose()?.unwrap_or(6),
            tolerance: get("tolerance").map(|v| num("tolerance", v)).transpose()?.unwrap_or(1e-8),
            rh_tolerance: get("rh_tolerance").map(|v| num("rh_tolerance", v)).transpose()?.unwrap_or(1e-9),
            compare_rmt,
            budget: get("budget").map(|v| num("budget", v)).transpose()?.unwrap_or(DEFAULT_ENUMERATION_BUDGET),
            seed: get("seed").map(|v| num("seed", v)).transpose()?.unwrap_or(0),
            lattices: get("lattices").map(|v| num("lattices", v)).transpose()?.unwrap_or(200),
            combinations: get("combinations").map(|v| num("combinations", v)).transpose()?.unwrap_or(500),
            r_half: get("r_half").map(|v| list("r_half", v)).transpose()?.unwrap_or(vec![1, 2, 3]),
            workers: get("workers").map(|v| num("workers", v)).transpose()?,
            output: get("output").map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if self.psi == 0 || self.psi >= self.p {
            return bad("psi must satisfy 1 ≤ psi < p");
        }
        if !(self.tolerance > 0.0) || !(self.rh_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.d.is_empty() || self.r_half.is_empty() {
            return bad("empty degree list");
        }
        if self.a >= self.q {
            return bad("a must be an element index below q");
        }
        if self.workers == Some(0) {
            return bad("workers must be positive");
        }
        self.test_function()?;
        Ok(())
    }

    pub fn test_function(&self) -> Result<TestFunction> {
        match self.shape {
            Shape::Triangle => TestFunction::triangle(self.beta),
            Shape::Trapezoid => TestFunction::trapezoid(self.beta, self.plateau),
            Shape::RaisedCosine => TestFunction::raised_cosine(self.beta),
        }
        .map_err(|e| Error::Config(e.to_string()))
    }

    /// Sorted `key = value` lines of every hashed key, defaults filled in.
    pub fn canonical(&self) -> String {
        let g = match &self.g {
            GSpec::Auto => "auto".to_string(),
            GSpec::Coeffs(c) => join(c),
        };
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert("kind", self.kind.to_string());
        kv.insert("q", self.q.to_string());
        kv.insert("psi", self.psi.to_string());
        kv.insert("family", family_name(self.family).into());
        kv.insert("d", join(&self.d));
        kv.insert("g", g);
        kv.insert("a", self.a.to_string());
        kv.insert("shape", self.shape.name().into());
        kv.insert("beta", format!("{:?}", self.beta));
        kv.insert("plateau", format!("{:?}", self.plateau));
        kv.insert("rmax", self.rmax.to_string());
        kv.insert("tolerance", format!("{:e}", self.tolerance));
        kv.insert("rh_tolerance", format!("{:e}", self.rh_tolerance));
        kv.insert("compare_rmt", self.compare_rmt.to_string());
        kv.insert("budget", self.budget.to_string());
        kv.insert("seed", self.seed.to_string());
        kv.insert("lattices", self.lattices.to_string());
        kv.insert("combinations", self.combinations.to_string());
        kv.insert("r_half", join(&self.r_half));
        kv.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// SHA-256 of the canonical form and the tool version, hex.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("tool_version = {TOOL_VERSION}\n"));
        h.update(self.canonical());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_canonical() {
        let c = ExperimentConfig::parse("kind = verify-identities\nq = 9 # comment\n\nd = 2, 4\n").unwrap();
        assert_eq!((c.p, c.k), (3, 2));
        assert_eq!(c.d, vec![2, 4]);
        let again = ExperimentConfig::parse(&c.canonical()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.hash(), c.hash());
        let other = ExperimentConfig::parse("kind = verify-identities\nq = 9\nd = 2,4\nworkers = 3\n").unwrap();
        assert_eq!(other.hash(), c.hash());
    }

    #[test]
    fn errors() {
        for text in [
            "kind = verify-identities\nq = 3\nbogus = 1\n",
            "kind = verify-identities\nq = 3\nq = 5\n",
            "kind = verify-identities\nq = 6\n",
            "kind = verify-identities\n",
            "kind = nope\nq = 3\n",
            "kind = density-1level\nq = 3\ntolerance = 0\n",
            "kind = density-1level\nq = 3\nbeta = -1\n",
            "kind = density-1level\nq = 3\nfamily = nope\n",
            "q = 3\njunk\n",
        ] {
            assert!(matches!(ExperimentConfig::parse(text), Err(Error::Config(_))), "{text}");
        }
    }
}
