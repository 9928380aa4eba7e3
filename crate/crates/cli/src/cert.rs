//! Certificate files (JSON).
//!
//! ```json
//! {
//!   "format": "circhad-witness",
//!   "version": 1,
//!   "n": 8,
//!   "kind": "full",
//!   "convention": "antipodal-half-range/v1",
//!   "coset": "even",
//!   "target": "M(0)",
//!   "solver": { "pivot_seed": 1592590337, "prime": 2013265921, "full_replay": false },
//!   "weights": [ { "gamma": "0x0", "d": 1, "c": "1/8" } ]
//! }
//! ```
//!
//! Symmetric certificates key weights by `"w"` instead of `"gamma"`/`"d"`.
//! Unknown fields are ignored on input.

use std::collections::BTreeMap;

use circhad_core::rational::{parse_fraction, to_fraction_string};
use circhad_core::witness::{CertificateKind, Provenance, Weights, WitnessCertificate};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT: &str = "circhad-witness";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverInfo {
    pub pivot_seed: u64,
    pub prime: u64,
    pub full_replay: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightEntry {
    Row { gamma: String, d: usize, c: String },
    Class { w: usize, c: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub kind: String,
    pub convention: String,
    pub coset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<String>,
    #[serde(default = "default_target")]
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverInfo>,
    pub weights: Vec<WeightEntry>,
}

fn default_target() -> String {
    "M(0)".to_string()
}

fn parse_mask(s: &str) -> CliResult<u64> {
    let digits = s
        .strip_prefix("0x")
        .or_else(|| s.strip_prefix("0X"))
        .ok_or_else(|| CliError::Data(format!("gamma {s:?} is not a hex mask")))?;
    u64::from_str_radix(digits, 16).map_err(|e| CliError::Data(format!("gamma {s:?}: {e}")))
}

pub fn to_file(cert: &WitnessCertificate, fingerprint: Option<String>) -> CertificateFile {
    let weights = match &cert.weights {
        Weights::Rows(w) => w
            .iter()
            .map(|(&(g, d), c)| WeightEntry::Row { gamma: format!("{g:#x}"), d, c: to_fraction_string(c) })
            .collect(),
        Weights::ByWeight(w) => w.iter().map(|(&w, c)| WeightEntry::Class { w, c: to_fraction_string(c) }).collect(),
    };
    CertificateFile {
        format: FORMAT.to_string(),
        version: VERSION,
        n: cert.n,
        kind: cert.kind.name().to_string(),
        convention: cert.convention.clone(),
        coset: cert.coset.name().to_string(),
        fingerprint,
        target: default_target(),
        solver: cert.provenance.as_ref().map(|p| SolverInfo {
            pivot_seed: p.pivot_seed,
            prime: p.prime,
            full_replay: p.full_replay,
        }),
        weights,
    }
}

pub fn from_file(file: &CertificateFile) -> CliResult<WitnessCertificate> {
    if file.format != FORMAT {
        return Err(CliError::Data(format!("format {:?} is not {FORMAT:?}", file.format)));
    }
    if file.version != VERSION {
        return Err(CliError::Data(format!("unsupported certificate version {}", file.version)));
    }
    if file.target != "M(0)" {
        return Err(CliError::Data(format!("unsupported target {:?}", file.target)));
    }
    let data = |e: circhad_core::Error| CliError::Data(e.to_string());
    let kind: CertificateKind = file.kind.parse().map_err(data)?;
    let coset = file.coset.parse().map_err(data)?;
    let dup = |what: String| CliError::Data(format!("duplicate weight for {what}"));
    let weights = if kind == CertificateKind::Symmetric {
        let mut map = BTreeMap::new();
        for e in &file.weights {
            let WeightEntry::Class { w, c } = e else {
                return Err(CliError::Data("symmetric certificates key weights by w".into()));
            };
            if map.insert(*w, parse_fraction(c).map_err(data)?).is_some() {
                return Err(dup(format!("w = {w}")));
            }
        }
        Weights::ByWeight(map)
    } else {
        let mut map = BTreeMap::new();
        for e in &file.weights {
            let WeightEntry::Row { gamma, d, c } = e else {
                return Err(CliError::Data(format!("{kind} certificates key weights by gamma and d")));
            };
            if map.insert((parse_mask(gamma)?, *d), parse_fraction(c).map_err(data)?).is_some() {
                return Err(dup(format!("({gamma}, {d})")));
            }
        }
        Weights::Rows(map)
    };
    let cert = WitnessCertificate {
        n: file.n,
        kind,
        convention: file.convention.clone(),
        coset,
        provenance: file.solver.as_ref().map(|s| Provenance {
            pivot_seed: s.pivot_seed,
            prime: s.prime,
            full_replay: s.full_replay,
        }),
        weights,
    };
    cert.validate().map_err(data)?;
    Ok(cert)
}

pub fn render(cert: &WitnessCertificate, fingerprint: Option<String>) -> String {
    let mut s = serde_json::to_string_pretty(&to_file(cert, fingerprint)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> CliResult<WitnessCertificate> {
    let file: CertificateFile = serde_json::from_str(text).map_err(|e| CliError::Data(format!("certificate: {e}")))?;
    from_file(&file)
}
