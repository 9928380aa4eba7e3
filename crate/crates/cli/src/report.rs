//! Oracle reports, orbit tables and run fingerprints.

use std::fmt::Write as _;

use circhad_core::oracle::{turyn_admissible, SearchReport};
use circhad_core::symmetry::{OrbitTable, SymmetryGroup};
use circhad_core::CONVENTION_TAG;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const ORACLE_FORMAT: &str = "circhad-oracle";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Turyn {
    pub admissible: bool,
    pub reason: String,
}

/// Elapsed time is left out so reports stay byte-stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub convention: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<String>,
    pub folded: bool,
    pub count: u64,
    pub generators: Vec<String>,
    pub turyn: Turyn,
}

impl OracleReport {
    pub fn new(report: &SearchReport, fingerprint: Option<String>) -> Self {
        let t = turyn_admissible(report.n as u64);
        OracleReport {
            format: ORACLE_FORMAT.to_string(),
            version: 1,
            n: report.n,
            convention: CONVENTION_TAG.to_string(),
            fingerprint,
            folded: report.folded,
            count: report.count,
            generators: report.generators.iter().map(|g| g.to_string()).collect(),
            turyn: Turyn { admissible: t.admissible, reason: t.reason },
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

/// One line per orbit: index, representative mask, weight, size.
pub fn orbit_table_text(table: &OrbitTable, group: &SymmetryGroup, fingerprint: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# circhad orbits");
    let _ = writeln!(s, "# n {}", table.n());
    let _ = writeln!(s, "# group_order {}", group.order());
    let _ = writeln!(s, "# orbits {}", table.orbit_count());
    let _ = writeln!(s, "# convention {CONVENTION_TAG}");
    let _ = writeln!(s, "# fingerprint {fingerprint}");
    let _ = writeln!(s, "# index rep weight size");
    for (i, (rep, size)) in table.reps().iter().zip(table.sizes()).enumerate() {
        let _ = writeln!(s, "{i} {rep:#x} {} {size}", rep.count_ones());
    }
    s
}

/// First 16 hex digits of SHA-256 over the canonical `key=value` list.
pub fn fingerprint(command: &str, fields: &[(&str, String)]) -> String {
    let mut canon = format!("circhad/{}|convention={CONVENTION_TAG}|cmd={command}", env!("CARGO_PKG_VERSION"));
    for (k, v) in fields {
        let _ = write!(canon, "|{k}={v}");
    }
    let digest = Sha256::digest(canon.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use circhad_core::oracle::brute_force_generators;
    use circhad_core::symmetry::build_orbit_table;

    #[test]
    fn fingerprints_are_stable_and_sensitive() {
        let a = fingerprint("oracle", &[("n", "4".into())]);
        assert_eq!(a.len(), 16);
        assert_eq!(a, fingerprint("oracle", &[("n", "4".into())]));
        assert_ne!(a, fingerprint("oracle", &[("n", "8".into())]));
        assert_ne!(a, fingerprint("system", &[("n", "4".into())]));
    }

    #[test]
    fn oracle_report_json() {
        let r = OracleReport::new(&brute_force_generators(4, false).unwrap(), None);
        assert_eq!(r.count, 8);
        assert!(r.generators.contains(&"(-1,1,1,1)".to_string()));
        let back: OracleReport = serde_json::from_str(&r.render()).unwrap();
        assert_eq!(back, r);
        assert!(!r.render().contains("elapsed"));
    }

    #[test]
    fn orbit_text_lists_every_orbit() {
        let t = build_orbit_table(4, 24).unwrap();
        let g = SymmetryGroup::new(4).unwrap();
        let text = orbit_table_text(&t, &g, "x");
        let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), t.orbit_count());
        let total: u64 = rows.iter().map(|l| l.split(' ').nth(3).unwrap().parse::<u64>().unwrap()).sum();
        assert_eq!(total, 16);
    }
}
