//! JSON certificate emission. Reports are fully deterministic: the input
//! is canonicalized before hashing and every matrix is rendered in its
//! canonical sorted form.

use crate::engine::{Verdict, VerdictKind};
use crate::modinv::ModuleInvariants;
use crate::ring::RingScalar;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InvariantsJson {
    pub modulus: usize,
    pub free_rank: usize,
    pub torsion: Vec<u64>,
    pub action_on_free: Vec<Vec<String>>,
    /// per prime: [c, rank of (action - c)] pairs on the socle
    pub socle_profiles: BTreeMap<String, Vec<(u64, usize)>>,
    pub zw_counts: Option<(usize, usize, usize)>,
    pub has_trivial_z_summand: Option<bool>,
}

impl From<&ModuleInvariants> for InvariantsJson {
    fn from(inv: &ModuleInvariants) -> Self {
        InvariantsJson {
            modulus: inv.n,
            free_rank: inv.free_rank,
            torsion: inv.torsion.clone(),
            action_on_free: inv
                .action_on_free
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect())
                .collect(),
            socle_profiles: inv
                .torsion_action_profile
                .iter()
                .map(|(p, ranks)| (p.to_string(), ranks.clone()))
                .collect(),
            zw_counts: inv.zw_counts,
            has_trivial_z_summand: inv.has_trivial_z_summand,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModuleWitnessJson {
    pub modulus: usize,
    pub map: String,
    pub witness: String,
    pub ideal_invariants: InvariantsJson,
    pub partner_invariants: InvariantsJson,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChainJson {
    pub ranks: [usize; 4],
    pub head: String,
    pub tails: Vec<u64>,
    pub boundary_1: Vec<String>,
    pub boundary_2: Vec<Vec<String>>,
    pub boundary_3: Vec<String>,
    pub basis_change: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct H3Json {
    pub tuple: Vec<u64>,
    pub cyclic_product: Option<u64>,
}

/// The machine-readable certificate for one decision run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateReport {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    /// canonicalized input document
    pub input: String,
    pub input_sha256: String,
    pub verdict: String,
    pub exit_code: i32,
    pub rule_citations: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog_manifold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module_witness: Option<ModuleWitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h3: Option<H3Json>,
}

pub fn verdict_name(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::Realizable => "Realizable",
        VerdictKind::Obstructed => "Obstructed",
        VerdictKind::StructurallyInadmissible => "StructurallyInadmissible",
        VerdictKind::Unknown => "Unknown",
    }
}

pub fn exit_code(kind: VerdictKind) -> i32 {
    match kind {
        VerdictKind::Realizable => 0,
        VerdictKind::Obstructed => 2,
        VerdictKind::StructurallyInadmissible => 3,
        VerdictKind::Unknown => 4,
    }
}

pub fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Assemble the report for a verdict over a canonicalized input text.
pub fn build_report(canonical_input: &str, verdict: &Verdict) -> CertificateReport {
    let chain = verdict.chain.as_ref().map(|c| ChainJson {
        ranks: c.ranks,
        head: c.head_tag.clone(),
        tails: c.tails.clone(),
        boundary_1: c.d1.iter().map(|x| x.render()).collect(),
        boundary_2: (0..c.d2.rows)
            .map(|i| (0..c.d2.cols).map(|j| c.d2[(i, j)].render()).collect())
            .collect(),
        boundary_3: c.d3.iter().map(|x| x.render()).collect(),
        basis_change: (0..c.basis_change.rows)
            .map(|i| (0..c.basis_change.cols).map(|j| c.basis_change[(i, j)].render()).collect())
            .collect(),
    });
    let module_witness = verdict.module_witness.as_ref().map(|m| ModuleWitnessJson {
        modulus: m.modulus,
        map: m.map_description.clone(),
        witness: m.witness.describe(),
        ideal_invariants: (&m.i_invariants).into(),
        partner_invariants: (&m.j_invariants).into(),
    });
    let admissibility = verdict
        .admissibility
        .as_ref()
        .and_then(|a| serde_json::to_value(a).ok());
    CertificateReport {
        schema: SCHEMA_VERSION,
        tool: "pd3".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        input: canonical_input.to_string(),
        input_sha256: sha256_hex(canonical_input),
        verdict: verdict_name(verdict.kind).into(),
        exit_code: exit_code(verdict.kind),
        rule_citations: verdict.rule_citations.clone(),
        notes: verdict.notes.clone(),
        catalog_manifold: verdict.catalog_manifold.clone(),
        chain,
        module_witness,
        admissibility,
        h3: verdict.h3.as_ref().map(|(t, p)| H3Json { tuple: t.clone(), cyclic_product: *p }),
    }
}
