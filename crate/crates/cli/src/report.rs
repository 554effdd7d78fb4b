//! Report schema and its plain-text rendering. Indices in reports are 1-based.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;
use toric_core::HomologyGroups;

pub const TOOL: &str = "toric";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A computed value next to the formula it instantiates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tagged<T> {
    pub value: T,
    pub formula: String,
}

impl<T> Tagged<T> {
    pub fn new(value: T, formula: impl Into<String>) -> Self {
        Tagged {
            value,
            formula: formula.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cox: Option<CoxSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilitySection>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<TableSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionSection>,
    pub errors: Vec<SectionError>,
    #[serde(skip)]
    pub exit_code: u8,
}

impl Report {
    pub fn new(command: &str, input: Option<InputInfo>) -> Self {
        Report {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            input,
            validation: None,
            cox: None,
            complex: None,
            stability: None,
            tables: Vec::new(),
            resolution: None,
            errors: Vec::new(),
            exit_code: crate::EXIT_OK,
        }
    }

    /// Records a failure; the exit code keeps the most severe one seen.
    pub fn fail(&mut self, section: &str, message: impl Into<String>, code: u8) {
        self.errors.push(SectionError {
            section: section.to_string(),
            message: message.into(),
        });
        self.exit_code = self.exit_code.max(code);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} {} {}", self.tool, self.version, self.command);
        if let Some(input) = &self.input {
            let _ = write!(out, " {} (sha256 {})", input.path, input.sha256);
        }
        out.push('\n');
        if let Some(v) = &self.validation {
            v.render(&mut out);
        }
        if let Some(c) = &self.cox {
            c.render(&mut out);
        }
        if let Some(c) = &self.complex {
            c.render(&mut out);
        }
        if let Some(s) = &self.stability {
            s.render(&mut out);
        }
        for t in &self.tables {
            t.render(&mut out);
        }
        if let Some(r) = &self.resolution {
            r.render(&mut out);
        }
        if !self.errors.is_empty() {
            out.push_str("\n[errors]\n");
            for e in &self.errors {
                let _ = writeln!(out, "  {}: {}", e.section, e.message);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionError {
    pub section: String,
    pub message: String,
}

/// JSON number when it fits in i64, decimal string otherwise.
pub fn big_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupEntry {
    pub degree: i32,
    pub group: String,
    pub rank: usize,
}

pub fn group_entries(h: &HomologyGroups) -> Vec<GroupEntry> {
    h.iter()
        .map(|(degree, g)| GroupEntry {
            degree,
            group: g.to_string(),
            rank: g.rank,
        })
        .collect()
}

fn sets(v: &[Vec<usize>]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    if parts.is_empty() {
        "none".to_string()
    } else {
        parts.join(" ")
    }
}

fn vector<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

fn json_vector(v: &[Value]) -> String {
    vector(&v.iter().map(|x| x.to_string().trim_matches('"').to_string()).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularCone {
    pub cone: Vec<usize>,
    pub multiplicity: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
    /// User index of each ray after sorting rays lexicographically.
    pub canonical_order: Vec<usize>,
    pub ok: bool,
    pub violations: Vec<String>,
    pub notes: Vec<String>,
    pub simplicial: bool,
    pub smooth: bool,
    pub singular_cones: Vec<SingularCone>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    pub fundamental_group: String,
}

impl ValidationSection {
    fn render(&self, out: &mut String) {
        out.push_str("\n[validation]\n");
        if let Some(n) = &self.name {
            let _ = writeln!(out, "  name: {n}");
        }
        let _ = writeln!(out, "  dim: {}, rays: {}", self.dim, self.rays.len());
        let rays: Vec<String> = self.rays.iter().enumerate().map(|(i, r)| format!("{}:{}", i + 1, vector(r))).collect();
        let _ = writeln!(out, "  rays (user order): {}", rays.join(" "));
        let _ = writeln!(out, "  canonical order: {}", vector(&self.canonical_order));
        let _ = writeln!(out, "  max cones: {}", sets(&self.max_cones));
        let _ = writeln!(out, "  valid: {}", self.ok);
        for v in &self.violations {
            let _ = writeln!(out, "  violation: {v}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let _ = writeln!(out, "  simplicial: {}, smooth: {}", self.simplicial, self.smooth);
        for c in &self.singular_cones {
            let _ = writeln!(out, "  singular cone {} of multiplicity {}", vector(&c.cone), c.multiplicity);
        }
        match self.complete {
            Some(c) => {
                let _ = writeln!(out, "  complete: {c}");
            }
            None => out.push_str("  complete: not decided\n"),
        }
        let _ = writeln!(out, "  fundamental group: {}", self.fundamental_group);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientSection {
    /// ℤ^r modulo the image of the transposed ray matrix.
    pub character_group: String,
    pub has_torsion: bool,
    /// r rows; row k lists the exponents of the parameters in coordinate k.
    pub parametrization: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxSection {
    pub primitive_collections: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<Tagged<usize>>,
    /// For each maximal cone, the coordinates of its monomial.
    pub irrelevant_monomials: Vec<Vec<usize>>,
    pub exceptional_components: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceptional_real_dim: Option<Tagged<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_group: Option<QuotientSection>,
    pub admissible_degrees: Vec<Vec<Value>>,
}

impl CoxSection {
    fn render(&self, out: &mut String) {
        out.push_str("\n[cox]\n");
        let _ = writeln!(out, "  primitive collections: {}", sets(&self.primitive_collections));
        if let Some(r) = &self.r_min {
            let _ = writeln!(out, "  r_min: {}   [{}]", r.value, r.formula);
        }
        let _ = writeln!(out, "  irrelevant monomials: {}", sets(&self.irrelevant_monomials));
        let _ = writeln!(out, "  exceptional locus components: {}", sets(&self.exceptional_components));
        if let Some(d) = &self.exceptional_real_dim {
            let _ = writeln!(out, "  exceptional locus real dimension: {}   [{}]", d.value, d.formula);
        }
        if let Some(v) = self.decomposition_verified {
            let _ = writeln!(out, "  decomposition into primitive collections verified: {v}");
        }
        if let Some(g) = &self.quotient_group {
            let _ = writeln!(out, "  character group: {}", g.character_group);
            let rows: Vec<String> = g.parametrization.iter().map(|r| json_vector(r)).collect();
            let _ = writeln!(out, "  quotient torus weights (per coordinate): {}", rows.join(" "));
        }
        let basis: Vec<String> = self.admissible_degrees.iter().map(|r| json_vector(r)).collect();
        let _ = writeln!(out, "  admissible degree basis: {}", if basis.is_empty() { "none".into() } else { basis.join(" ") });
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub bound: Tagged<usize>,
    pub ok: bool,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_nonzero_degree: Option<i32>,
    pub moment_angle_homology: Vec<GroupEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexSection {
    pub facets: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min_is_q_plus_one: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skeleton_check: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub connectivity: Option<Certificate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ComplexSection {
    fn render(&self, out: &mut String) {
        out.push_str("\n[complex]\n");
        let _ = writeln!(out, "  facets: {}", sets(&self.facets));
        if let Some(q) = self.q {
            let _ = writeln!(out, "  q (largest size with every subset a face): {q}");
        }
        if let Some(b) = self.r_min_is_q_plus_one {
            let _ = writeln!(out, "  r_min = q + 1: {b}");
        }
        if let Some(b) = self.skeleton_check {
            let _ = writeln!(out, "  skeleton check: {b}");
        }
        if let Some(c) = &self.connectivity {
            let _ = writeln!(out, "  connectivity bound: {}   [{}]", c.bound.value, c.bound.formula);
            let _ = writeln!(out, "  certificate: {}{}", if c.ok { "ok" } else { "FAILED" }, if c.complete { "" } else { " (incomplete fan)" });
            if let Some(d) = c.first_nonzero_degree {
                let _ = writeln!(out, "  first nonzero degree: {d}");
            }
            let groups: Vec<String> = c.moment_angle_homology.iter().map(|g| format!("H{} = {}", g.degree, g.group)).collect();
            let _ = writeln!(out, "  moment-angle homology (reduced): {}", if groups.is_empty() { "0".into() } else { groups.join(", ") });
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleEntry {
    pub k: i64,
    pub bundle_rank: Tagged<i64>,
    pub config_space_dim: Tagged<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftSection {
    pub shift: Vec<i64>,
    pub shifted_degrees: Vec<i64>,
    pub d_min: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability_dim: Option<Tagged<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilitySection {
    pub degrees: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissible: Option<bool>,
    pub d_min: i64,
    pub m: i64,
    pub r: i64,
    pub r_min: i64,
    pub m_in_range: Tagged<bool>,
    pub n_d: Tagged<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability_dim: Option<Tagged<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_dim: Option<Tagged<i64>>,
    pub bundles: Vec<BundleEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftSection>,
    pub warnings: Vec<String>,
}

impl StabilitySection {
    fn render(&self, out: &mut String) {
        out.push_str("\n[stability]\n");
        let _ = writeln!(out, "  degrees: {}", vector(&self.degrees));
        if let Some(a) = self.admissible {
            let _ = writeln!(out, "  admissible: {a}");
        }
        let _ = writeln!(out, "  d_min: {}, m: {}, r: {}, r_min: {}", self.d_min, self.m, self.r, self.r_min);
        let _ = writeln!(out, "  m in range: {}   [{}]", self.m_in_range.value, self.m_in_range.formula);
        let _ = writeln!(out, "  N_D: {}   [{}]", self.n_d.value, self.n_d.formula);
        if let Some(s) = &self.stability_dim {
            let _ = writeln!(out, "  stability dimension: {}   [{}]", s.value, s.formula);
        }
        if let Some(s) = &self.star_dim {
            let _ = writeln!(out, "  improved stability dimension: {}   [{}]", s.value, s.formula);
        }
        for b in &self.bundles {
            let _ = writeln!(
                out,
                "  k={}: bundle rank {} [{}], configuration space dimension {} [{}]",
                b.k, b.bundle_rank.value, b.bundle_rank.formula, b.config_space_dim.value, b.config_space_dim.formula
            );
        }
        if let Some(s) = &self.shift {
            let _ = writeln!(out, "  shift {} gives {} with d_min {}", vector(&s.shift), vector(&s.shifted_degrees), s.d_min);
            if let Some(d) = &s.stability_dim {
                let _ = writeln!(out, "  shifted stability dimension: {}   [{}]", d.value, d.formula);
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableSection {
    pub kind: String,
    pub d_min: i64,
    pub r_min: i64,
    pub m: i64,
    pub n_d: i64,
    /// Row k lists s = 0.. as `0` (zero) or `?` (not decided).
    pub rows: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TableSection {
    fn render(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "\n[table {}] d_min={} r_min={} m={} N={}; rows k, columns s from 0",
            self.kind, self.d_min, self.r_min, self.m, self.n_d
        );
        for (k, row) in self.rows.iter().enumerate() {
            let _ = writeln!(out, "  k={k:<3} {row}");
        }
        if let Some(n) = &self.note {
            let _ = writeln!(out, "  note: {n}");
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelEntry {
    pub level: usize,
    pub cells: usize,
    pub relative_homology: Vec<GroupEntry>,
    pub euler_characteristic: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionSection {
    pub base_facets: Vec<Vec<usize>>,
    pub points: Vec<String>,
    pub fibres: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    pub cells: usize,
    pub levels: Vec<LevelEntry>,
    pub base_homology: Vec<GroupEntry>,
    pub resolution_homology: Vec<GroupEntry>,
    pub equivalent: bool,
    pub contractible: bool,
    pub euler_characteristic: Tagged<i64>,
    pub embedding_dim: usize,
    pub general_position: bool,
}

fn groups_text(g: &[GroupEntry]) -> String {
    if g.is_empty() {
        "0".to_string()
    } else {
        g.iter().map(|e| format!("H{} = {}", e.degree, e.group)).collect::<Vec<_>>().join(", ")
    }
}

impl ResolutionSection {
    fn render(&self, out: &mut String) {
        out.push_str("\n[resolution]\n");
        let _ = writeln!(out, "  base facets: {}", sets(&self.base_facets));
        let fibres: Vec<String> = self.fibres.iter().enumerate().map(|(v, f)| format!("{}:{}", v + 1, vector(f))).collect();
        let _ = writeln!(out, "  fibres: {}", fibres.join(" "));
        match self.truncation {
            Some(k) => {
                let _ = writeln!(out, "  truncated at level {k}");
            }
            None => out.push_str("  non-degenerate\n"),
        }
        let _ = writeln!(out, "  cells: {}", self.cells);
        for l in &self.levels {
            let _ = writeln!(
                out,
                "  level {}: {} cells, relative homology {}, euler {}",
                l.level,
                l.cells,
                groups_text(&l.relative_homology),
                l.euler_characteristic
            );
        }
        let _ = writeln!(out, "  base reduced homology: {}", groups_text(&self.base_homology));
        let _ = writeln!(out, "  resolution reduced homology: {}", groups_text(&self.resolution_homology));
        let _ = writeln!(out, "  equivalent to base: {}", self.equivalent);
        let _ = writeln!(out, "  contractible: {}", self.contractible);
        let _ = writeln!(out, "  euler characteristic: {}   [{}]", self.euler_characteristic.value, self.euler_characteristic.formula);
        let _ = writeln!(out, "  embedding dimension: {}, general position: {}", self.embedding_dim, self.general_position);
    }
}
