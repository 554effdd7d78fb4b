use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::Value;
use toric_core::cox::ZSIGMA_MAX_RAYS;
use toric_core::srcomplex::HOCHSTER_MAX_VERTICES;
use toric_core::*;

use crate::input::{parse_cover_source, parse_fan_source, read_source};
use crate::report::*;
use crate::{CliError, EXIT_BUDGET, EXIT_VALIDATION};

/// Support tables are listed only up to this minimal degree.
pub const TABLE_MAX_D: i64 = 64;

#[derive(Clone, Debug, Default)]
pub struct AnalyzeOptions {
    pub degrees: Option<Vec<i64>>,
    /// Defaults to 2 when degrees are given.
    pub m: Option<i64>,
    pub shift: Option<Vec<i64>>,
    pub allow_incomplete: bool,
}

#[derive(Clone, Debug)]
pub struct TableOptions {
    pub degrees: Vec<i64>,
    pub m: i64,
    pub r_min: i64,
    pub kind: String,
    pub shift: Option<Vec<i64>>,
}

fn one_based(s: RaySet) -> Vec<usize> {
    s.one_based()
}

fn json_row(v: &[num_bigint::BigInt]) -> Vec<Value> {
    v.iter().map(big_json).collect()
}

fn validation_section(fan: &Fan, report: &ValidationReport) -> ValidationSection {
    let simplicial = is_simplicial(fan);
    let smooth = is_smooth(fan);
    let mut notes = report.notes.clone();
    let complete = match is_complete(fan) {
        Ok(c) => Some(c),
        Err(e) => {
            notes.push(format!("completeness not decided: {e}"));
            None
        }
    };
    let (_, perm) = fan.canonical();
    ValidationSection {
        name: fan.name().map(str::to_string),
        dim: fan.dim(),
        rays: fan.rays().to_vec(),
        max_cones: fan.max_cone_sets().into_iter().map(one_based).collect(),
        canonical_order: perm.iter().map(|i| i + 1).collect(),
        ok: report.ok(),
        violations: report.violations.iter().map(ToString::to_string).collect(),
        notes,
        simplicial,
        smooth: smooth.smooth,
        singular_cones: smooth
            .cones
            .iter()
            .filter(|c| !c.smooth)
            .map(|c| SingularCone {
                cone: fan.max_cones()[c.cone].ray_indices.iter().map(|i| i + 1).collect(),
                multiplicity: big_json(&c.multiplicity),
            })
            .collect(),
        complete,
        fundamental_group: fundamental_group(fan).to_string(),
    }
}

fn cox_section(fan: &Fan, out: &mut Report) -> CoxSection {
    let data = cox_data(fan);
    let r = fan.ray_count();
    let decomposition_verified = match verify_zsigma_decomposition(fan) {
        Ok(v) => Some(v),
        Err(CoxError::TooManyRays(_)) => {
            out.fail("cox", format!("exceptional locus check skipped: more than {ZSIGMA_MAX_RAYS} rays"), EXIT_BUDGET);
            None
        }
        Err(e) => {
            out.fail("cox", e.to_string(), EXIT_VALIDATION);
            None
        }
    };
    if decomposition_verified == Some(false) {
        out.fail("cox", "exceptional locus differs from the union over primitive collections", EXIT_VALIDATION);
    }
    let quotient_group = data.gsigma.as_ref().map(|g| QuotientSection {
        character_group: g.structure.to_string(),
        has_torsion: g.has_torsion,
        parametrization: (0..g.parametrization.rows()).map(|k| json_row(&g.parametrization.row(k))).collect(),
    });
    CoxSection {
        primitive_collections: data.primitive_collections.iter().map(|p| one_based(p.indices)).collect(),
        r_min: data.r_min.map(|v| Tagged::new(v, format!("min |primitive collection| = {v}"))),
        irrelevant_monomials: data.irrelevant_monomials.iter().map(|m| one_based(m.support)).collect(),
        exceptional_components: data.zsigma_components.iter().map(|s| one_based(*s)).collect(),
        exceptional_real_dim: data.r_min.map(|m| {
            let v = 2 * (r - m);
            Tagged::new(v, format!("2·(r−r_min) = 2·({r}−{m}) = {v}"))
        }),
        decomposition_verified,
        quotient_group,
        admissible_degrees: admissible_degrees(fan).iter().map(|v| json_row(v)).collect(),
    }
}

fn complex_section(fan: &Fan, allow_incomplete: bool, out: &mut Report) -> Option<ComplexSection> {
    let k = match k_sigma(fan) {
        Ok(k) => k,
        Err(e) => {
            out.fail("complex", e.to_string(), EXIT_VALIDATION);
            return None;
        }
    };
    let mut notes = Vec::new();
    let q = match q_sigma(fan) {
        Ok(q) => Some(q),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let r_min_is_q_plus_one = q.zip(r_min(fan).ok()).map(|(q, r)| r == q + 1);
    if r_min_is_q_plus_one == Some(false) {
        out.fail("complex", "r_min differs from q + 1", EXIT_VALIDATION);
    }
    let connectivity = if k.vertex_count() > HOCHSTER_MAX_VERTICES {
        out.fail(
            "complex",
            format!("connectivity not certified: {} rays exceed the limit of {HOCHSTER_MAX_VERTICES}", k.vertex_count()),
            EXIT_BUDGET,
        );
        None
    } else {
        match certify_connectivity(fan, allow_incomplete) {
            Ok(c) => {
                if !c.ok {
                    out.fail("complex", "moment-angle homology below the connectivity bound", EXIT_VALIDATION);
                }
                Some(Certificate {
                    bound: Tagged::new(c.bound, format!("2·(r_min−1) = 2·({}−1) = {}", c.r_min, c.bound)),
                    ok: c.ok,
                    complete: c.complete,
                    first_nonzero_degree: c.first_nonzero_degree,
                    moment_angle_homology: c
                        .witness
                        .iter()
                        .map(|(d, g)| GroupEntry {
                            degree: *d,
                            group: g.to_string(),
                            rank: g.rank,
                        })
                        .collect(),
                })
            }
            Err(ComplexError::NotComplete) => {
                notes.push("connectivity not certified: fan is not complete (use --allow-incomplete)".to_string());
                None
            }
            Err(ComplexError::NotSmooth) => {
                notes.push("connectivity not certified: fan is not smooth".to_string());
                None
            }
            Err(ComplexError::VertexBudgetExceeded { vertices, limit }) => {
                out.fail("complex", format!("vertex budget exceeded: {vertices} > {limit}"), EXIT_BUDGET);
                None
            }
            Err(e) => {
                notes.push(format!("connectivity not certified: {e}"));
                None
            }
        }
    };
    Some(ComplexSection {
        facets: k.facet_labels(),
        q,
        r_min_is_q_plus_one,
        skeleton_check: full_skeleton_check(fan).ok(),
        connectivity,
        notes,
    })
}

fn section_dimension_formula(d: &[i64], m: i64, n_d: i64) -> String {
    let terms: Vec<String> = d
        .iter()
        .map(|&dk| if dk < 0 { "0".to_string() } else { format!("C({},{m})", m + dk - 1) })
        .collect();
    format!("Σ C(m+d_k−1, m) = {} = {n_d}", terms.join("+"))
}

fn stability_formula(d_min: i64, m: i64, r_min: i64, value: i64) -> String {
    format!("(2·r_min−m−1)·d_min−2 = (2·{r_min}−{m}−1)·{d_min}−2 = {value}")
}

fn star_formula(d_min: i64, m: i64, r_min: i64, value: i64) -> String {
    format!(
        "(2·r_min−m−1)·(⌊(d_min+1)/2⌋+1)−1 = (2·{r_min}−{m}−1)·(⌊{}/2⌋+1)−1 = {value}",
        d_min + 1
    )
}

fn table_section(table: &SupportTable) -> TableSection {
    TableSection {
        kind: table.kind.name().to_string(),
        d_min: table.d_min,
        r_min: table.r_min,
        m: table.m,
        n_d: table.n_d,
        rows: table.grid(),
        note: match table.kind {
            ResolutionKind::Truncated | ResolutionKind::TruncatedShifted { .. } => Some(format!(
                "row k=0 can be nonzero only at s = 2·N−1 = {}",
                2 * table.n_d - 1
            )),
            _ => None,
        },
    }
}

fn stability_section(fan: &Fan, degrees: &[i64], opts: &AnalyzeOptions, r_min: i64, out: &mut Report) -> Option<StabilitySection> {
    let m = opts.m.unwrap_or(2);
    let d = match DegreeTuple::for_fan(fan, degrees.to_vec()) {
        Ok(d) => d,
        Err(e) => {
            out.fail("stability", e.to_string(), EXIT_VALIDATION);
            return None;
        }
    };
    let rep = match stability_report(&d, m, r_min) {
        Ok(r) => r,
        Err(e) => {
            out.fail("stability", e.to_string(), EXIT_VALIDATION);
            return None;
        }
    };
    let bundles = rep
        .bundles
        .iter()
        .map(|b| BundleEntry {
            k: b.k,
            bundle_rank: Tagged::new(
                b.bundle_rank,
                format!("2·N_D−2·k·r+k−1 = 2·{}−2·{}·{}+{}−1 = {}", rep.n_d, b.k, rep.r, b.k, b.bundle_rank),
            ),
            config_space_dim: Tagged::new(
                b.config_space_dim,
                format!("(m+2·r−2·r_min)·k = ({m}+2·{}−2·{r_min})·{} = {}", rep.r, b.k, b.config_space_dim),
            ),
        })
        .collect();
    let shift = opts.shift.as_ref().and_then(|a| match shift_degree(fan, &d, a) {
        Ok(s) => {
            let d_min = s.d_min().unwrap_or(0);
            Some(ShiftSection {
                shift: a.clone(),
                shifted_degrees: s.degrees.clone(),
                d_min,
                stability_dim: stability_dimension(&s, m, r_min)
                    .ok()
                    .map(|v| Tagged::new(v, stability_formula(d_min, m, r_min, v))),
            })
        }
        Err(e) => {
            out.fail("stability", format!("shift: {e}"), EXIT_VALIDATION);
            None
        }
    });
    if rep.d_min >= 1 && rep.d_min <= TABLE_MAX_D && m >= 1 {
        let mut kinds = vec![ResolutionKind::Truncated];
        if let Some(s) = &shift {
            kinds.push(ResolutionKind::TruncatedShifted { shift: s.shift.clone() });
        }
        kinds.push(ResolutionKind::Veronese);
        kinds.push(ResolutionKind::Vassiliev);
        for kind in kinds {
            match e1_support(kind, &d, m, r_min) {
                Ok(t) => out.tables.push(table_section(&t)),
                Err(e) => out.fail("tables", e.to_string(), EXIT_VALIDATION),
            }
        }
    }
    let max = 2 * (r_min - 1);
    Some(StabilitySection {
        degrees: rep.degrees.degrees.clone(),
        admissible: rep.degrees.admissible,
        d_min: rep.d_min,
        m,
        r: rep.r,
        r_min,
        m_in_range: Tagged::new(rep.valid_m_range, format!("2 ≤ m ≤ 2·(r_min−1): 2 ≤ {m} ≤ {max}")),
        n_d: Tagged::new(rep.n_d, section_dimension_formula(&rep.degrees.degrees, m, rep.n_d)),
        stability_dim: rep.stability_dim.map(|v| Tagged::new(v, stability_formula(rep.d_min, m, r_min, v))),
        star_dim: rep.star_dim.map(|v| Tagged::new(v, star_formula(rep.d_min, m, r_min, v))),
        bundles,
        shift,
        warnings: rep.warnings,
    })
}

/// Full analysis of one fan file. Parse failures are errors; everything
/// after parsing is reported inside the returned report.
pub fn cmd_analyze(path: &Path, opts: &AnalyzeOptions) -> Result<Report, CliError> {
    let source = read_source(path)?;
    let fan = parse_fan_source(&source)?;
    let mut out = Report::new(
        "analyze",
        Some(InputInfo {
            path: source.path.clone(),
            sha256: source.digest.clone(),
        }),
    );
    let validation = validate_fan(&fan);
    let section = validation_section(&fan, &validation);
    let simplicial = section.simplicial;
    out.validation = Some(section);
    if !validation.ok() {
        out.fail("validation", format!("{} violation(s)", validation.violations.len()), EXIT_VALIDATION);
        return Ok(out);
    }
    if !simplicial {
        out.fail("cox", "unsupported: the fan is not simplicial", EXIT_VALIDATION);
        return Ok(out);
    }
    let cox = cox_section(&fan, &mut out);
    let r_min = cox.r_min.as_ref().map(|t| t.value as i64);
    out.cox = Some(cox);
    out.complex = complex_section(&fan, opts.allow_incomplete, &mut out);
    match (&opts.degrees, r_min) {
        (Some(d), Some(r_min)) => out.stability = stability_section(&fan, d, opts, r_min, &mut out),
        (Some(_), None) => out.fail("stability", "r_min undefined: every ray subset spans a cone", EXIT_VALIDATION),
        (None, _) => {
            if opts.m.is_some() || opts.shift.is_some() {
                out.fail("stability", "--m and --shift need --degrees", EXIT_VALIDATION);
            }
        }
    }
    Ok(out)
}

/// Analyses run in parallel; results come back sorted by path.
pub fn analyze_many(paths: &[PathBuf], opts: &AnalyzeOptions) -> Vec<(PathBuf, Result<Report, CliError>)> {
    let mut sorted = paths.to_vec();
    sorted.sort();
    sorted.par_iter().map(|p| (p.clone(), cmd_analyze(p, opts))).collect()
}

pub fn cmd_resolve(path: &Path, truncation: Option<usize>) -> Result<Report, CliError> {
    let source = read_source(path)?;
    let (cover, labels) = parse_cover_source(&source)?;
    let full = build_nondegenerate(&cover).map_err(CliError::from_resolution)?;
    let res = match truncation {
        Some(k) => truncate(&full, k).map_err(CliError::from_resolution)?,
        None => full,
    };
    let mut out = Report::new(
        "resolve",
        Some(InputInfo {
            path: source.path.clone(),
            sha256: source.digest.clone(),
        }),
    );
    let base_h = reduced_homology(cover.base());
    let res_h = res.reduced_homology();
    let equivalent = res_h == base_h;
    if !equivalent {
        out.fail("resolution", "resolution homology differs from the base", EXIT_VALIDATION);
    }
    let chi = res.euler_characteristic();
    let base_chi = cover.base().reduced_euler_characteristic() + 1;
    let emb = res.embedding();
    out.resolution = Some(ResolutionSection {
        base_facets: cover.base().facet_labels(),
        fibres: (0..cover.base().vertex_count())
            .map(|v| cover.fibre(v).iter().map(|&p| labels[p].clone()).collect())
            .collect(),
        points: labels,
        truncation,
        cells: res.cells().len(),
        levels: filtration_homology(&res)
            .iter()
            .map(|l| LevelEntry {
                level: l.level,
                cells: l.cells,
                relative_homology: group_entries(&l.homology),
                euler_characteristic: l.euler_characteristic,
            })
            .collect(),
        base_homology: group_entries(&base_h),
        contractible: res_h.is_trivial(),
        resolution_homology: group_entries(&res_h),
        equivalent,
        euler_characteristic: Tagged::new(chi, format!("Σ_level χ(level) = χ(base) = {base_chi}")),
        embedding_dim: emb.dim,
        general_position: res.general_position(emb.dim + 1),
    });
    Ok(out)
}

/// A support table on its own, without a fan.
pub fn cmd_table(opts: &TableOptions) -> Result<Report, CliError> {
    let kind = ResolutionKind::parse(&opts.kind, opts.shift.clone()).map_err(|e| CliError::Validation(vec![e.to_string()]))?;
    let d = DegreeTuple::new(opts.degrees.clone());
    let table = e1_support(kind, &d, opts.m, opts.r_min).map_err(|e| CliError::Validation(vec![e.to_string()]))?;
    let mut out = Report::new("table", None);
    out.tables.push(table_section(&table));
    Ok(out)
}
