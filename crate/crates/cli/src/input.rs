//! Fan and cover files. Both are JSON; ray and vertex indices are 1-based.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use toric_core::resolution::FiniteCover;
use toric_core::{validate_fan, Fan, SimplicialComplex};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl FanFile {
    pub fn from_fan(fan: &Fan) -> Self {
        FanFile {
            name: fan.name().map(str::to_string),
            dim: fan.dim(),
            rays: fan.rays().to_vec(),
            max_cones: fan
                .max_cones()
                .iter()
                .map(|c| c.ray_indices.iter().map(|i| i + 1).collect())
                .collect(),
        }
    }

    /// One ray or cone per line.
    pub fn to_json(&self) -> String {
        fn list<T: Serialize>(items: &[T]) -> String {
            let lines: Vec<String> = items
                .iter()
                .map(|x| format!("    {}", serde_json::to_string(x).expect("plain data").replace(',', ", ")))
                .collect();
            if lines.is_empty() {
                "[]".to_string()
            } else {
                format!("[\n{}\n  ]", lines.join(",\n"))
            }
        }
        let mut out = String::from("{\n");
        if let Some(name) = &self.name {
            let _ = writeln!(out, "  \"name\": {},", serde_json::to_string(name).expect("string"));
        }
        let _ = writeln!(out, "  \"dim\": {},", self.dim);
        let _ = writeln!(out, "  \"rays\": {},", list(&self.rays));
        let _ = writeln!(out, "  \"max_cones\": {}", list(&self.max_cones));
        out.push_str("}\n");
        out
    }

    pub fn into_fan(self) -> Result<Fan, CliError> {
        let mut cones = Vec::with_capacity(self.max_cones.len());
        for (c, cone) in self.max_cones.iter().enumerate() {
            let mut zero_based = Vec::with_capacity(cone.len());
            for &i in cone {
                if i == 0 {
                    return Err(CliError::Validation(vec![format!(
                        "cone {} uses index 0; ray indices start at 1",
                        c + 1
                    )]));
                }
                zero_based.push(i - 1);
            }
            cones.push(zero_based);
        }
        let fan = Fan::new(self.dim, self.rays, cones).map_err(|e| CliError::Validation(vec![e.to_string()]))?;
        Ok(match self.name {
            Some(n) => fan.with_name(n),
            None => fan,
        })
    }
}

/// Point labels: either a count or explicit names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Points {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub base_facets: Vec<Vec<usize>>,
    pub points: Points,
    /// projection[p] is the 1-based base vertex under point p.
    pub projection: Vec<usize>,
}

impl CoverFile {
    /// The cover and its point labels.
    pub fn into_cover(self) -> Result<(FiniteCover, Vec<String>), CliError> {
        let labels = match self.points {
            Points::Count(n) => (1..=n).map(|i| i.to_string()).collect(),
            Points::Labels(l) => l,
        };
        if labels.len() != self.projection.len() {
            return Err(CliError::Validation(vec![format!(
                "{} points but {} projection entries",
                labels.len(),
                self.projection.len()
            )]));
        }
        let one_based = self.base_facets.iter().flatten().chain(&self.projection);
        if one_based.clone().any(|&i| i == 0) {
            return Err(CliError::Validation(vec!["vertex index 0; indices start at 1".to_string()]));
        }
        let vertices = one_based.copied().max().unwrap_or(0);
        if let Some(v) = (1..=vertices).find(|v| !self.projection.contains(v)) {
            return Err(CliError::Validation(vec![format!("projection is not surjective: base vertex {v} has no points")]));
        }
        let facets = self.base_facets.iter().map(|f| f.iter().map(|i| i - 1).collect()).collect();
        let base = SimplicialComplex::new(vertices, facets).map_err(|e| CliError::Validation(vec![e.to_string()]))?;
        let projection = self.projection.iter().map(|i| i - 1).collect();
        let cover = FiniteCover::new(base, projection).map_err(CliError::from_resolution)?;
        Ok((cover, labels))
    }
}

/// File contents with their SHA-256 digest.
pub struct Source {
    pub path: String,
    pub text: String,
    pub digest: String,
}

pub fn read_source(path: &Path) -> Result<Source, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::Parse {
        path: path.display().to_string(),
        line: 0,
        column: 0,
        message: "file is not valid UTF-8".to_string(),
    })?;
    Ok(Source {
        path: path.display().to_string(),
        text,
        digest,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Builds the fan without validating it.
pub fn parse_fan_source(source: &Source) -> Result<Fan, CliError> {
    parse_json::<FanFile>(&source.path, &source.text)?.into_fan()
}

/// Reads, parses and validates a fan file. Rays keep their file order; see
/// [`Fan::canonical`] for the lexicographic relabelling.
pub fn parse_fan_file(path: &Path) -> Result<Fan, CliError> {
    let fan = parse_fan_source(&read_source(path)?)?;
    let report = validate_fan(&fan);
    if !report.ok() {
        return Err(CliError::Validation(report.violations.iter().map(ToString::to_string).collect()));
    }
    Ok(fan)
}

pub fn parse_cover_source(source: &Source) -> Result<(FiniteCover, Vec<String>), CliError> {
    parse_json::<CoverFile>(&source.path, &source.text)?.into_cover()
}

pub fn parse_cover_file(path: &Path) -> Result<(FiniteCover, Vec<String>), CliError> {
    parse_cover_source(&read_source(path)?)
}
