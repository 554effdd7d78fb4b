//! Homogeneous coordinates of a toric variety: irrelevant monomials,
//! primitive collections, the exceptional locus and the quotient group.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::{Fan, FanError, RaySet};
use crate::lattice::{cokernel_structure, integer_kernel_basis, CokernelStructure, IntMatrix};

/// Largest ray count for the exhaustive {0,1}^r locus check.
pub const ZSIGMA_MAX_RAYS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxError {
    #[error("no primitive collection: every ray subset spans a cone")]
    NoPrimitiveCollection,
    #[error("{0} rays exceed the exhaustive check limit of {ZSIGMA_MAX_RAYS}")]
    TooManyRays(usize),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// A minimal set of rays lying in no cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimitiveCollection {
    pub indices: RaySet,
}

impl PrimitiveCollection {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// The monomial attached to a maximal cone: product of the coordinates
/// whose rays are not generators of the cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrelevantMonomial {
    pub cone: RaySet,
    pub support: RaySet,
}

pub fn irrelevant_monomials(fan: &Fan) -> Vec<IrrelevantMonomial> {
    let r = fan.ray_count();
    fan.max_cone_sets()
        .into_iter()
        .map(|cone| IrrelevantMonomial {
            cone,
            support: cone.complement(r),
        })
        .collect()
}

/// Inclusion-minimal ray sets contained in no cone, by increasing size then
/// lexicographically. Candidates of size s are extensions of faces of size
/// s − 1 all of whose (s − 1)-subsets are faces.
pub fn primitive_collections(fan: &Fan) -> Vec<PrimitiveCollection> {
    let r = fan.ray_count();
    let mut out = Vec::new();
    let mut faces: Vec<RaySet> = vec![RaySet::EMPTY];
    if !fan.lies_in_cone(RaySet::EMPTY) {
        // no cones at all: every single ray is already outside
        return (0..r)
            .map(|i| PrimitiveCollection {
                indices: RaySet::from_indices([i]),
            })
            .collect();
    }
    while !faces.is_empty() {
        let known: HashSet<RaySet> = faces.iter().copied().collect();
        let mut next = Vec::new();
        for &face in &faces {
            let start = face.iter().last().map_or(0, |m| m + 1);
            for i in start..r {
                let candidate = face.with(i);
                if !candidate.iter().all(|j| known.contains(&candidate.without(j))) {
                    continue;
                }
                if fan.lies_in_cone(candidate) {
                    next.push(candidate);
                } else {
                    out.push(PrimitiveCollection { indices: candidate });
                }
            }
        }
        faces = next;
    }
    out.sort_by_key(|p| (p.len(), p.indices.to_vec()));
    out
}

/// Smallest primitive collection size.
pub fn r_min(fan: &Fan) -> Result<usize, CoxError> {
    primitive_collections(fan)
        .iter()
        .map(PrimitiveCollection::len)
        .min()
        .ok_or(CoxError::NoPrimitiveCollection)
}

/// Checks over every zero pattern p ∈ {0,1}^r that all irrelevant monomials
/// vanish at p exactly when the zero set of p contains a primitive
/// collection. Monomials of maximal cones and of all faces are both tested.
pub fn verify_zsigma_decomposition(fan: &Fan) -> Result<bool, CoxError> {
    let r = fan.ray_count();
    if r > ZSIGMA_MAX_RAYS {
        return Err(CoxError::TooManyRays(r));
    }
    let maximal: Vec<u64> = irrelevant_monomials(fan).iter().map(|m| m.support.bits()).collect();
    let all_faces: Vec<u64> = face_sets(fan).into_iter().map(|f| f.complement(r).bits()).collect();
    let primitive: Vec<u64> = primitive_collections(fan).iter().map(|p| p.indices.bits()).collect();
    for zeros in 0u64..(1u64 << r) {
        let vanish_max = maximal.iter().all(|&m| m & zeros != 0);
        let vanish_all = all_faces.iter().all(|&m| m & zeros != 0);
        let in_union = primitive.iter().any(|&p| p & !zeros == 0);
        if vanish_max != in_union || vanish_all != in_union {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every ray set contained in some maximal cone, including the empty set.
pub(crate) fn face_sets(fan: &Fan) -> Vec<RaySet> {
    let mut seen = HashSet::new();
    for cone in fan.max_cone_sets() {
        let members = cone.to_vec();
        for mask in 0u64..(1u64 << members.len()) {
            seen.insert(RaySet::from_indices(
                members.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i),
            ));
        }
    }
    let mut faces: Vec<RaySet> = seen.into_iter().collect();
    faces.sort_by_key(|f| (f.len(), f.to_vec()));
    faces
}

/// The subgroup of (ℂ*)^r killed by every character coming from ℤⁿ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientGroup {
    /// Structure of the character group ℤ^r / im(Nᵀ).
    pub structure: CokernelStructure,
    /// r × (r − n) exponent matrix; column j is the weight of the j-th
    /// parameter, so μ ↦ (∏_j μ_j^{E[k][j]})_k covers the identity component.
    pub parametrization: IntMatrix,
    pub has_torsion: bool,
}

pub fn gsigma(fan: &Fan) -> Result<QuotientGroup, CoxError> {
    if !fan.rays_span() {
        return Err(FanError::RaysDoNotSpan.into());
    }
    let n = fan.ray_matrix();
    let structure = cokernel_structure(&n.transpose());
    let kernel = integer_kernel_basis(&n);
    let r = fan.ray_count();
    let mut e = IntMatrix::zeros(r, kernel.len());
    for (j, v) in kernel.iter().enumerate() {
        for (k, x) in v.iter().enumerate() {
            e.set(k, j, x.clone());
        }
    }
    Ok(QuotientGroup {
        has_torsion: !structure.torsion.is_empty(),
        structure,
        parametrization: e,
    })
}

/// Whether Σ d_k n_k = 0, i.e. the scalar tuple (λ^{d_k}) lies in the group.
pub fn degree_in_gsigma(fan: &Fan, degrees: &[i64]) -> bool {
    if degrees.len() != fan.ray_count() {
        return false;
    }
    let big: Vec<BigInt> = degrees.iter().map(|&d| BigInt::from(d)).collect();
    fan.ray_matrix().mul_vec(&big).iter().all(Zero::is_zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxData {
    pub irrelevant_monomials: Vec<IrrelevantMonomial>,
    pub primitive_collections: Vec<PrimitiveCollection>,
    pub r_min: Option<usize>,
    /// Each set S gives the coordinate subspace {z_i = 0 : i ∈ S}.
    pub zsigma_components: Vec<RaySet>,
    /// Real dimension of the exceptional locus, 2(r − r_min).
    pub zsigma_real_dim: Option<usize>,
    pub gsigma: Option<QuotientGroup>,
}

pub fn cox_data(fan: &Fan) -> CoxData {
    let primitive = primitive_collections(fan);
    let r_min = primitive.iter().map(PrimitiveCollection::len).min();
    CoxData {
        irrelevant_monomials: irrelevant_monomials(fan),
        zsigma_components: primitive.iter().map(|p| p.indices).collect(),
        zsigma_real_dim: r_min.map(|m| 2 * (fan.ray_count() - m)),
        primitive_collections: primitive,
        r_min,
        gsigma: gsigma(fan).ok(),
    }
}
