//! The simplicial complex of cones, its homology, and the homology of the
//! associated moment-angle complex via full subcomplexes.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cox::{r_min, CoxError};
use crate::fan::{is_complete, is_simplicial, is_smooth, Fan, FanError, RaySet, MAX_RAYS};
use crate::homology::{AbelianGroup, ChainComplex, HomologyGroups};

/// Vertex cap for the exhaustive full-subcomplex sum.
pub const HOCHSTER_MAX_VERTICES: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("all subsets are faces")]
    AllSubsetsFaces,
    #[error("vertex budget exceeded: {vertices} vertices, limit {limit}")]
    VertexBudgetExceeded { vertices: usize, limit: usize },
    #[error("fan is not complete (pass allow_incomplete to certify anyway)")]
    NotComplete,
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Cox(#[from] CoxError),
}

/// A simplicial complex on `0..vertex_count`, stored by its facets.
/// Vertices that lie in no facet are allowed (they are not faces).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<RaySet>,
}

impl SimplicialComplex {
    /// Nested facets are discarded. A complex with no facets is the void
    /// complex; one whose only facet is empty is `{∅}`. Both have
    /// reduced homology ℤ in degree −1.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        if vertex_count > MAX_RAYS {
            return Err(ComplexError::VertexBudgetExceeded {
                vertices: vertex_count,
                limit: MAX_RAYS,
            });
        }
        let mut sets = Vec::with_capacity(facets.len());
        for f in facets {
            if let Some(&vertex) = f.iter().find(|&&v| v >= vertex_count) {
                return Err(ComplexError::VertexOutOfRange {
                    vertex,
                    count: vertex_count,
                });
            }
            sets.push(RaySet::from_indices(f));
        }
        Ok(Self::from_sets(vertex_count, sets))
    }

    pub fn from_sets(vertex_count: usize, sets: Vec<RaySet>) -> Self {
        SimplicialComplex {
            vertex_count,
            facets: maximal_sets(sets),
        }
    }

    /// Boundary of the simplex on `n + 1` vertices, a sphere of dimension n − 1.
    pub fn boundary_of_simplex(n: usize) -> Self {
        let all = RaySet::full(n + 1);
        Self::from_sets(n + 1, all.iter().map(|i| all.without(i)).collect())
    }

    /// The cycle on `k ≥ 3` vertices.
    pub fn cycle(k: usize) -> Self {
        Self::from_sets(k, (0..k).map(|i| RaySet::from_indices([i, (i + 1) % k])).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[RaySet] {
        &self.facets
    }

    /// Facets as 1-based index lists.
    pub fn facet_labels(&self) -> Vec<Vec<usize>> {
        self.facets.iter().map(|f| f.one_based()).collect()
    }

    pub fn is_face(&self, s: RaySet) -> bool {
        self.facets.iter().any(|f| s.is_subset(*f))
    }

    /// Dimension of the largest face; −1 for `{∅}` and the void complex.
    pub fn dimension(&self) -> i32 {
        self.facets.iter().map(|f| f.len() as i32 - 1).max().unwrap_or(-1)
    }

    /// All nonempty faces.
    pub fn faces(&self) -> Vec<RaySet> {
        let mut seen: HashSet<RaySet> = HashSet::new();
        for f in &self.facets {
            let members = f.to_vec();
            for mask in 1u64..(1u64 << members.len()) {
                seen.insert(RaySet::from_indices(
                    members.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v),
                ));
            }
        }
        let mut out: Vec<RaySet> = seen.into_iter().collect();
        out.sort_by_key(|f| (f.len(), f.to_vec()));
        out
    }

    /// Faces contained in `j`, kept on the original vertex labels.
    pub fn full_subcomplex(&self, j: RaySet) -> SimplicialComplex {
        SimplicialComplex::from_sets(self.vertex_count, self.facets.iter().map(|f| f.intersection(j)).collect())
    }

    /// Augmented simplicial chain complex (empty face in degree −1).
    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::from_simplices(self.faces().into_iter().map(RaySet::to_vec), true)
    }

    /// Σ (−1)^dim over all faces including the empty one.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.chain_complex().euler_characteristic()
    }

    /// Facets relabelled onto `0..|j|` in increasing order; isomorphic
    /// full subcomplexes arising this way share a key.
    fn relabelled_facets(&self, j: RaySet) -> Vec<u64> {
        let position: HashMap<usize, usize> = j.iter().enumerate().map(|(p, v)| (v, p)).collect();
        let mut out: Vec<u64> = self
            .full_subcomplex(j)
            .facets
            .iter()
            .map(|f| RaySet::from_indices(f.iter().map(|v| position[&v])).bits())
            .collect();
        out.sort_unstable();
        out
    }
}

fn maximal_sets(sets: Vec<RaySet>) -> Vec<RaySet> {
    let unique: BTreeSet<RaySet> = sets.into_iter().collect();
    let all: Vec<RaySet> = unique.into_iter().collect();
    let mut kept: Vec<RaySet> = all
        .iter()
        .copied()
        .filter(|s| !all.iter().any(|t| t != s && s.is_subset(*t)))
        .collect();
    kept.sort_by_key(|f| f.to_vec());
    kept
}

/// Ray sets spanning a cone of the fan.
pub fn k_sigma(fan: &Fan) -> Result<SimplicialComplex, ComplexError> {
    if !is_simplicial(fan) {
        return Err(FanError::NonSimplicial("cone complex").into());
    }
    Ok(SimplicialComplex::from_sets(fan.ray_count(), fan.max_cone_sets()))
}

/// Largest s such that every s-subset of the vertices is a face.
pub fn q_of_complex(k: &SimplicialComplex) -> Result<usize, ComplexError> {
    let r = k.vertex_count();
    for s in 1..=r {
        if !all_subsets_are_faces(k, s) {
            return Ok(s - 1);
        }
    }
    Err(ComplexError::AllSubsetsFaces)
}

pub fn q_sigma(fan: &Fan) -> Result<usize, ComplexError> {
    q_of_complex(&k_sigma(fan)?)
}

fn all_subsets_are_faces(k: &SimplicialComplex, s: usize) -> bool {
    subsets_of_size(k.vertex_count(), s).all(|set| k.is_face(set))
}

/// Lexicographic enumeration of the s-subsets of `0..r`.
pub(crate) fn subsets_of_size(r: usize, s: usize) -> impl Iterator<Item = RaySet> {
    let mut current: Option<Vec<usize>> = if s <= r { Some((0..s).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.as_ref().map(|c| RaySet::from_indices(c.iter().copied()))?;
        let c = current.as_mut().unwrap();
        let mut i = s;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if c[i] < r - s + i {
                c[i] += 1;
                for j in i + 1..s {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

pub fn reduced_homology(k: &SimplicialComplex) -> HomologyGroups {
    k.chain_complex().homology()
}

/// Reduced homology of the moment-angle complex through `max_degree`, as the
/// sum over nonempty J of the reduced homology of the full subcomplex on J
/// shifted up by |J| + 1. The empty J only carries the unreduced H₀ and
/// is left out.
pub fn moment_angle_homology(k: &SimplicialComplex, max_degree: usize) -> Result<HomologyGroups, ComplexError> {
    let r = k.vertex_count();
    if r > HOCHSTER_MAX_VERTICES {
        return Err(ComplexError::VertexBudgetExceeded {
            vertices: r,
            limit: HOCHSTER_MAX_VERTICES,
        });
    }
    // lowest contributing degree of J is |J|, so larger J are skipped
    let subsets: Vec<RaySet> = (1u64..(1u64 << r))
        .map(RaySet::from_bits)
        .filter(|j| j.len() <= max_degree)
        .collect();
    let keys: Vec<Vec<u64>> = subsets.iter().map(|&j| k.relabelled_facets(j)).collect();
    let distinct: Vec<Vec<u64>> = keys.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let computed: HashMap<Vec<u64>, HomologyGroups> = distinct
        .into_par_iter()
        .map(|key| {
            let width = key.iter().fold(0u64, |a, &b| a | b);
            let vertices = 64 - width.leading_zeros() as usize;
            let h = reduced_homology(&SimplicialComplex::from_sets(vertices, key.iter().map(|&b| RaySet::from_bits(b)).collect()));
            (key, h)
        })
        .collect();

    let mut total = HomologyGroups::new();
    for (j, key) in subsets.iter().zip(&keys) {
        for (p, group) in computed[key].iter() {
            let degree = p + j.len() as i32 + 1;
            if degree <= max_degree as i32 {
                total.add_summand(degree, group);
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityCertificate {
    pub r_min: usize,
    /// Claimed connectivity 2(r_min − 1).
    pub bound: usize,
    pub ok: bool,
    pub first_nonzero_degree: Option<i32>,
    /// Nonzero homology of the moment-angle complex, lowest degrees first.
    pub witness: Vec<(i32, AbelianGroup)>,
    pub complete: bool,
}

/// Verifies that the moment-angle complex of the cone complex has vanishing
/// reduced homology through degree 2(r_min − 1). Requires a smooth fan,
/// and a complete one unless `allow_incomplete` is set.
pub fn certify_connectivity(fan: &Fan, allow_incomplete: bool) -> Result<ConnectivityCertificate, ComplexError> {
    if !is_smooth(fan).smooth {
        return Err(ComplexError::NotSmooth);
    }
    let complete = is_complete(fan)?;
    if !complete && !allow_incomplete {
        return Err(ComplexError::NotComplete);
    }
    let k = k_sigma(fan)?;
    let rm = r_min(fan)?;
    let bound = 2 * (rm - 1);
    let top = k.vertex_count() + fan.dim() + 1;
    let h = moment_angle_homology(&k, top)?;
    let witness: Vec<(i32, AbelianGroup)> = h.iter().map(|(d, g)| (d, g.clone())).collect();
    let first = h.lowest_nonzero_degree();
    Ok(ConnectivityCertificate {
        r_min: rm,
        bound,
        ok: first.is_none_or(|d| d > bound as i32),
        first_nonzero_degree: first,
        witness,
        complete,
    })
}

/// Every q-subset of rays spans a cone while some (q + 1)-subset does not,
/// where q is computed by direct subset enumeration.
pub fn full_skeleton_check(fan: &Fan) -> Result<bool, ComplexError> {
    let k = k_sigma(fan)?;
    let q = match q_of_complex(&k) {
        Ok(q) => q,
        Err(ComplexError::AllSubsetsFaces) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(all_subsets_are_faces(&k, q) && !all_subsets_are_faces(&k, q + 1))
}
