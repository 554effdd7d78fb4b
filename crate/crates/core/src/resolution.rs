//! Simplicial resolutions of finite-to-one maps onto a simplicial complex.
//!
//! A cover assigns each total point to a base vertex. The non-degenerate
//! resolution has a simplex for every nonempty point set S whose image is a
//! face of the base; over an open face the fibre is a product of simplices,
//! hence contractible. The filtration level of S is the largest number of
//! its points sharing a base vertex. Truncation at k keeps only pieces of
//! at most k points over each large fibre and cones them off with an apex.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fan::RaySet;
use crate::homology::{ChainComplex, HomologyGroups};
use crate::lattice::IntMatrix;
use crate::srcomplex::{reduced_homology, SimplicialComplex};

/// Largest fibre handled.
pub const MAX_FIBRE: usize = 12;
/// Largest number of simplices a resolution may have.
pub const MAX_CELLS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("projection is not surjective: base vertex {0} has an empty fibre")]
    NotSurjective(usize),
    #[error("point {point} maps to vertex {vertex}, outside the base")]
    ProjectionOutOfRange { point: usize, vertex: usize },
    #[error("base vertex {0} lies in no facet")]
    VertexNotInBase(usize),
    #[error("fibre budget exceeded: vertex {vertex} has {size} points, limit {MAX_FIBRE}")]
    FibreBudgetExceeded { vertex: usize, size: usize },
    #[error("cell budget exceeded: {cells} simplices, limit {MAX_CELLS}")]
    CellBudgetExceeded { cells: u128 },
    #[error("truncation level must be at least 1")]
    ZeroTruncation,
}

/// A surjection from a finite point set onto the vertices of a base complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteCover {
    base: SimplicialComplex,
    /// projection[p] is the base vertex under point p.
    projection: Vec<usize>,
    #[serde(skip)]
    fibres: Vec<Vec<usize>>,
}

impl FiniteCover {
    pub fn new(base: SimplicialComplex, projection: Vec<usize>) -> Result<Self, ResolutionError> {
        let n = base.vertex_count();
        let mut fibres = vec![Vec::new(); n];
        for (point, &vertex) in projection.iter().enumerate() {
            if vertex >= n {
                return Err(ResolutionError::ProjectionOutOfRange { point, vertex });
            }
            fibres[vertex].push(point);
        }
        for (v, fibre) in fibres.iter().enumerate() {
            if !base.is_face(RaySet::from_indices([v])) {
                return Err(ResolutionError::VertexNotInBase(v));
            }
            if fibre.is_empty() {
                return Err(ResolutionError::NotSurjective(v));
            }
            if fibre.len() > MAX_FIBRE {
                return Err(ResolutionError::FibreBudgetExceeded {
                    vertex: v,
                    size: fibre.len(),
                });
            }
        }
        Ok(FiniteCover {
            base,
            projection,
            fibres,
        })
    }

    /// `sizes[v]` points over each base vertex v, numbered fibre by fibre.
    pub fn with_fibre_sizes(base: SimplicialComplex, sizes: &[usize]) -> Result<Self, ResolutionError> {
        let projection = sizes.iter().enumerate().flat_map(|(v, &s)| std::iter::repeat_n(v, s)).collect();
        Self::new(base, projection)
    }

    pub fn base(&self) -> &SimplicialComplex {
        &self.base
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    pub fn point_count(&self) -> usize {
        self.projection.len()
    }

    pub fn fibre(&self, v: usize) -> &[usize] {
        &self.fibres[v]
    }

    pub fn max_fibre(&self) -> usize {
        self.fibres.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// A simplex of a resolution with its filtration level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    /// Sorted vertex labels: points are `0..P`, the apex over base vertex v is `P + v`.
    pub vertices: Vec<usize>,
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicialResolution {
    cover: FiniteCover,
    truncation: Option<usize>,
    cells: Vec<Cell>,
}

/// Subsets of `items` with size in `min..=max`, each sorted.
fn subsets_between(items: &[usize], min: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << items.len()) {
        let size = mask.count_ones() as usize;
        if size >= min && size <= max {
            out.push(items.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &x)| x).collect());
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of fibre pieces over a vertex with `size` points.
fn piece_count(size: usize, truncation: Option<usize>) -> u128 {
    match truncation {
        Some(k) if size > k => {
            let small: u128 = (1..=k).map(|j| binomial(size, j)).sum();
            // pieces without the apex, and with it (over any small subset or none)
            small + small + 1
        }
        _ => (1u128 << size) - 1,
    }
}

impl SimplicialResolution {
    fn build(cover: &FiniteCover, truncation: Option<usize>) -> Result<Self, ResolutionError> {
        let points = cover.point_count();
        let faces = cover.base().faces();
        let total: u128 = faces
            .iter()
            .map(|f| f.iter().map(|v| piece_count(cover.fibre(v).len(), truncation)).product::<u128>())
            .sum();
        if total > MAX_CELLS as u128 {
            return Err(ResolutionError::CellBudgetExceeded { cells: total });
        }

        let pieces: Vec<Vec<(Vec<usize>, usize)>> = (0..cover.base().vertex_count())
            .map(|v| {
                let fibre = cover.fibre(v);
                match truncation {
                    Some(k) if fibre.len() > k => {
                        let mut out: Vec<(Vec<usize>, usize)> =
                            subsets_between(fibre, 1, k).into_iter().map(|s| { let l = s.len(); (s, l) }).collect();
                        for mut s in subsets_between(fibre, 0, k) {
                            s.push(points + v);
                            out.push((s, k + 1));
                        }
                        out
                    }
                    _ => subsets_between(fibre, 1, fibre.len()).into_iter().map(|s| { let l = s.len(); (s, l) }).collect(),
                }
            })
            .collect();

        let mut cells = Vec::with_capacity(total as usize);
        for face in faces {
            let verts = face.to_vec();
            let mut idx = vec![0usize; verts.len()];
            loop {
                let mut vertices = Vec::new();
                let mut level = 0;
                for (slot, &v) in verts.iter().enumerate() {
                    let (piece, l) = &pieces[v][idx[slot]];
                    vertices.extend_from_slice(piece);
                    level = level.max(*l);
                }
                vertices.sort_unstable();
                cells.push(Cell { vertices, level });
                // odometer over the pieces of each vertex of the face
                let mut slot = 0;
                loop {
                    if slot == verts.len() {
                        break;
                    }
                    idx[slot] += 1;
                    if idx[slot] < pieces[verts[slot]].len() {
                        break;
                    }
                    idx[slot] = 0;
                    slot += 1;
                }
                if slot == verts.len() {
                    break;
                }
            }
        }
        Ok(SimplicialResolution {
            cover: cover.clone(),
            truncation,
            cells,
        })
    }

    pub fn cover(&self) -> &FiniteCover {
        &self.cover
    }

    pub fn truncation(&self) -> Option<usize> {
        self.truncation
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Highest filtration level present.
    pub fn top_level(&self) -> usize {
        self.cells.iter().map(|c| c.level).max().unwrap_or(0)
    }

    /// Simplices of the filtration stage X_l.
    pub fn stage(&self, level: usize) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.level <= level)
    }

    pub fn chain_complex(&self) -> ChainComplex {
        ChainComplex::from_simplices(self.cells.iter().map(|c| c.vertices.clone()), true)
    }

    pub fn reduced_homology(&self) -> HomologyGroups {
        self.chain_complex().homology()
    }

    /// Unreduced Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .map(|c| if c.vertices.len() % 2 == 1 { 1 } else { -1 })
            .sum()
    }

    /// Moment-curve coordinates for every vertex label, in dimension equal to
    /// the largest fibre (one more when apexes are present). Points and
    /// apexes get distinct positive integer parameters.
    pub fn embedding(&self) -> Embedding {
        let points = self.cover.point_count();
        let has_apex = self.cells.iter().any(|c| c.vertices.iter().any(|&v| v >= points));
        let dim = self.cover.max_fibre() + usize::from(has_apex);
        let labels = points + self.cover.base().vertex_count();
        let coords = (0..labels)
            .map(|label| {
                let t = BigInt::from(label as u64 + 1);
                let mut x = Vec::with_capacity(dim);
                let mut power = t.clone();
                for _ in 0..dim {
                    x.push(power.clone());
                    power *= &t;
                }
                x
            })
            .collect();
        Embedding { dim, coords }
    }

    /// Every set of at most `max_points` labels inside one fibre (the apex
    /// included) is affinely independent under [`Self::embedding`].
    pub fn general_position(&self, max_points: usize) -> bool {
        let emb = self.embedding();
        let points = self.cover.point_count();
        (0..self.cover.base().vertex_count()).all(|v| {
            let mut labels = self.cover.fibre(v).to_vec();
            if self.truncation.is_some_and(|k| labels.len() > k) {
                labels.push(points + v);
            }
            subsets_between(&labels, 1, max_points.min(labels.len()))
                .iter()
                .all(|s| emb.affine_rank(s) + 1 == s.len())
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub dim: usize,
    pub coords: Vec<Vec<BigInt>>,
}

impl Embedding {
    /// Dimension of the affine span of the given labels.
    pub fn affine_rank(&self, labels: &[usize]) -> usize {
        let Some((&first, rest)) = labels.split_first() else { return 0 };
        if rest.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|&l| self.coords[l].iter().zip(&self.coords[first]).map(|(a, b)| a - b).collect())
            .collect();
        IntMatrix::from_big_rows(rows.len(), self.dim, rows).rank()
    }
}

pub fn build_nondegenerate(cover: &FiniteCover) -> Result<SimplicialResolution, ResolutionError> {
    SimplicialResolution::build(cover, None)
}

/// Cuts every fibre with more than k points down to its pieces of at most
/// k points and cones it off; stages up to k are unchanged.
pub fn truncate(res: &SimplicialResolution, k: usize) -> Result<SimplicialResolution, ResolutionError> {
    if k == 0 {
        return Err(ResolutionError::ZeroTruncation);
    }
    SimplicialResolution::build(&res.cover, Some(k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelHomology {
    pub level: usize,
    pub cells: usize,
    /// H(X_level, X_{level−1}).
    pub homology: HomologyGroups,
    pub euler_characteristic: i64,
}

/// Relative homology of each filtration step.
pub fn filtration_homology(res: &SimplicialResolution) -> Vec<LevelHomology> {
    (1..=res.top_level())
        .map(|level| {
            let cells: Vec<Vec<usize>> =
                res.cells.iter().filter(|c| c.level == level).map(|c| c.vertices.clone()).collect();
            let count = cells.len();
            let complex = ChainComplex::from_simplices(cells, false);
            LevelHomology {
                level,
                cells: count,
                euler_characteristic: complex.euler_characteristic(),
                homology: complex.homology(),
            }
        })
        .collect()
}

/// Reduced homology of the resolution equals that of the base.
pub fn verify_resolution_equivalence(res: &SimplicialResolution) -> bool {
    res.reduced_homology() == reduced_homology(res.cover.base())
}
