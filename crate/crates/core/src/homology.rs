//! Integer homology of finite chain complexes.
//!
//! Complexes are first shrunk by eliminating cell pairs joined by a ±1
//! boundary coefficient (each such pair spans an acyclic summand), then the
//! small remainder goes through dense Smith normal form.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::lattice::{smith_normal_form, IntMatrix};

/// A finitely generated abelian group `ℤ^rank ⊕ ⨁ ℤ/tᵢ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    fn absorb(&mut self, other: &AbelianGroup) {
        self.rank += other.rank;
        self.torsion.extend(other.torsion.iter().cloned());
        self.torsion.sort();
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology groups indexed by degree. Only nonzero groups are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroups {
    groups: BTreeMap<i32, AbelianGroup>,
}

impl HomologyGroups {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i32, group: AbelianGroup) {
        if group.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, group);
        }
    }

    /// Adds `group` into the summand at `degree`.
    pub fn add_summand(&mut self, degree: i32, group: &AbelianGroup) {
        if group.is_zero() {
            return;
        }
        self.groups.entry(degree).or_default().absorb(group);
    }

    pub fn get(&self, degree: i32) -> Option<&AbelianGroup> {
        self.groups.get(&degree)
    }

    pub fn rank(&self, degree: i32) -> usize {
        self.groups.get(&degree).map_or(0, |g| g.rank)
    }

    pub fn torsion(&self, degree: i32) -> &[BigInt] {
        self.groups.get(&degree).map_or(&[], |g| &g.torsion)
    }

    pub fn is_zero_in(&self, degree: i32) -> bool {
        !self.groups.contains_key(&degree)
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.is_empty()
    }

    /// Nonzero groups in increasing degree.
    pub fn iter(&self) -> impl Iterator<Item = (i32, &AbelianGroup)> {
        self.groups.iter().map(|(&d, g)| (d, g))
    }

    pub fn lowest_nonzero_degree(&self) -> Option<i32> {
        self.groups.keys().next().copied()
    }

    /// Σ (−1)^i rank Hᵢ.
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|(&d, g)| if d.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

impl fmt::Display for HomologyGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.groups.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.groups.iter().map(|(d, g)| format!("H{d} = {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A free chain complex with sparse integer boundary maps.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_degree: i32,
    /// `boundaries[d][j]`: boundary of cell `j` in degree `min_degree + d`,
    /// as (cell index in the degree below, coefficient).
    boundaries: Vec<Vec<Vec<(usize, i64)>>>,
}

impl ChainComplex {
    /// `cells[d]` lists the boundaries of the cells in degree `min_degree + d`.
    /// Boundaries of the lowest degree must be empty.
    pub fn new(min_degree: i32, cells: Vec<Vec<Vec<(usize, i64)>>>) -> Self {
        for (d, degree_cells) in cells.iter().enumerate() {
            for b in degree_cells {
                if d == 0 {
                    assert!(b.is_empty(), "lowest degree cells cannot have a boundary");
                } else {
                    assert!(b.iter().all(|&(i, _)| i < cells[d - 1].len()), "dangling boundary index");
                }
            }
        }
        ChainComplex {
            min_degree,
            boundaries: cells,
        }
    }

    /// Cellular chains of a set of simplices (sorted vertex lists). Faces
    /// missing from the set are dropped from boundaries, so passing
    /// `A ∖ B` for subcomplexes `B ⊆ A` yields the relative complex.
    /// With `augmented`, the empty simplex is added in degree −1.
    pub fn from_simplices<I>(simplices: I, augmented: bool) -> Self
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut by_dim: Vec<Vec<Vec<usize>>> = Vec::new();
        for s in simplices {
            if s.is_empty() {
                continue;
            }
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for layer in by_dim.iter_mut() {
            layer.sort();
            layer.dedup();
        }
        let index: Vec<HashMap<&[usize], usize>> = by_dim
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect();

        let mut cells: Vec<Vec<Vec<(usize, i64)>>> = Vec::new();
        if augmented {
            cells.push(vec![Vec::new()]);
        }
        for (d, layer) in by_dim.iter().enumerate() {
            let mut degree_cells = Vec::with_capacity(layer.len());
            for s in layer {
                let mut boundary = Vec::new();
                if d == 0 {
                    if augmented {
                        boundary.push((0, 1));
                    }
                } else {
                    let mut face = Vec::with_capacity(s.len() - 1);
                    for skip in 0..s.len() {
                        face.clear();
                        face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                        if let Some(&j) = index[d - 1].get(face.as_slice()) {
                            boundary.push((j, if skip % 2 == 0 { 1 } else { -1 }));
                        }
                    }
                }
                degree_cells.push(boundary);
            }
            cells.push(degree_cells);
        }
        let min_degree = if augmented { -1 } else { 0 };
        ChainComplex {
            min_degree,
            boundaries: cells,
        }
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn cell_count(&self, degree: i32) -> usize {
        let d = degree - self.min_degree;
        if d < 0 {
            return 0;
        }
        self.boundaries.get(d as usize).map_or(0, Vec::len)
    }

    pub fn total_cells(&self) -> usize {
        self.boundaries.iter().map(Vec::len).sum()
    }

    /// Σ (−1)^i (number of i-cells).
    pub fn euler_characteristic(&self) -> i64 {
        self.boundaries
            .iter()
            .enumerate()
            .map(|(d, cells)| {
                let deg = self.min_degree + d as i32;
                if deg.rem_euclid(2) == 0 {
                    cells.len() as i64
                } else {
                    -(cells.len() as i64)
                }
            })
            .sum()
    }

    /// True when every composite ∂∘∂ vanishes.
    pub fn is_valid(&self) -> bool {
        for d in 2..self.boundaries.len() {
            for b in &self.boundaries[d] {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(face, c) in b {
                    for &(ff, cc) in &self.boundaries[d - 1][face] {
                        *acc.entry(ff).or_insert(0) += c * cc;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn homology(&self) -> HomologyGroups {
        let reduced = Reduction::new(self).run();
        reduced.dense_homology(self.min_degree)
    }
}

/// Working state of the unit-pivot elimination.
struct Reduction {
    alive: Vec<Vec<bool>>,
    boundary: Vec<Vec<BTreeMap<usize, i64>>>,
    coboundary: Vec<Vec<BTreeSet<usize>>>,
}

impl Reduction {
    fn new(complex: &ChainComplex) -> Self {
        let layers = complex.boundaries.len();
        let boundary: Vec<Vec<BTreeMap<usize, i64>>> = complex
            .boundaries
            .iter()
            .map(|cells| {
                cells
                    .iter()
                    .map(|b| {
                        let mut m = BTreeMap::new();
                        for &(i, c) in b {
                            *m.entry(i).or_insert(0) += c;
                        }
                        m.retain(|_, c| *c != 0);
                        m
                    })
                    .collect()
            })
            .collect();
        let mut coboundary: Vec<Vec<BTreeSet<usize>>> =
            complex.boundaries.iter().map(|cells| vec![BTreeSet::new(); cells.len()]).collect();
        for d in 1..layers {
            for (j, b) in boundary[d].iter().enumerate() {
                for &i in b.keys() {
                    coboundary[d - 1][i].insert(j);
                }
            }
        }
        let alive = complex.boundaries.iter().map(|cells| vec![true; cells.len()]).collect();
        Reduction {
            alive,
            boundary,
            coboundary,
        }
    }

    fn run(mut self) -> Self {
        loop {
            let mut progressed = false;
            for d in 1..self.boundary.len() {
                for tau in 0..self.boundary[d].len() {
                    if !self.alive[d][tau] {
                        continue;
                    }
                    let pick = self.boundary[d][tau]
                        .iter()
                        .filter(|(_, c)| c.abs() == 1)
                        .min_by_key(|(&s, _)| self.coboundary[d - 1][s].len())
                        .map(|(&s, &c)| (s, c));
                    if let Some((sigma, c)) = pick {
                        if self.eliminate(d, tau, sigma, c) {
                            progressed = true;
                        }
                    }
                }
            }
            if !progressed {
                return self;
            }
        }
    }

    /// Removes the pair (τ in layer `d`, σ in layer `d − 1`) with ⟨∂τ, σ⟩ = c = ±1.
    /// Returns false, leaving the state untouched, if a coefficient would overflow.
    fn eliminate(&mut self, d: usize, tau: usize, sigma: usize, c: i64) -> bool {
        let tau_boundary = self.boundary[d][tau].clone();
        let others: Vec<usize> = self.coboundary[d - 1][sigma].iter().copied().filter(|&r| r != tau).collect();

        let mut updates: Vec<(usize, BTreeMap<usize, i64>)> = Vec::with_capacity(others.len());
        for &rho in &others {
            let a = self.boundary[d][rho][&sigma];
            let factor = a * c;
            let mut new = self.boundary[d][rho].clone();
            for (&f, &v) in &tau_boundary {
                let Some(delta) = factor.checked_mul(v) else { return false };
                let cur = new.get(&f).copied().unwrap_or(0);
                let Some(next) = cur.checked_sub(delta) else { return false };
                if next == 0 {
                    new.remove(&f);
                } else {
                    new.insert(f, next);
                }
            }
            debug_assert!(!new.contains_key(&sigma));
            updates.push((rho, new));
        }

        for (rho, new) in updates {
            for f in self.boundary[d][rho].keys() {
                self.coboundary[d - 1][*f].remove(&rho);
            }
            for f in new.keys() {
                self.coboundary[d - 1][*f].insert(rho);
            }
            self.boundary[d][rho] = new;
        }

        for f in tau_boundary.keys() {
            self.coboundary[d - 1][*f].remove(&tau);
        }
        if d + 1 < self.boundary.len() {
            let cofaces: Vec<usize> = self.coboundary[d][tau].iter().copied().collect();
            for eta in cofaces {
                self.boundary[d + 1][eta].remove(&tau);
            }
        }
        self.coboundary[d][tau].clear();
        self.boundary[d][tau].clear();
        self.alive[d][tau] = false;

        if d >= 2 {
            let faces: Vec<usize> = self.boundary[d - 1][sigma].keys().copied().collect();
            for f in faces {
                self.coboundary[d - 2][f].remove(&sigma);
            }
        }
        self.boundary[d - 1][sigma].clear();
        debug_assert!(self.coboundary[d - 1][sigma].is_empty());
        self.alive[d - 1][sigma] = false;
        true
    }

    fn dense_homology(&self, min_degree: i32) -> HomologyGroups {
        let layers = self.boundary.len();
        let compact: Vec<Vec<usize>> = self
            .alive
            .iter()
            .map(|a| a.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect())
            .collect();
        let position: Vec<HashMap<usize, usize>> = compact
            .iter()
            .map(|c| c.iter().enumerate().map(|(p, &i)| (i, p)).collect())
            .collect();

        // rank and torsion of ∂_d : C_d → C_{d−1}, for each layer d ≥ 1
        let mut ranks = vec![0usize; layers + 1];
        let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); layers + 1];
        for d in 1..layers {
            let (rows, cols) = (compact[d - 1].len(), compact[d].len());
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = IntMatrix::zeros(rows, cols);
            let mut nonzero = false;
            for (col, &cell) in compact[d].iter().enumerate() {
                for (&f, &v) in &self.boundary[d][cell] {
                    m.set(position[d - 1][&f], col, BigInt::from(v));
                    nonzero = true;
                }
            }
            if !nonzero {
                continue;
            }
            let snf = smith_normal_form(&m);
            ranks[d] = snf.rank();
            torsion[d] = snf.diag.into_iter().filter(|x| x > &BigInt::one()).collect();
        }

        let mut groups = HomologyGroups::new();
        for d in 0..layers {
            let cells = compact[d].len();
            let free = cells - ranks[d] - ranks[d + 1];
            groups.insert(
                min_degree + d as i32,
                AbelianGroup {
                    rank: free,
                    torsion: torsion[d + 1].clone(),
                },
            );
        }
        groups
    }
}
