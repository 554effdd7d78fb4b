//! Rational polyhedral fans given by primitive rays and maximal cones.

mod lp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{cokernel_structure, saturation_basis, smith_normal_form, CokernelStructure, IntMatrix};

/// Largest ray count supported by the bitset representation.
pub const MAX_RAYS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {ray} has {found} coordinates, expected {expected}")]
    DimensionMismatch { ray: usize, expected: usize, found: usize },
    #[error("cone {cone} refers to ray index {index}, but there are only {rays} rays")]
    RayIndexOutOfRange { cone: usize, index: usize, rays: usize },
    #[error("{0} rays exceed the supported maximum of {MAX_RAYS}")]
    TooManyRays(usize),
    #[error("unsupported: non-simplicial {0}")]
    NonSimplicial(&'static str),
    #[error("rays do not span")]
    RaysDoNotSpan,
}

/// A set of ray indices, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RaySet(u64);

impl RaySet {
    pub const EMPTY: RaySet = RaySet(0);

    pub fn from_bits(bits: u64) -> Self {
        RaySet(bits)
    }

    /// All indices `0..r`.
    pub fn full(r: usize) -> Self {
        assert!(r <= MAX_RAYS);
        if r == 64 {
            RaySet(u64::MAX)
        } else {
            RaySet((1u64 << r) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = RaySet::EMPTY;
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < MAX_RAYS, "ray index {i} out of bitset range");
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < 64 {
            self.0 &= !(1 << i);
        }
    }

    pub fn with(self, i: usize) -> Self {
        let mut s = self;
        s.insert(i);
        s
    }

    pub fn without(self, i: usize) -> Self {
        let mut s = self;
        s.remove(i);
        s
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: RaySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: RaySet) -> RaySet {
        RaySet(self.0 | other.0)
    }

    pub fn intersection(self, other: RaySet) -> RaySet {
        RaySet(self.0 & other.0)
    }

    pub fn difference(self, other: RaySet) -> RaySet {
        RaySet(self.0 & !other.0)
    }

    /// Complement inside `0..r`.
    pub fn complement(self, r: usize) -> RaySet {
        RaySet::full(r).difference(self)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Indices shifted to 1-based labels, for display.
    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.one_based().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl Serialize for RaySet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.one_based())
    }
}

impl<'de> Deserialize<'de> for RaySet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        if labels.iter().any(|&l| l == 0 || l > MAX_RAYS) {
            return Err(serde::de::Error::custom("ray labels are 1-based and at most 64"));
        }
        Ok(RaySet::from_indices(labels.into_iter().map(|l| l - 1)))
    }
}

/// A cone spanned by a subset of the fan's rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalCone {
    pub ambient_dim: usize,
    /// Sorted, 0-based indices into the fan's ray list. Empty for the zero cone.
    pub ray_indices: Vec<usize>,
}

impl RationalCone {
    pub fn ray_set(&self) -> RaySet {
        RaySet::from_indices(self.ray_indices.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<RationalCone>,
    name: Option<String>,
}

impl Fan {
    /// Builds a fan from rays and maximal cones (0-based ray indices).
    /// Only shape errors are returned here; geometric conditions are
    /// checked by [`validate_fan`]. Duplicate cones are merged and cones
    /// whose index set lies inside another listed cone are dropped.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self, FanError> {
        if rays.len() > MAX_RAYS {
            return Err(FanError::TooManyRays(rays.len()));
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(FanError::DimensionMismatch {
                    ray: i,
                    expected: dim,
                    found: ray.len(),
                });
            }
        }
        let mut sets: Vec<BTreeSet<usize>> = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.into_iter().enumerate() {
            if let Some(&index) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::RayIndexOutOfRange {
                    cone: c,
                    index,
                    rays: rays.len(),
                });
            }
            sets.push(cone.into_iter().collect());
        }
        sets.sort();
        sets.dedup();
        let kept: Vec<RationalCone> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| t != *s && s.is_subset(t)))
            .map(|s| RationalCone {
                ambient_dim: dim,
                ray_indices: s.iter().copied().collect(),
            })
            .collect();
        Ok(Fan {
            dim,
            rays,
            max_cones: kept,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[RationalCone] {
        &self.max_cones
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn max_cone_sets(&self) -> Vec<RaySet> {
        self.max_cones.iter().map(RationalCone::ray_set).collect()
    }

    /// True iff the rays indexed by `s` all lie in one maximal cone. For
    /// simplicial fans this is exactly "s spans a cone of the fan".
    pub fn lies_in_cone(&self, s: RaySet) -> bool {
        self.max_cones.iter().any(|c| s.is_subset(c.ray_set()))
    }

    /// The n × r matrix whose columns are the rays.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.rays)
    }

    /// The n × |cone| matrix of a cone's generators.
    pub fn cone_matrix(&self, cone: &RationalCone) -> IntMatrix {
        let cols: Vec<&[i64]> = cone.ray_indices.iter().map(|&i| self.rays[i].as_slice()).collect();
        IntMatrix::from_columns(self.dim, &cols)
    }

    /// Whether the rays span ℝⁿ.
    pub fn rays_span(&self) -> bool {
        self.ray_matrix().rank() == self.dim
    }

    /// Same fan with rays in lexicographic order. Returns the fan and the
    /// permutation `perm` with `canonical.rays[i] = self.rays[perm[i]]`.
    pub fn canonical(&self) -> (Fan, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.rays.len()).collect();
        perm.sort_by(|&a, &b| self.rays[a].cmp(&self.rays[b]).then(a.cmp(&b)));
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let rays = perm.iter().map(|&i| self.rays[i].clone()).collect();
        let cones = self
            .max_cones
            .iter()
            .map(|c| c.ray_indices.iter().map(|&i| inverse[i]).collect())
            .collect();
        let mut fan = Fan::new(self.dim, rays, cones).expect("relabelling preserves shape");
        fan.name = self.name.clone();
        (fan, perm)
    }

    /// The same fan with rays relabelled: new index `i` is old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Fan {
        assert_eq!(perm.len(), self.rays.len());
        let mut inverse = vec![usize::MAX; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let rays = perm.iter().map(|&i| self.rays[i].clone()).collect();
        let cones = self
            .max_cones
            .iter()
            .map(|c| c.ray_indices.iter().map(|&i| inverse[i]).collect())
            .collect();
        let mut fan = Fan::new(self.dim, rays, cones).expect("relabelling preserves shape");
        fan.name = self.name.clone();
        fan
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    UnusedRay { ray: usize },
    NotStronglyConvex { cone: usize },
    IntersectionNotFace { first: usize, second: usize },
}

impl fmt::Display for Violation {
    /// Indices are printed 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::ZeroRay { ray } => write!(f, "zero ray {}", ray + 1),
            Violation::NonPrimitiveRay { ray } => write!(f, "non-primitive ray {}", ray + 1),
            Violation::DuplicateRay { first, second } => write!(f, "duplicate rays {} and {}", first + 1, second + 1),
            Violation::UnusedRay { ray } => write!(f, "ray {} lies in no cone", ray + 1),
            Violation::NotStronglyConvex { cone } => write!(f, "cone {} is not strongly convex", cone + 1),
            Violation::IntersectionNotFace { first, second } => {
                write!(f, "intersection not a common face: cones {} and {}", first + 1, second + 1)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Checks primitivity, distinctness and use of rays, strong convexity of
/// every maximal cone and, for simplicial fans, that pairwise intersections
/// are common faces.
pub fn validate_fan(fan: &Fan) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (i, ray) in fan.rays.iter().enumerate() {
        match gcd_of(ray) {
            0 => report.violations.push(Violation::ZeroRay { ray: i }),
            1 => {}
            _ => report.violations.push(Violation::NonPrimitiveRay { ray: i }),
        }
    }
    let mut seen: BTreeMap<&[i64], usize> = BTreeMap::new();
    for (i, ray) in fan.rays.iter().enumerate() {
        if let Some(&first) = seen.get(ray.as_slice()) {
            report.violations.push(Violation::DuplicateRay { first, second: i });
        } else {
            seen.insert(ray, i);
        }
    }
    let used = fan.max_cone_sets().into_iter().fold(RaySet::EMPTY, RaySet::union);
    for i in 0..fan.ray_count() {
        if !used.contains(i) {
            report.violations.push(Violation::UnusedRay { ray: i });
        }
    }
    for (c, cone) in fan.max_cones.iter().enumerate() {
        if !strongly_convex(fan, cone) {
            report.violations.push(Violation::NotStronglyConvex { cone: c });
        }
    }
    if is_simplicial(fan) {
        for a in 0..fan.max_cones.len() {
            for b in a + 1..fan.max_cones.len() {
                if !intersection_is_common_face(fan, &fan.max_cones[a], &fan.max_cones[b]) {
                    report.violations.push(Violation::IntersectionNotFace { first: a, second: b });
                }
            }
        }
    } else {
        report
            .notes
            .push("non-simplicial cones present: intersections were not checked".to_string());
    }
    report
}

/// No nonzero nonnegative combination of the generators vanishes.
fn strongly_convex(fan: &Fan, cone: &RationalCone) -> bool {
    let k = cone.ray_indices.len();
    if k == 0 {
        return true;
    }
    if fan.ray_count() > 0 && fan.cone_matrix(cone).rank() == k {
        return true;
    }
    let mut a: Vec<Vec<i64>> = (0..fan.dim)
        .map(|row| cone.ray_indices.iter().map(|&i| fan.rays[i][row]).collect())
        .collect();
    a.push(vec![1; k]);
    let mut b = vec![0; fan.dim];
    b.push(1);
    !lp::feasible(&a, &b)
}

/// For simplicial cones σ = Cone(S), τ = Cone(T): σ ∩ τ = Cone(S ∩ T) iff no
/// point of the intersection needs a generator outside S ∩ T.
fn intersection_is_common_face(fan: &Fan, s: &RationalCone, t: &RationalCone) -> bool {
    let common: BTreeSet<usize> = s.ray_indices.iter().filter(|i| t.ray_indices.contains(i)).copied().collect();
    let (ns, nt) = (s.ray_indices.len(), t.ray_indices.len());
    let mut a: Vec<Vec<i64>> = Vec::with_capacity(fan.dim + 1);
    for row in 0..fan.dim {
        let mut line = Vec::with_capacity(ns + nt);
        line.extend(s.ray_indices.iter().map(|&i| fan.rays[i][row]));
        line.extend(t.ray_indices.iter().map(|&i| -fan.rays[i][row]));
        a.push(line);
    }
    let mut outside = Vec::with_capacity(ns + nt);
    outside.extend(s.ray_indices.iter().map(|i| i64::from(!common.contains(i))));
    outside.extend(t.ray_indices.iter().map(|i| i64::from(!common.contains(i))));
    if outside.iter().all(|&x| x == 0) {
        return true;
    }
    a.push(outside);
    let mut b = vec![0; fan.dim];
    b.push(1);
    !lp::feasible(&a, &b)
}

/// Each maximal cone has linearly independent generators.
pub fn is_simplicial(fan: &Fan) -> bool {
    fan.max_cones
        .iter()
        .all(|c| c.ray_indices.is_empty() || fan.cone_matrix(c).rank() == c.ray_indices.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSmoothness {
    pub cone: usize,
    /// Index of the generated sublattice in its saturation; 0 if the
    /// generators are dependent.
    pub multiplicity: BigInt,
    pub smooth: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothnessReport {
    pub smooth: bool,
    pub cones: Vec<ConeSmoothness>,
}

/// A cone is smooth when its generators extend to a ℤ-basis of ℤⁿ,
/// i.e. all invariant factors of its generator matrix equal 1.
pub fn is_smooth(fan: &Fan) -> SmoothnessReport {
    let cones: Vec<ConeSmoothness> = fan
        .max_cones
        .iter()
        .enumerate()
        .map(|(c, cone)| {
            let k = cone.ray_indices.len();
            if k == 0 {
                return ConeSmoothness {
                    cone: c,
                    multiplicity: BigInt::one(),
                    smooth: true,
                };
            }
            let snf = smith_normal_form(&fan.cone_matrix(cone));
            let multiplicity = if snf.rank() == k {
                snf.diag.iter().take(k).fold(BigInt::one(), |acc, d| acc * d)
            } else {
                BigInt::zero()
            };
            ConeSmoothness {
                cone: c,
                smooth: multiplicity.is_one(),
                multiplicity,
            }
        })
        .collect();
    SmoothnessReport {
        smooth: cones.iter().all(|c| c.smooth),
        cones,
    }
}

/// Completeness by the wall criterion: every maximal cone is
/// n-dimensional, every (n−1)-face of a maximal cone lies in exactly two
/// maximal cones, and maximal cones are connected through walls.
/// Assumes the fan has passed validation.
pub fn is_complete(fan: &Fan) -> Result<bool, FanError> {
    if !is_simplicial(fan) {
        return Err(FanError::NonSimplicial("completeness check"));
    }
    let n = fan.dim;
    if n == 0 {
        return Ok(true);
    }
    let cones = fan.max_cone_sets();
    if cones.is_empty() || cones.iter().any(|c| c.len() != n) {
        return Ok(false);
    }
    let mut walls: BTreeMap<RaySet, Vec<usize>> = BTreeMap::new();
    for (c, &cone) in cones.iter().enumerate() {
        for i in cone.iter() {
            walls.entry(cone.without(i)).or_default().push(c);
        }
    }
    if walls.values().any(|owners| owners.len() != 2) {
        return Ok(false);
    }
    // union-find over maximal cones
    let mut parent: Vec<usize> = (0..cones.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for owners in walls.values() {
        let (a, b) = (find(&mut parent, owners[0]), find(&mut parent, owners[1]));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    Ok((0..cones.len()).all(|c| find(&mut parent, c) == root))
}

/// ℤⁿ modulo the subgroup generated by the lattice points of all cones.
/// The lattice points of a cone generate the saturation of its generators'
/// span, so the group is a cokernel of those saturations.
pub fn fundamental_group(fan: &Fan) -> CokernelStructure {
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for cone in &fan.max_cones {
        if cone.ray_indices.is_empty() {
            continue;
        }
        columns.extend(saturation_basis(&fan.cone_matrix(cone)));
    }
    if columns.is_empty() {
        return CokernelStructure {
            free_rank: fan.dim,
            torsion: Vec::new(),
        };
    }
    let mut m = IntMatrix::zeros(fan.dim, columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    cokernel_structure(&m)
}

/// Standard fans used throughout tests, examples and the corpus.
pub mod library {
    use super::Fan;

    /// Fan of ℙⁿ: rays e₁,…,eₙ, −(e₁+…+eₙ); every n-subset is a maximal cone.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
        Fan::new(n, rays, cones).expect("well-formed").with_name(format!("P{n}"))
    }

    /// Hirzebruch surface H(k): rays (1,0), (0,1), (−1,k), (0,−1) with cones
    /// on cyclically consecutive pairs.
    pub fn hirzebruch(k: i64) -> Fan {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, k], vec![0, -1]];
        let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]];
        Fan::new(2, rays, cones).expect("well-formed").with_name(format!("H{k}"))
    }

    /// Product of two fans: rays placed block-diagonally, cones are unions.
    pub fn product(a: &Fan, b: &Fan) -> Fan {
        let (na, nb) = (a.dim(), b.dim());
        let mut rays = Vec::with_capacity(a.ray_count() + b.ray_count());
        for r in a.rays() {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(0, nb));
            rays.push(v);
        }
        for r in b.rays() {
            let mut v = vec![0; na];
            v.extend(r.iter().copied());
            rays.push(v);
        }
        let shift = a.ray_count();
        let mut cones = Vec::new();
        for ca in a.max_cones() {
            for cb in b.max_cones() {
                let mut c = ca.ray_indices.clone();
                c.extend(cb.ray_indices.iter().map(|i| i + shift));
                cones.push(c);
            }
        }
        let name = match (a.name(), b.name()) {
            (Some(x), Some(y)) => format!("{x}x{y}"),
            _ => "product".to_string(),
        };
        Fan::new(na + nb, rays, cones).expect("well-formed").with_name(name)
    }

    /// Complete smooth surface from a cyclic ray sequence; cones on
    /// consecutive pairs.
    pub fn cyclic_surface(rays: Vec<Vec<i64>>) -> Fan {
        let r = rays.len();
        let cones = (0..r).map(|i| vec![i, (i + 1) % r]).collect();
        Fan::new(2, rays, cones).expect("well-formed")
    }
}
