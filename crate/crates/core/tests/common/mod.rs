//! Oracles and generators shared by the integration tests. Everything here is
//! written independently of the library's algorithms: brute-force
//! enumeration, determinants by elimination over i128, ranks over a prime
//! field, Cramer's rule for cone membership.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use num_integer::Integer;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Deserialize;
use toric_core::Fan;

#[derive(Deserialize)]
struct FanFile {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    name: Option<String>,
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn load_fan(path: &Path) -> Fan {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let file: FanFile = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let cones = file.max_cones.iter().map(|c| c.iter().map(|i| i - 1).collect()).collect();
    let fan = Fan::new(file.dim, file.rays, cones).expect("corpus fan is well-formed");
    match file.name {
        Some(n) => fan.with_name(n),
        None => fan,
    }
}

/// Every `.fan` file of the corpus, sorted by file name.
pub fn corpus() -> Vec<(String, Fan)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "fan"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| (p.file_stem().unwrap().to_string_lossy().into_owned(), load_fan(&p)))
        .collect()
}

// ---------------------------------------------------------------- random fans

fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// A random complete smooth surface with `target` rays (3 ≤ target): start
/// from the plane or a Hirzebruch surface and insert sums of neighbours,
/// then apply a random unimodular change of coordinates and relabel rays.
pub fn random_smooth_surface<R: Rng>(rng: &mut R, target: usize) -> Fan {
    assert!(target >= 3);
    let mut rays: Vec<Vec<i64>> = if target == 3 || rng.gen_bool(0.3) {
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]]
    } else {
        let k = rng.gen_range(0..6);
        vec![vec![1, 0], vec![0, 1], vec![-1, k], vec![0, -1]]
    };
    while rays.len() < target {
        let i = rng.gen_range(0..rays.len());
        let j = (i + 1) % rays.len();
        let sum = vec![rays[i][0] + rays[j][0], rays[i][1] + rays[j][1]];
        rays.insert(i + 1, sum);
    }
    for w in 0..rays.len() {
        assert_eq!(det2(&rays[w], &rays[(w + 1) % rays.len()]).abs(), 1);
    }
    // random element of GL₂(ℤ) as a product of elementary moves
    let mut g = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(0..4) {
        let e = match rng.gen_range(0..4) {
            0 => [[1, 1], [0, 1]],
            1 => [[1, 0], [1, 1]],
            2 => [[0, 1], [1, 0]],
            _ => [[1, -1], [0, 1]],
        };
        g = [
            [g[0][0] * e[0][0] + g[0][1] * e[1][0], g[0][0] * e[0][1] + g[0][1] * e[1][1]],
            [g[1][0] * e[0][0] + g[1][1] * e[1][0], g[1][0] * e[0][1] + g[1][1] * e[1][1]],
        ];
    }
    let rays: Vec<Vec<i64>> = rays
        .iter()
        .map(|v| vec![g[0][0] * v[0] + g[0][1] * v[1], g[1][0] * v[0] + g[1][1] * v[1]])
        .collect();
    let r = rays.len();
    let mut perm: Vec<usize> = (0..r).collect();
    perm.shuffle(rng);
    // ray i of the cyclic order gets label perm[i]
    let mut labelled = vec![Vec::new(); r];
    for (i, v) in rays.into_iter().enumerate() {
        labelled[perm[i]] = v;
    }
    let cones = (0..r).map(|i| vec![perm[i], perm[(i + 1) % r]]).collect();
    Fan::new(2, labelled, cones).unwrap()
}

// ---------------------------------------------------------------- lattice

/// Determinant by fraction-free elimination over i128.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all k × k minors for k = 1..=min(rows, cols), stopping at the
/// first zero. Ratios of consecutive entries are the invariant factors.
pub fn determinantal_divisors(a: &[Vec<i64>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let minor: Vec<Vec<i128>> =
                    rs.iter().map(|&i| cs.iter().map(|&j| a[i][j] as i128).collect()).collect();
                g = g.gcd(&det_i128(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g);
    }
    out
}

pub fn invariant_factors_oracle(a: &[Vec<i64>]) -> Vec<i128> {
    let d = determinantal_divisors(a);
    let mut prev = 1i128;
    d.iter()
        .map(|&x| {
            let f = x / prev;
            prev = x;
            f
        })
        .collect()
}

/// All nonzero v with entries in [−bound, bound] and A·v = 0.
pub fn brute_kernel(a: &[Vec<i64>], cols: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-bound; cols];
    loop {
        if v.iter().any(|&x| x != 0) && a.iter().all(|row| row.iter().zip(&v).map(|(x, y)| x * y).sum::<i64>() == 0) {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == cols {
                return out;
            }
            v[i] += 1;
            if v[i] <= bound {
                break;
            }
            v[i] = -bound;
            i += 1;
        }
    }
}

fn rank_rational(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Ratio<i128>>> = rows.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(x as i128)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != Ratio::from_integer(0)) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != Ratio::from_integer(0) {
                let f = row[c] / pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    rank_rational(rows)
}

/// Membership in the integer lattice spanned by linearly independent
/// `basis` vectors: solve on a set of independent coordinates over ℚ and
/// check the coefficients are integral and reproduce the vector.
pub struct LatticeMembership {
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    inverse: Vec<Vec<Ratio<i128>>>,
}

impl LatticeMembership {
    pub fn new(basis: &[Vec<i64>]) -> Self {
        let k = basis.len();
        let cols = basis.first().map_or(0, Vec::len);
        // greedily choose coordinates making the k × k block invertible
        let mut pivots = Vec::new();
        for c in 0..cols {
            let mut trial = pivots.clone();
            trial.push(c);
            let block: Vec<Vec<i64>> = basis.iter().map(|b| trial.iter().map(|&j| b[j]).collect()).collect();
            if rank_rational(&block) == trial.len() {
                pivots = trial;
            }
            if pivots.len() == k {
                break;
            }
        }
        assert_eq!(pivots.len(), k, "basis vectors must be independent");
        // invert the k × k block B_P (rows are basis vectors)
        let mut aug: Vec<Vec<Ratio<i128>>> = (0..k)
            .map(|i| {
                let mut row: Vec<Ratio<i128>> = pivots.iter().map(|&j| Ratio::from_integer(basis[i][j] as i128)).collect();
                row.extend((0..k).map(|j| Ratio::from_integer(i128::from(i == j))));
                row
            })
            .collect();
        for c in 0..k {
            let p = (c..k).find(|&i| aug[i][c] != Ratio::from_integer(0)).unwrap();
            aug.swap(c, p);
            let pv = aug[c][c];
            for x in aug[c].iter_mut() {
                *x /= pv;
            }
            let pivot = aug[c].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != c && row[c] != Ratio::from_integer(0) {
                    let f = row[c];
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= f * y;
                    }
                }
            }
        }
        let inverse = aug.into_iter().map(|r| r[k..].to_vec()).collect();
        LatticeMembership {
            basis: basis.to_vec(),
            pivots,
            inverse,
        }
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let k = self.basis.len();
        // coefficients c with Σ c_i basis_i = v on the pivot coordinates: c = v_P · inverse
        let mut coeffs = Vec::with_capacity(k);
        for j in 0..k {
            let mut acc = Ratio::from_integer(0i128);
            for (i, &p) in self.pivots.iter().enumerate() {
                acc += self.inverse[i][j] * Ratio::from_integer(v[p] as i128);
            }
            if !acc.is_integer() {
                return false;
            }
            coeffs.push(acc.to_integer());
        }
        (0..v.len()).all(|c| {
            let s: i128 = self.basis.iter().zip(&coeffs).map(|(b, &x)| b[c] as i128 * x).sum();
            s == v[c] as i128
        })
    }
}

/// Two families of independent vectors span the same integer lattice.
pub fn same_lattice(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let la = LatticeMembership::new(a);
    let lb = LatticeMembership::new(b);
    b.iter().all(|v| la.contains(v)) && a.iter().all(|v| lb.contains(v))
}

// ---------------------------------------------------------------- fans

/// Cone membership of x in a full-dimensional simplicial cone by Cramer's rule.
pub fn in_simplicial_cone(generators: &[Vec<i64>], x: &[i64]) -> bool {
    let n = x.len();
    let g: Vec<Vec<i128>> = (0..n).map(|i| generators.iter().map(|v| v[i] as i128).collect()).collect();
    let d = det_i128(&g);
    if d == 0 {
        return false;
    }
    (0..generators.len()).all(|col| {
        let mut m = g.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[col] = x[i] as i128;
        }
        det_i128(&m) * d.signum() >= 0
    })
}

/// Samples random integer directions and reports whether all were covered
/// by some full-dimensional maximal cone.
pub fn monte_carlo_complete<R: Rng>(fan: &Fan, samples: usize, rng: &mut R) -> bool {
    let n = fan.dim();
    let cones: Vec<Vec<Vec<i64>>> = fan
        .max_cones()
        .iter()
        .filter(|c| c.ray_indices.len() == n)
        .map(|c| c.ray_indices.iter().map(|&i| fan.rays()[i].clone()).collect())
        .collect();
    (0..samples).all(|_| {
        let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-1000..=1000)).collect();
        cones.iter().any(|g| in_simplicial_cone(g, &x))
    })
}

fn lies_in_some_cone(fan: &Fan, set: &[usize]) -> bool {
    fan.max_cones().iter().any(|c| set.iter().all(|i| c.ray_indices.contains(i)))
}

/// Primitive collections by testing every subset of rays directly.
pub fn brute_primitive_collections(fan: &Fan) -> Vec<Vec<usize>> {
    let r = fan.ray_count();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << r) {
        let set: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
        if lies_in_some_cone(fan, &set) {
            continue;
        }
        let minimal = set.iter().all(|&drop| {
            let smaller: Vec<usize> = set.iter().copied().filter(|&i| i != drop).collect();
            lies_in_some_cone(fan, &smaller)
        });
        if minimal {
            out.push(set);
        }
    }
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Largest s with every s-subset of rays in a cone.
pub fn brute_q(fan: &Fan) -> usize {
    let r = fan.ray_count();
    let mut best = 0;
    for s in 1..=r {
        if combinations(r, s).iter().all(|set| lies_in_some_cone(fan, set)) {
            best = s;
        } else {
            break;
        }
    }
    best
}

// ---------------------------------------------------------------- homology over 𝔽_p

const P: i64 = 2_147_483_647;

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut acc = 1i64;
    b %= P;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

fn rank_mod_p(mut m: Vec<Vec<i64>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] % P != 0) else { continue };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c].rem_euclid(P), P - 2);
        let pivot: Vec<i64> = m[rank].iter().map(|&x| x.rem_euclid(P) * inv % P).collect();
        m[rank] = pivot.clone();
        for i in 0..m.len() {
            if i != rank && m[i][c] % P != 0 {
                let f = m[i][c].rem_euclid(P);
                for j in 0..cols {
                    m[i][j] = (m[i][j] - f * pivot[j]).rem_euclid(P);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced Betti numbers over 𝔽_p of the complex with the given faces
/// (nonempty, closed under subsets). The empty face is added here.
pub fn reduced_betti_mod_p(faces: &[Vec<usize>]) -> BTreeMap<i32, usize> {
    let mut by_dim: BTreeMap<i32, Vec<Vec<usize>>> = BTreeMap::new();
    by_dim.insert(-1, vec![vec![]]);
    for f in faces {
        by_dim.entry(f.len() as i32 - 1).or_default().push(f.clone());
    }
    let top = *by_dim.keys().last().unwrap();
    let index: BTreeMap<i32, BTreeMap<Vec<usize>, usize>> = by_dim
        .iter()
        .map(|(&d, fs)| (d, fs.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect()))
        .collect();
    // rank of ∂_d : C_d → C_{d−1}
    let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
    for d in 0..=top {
        let cells = &by_dim[&d];
        let below = &index[&(d - 1)];
        let mut m = vec![vec![0i64; cells.len()]; below.len()];
        for (j, f) in cells.iter().enumerate() {
            for skip in 0..f.len() {
                let face: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                m[below[&face]][j] = if skip % 2 == 0 { 1 } else { P - 1 };
            }
        }
        ranks.insert(d, if m.is_empty() { 0 } else { rank_mod_p(m) });
    }
    let mut out = BTreeMap::new();
    for d in -1..=top {
        let n = by_dim[&d].len();
        let b = n - ranks.get(&d).copied().unwrap_or(0) - ranks.get(&(d + 1)).copied().unwrap_or(0);
        if b > 0 {
            out.insert(d, b);
        }
    }
    out
}

/// All nonempty subsets of the given facets.
pub fn close_under_subsets(facets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut faces = BTreeSet::new();
    for f in facets {
        for mask in 1u32..(1u32 << f.len()) {
            faces.insert(f.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v).collect::<Vec<_>>());
        }
    }
    faces.into_iter().collect()
}

/// Betti numbers of the moment-angle complex over 𝔽_p by summing over all
/// nonempty vertex subsets J the shifted reduced Betti numbers of the full
/// subcomplex on J.
pub fn moment_angle_betti_oracle(facets: &[Vec<usize>], vertices: usize) -> BTreeMap<i32, usize> {
    let faces = close_under_subsets(facets);
    let mut total = BTreeMap::new();
    for mask in 1u32..(1u32 << vertices) {
        let full: Vec<Vec<usize>> = faces.iter().filter(|f| f.iter().all(|&v| mask >> v & 1 == 1)).cloned().collect();
        let size = mask.count_ones() as i32;
        for (d, b) in reduced_betti_mod_p(&full) {
            *total.entry(d + size + 1).or_insert(0) += b;
        }
    }
    total
}
