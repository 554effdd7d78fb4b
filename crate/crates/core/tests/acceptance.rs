//! Acceptance suite. Run with `cargo test -p toric-core --test acceptance`.
//! Prints one line per criterion and exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::fan::library::{hirzebruch, projective_space};
use toric_core::lattice::to_i64_vec;
use toric_core::stability::a_t_closed_form;
use toric_core::*;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn columns(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.cols()).map(|j| to_i64_vec(&m.column(j)).expect("small entries")).collect()
}

fn hirzebruch_case(fan: &Fan, k: i64) -> Outcome {
    let pcs: Vec<Vec<usize>> = primitive_collections(fan).iter().map(|p| p.indices.one_based()).collect();
    ensure!(pcs == vec![vec![1, 3], vec![2, 4]], "primitive collections {pcs:?}");
    ensure!(r_min(fan) == Ok(2), "r_min {:?}", r_min(fan));

    let expected = vec![vec![1, 0, 1, k], vec![0, 1, 0, 1]];
    let g = gsigma(fan).map_err(|e| e.to_string())?;
    ensure!(!g.has_torsion, "unexpected torsion in G");
    ensure!(same_lattice(&columns(&g.parametrization), &expected), "parametrization {:?}", columns(&g.parametrization));
    let kernel: Vec<Vec<i64>> = admissible_degrees(fan).iter().map(|v| to_i64_vec(v).unwrap()).collect();
    ensure!(same_lattice(&kernel, &expected), "degree kernel {kernel:?}");

    for d1 in 1..=6 {
        for d2 in 1..=6 {
            let d = DegreeTuple::for_fan(fan, vec![d1, d2, d1, d2 + k * d1]).map_err(|e| e.to_string())?;
            ensure!(d.admissible == Some(true), "({d1},{d2}) not admissible");
            let got = stability_dimension(&d, 2, 2).map_err(|e| e.to_string())?;
            ensure!(got == d1.min(d2) - 2, "stability for ({d1},{d2}) is {got}");
        }
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let corpus: BTreeMap<String, Fan> = corpus().into_iter().collect();
    for k in 0..=3 {
        let from_file = corpus.get(&format!("hirzebruch_k{k}")).ok_or("missing corpus fan")?;
        for fan in [from_file.clone(), hirzebruch(k)] {
            let start = Instant::now();
            hirzebruch_case(&fan, k).map_err(|e| format!("k={k}: {e}"))?;
            ensure!(start.elapsed() < Duration::from_secs(1), "k={k} took {:?}", start.elapsed());
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    for n in 1..=4 {
        let fan = projective_space(n);
        ensure!(fan.ray_count() == n + 1, "r = {} for n = {n}", fan.ray_count());
        ensure!(r_min(&fan) == Ok(n + 1), "r_min = {:?} for n = {n}", r_min(&fan));
    }
    ensure!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
    Ok(())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut fans: Vec<Fan> = corpus().into_iter().map(|(_, f)| f).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..240 {
        fans.push(random_smooth_surface(&mut rng, 3 + i % 8));
    }
    for fan in &fans {
        ensure!(validate_fan(fan).ok() && is_smooth(fan).smooth, "generated fan invalid: {:?}", fan.rays());
        let q = q_sigma(fan).map_err(|e| e.to_string())?;
        ensure!(q == brute_q(fan), "q disagrees with brute force on {:?}", fan.rays());
        let rm = r_min(fan).map_err(|e| e.to_string())?;
        ensure!(rm == q + 1, "r_min {rm} vs q {q} on {:?}", fan.rays());
    }
    ensure!(start.elapsed() < Duration::from_secs(30), "took {:?}", start.elapsed());
    Ok(())
}

fn ranks(h: &HomologyGroups) -> BTreeMap<i32, usize> {
    h.iter().map(|(d, g)| (d, g.rank)).collect()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut certified = 0;
    for (name, fan) in corpus() {
        if fan.ray_count() > 12 || !is_smooth(&fan).smooth || is_complete(&fan) != Ok(true) {
            continue;
        }
        let cert = certify_connectivity(&fan, false).map_err(|e| format!("{name}: {e}"))?;
        ensure!(cert.ok, "{name}: first nonzero degree {:?}", cert.first_nonzero_degree);
        let bound = 2 * (cert.r_min as i32 - 1);
        ensure!(cert.witness.iter().all(|(d, _)| *d > bound), "{name}: homology at or below {bound}");
        certified += 1;
    }
    ensure!(certified >= 10, "only {certified} corpus fans certified");

    let square = moment_angle_homology(&SimplicialComplex::cycle(4), 64).map_err(|e| e.to_string())?;
    ensure!(ranks(&square) == BTreeMap::from([(3, 2), (6, 1)]), "4-cycle gives {square}");
    ensure!(square.iter().all(|(_, g)| g.torsion.is_empty()), "4-cycle has torsion");
    for n in 1..=5 {
        let h = moment_angle_homology(&SimplicialComplex::boundary_of_simplex(n), 64).map_err(|e| e.to_string())?;
        let top = 2 * n as i32 + 1;
        ensure!(ranks(&h) == BTreeMap::from([(top, 1)]), "boundary of simplex n={n} gives {h}");
        ensure!(h.iter().all(|(_, g)| g.torsion.is_empty()), "torsion for n={n}");
    }
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    Ok(())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for (name, fan) in corpus() {
        ensure!(fan.ray_count() <= 12, "{name} too large");
        let ok = verify_zsigma_decomposition(&fan).map_err(|e| format!("{name}: {e}"))?;
        ensure!(ok, "{name}: decomposition fails");
    }
    ensure!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
    Ok(())
}

/// Vanishing cells of the truncated resolution, written out literally.
#[allow(clippy::int_plus_one)]
fn literal_vanishing(k: i64, s: i64, d_min: i64, r_min: i64, m: i64, n_d: i64) -> bool {
    (k < 0)
        || (k >= d_min + 2)
        || (k == 0 && s != 2 * n_d - 1)
        || (1 <= k && k <= d_min && s <= (2 * r_min - m) * k - 1)
        || (k == d_min + 1 && s <= (2 * r_min - m) * d_min - 1)
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k || n < 0 {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_6() -> Outcome {
    let triples: [(i64, i64, i64); 20] = [
        (1, 2, 2), (2, 2, 2), (3, 2, 2), (5, 2, 2), (8, 2, 2),
        (1, 3, 2), (2, 3, 3), (4, 3, 4), (6, 3, 2), (3, 3, 4),
        (2, 4, 2), (3, 4, 5), (5, 4, 6), (1, 4, 3), (4, 5, 8),
        (2, 5, 2), (6, 5, 5), (3, 6, 10), (7, 6, 7), (2, 6, 3),
    ];
    for (d_min, r_min, m) in triples {
        ensure!(2 <= m && m <= 2 * (r_min - 1), "bad triple ({d_min},{r_min},{m})");
        let r = r_min + 2;
        let degrees: Vec<i64> = (0..r).map(|i| d_min + i % 3).collect();
        let d = DegreeTuple::new(degrees.clone());
        let n_d: i64 = degrees.iter().map(|&dk| binomial(m + dk - 1, m)).sum();
        ensure!(ambient_dimension(&d, m) == Ok(n_d), "N_D for {degrees:?}");

        let table = e1_support(ResolutionKind::Truncated, &d, m, r_min).map_err(|e| e.to_string())?;
        let shift: Vec<i64> = vec![1; r as usize];
        let shifted_n: i64 = degrees.iter().map(|&dk| binomial(m + dk, m)).sum();
        let shifted = e1_support(ResolutionKind::TruncatedShifted { shift }, &d, m, r_min).map_err(|e| e.to_string())?;
        let s_top = 2 * shifted_n + 4;
        for k in -2..=d_min + 4 {
            for s in -2..=s_top {
                let want = literal_vanishing(k, s, d_min, r_min, m, n_d);
                ensure!(table.is_zero(k, s) == want, "({d_min},{r_min},{m}) cell ({k},{s})");
                let want = literal_vanishing(k, s, d_min, r_min, m, shifted_n);
                ensure!(shifted.is_zero(k, s) == want, "shifted ({d_min},{r_min},{m}) cell ({k},{s})");
            }
        }
        for k in 1..=d_min {
            let l = bundle_rank(&d, m, r, k).map_err(|e| e.to_string())?;
            let c = config_space_dimension(m, r, r_min, k).map_err(|e| e.to_string())?;
            ensure!(l + c == 2 * n_d - (2 * r_min - m - 1) * k - 1, "identity at k={k} for ({d_min},{r_min},{m})");
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for d_min in 1..=8 {
        for r_min in 2..=6 {
            for m in 2..=2 * (r_min - 1) {
                let d0 = (2 * r_min - m - 1) * d_min - 2;
                for t in 1.. {
                    if t * (t + 1) / 2 > d_min + 1 {
                        ensure!(a_t_minimum(d_min, r_min, m, t).is_err(), "A_{t} should be empty for d_min={d_min}");
                        break;
                    }
                    let brute = a_t_minimum(d_min, r_min, m, t).map_err(|e| e.to_string())?;
                    ensure!(brute == d0 + t + 1, "a({t}) = {brute} for ({d_min},{r_min},{m})");
                    ensure!(a_t_closed_form(d_min, r_min, m, t) == Ok(brute), "closed form mismatch");
                    checked += 1;
                }
            }
        }
    }
    ensure!(checked > 0, "nothing checked");
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    Ok(())
}

fn random_cover(rng: &mut ChaCha8Rng) -> FiniteCover {
    let vertices = rng.gen_range(1..=6);
    let mut facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=5))
        .map(|_| {
            let size = rng.gen_range(1..=3.min(vertices));
            let mut f = rand::seq::index::sample(rng, vertices, size).into_vec();
            f.sort();
            f
        })
        .collect();
    for v in 0..vertices {
        if !facets.iter().any(|f| f.contains(&v)) {
            facets.push(vec![v]);
        }
    }
    let base = SimplicialComplex::new(vertices, facets).expect("valid base");
    let sizes: Vec<usize> = (0..vertices).map(|_| rng.gen_range(1..=5)).collect();
    FiniteCover::with_fibre_sizes(base, &sizes).expect("valid cover")
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for i in 0..110 {
        let cover = random_cover(&mut rng);
        let base = reduced_homology(cover.base());
        let full = build_nondegenerate(&cover).map_err(|e| e.to_string())?;
        let mut models = vec![full.clone()];
        for k in 1..=cover.max_fibre() {
            models.push(truncate(&full, k).map_err(|e| e.to_string())?);
        }
        for model in &models {
            let h = model.reduced_homology();
            ensure!(h == base, "cover {i}, truncation {:?}: {h} vs base {base}", model.truncation());
            let levels = filtration_homology(model);
            let sum: i64 = levels.iter().map(|l| l.euler_characteristic).sum();
            ensure!(sum == model.euler_characteristic(), "cover {i}: filtration Euler sum {sum}");
            ensure!(
                model.euler_characteristic() == cover.base().reduced_euler_characteristic() + 1,
                "cover {i}: Euler characteristic differs from the base"
            );
        }
    }
    ensure!(start.elapsed() < Duration::from_secs(120), "took {:?}", start.elapsed());
    Ok(())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..500 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let m = IntMatrix::from_rows(&a);
        let snf = smith_normal_form(&m);
        ensure!(&(&snf.u * &m) * &snf.v == snf.diagonal_matrix(), "matrix {i}: U·A·V is not the diagonal form");
        ensure!(snf.u.determinant().is_some_and(|d| d.abs().is_one()), "matrix {i}: U not unimodular");
        ensure!(snf.v.determinant().is_some_and(|d| d.abs().is_one()), "matrix {i}: V not unimodular");
        let nonzero: Vec<BigInt> = snf.diag.iter().filter(|d| !d.is_zero()).cloned().collect();
        ensure!(nonzero.iter().all(|d| d.is_positive()), "matrix {i}: negative invariant");
        ensure!(nonzero.windows(2).all(|w| (&w[1] % &w[0]).is_zero()), "matrix {i}: divisibility chain broken");
        let want = invariant_factors_oracle(&a);
        let got: Vec<i128> = nonzero.iter().map(|d| d.to_i128().unwrap()).collect();
        ensure!(got == want, "matrix {i}: invariants {got:?} vs determinantal divisors {want:?}");

        let basis: Vec<Vec<i64>> = integer_kernel_basis(&m).iter().map(|v| to_i64_vec(v).unwrap()).collect();
        ensure!(basis.len() == cols - rank_i64(&a), "matrix {i}: kernel rank");
        if cols <= 4 {
            let brute = brute_kernel(&a, cols, 4);
            if basis.is_empty() {
                ensure!(brute.is_empty(), "matrix {i}: missing kernel");
            } else {
                let lattice = LatticeMembership::new(&basis);
                ensure!(brute.iter().all(|v| lattice.contains(v)), "matrix {i}: kernel not saturated");
            }
        } else if !basis.is_empty() {
            // too many columns to enumerate: saturation means maximal minors are coprime
            let dd = determinantal_divisors(&basis);
            ensure!(dd.last() == Some(&1), "matrix {i}: kernel basis not saturated");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Hirzebruch surfaces", criterion_1),
        ("projective spaces", criterion_2),
        ("r_min = q + 1", criterion_3),
        ("moment-angle connectivity", criterion_4),
        ("irrelevant locus decomposition", criterion_5),
        ("first-page bookkeeping", criterion_6),
        ("A_t minima", criterion_7),
        ("resolution models", criterion_8),
        ("lattice kernels", criterion_9),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("criterion {} ({name}): PASS ({ms} ms)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {} ({name}): FAIL ({ms} ms): {e}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
