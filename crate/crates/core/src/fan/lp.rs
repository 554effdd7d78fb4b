//! Exact feasibility of `A·x = b, x ≥ 0` by phase-one simplex over ℚ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// True iff some `x ≥ 0` satisfies `A·x = b`. Bland's rule, so it terminates.
pub(crate) fn feasible(a: &[Vec<i64>], b: &[i64]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let rat = |v: i64| BigRational::from_integer(BigInt::from(v));

    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i] < 0;
        let mut t = vec![BigRational::zero(); width];
        for j in 0..n {
            t[j] = rat(if flip { -row[j] } else { row[j] });
        }
        t[n + i] = rat(1);
        t[width - 1] = rat(b[i].abs());
        tab.push(t);
    }
    // objective: minimize the sum of artificials, written in reduced form
    let mut obj = vec![BigRational::zero(); width];
    for row in &tab {
        for j in 0..n {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..n + m).find(|&j| tab[m][j].is_negative()) else { break };
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = &tab[i][width - 1] / &tab[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // the phase-one objective is bounded below by zero
        let (row, _) = leave.expect("phase-one objective cannot be unbounded");
        pivot(&mut tab, row, enter);
        basis[row] = enter;
    }
    tab[m][width - 1].is_zero()
}

fn pivot(tab: &mut [Vec<BigRational>], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for x in tab[row].iter_mut() {
        *x /= &p;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (x, y) in r.iter_mut().zip(&pivot_row) {
            if !y.is_zero() {
                *x -= &f * y;
            }
        }
    }
}
