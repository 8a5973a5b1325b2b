//! Dense two-phase tableau simplex, written from scratch for desk-scale
//! reference solves.
//!
//! Generic over the scalar so the same pivoting code runs in f64 for speed
//! and in exact rational arithmetic for cross-checking. Dantzig pricing with
//! a permanent switch to Bland's rule after a run of degenerate pivots;
//! redundant rows left over from phase one are pivoted out or dropped.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::NetmixError;

/// Scalar requirements for the tableau. `tol()` is the comparison slack:
/// zero for exact types.
pub trait LpScalar:
    Clone
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn tol() -> Self;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn is_zero_tol(&self) -> bool {
        self.abs_val() <= Self::tol()
    }

    fn is_pos_tol(&self) -> bool {
        *self > Self::tol()
    }

    fn is_neg_tol(&self) -> bool {
        *self < -Self::tol()
    }
}

impl LpScalar for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn tol() -> f64 {
        1e-9
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// min objective . x subject to sparse rows, x >= 0.
#[derive(Debug, Clone)]
pub struct LinearProgram<T> {
    pub var_count: usize,
    pub objective: Vec<T>,
    pub rows: Vec<(Vec<(usize, T)>, Relation, T)>,
}

impl<T: LpScalar> LinearProgram<T> {
    pub fn new(var_count: usize) -> Self {
        LinearProgram {
            var_count,
            objective: vec![T::zero(); var_count],
            rows: Vec::new(),
        }
    }

    pub fn set_cost(&mut self, var: usize, c: T) {
        self.objective[var] = c;
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, T)>, rel: Relation, rhs: T) {
        self.rows.push((coeffs, rel, rhs));
    }
}

#[derive(Debug, Clone)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    obj: Vec<T>,
    obj_shift: T,
    phase1: Vec<T>,
    phase1_shift: T,
    basis: Vec<usize>,
    n_struct: usize,
    n_total: usize,
    first_artificial: usize,
    bland: bool,
    degenerate_run: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / piv;
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let factor = self.rows[r][col].clone();
            if factor.is_zero_tol() {
                self.rows[r][col] = T::zero();
                continue;
            }
            for c in 0..self.n_total {
                self.rows[r][c] =
                    self.rows[r][c].clone() - factor.clone() * self.rows[row][c].clone();
            }
            self.rhs[r] = self.rhs[r].clone() - factor.clone() * self.rhs[row].clone();
            if self.rhs[r].is_neg_tol() {
                // Tiny negative drift from cancellation.
                if self.rhs[r].abs_val() <= T::tol() + T::tol() {
                    self.rhs[r] = T::zero();
                }
            }
        }
        for obj in [true, false] {
            let target: &mut Vec<T> = if obj { &mut self.obj } else { &mut self.phase1 };
            let factor = target[col].clone();
            if factor.is_zero_tol() {
                target[col] = T::zero();
                continue;
            }
            for c in 0..self.n_total {
                target[c] = target[c].clone() - factor.clone() * self.rows[row][c].clone();
            }
            let delta = factor * self.rhs[row].clone();
            if obj {
                self.obj_shift = self.obj_shift.clone() + delta;
            } else {
                self.phase1_shift = self.phase1_shift.clone() + delta;
            }
        }
        self.basis[row] = col;
    }

    /// One simplex step on the active objective; returns false at optimality.
    fn step(&mut self, use_phase1: bool, allow_artificial: bool) -> Result<bool, LpStop> {
        let cost_row: &Vec<T> = if use_phase1 { &self.phase1 } else { &self.obj };
        let limit = if allow_artificial { self.n_total } else { self.first_artificial };
        let entering = if self.bland {
            (0..limit).find(|&c| cost_row[c].is_neg_tol())
        } else {
            let mut best: Option<(usize, T)> = None;
            for c in 0..limit {
                if cost_row[c].is_neg_tol() {
                    match &best {
                        Some((_, b)) if cost_row[c].clone() >= b.clone() => {}
                        _ => best = Some((c, cost_row[c].clone())),
                    }
                }
            }
            best.map(|(c, _)| c)
        };
        let col = match entering {
            Some(c) => c,
            None => return Ok(false),
        };
        let mut leave: Option<(usize, T)> = None;
        for r in 0..self.rows.len() {
            if self.rows[r][col].is_pos_tol() {
                let ratio = self.rhs[r].clone() / self.rows[r][col].clone();
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < lratio.clone() - T::tol()
                            || (ratio.clone() - lratio.clone()).abs_val() <= T::tol()
                                && self.basis[r] < self.basis[*lr]
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let (row, ratio) = match leave {
            Some(x) => x,
            None => return Err(LpStop::Unbounded),
        };
        if ratio.is_zero_tol() {
            self.degenerate_run += 1;
            if self.degenerate_run > 4 * (self.rows.len() + self.n_total) {
                self.bland = true;
            }
        } else {
            self.degenerate_run = 0;
        }
        self.pivot(row, col);
        Ok(true)
    }
}

enum LpStop {
    Unbounded,
}

/// Solves the program; errors only on iteration blow-up.
pub fn solve<T: LpScalar>(lp: &LinearProgram<T>) -> Result<LpOutcome<T>, NetmixError> {
    let m = lp.rows.len();
    let n = lp.var_count;
    // Count extra columns.
    let mut n_slack = 0;
    for (_, rel, _) in &lp.rows {
        if matches!(rel, Relation::Le | Relation::Ge) {
            n_slack += 1;
        }
    }
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut rhs: Vec<T> = Vec::with_capacity(m);
    let mut rels: Vec<Relation> = Vec::with_capacity(m);
    for (coeffs, rel, b) in &lp.rows {
        let mut dense = vec![T::zero(); n];
        for (i, c) in coeffs {
            dense[*i] = dense[*i].clone() + c.clone();
        }
        let (dense, rel, b) = if b.is_neg_tol() {
            let flipped = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
            (dense.into_iter().map(|v| -v).collect(), flipped, -b.clone())
        } else {
            (dense, *rel, b.clone())
        };
        rows.push(dense);
        rhs.push(b);
        rels.push(rel);
    }
    // Artificials: one per Eq/Ge row.
    let n_artificial = rels
        .iter()
        .filter(|r| matches!(r, Relation::Eq | Relation::Ge))
        .count();
    let n_total = n + n_slack + n_artificial;
    let first_artificial = n + n_slack;
    let mut basis = vec![0usize; m];
    let mut slack_at = n;
    let mut artificial_at = first_artificial;
    for r in 0..m {
        rows[r].resize(n_total, T::zero());
        match rels[r] {
            Relation::Le => {
                rows[r][slack_at] = T::one();
                basis[r] = slack_at;
                slack_at += 1;
            }
            Relation::Ge => {
                rows[r][slack_at] = -T::one();
                slack_at += 1;
                rows[r][artificial_at] = T::one();
                basis[r] = artificial_at;
                artificial_at += 1;
            }
            Relation::Eq => {
                rows[r][artificial_at] = T::one();
                basis[r] = artificial_at;
                artificial_at += 1;
            }
        }
    }
    let mut obj = vec![T::zero(); n_total];
    for (i, c) in lp.objective.iter().enumerate() {
        obj[i] = c.clone();
    }
    // Phase-1 costs: sum of artificials, reduced against the starting basis.
    let mut phase1 = vec![T::zero(); n_total];
    for c in first_artificial..n_total {
        phase1[c] = T::one();
    }
    let mut phase1_shift = T::zero();
    for r in 0..m {
        if basis[r] >= first_artificial {
            for c in 0..n_total {
                phase1[c] = phase1[c].clone() - rows[r][c].clone();
            }
            phase1_shift = phase1_shift.clone() + rhs[r].clone();
        }
    }
    let mut tab = Tableau {
        rows,
        rhs,
        obj,
        obj_shift: T::zero(),
        phase1,
        phase1_shift,
        basis,
        n_struct: n,
        n_total,
        first_artificial,
        bland: false,
        degenerate_run: 0,
    };
    let max_iters = 200 * (m + n_total) + 20_000;
    let mut iters = 0;
    if n_artificial > 0 {
        loop {
            match tab.step(true, true) {
                Ok(true) => {}
                Ok(false) => break,
                Err(LpStop::Unbounded) => {
                    return Err(NetmixError::Unsupported("phase-1 unbounded".into()))
                }
            }
            iters += 1;
            if iters > max_iters {
                return Err(NetmixError::Unsupported("simplex iteration limit".into()));
            }
        }
        if tab.phase1_shift.is_pos_tol() {
            return Ok(LpOutcome::Infeasible);
        }
        // Pivot remaining artificials out or drop their (redundant) rows.
        let mut drop_rows = Vec::new();
        for r in 0..m {
            if tab.basis[r] >= tab.first_artificial {
                let col = (0..tab.first_artificial).find(|&c| !tab.rows[r][c].is_zero_tol());
                match col {
                    Some(c) => tab.pivot(r, c),
                    None => drop_rows.push(r),
                }
            }
        }
        for &r in drop_rows.iter().rev() {
            tab.rows.remove(r);
            tab.rhs.remove(r);
            tab.basis.remove(r);
        }
    }
    tab.bland = false;
    tab.degenerate_run = 0;
    loop {
        match tab.step(false, false) {
            Ok(true) => {}
            Ok(false) => break,
            Err(LpStop::Unbounded) => return Ok(LpOutcome::Unbounded),
        }
        iters += 1;
        if iters > max_iters {
            return Err(NetmixError::Unsupported("simplex iteration limit".into()));
        }
    }
    let mut x = vec![T::zero(); tab.n_struct];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < tab.n_struct {
            x[b] = tab.rhs[r].clone().max_zero();
        }
    }
    let value = -tab.obj_shift.clone();
    Ok(LpOutcome::Optimal { x, value })
}

trait MaxZero {
    fn max_zero(self) -> Self;
}

impl<T: LpScalar> MaxZero for T {
    fn max_zero(self) -> Self {
        if self < T::zero() {
            T::zero()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    impl LpScalar for BigRational {
        fn zero() -> Self {
            Zero::zero()
        }
        fn one() -> Self {
            One::one()
        }
        fn from_f64(x: f64) -> Self {
            BigRational::from_float(x).expect("finite")
        }
        fn to_f64(&self) -> f64 {
            self.to_f64().unwrap_or(f64::NAN)
        }
        fn tol() -> Self {
            Zero::zero()
        }
        fn abs_val(&self) -> Self {
            Signed::abs(self)
        }
    }

    fn lp_from_rows_f64(
        n: usize,
        obj: &[f64],
        rows: &[(&[(usize, f64)], Relation, f64)],
    ) -> LinearProgram<f64> {
        let mut lp = LinearProgram::new(n);
        for (i, &c) in obj.iter().enumerate() {
            lp.set_cost(i, c);
        }
        for (coeffs, rel, b) in rows {
            lp.add_row(coeffs.to_vec(), *rel, *b);
        }
        lp
    }

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2,6)
        let lp = lp_from_rows_f64(
            2,
            &[-3.0, -5.0],
            &[
                (&[(0, 1.0)], Relation::Le, 4.0),
                (&[(1, 2.0)], Relation::Le, 12.0),
                (&[(0, 3.0), (1, 2.0)], Relation::Le, 18.0),
            ],
        );
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((value + 36.0).abs() < 1e-9);
                assert!((x[0] - 2.0).abs() < 1e-9);
                assert!((x[1] - 6.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_redundant_rows() {
        // min x + y s.t. x + y = 1, 2x + 2y = 2 (redundant), x - y >= 0
        let lp = lp_from_rows_f64(
            2,
            &[1.0, 1.0],
            &[
                (&[(0, 1.0), (1, 1.0)], Relation::Eq, 1.0),
                (&[(0, 2.0), (1, 2.0)], Relation::Eq, 2.0),
                (&[(0, 1.0), (1, -1.0)], Relation::Ge, 0.0),
            ],
        );
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { value, .. } => assert!((value - 1.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        let lp = lp_from_rows_f64(
            1,
            &[1.0],
            &[
                (&[(0, 1.0)], Relation::Le, 1.0),
                (&[(0, 1.0)], Relation::Ge, 2.0),
            ],
        );
        assert!(matches!(solve(&lp).unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let lp = lp_from_rows_f64(1, &[-1.0], &[(&[(0, 1.0)], Relation::Ge, 0.0)]);
        assert!(matches!(solve(&lp).unwrap(), LpOutcome::Unbounded));
    }

    #[test]
    fn negative_rhs_normalization() {
        // min x s.t. -x <= -3  (x >= 3)
        let lp = lp_from_rows_f64(1, &[1.0], &[(&[(0, -1.0)], Relation::Le, -3.0)]);
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((x[0] - 3.0).abs() < 1e-9);
                assert!((value - 3.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn f64_matches_exact_rational_on_random_programs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..40 {
            let n = rng.gen_range(2..=5);
            let m = rng.gen_range(1..=5);
            let obj: Vec<f64> = (0..n).map(|_| rng.gen_range(0..8) as f64 / 2.0).collect();
            let mut rows = Vec::new();
            for _ in 0..m {
                let coeffs: Vec<(usize, f64)> = (0..n)
                    .filter_map(|i| {
                        let c = rng.gen_range(-4i32..=4) as f64 / 2.0;
                        (c != 0.0).then_some((i, c))
                    })
                    .collect();
                let rel = match rng.gen_range(0..3) {
                    0 => Relation::Le,
                    1 => Relation::Ge,
                    _ => Relation::Eq,
                };
                let b = rng.gen_range(0..10) as f64 / 2.0;
                rows.push((coeffs, rel, b));
            }
            // Keep programs bounded: every variable capped.
            for i in 0..n {
                rows.push((vec![(i, 1.0)], Relation::Le, 10.0));
            }
            let mut lp_f = LinearProgram::<f64>::new(n);
            let mut lp_q = LinearProgram::<BigRational>::new(n);
            for (i, &c) in obj.iter().enumerate() {
                lp_f.set_cost(i, c);
                lp_q.set_cost(i, LpScalar::from_f64(c));
            }
            for (coeffs, rel, b) in &rows {
                lp_f.add_row(coeffs.clone(), *rel, *b);
                lp_q.add_row(
                    coeffs
                        .iter()
                        .map(|(i, c)| (*i, <BigRational as LpScalar>::from_f64(*c)))
                        .collect(),
                    *rel,
                    LpScalar::from_f64(*b),
                );
            }
            let got_f = solve(&lp_f).unwrap();
            let got_q = solve(&lp_q).unwrap();
            match (got_f, got_q) {
                (
                    LpOutcome::Optimal { value: vf, .. },
                    LpOutcome::Optimal { value: vq, .. },
                ) => {
                    let vq = LpScalar::to_f64(&vq);
                    assert!(
                        (vf - vq).abs() <= 1e-7 * (1.0 + vq.abs()),
                        "f64 {vf} vs exact {vq}"
                    );
                }
                (LpOutcome::Infeasible, LpOutcome::Infeasible) => {}
                (LpOutcome::Unbounded, LpOutcome::Unbounded) => {}
                (a, b) => panic!("status mismatch: {a:?} vs {b:?}"),
            }
        }
    }
}
