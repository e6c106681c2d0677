//! Sound three-valued checking of [`RealExpFormula`] sentences.
//!
//! `Holds` is certified by a ray `x = B + t·d` along which every conjunct of
//! some alternative tends to `-∞`: each row has `c_j·d < 0`, or `c_j` vanishes
//! on the support of `d` and the log powers there sum to a negative integer.
//!
//! `Fails` is certified, for every alternative, by weights `μ ≥ 0` on the
//! rows such that for every variable the weighted coefficient is either
//! certified positive, or exactly zero with a non-negative weighted log
//! power. The weighted row sum is then bounded below on the domain, so some
//! conjunct stays above every sufficiently negative `C`.
//!
//! Candidate directions and weights come from small linear programs solved
//! in floating point; only the rational candidates are trusted, and only
//! after interval evaluation. Precision starts at 128 bits (or
//! `BIGO_WA_PRECISION_BITS`) and doubles up to 2048.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{ln_rational, Interval};
use crate::rational::{ceil, from_f64_approx, Rational};

use super::formula::{ExpRow, RealExpFormula};

pub const DEFAULT_START_BITS: u32 = 128;
pub const MAX_BITS: u32 = 2048;

/// Objective levels the witness grid must cross.
const GRID_LEVELS: [i64; 3] = [10, 100, 1000];
/// Largest ray parameter tried when building a witness grid.
const MAX_RAY_EXP: u32 = 48;
/// Cap on enumerated supports.
const MAX_SUBSET_DIM: usize = 12;

/// Point of a witness grid: integer variable values and a certified
/// enclosure of the objective `max_j row_j(x)` there.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPoint {
    pub values: Vec<u64>,
    pub objective: Interval,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SemiOutcome {
    Holds { alternative: usize, direction: Vec<Rational>, grid: Vec<RayPoint>, bits: u32 },
    Fails { weights: Vec<Vec<Rational>>, bits: u32 },
    Unknown,
}

impl SemiOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SemiOutcome::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, SemiOutcome::Fails { .. })
    }
}

/// Starting precision: `BIGO_WA_PRECISION_BITS` if set and sane, else 128.
pub fn start_bits() -> u32 {
    std::env::var("BIGO_WA_PRECISION_BITS")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .filter(|&b| (16..=MAX_BITS).contains(&b))
        .unwrap_or(DEFAULT_START_BITS)
}

pub fn semi_decide(f: &RealExpFormula) -> SemiOutcome {
    semi_decide_from(f, start_bits())
}

pub fn semi_decide_from(f: &RealExpFormula, start: u32) -> SemiOutcome {
    let mut bits = start.max(16);
    loop {
        let coeffs: Vec<Vec<Vec<Interval>>> = f
            .alternatives
            .iter()
            .map(|rows| rows.iter().map(|r| r.coeffs.iter().map(|c| c.enclose(bits)).collect()).collect())
            .collect();
        for (a, rows) in f.alternatives.iter().enumerate() {
            if let Some(direction) = certify_holds(rows, &coeffs[a], f.dim()) {
                let grid = witness_grid(rows, &coeffs[a], &direction, &f.lower, bits);
                return SemiOutcome::Holds { alternative: a, direction, grid, bits };
            }
        }
        let weights: Option<Vec<Vec<Rational>>> =
            f.alternatives.iter().enumerate().map(|(a, rows)| certify_fails(rows, &coeffs[a], f.dim())).collect();
        if let Some(weights) = weights {
            return SemiOutcome::Fails { weights, bits };
        }
        if bits >= MAX_BITS {
            return SemiOutcome::Unknown;
        }
        bits *= 2;
    }
}

/// Non-empty subsets of `0..n` as sorted index lists: all of them when `n`
/// is small, else only the full set and singletons.
fn subsets(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return Vec::new();
    }
    if n > MAX_SUBSET_DIM {
        let mut out = vec![(0..n).collect::<Vec<_>>()];
        out.extend((0..n).map(|i| vec![i]));
        return out;
    }
    let mut out: Vec<Vec<usize>> =
        (1u32..(1 << n)).map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect()).collect();
    // larger supports first: they are the usual certificates
    out.sort_by_key(|s| std::cmp::Reverse(s.len()));
    out
}

fn rationalize(v: &[f64]) -> Vec<Rational> {
    v.iter().map(|&x| if x > 0.0 { from_f64_approx(x, 1 << 20) } else { Rational::zero() }).collect()
}

fn certify_holds(rows: &[ExpRow], c: &[Vec<Interval>], dim: usize) -> Option<Vec<Rational>> {
    for support in subsets(dim) {
        let zero_on_support: Vec<bool> =
            rows.iter().map(|r| support.iter().all(|&i| r.coeffs[i].is_zero())).collect();
        let log_ok = rows
            .iter()
            .zip(&zero_on_support)
            .filter(|(_, &z)| z)
            .all(|(r, _)| support.iter().map(|&i| r.log_powers[i]).sum::<i64>() < 0);
        if !log_ok {
            continue;
        }
        let active: Vec<usize> = (0..rows.len()).filter(|&j| !zero_on_support[j]).collect();
        let embed = |d: &[Rational]| {
            let mut full = vec![Rational::zero(); dim];
            for (k, &i) in support.iter().enumerate() {
                full[i] = d[k].clone();
            }
            full
        };
        if active.is_empty() {
            return Some(embed(&vec![Rational::one(); support.len()]));
        }
        // variables: d_i for i in support, then ε; maximize ε
        let n = support.len() + 1;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &j in &active {
            let mut row: Vec<f64> = support.iter().map(|&i| c[j][i].mid_f64()).collect();
            row.push(1.0);
            a.push(row);
            b.push(0.0);
        }
        for k in 0..support.len() {
            let mut row = vec![0.0; n];
            row[k] = -1.0;
            row[n - 1] = 1.0;
            a.push(row);
            b.push(0.0);
        }
        let mut sum = vec![1.0; n];
        sum[n - 1] = 0.0;
        a.push(sum);
        b.push(1.0);
        let mut obj = vec![0.0; n];
        obj[n - 1] = 1.0;
        let Some((eps, x)) = simplex_max(&a, &b, &obj) else { continue };
        if eps <= 1e-15 {
            continue;
        }
        let d = rationalize(&x[..support.len()]);
        if d.iter().any(Zero::is_zero) {
            continue;
        }
        let certified = active.iter().all(|&j| {
            let mut acc = Interval::zero();
            for (k, &i) in support.iter().enumerate() {
                acc = acc.add(&c[j][i].scale(&d[k]));
            }
            acc.is_negative()
        });
        if certified {
            return Some(embed(&d));
        }
    }
    None
}

fn certify_fails(rows: &[ExpRow], c: &[Vec<Interval>], dim: usize) -> Option<Vec<Rational>> {
    if rows.is_empty() {
        return None;
    }
    for subset in subsets(rows.len()) {
        let zero: Vec<bool> = (0..dim).map(|i| subset.iter().all(|&j| rows[j].coeffs[i].is_zero())).collect();
        let n = subset.len() + 1;
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..dim {
            let mut row: Vec<f64> = if zero[i] {
                subset.iter().map(|&j| -(rows[j].log_powers[i] as f64)).collect()
            } else {
                subset.iter().map(|&j| -c[j][i].mid_f64()).collect()
            };
            row.push(if zero[i] { 0.0 } else { 1.0 });
            a.push(row);
            b.push(0.0);
        }
        let mut sum = vec![1.0; n];
        sum[n - 1] = 0.0;
        a.push(sum);
        b.push(1.0);
        let all_zero = zero.iter().all(|&z| z);
        let mut obj = vec![0.0; n];
        if all_zero {
            obj[..subset.len()].fill(1.0);
        } else {
            obj[n - 1] = 1.0;
        }
        let Some((val, x)) = simplex_max(&a, &b, &obj) else { continue };
        if val <= 1e-15 {
            continue;
        }
        let mu = rationalize(&x[..subset.len()]);
        if mu.iter().all(Zero::is_zero) {
            continue;
        }
        let ok = (0..dim).all(|i| {
            if zero[i] {
                let s: Rational = subset
                    .iter()
                    .zip(&mu)
                    .map(|(&j, m)| m * Rational::from_integer(rows[j].log_powers[i].into()))
                    .sum();
                !s.is_negative()
            } else {
                let mut acc = Interval::zero();
                for (&j, m) in subset.iter().zip(&mu) {
                    acc = acc.add(&c[j][i].scale(m));
                }
                acc.is_positive()
            }
        });
        if ok {
            let mut full = vec![Rational::zero(); rows.len()];
            for (&j, m) in subset.iter().zip(mu) {
                full[j] = m;
            }
            return Some(full);
        }
    }
    None
}

/// Enclosure of `max_j row_j(x)` at integer `x`.
pub fn objective(rows: &[ExpRow], c: &[Vec<Interval>], x: &[u64], bits: u32) -> Interval {
    let logs: Vec<Interval> = x
        .iter()
        .map(|&v| if v == 0 { Interval::zero() } else { ln_rational(&Rational::from_integer(v.into()), bits) })
        .collect();
    let mut best: Option<Interval> = None;
    for (j, r) in rows.iter().enumerate() {
        let mut acc = Interval::zero();
        for (i, &v) in x.iter().enumerate() {
            acc = acc.add(&c[j][i].scale(&Rational::from_integer(v.into())));
            if r.log_powers[i] != 0 {
                acc = acc.add(&logs[i].scale(&Rational::from_integer(r.log_powers[i].into())));
            }
        }
        best = Some(match best {
            None => acc,
            Some(b) => Interval::new((&b.lo).max(&acc.lo).clone(), (&b.hi).max(&acc.hi).clone()),
        });
    }
    best.unwrap_or_else(Interval::zero)
}

/// Integer points along `B + t·d` for doubling `t`, keeping those where the
/// objective first drops below each of the grid levels and, failing that,
/// consecutive doublings; the returned objectives strictly decrease.
fn witness_grid(rows: &[ExpRow], c: &[Vec<Interval>], d: &[Rational], lower: &Rational, bits: u32) -> Vec<RayPoint> {
    let b = ceil(lower).to_u64().unwrap_or(0).max(1);
    let point = |t: u64| -> Vec<u64> {
        d.iter()
            .map(|di| {
                let v = Rational::from_integer(b.into()) + di * Rational::from_integer(t.into());
                ceil(&v).to_u64().unwrap_or(u64::MAX)
            })
            .collect()
    };
    let mut samples = Vec::new();
    for e in 0..=MAX_RAY_EXP {
        let x = point(1u64 << e);
        let obj = objective(rows, c, &x, bits);
        samples.push(RayPoint { values: x, objective: obj });
    }
    let mut picked: Vec<RayPoint> = Vec::new();
    for level in GRID_LEVELS {
        let bound = Rational::from_integer((-level).into());
        if let Some(p) = samples.iter().find(|p| p.objective.hi < bound) {
            if picked.last().is_none_or(|q: &RayPoint| p.objective.hi < q.objective.lo) {
                picked.push(p.clone());
            }
        }
    }
    if picked.len() < 3 {
        // fall back to the last strictly decreasing run of samples
        let mut run: Vec<RayPoint> = Vec::new();
        for p in samples {
            if run.last().is_some_and(|q: &RayPoint| p.objective.hi >= q.objective.lo) {
                run.clear();
            }
            run.push(p);
        }
        let k = run.len().min(3);
        if k > picked.len() {
            picked = run.split_off(run.len() - k);
        }
    }
    picked
}

/// Maximizes `c·x` subject to `A·x ≤ b`, `x ≥ 0`, with `b ≥ 0`, by the
/// tableau simplex method with Bland's rule. `None` when unbounded.
pub fn simplex_max(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Option<(f64, Vec<f64>)> {
    const EPS: f64 = 1e-12;
    let m = a.len();
    let n = c.len();
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        debug_assert!(b[i] >= 0.0);
        let mut row = vec![0.0; width];
        row[..n].copy_from_slice(&a[i]);
        row[n + i] = 1.0;
        row[width - 1] = b[i];
        t.push(row);
    }
    let mut z = vec![0.0; width];
    for j in 0..n {
        z[j] = -c[j];
    }
    t.push(z);
    let mut basis: Vec<usize> = (n..n + m).collect();
    for _ in 0..10_000 {
        let Some(col) = (0..n + m).find(|&j| t[m][j] < -EPS) else { break };
        let mut pivot: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][col] > EPS {
                let ratio = t[i][width - 1] / t[i][col];
                let better = match pivot {
                    None => true,
                    Some((p, r)) => ratio < r - EPS || (ratio <= r + EPS && basis[i] < basis[p]),
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        let (p, _) = pivot?;
        let pv = t[p][col];
        for v in t[p].iter_mut() {
            *v /= pv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && row[col].abs() > 0.0 {
                let f = row[col];
                for (v, pvv) in row.iter_mut().zip(&prow) {
                    *v -= f * pvv;
                }
            }
        }
        basis[p] = col;
    }
    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1];
        }
    }
    Some((t[m][width - 1], x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::AlgebraicNumber;
    use crate::bounded::formula::{Coefficient, LogRatio, Provenance};
    use crate::rational::rat;

    fn alg(n: i64, d: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_rational(&rat(n, d))
    }

    #[allow(clippy::type_complexity)]
    fn row(coeffs: &[(u64, (i64, i64), (i64, i64))], logs: &[i64]) -> ExpRow {
        ExpRow {
            coeffs: coeffs
                .iter()
                .map(|&(s, (a, b), (c, d))| Coefficient { scale: s, log: LogRatio::new(alg(a, b), alg(c, d)) })
                .collect(),
            log_powers: logs.to_vec(),
        }
    }

    fn formula(rows: Vec<ExpRow>, lower: Rational) -> RealExpFormula {
        let dim = rows[0].coeffs.len();
        RealExpFormula {
            provenance: Provenance::FinitelyAmbiguous { tuple: 0 },
            vars: (1..=dim).map(|i| format!("x{i}")).collect(),
            lower,
            alternatives: vec![rows],
        }
    }

    #[test]
    fn simplex_small_program() {
        // max x + y s.t. x + 2y ≤ 4, 3x + y ≤ 6
        let (v, x) = simplex_max(&[vec![1.0, 2.0], vec![3.0, 1.0]], &[4.0, 6.0], &[1.0, 1.0]).unwrap();
        assert!((v - 2.8).abs() < 1e-9);
        assert!((x[0] - 1.6).abs() < 1e-9 && (x[1] - 1.2).abs() < 1e-9);
        assert!(simplex_max(&[vec![-1.0]], &[1.0], &[1.0]).is_none());
    }

    #[test]
    fn zero_system_fails() {
        let f = formula(vec![row(&[(1, (1, 2), (1, 2))], &[0])], rat(1, 1));
        assert!(semi_decide(&f).fails());
    }

    #[test]
    fn halving_holds_with_grid() {
        let f = formula(vec![row(&[(1, (1, 2), (1, 1))], &[0])], rat(1, 1));
        match semi_decide(&f) {
            SemiOutcome::Holds { grid, .. } => {
                assert_eq!(grid.len(), 3);
                for w in grid.windows(2) {
                    assert!(w[1].objective.hi < w[0].objective.lo);
                }
            }
            o => panic!("unexpected {o:?}"),
        }
    }

    #[test]
    fn log_terms_decide_the_boundary() {
        let lower = rat(1, 1);
        let neg = formula(vec![row(&[(1, (1, 1), (1, 1))], &[-1])], lower.clone());
        assert!(semi_decide(&neg).holds());
        let pos = formula(vec![row(&[(1, (1, 1), (1, 1))], &[1])], lower);
        assert!(semi_decide(&pos).fails());
    }

    #[test]
    fn opposing_rows_need_a_cone() {
        // 0.61 vs 0.6 on x1 and 0.39 vs 0.4 on x2; 0.59/0.6 and 0.41/0.4
        let rows = |p: i64| {
            vec![
                row(&[(1, (p, 100), (3, 5)), (1, (39, 100), (2, 5))], &[0, 0]),
                row(&[(1, (59, 100), (3, 5)), (1, (41, 100), (2, 5))], &[0, 0]),
            ]
        };
        assert!(semi_decide(&formula(rows(61), rat(1, 1))).holds());
        assert!(semi_decide(&formula(rows(62), rat(1, 1))).fails());
    }
}
