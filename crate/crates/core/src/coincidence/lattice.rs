//! Integer lattice algebra for linear torus pairs: Smith normal form and
//! the congruence `C x ≡ d (mod Z^n)` on `T^m`.

use num_traits::{Signed, ToPrimitive, Zero};

use super::CoincidenceError;
use crate::linalg::{Rational, RationalMatrix};

/// `U C V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | ...`, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    pub diagonal: Vec<i128>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

pub fn smith_normal_form(c: &[Vec<i64>]) -> SmithForm {
    let n = c.len();
    let m = c.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = c.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut u = identity(n);
    let mut v = identity(m);
    let mut diagonal = Vec::new();
    for t in 0..n.min(m) {
        loop {
            let Some((pi, pj)) = min_entry(&a, t) else {
                return SmithForm { u, v, diagonal };
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    row_axpy(&mut a, i, t, -q);
                    row_axpy(&mut u, i, t, -q);
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..m {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    col_axpy(&mut a, j, t, -q);
                    col_axpy(&mut v, j, t, -q);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let p = a[t][t];
            let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    row_axpy(&mut a, t, i, 1);
                    row_axpy(&mut u, t, i, 1);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut().chain(u[t].iter_mut()) {
                *x = -*x;
            }
        }
        diagonal.push(a[t][t]);
    }
    SmithForm { u, v, diagonal }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn min_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<i128>], i: usize, j: usize) {
    for row in a {
        row.swap(i, j);
    }
}

// row[dst] += k * row[src]
fn row_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    let s = a[src].clone();
    for (x, y) in a[dst].iter_mut().zip(s) {
        *x += k * y;
    }
}

// col[dst] += k * col[src]
fn col_axpy(a: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    for row in a {
        row[dst] += k * row[src];
    }
}

/// Solution set of `C x ≡ d (mod Z^n)` in `T^m`: a disjoint union of
/// affine subtori `basepoint + span(tangent)`, all translates of one another.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceSolution {
    /// One basepoint per component, reduced to `[0,1)^m`.
    pub basepoints: Vec<Vec<Rational>>,
    /// Integer directions spanning each component (`m - rank` vectors).
    pub tangent: Vec<Vec<i64>>,
    /// Integer directions completing `tangent` to a positively oriented
    /// basis of `Z^m` (`rank` vectors, frame first).
    pub frame: Vec<Vec<i64>>,
    pub rank: usize,
}

/// Hard cap on the number of enumerated components.
pub const MAX_COMPONENTS: u64 = 100_000;

pub fn solve_congruence(c: &[Vec<i64>], d: &[Rational]) -> Result<CongruenceSolution, CoincidenceError> {
    let n = c.len();
    let m = c.first().map_or(0, Vec::len);
    let snf = smith_normal_form(c);
    let r = snf.rank();
    let e: Vec<Rational> = snf
        .u
        .iter()
        .map(|row| row.iter().zip(d).map(|(&x, di)| Rational::from_integer(x.into()) * di).sum())
        .collect();
    let column = |j: usize| -> Result<Vec<i64>, CoincidenceError> {
        snf.v
            .iter()
            .map(|row| i64::try_from(row[j]).map_err(|_| CoincidenceError::Overflow))
            .collect()
    };
    let mut frame = (0..r).map(column).collect::<Result<Vec<_>, _>>()?;
    let mut tangent = (r..m).map(column).collect::<Result<Vec<_>, _>>()?;
    let v = RationalMatrix::from_columns(m, &frame.iter().chain(&tangent).map(|c| to_rational(c)).collect::<Vec<_>>());
    if v.determinant().is_negative() {
        match (frame.first_mut(), tangent.first_mut()) {
            (Some(f), _) | (None, Some(f)) => f.iter_mut().for_each(|x| *x = -*x),
            _ => {}
        }
    }
    if e[r..n].iter().any(|x| !x.is_integer()) {
        return Ok(CongruenceSolution { basepoints: Vec::new(), tangent, frame, rank: r });
    }
    let count = snf.diagonal.iter().try_fold(1u64, |acc, &x| acc.checked_mul(u64::try_from(x).ok()?));
    if !count.is_some_and(|c| c <= MAX_COMPONENTS) {
        return Err(CoincidenceError::TooManyComponents);
    }
    let vm = RationalMatrix::from_columns(m, &(0..m).map(|j| column(j).map(|c| to_rational(&c))).collect::<Result<Vec<_>, _>>()?);
    let mut basepoints = Vec::new();
    let mut k = vec![0i128; r];
    loop {
        let mut y = vec![Rational::zero(); m];
        for i in 0..r {
            y[i] = (&e[i] + Rational::from_integer(k[i].into())) / Rational::from_integer(snf.diagonal[i].into());
        }
        let x: Vec<Rational> = vm.mul_vec(&y).into_iter().map(|v| &v - v.floor()).collect();
        basepoints.push(x);
        // odometer over k_i in 0..d_i
        let mut i = 0;
        while i < r {
            k[i] += 1;
            if k[i] < snf.diagonal[i] {
                break;
            }
            k[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    basepoints.sort();
    Ok(CongruenceSolution { basepoints, tangent, frame, rank: r })
}

fn to_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

/// Rational to f64 for display and numerics.
pub fn to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}
