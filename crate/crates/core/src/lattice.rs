//! Level-set counts on boxes `[0, n_1) x ... x [0, n_k)`.
//!
//! `C_m` counts points whose coordinates sum to exactly `m`, `S_m` those
//! summing to less than `m` and `L_m` those summing to more than `m`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::CountError;
use crate::graph::{component_labels, GraphSpec};

/// Number of box points at every level `0..=Σ(n_i - 1)`.
pub fn level_distribution(dims: &[usize]) -> Vec<BigUint> {
    let mut poly = vec![BigUint::one()];
    for &n in dims {
        if n == 0 {
            return vec![BigUint::zero()];
        }
        let len = poly.len() + n - 1;
        let mut next = vec![BigUint::zero(); len];
        // next[j] = poly[j-n+1] + ... + poly[j], as a running window sum.
        let mut window = BigUint::zero();
        for (j, slot) in next.iter_mut().enumerate() {
            if j < poly.len() {
                window += &poly[j];
            }
            if j >= n && j - n < poly.len() {
                window -= &poly[j - n];
            }
            *slot = window.clone();
        }
        poly = next;
    }
    poly
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCounts {
    pub m: i64,
    pub c: BigUint,
    pub s: BigUint,
    pub l: BigUint,
}

pub fn level_counts(dims: &[usize], m: i64) -> LevelCounts {
    let dist = level_distribution(dims);
    let mut c = BigUint::zero();
    let mut s = BigUint::zero();
    let mut l = BigUint::zero();
    for (j, count) in dist.iter().enumerate() {
        match (j as i64).cmp(&m) {
            std::cmp::Ordering::Less => s += count,
            std::cmp::Ordering::Equal => c += count,
            std::cmp::Ordering::Greater => l += count,
        }
    }
    LevelCounts { m, c, s, l }
}

pub fn count_level(dims: &[usize], m: i64) -> BigUint {
    level_counts(dims, m).c
}

pub fn count_below(dims: &[usize], m: i64) -> BigUint {
    level_counts(dims, m).s
}

pub fn count_above(dims: &[usize], m: i64) -> BigUint {
    level_counts(dims, m).l
}

pub fn box_size(dims: &[usize]) -> BigUint {
    dims.iter().map(|&n| BigUint::from(n)).product()
}

/// `C(n, k)`, zero whenever `n < 0`, `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Inclusion-exclusion count of points of `[0, n)^a` at level `b`, with the
/// alternating sum truncated after `⌊a/2⌋` terms.
pub fn level_closed_form(a: usize, b: i64, n: usize) -> BigInt {
    let (ai, ni) = (a as i64, n as i64);
    let mut total = BigInt::zero();
    for k in 0..=(ai / 2) {
        let term = binomial(ai, k) * binomial(b - k * ni + ai - 1, ai - 1);
        if k.is_even() {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Which box family a closed form describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormCase {
    /// `(n, n)`
    A,
    /// `(n/2 - 1, n/2 - 1, n)`
    B,
    /// `(n/2 - 1, n, n)`
    C,
    /// `(n, n, n)`
    D,
}

impl FormCase {
    pub const ALL: [FormCase; 4] = [FormCase::A, FormCase::B, FormCase::C, FormCase::D];

    pub fn dims(self, n: usize) -> Vec<usize> {
        match self {
            FormCase::A => vec![n, n],
            FormCase::B => vec![n / 2 - 1, n / 2 - 1, n],
            FormCase::C => vec![n / 2 - 1, n, n],
            FormCase::D => vec![n, n, n],
        }
    }

    /// Levels `m` for which the closed form is stated, or `None` if `n` itself
    /// is out of range.
    pub fn level_range(self, n: usize) -> Option<std::ops::RangeInclusive<i64>> {
        let n = n as i64;
        match self {
            FormCase::A if n >= 2 => Some(1..=n - 1),
            FormCase::B | FormCase::C if n >= 4 && n % 2 == 0 => Some(n / 2..=n - 1),
            FormCase::D if n >= 2 => Some(1..=3 * (n - 1) / 2),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// Points at level exactly `m`.
    Level,
    /// Points below level `m`.
    Below,
}

/// How to read "below": `AtMost` counts sums `<= m` as the binomial
/// expressions do, `Strict` counts sums `< m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reading {
    AtMost,
    Strict,
}

fn level_expr(case: FormCase, n: i64, m: i64) -> BigInt {
    let h = n / 2;
    match case {
        FormCase::A => BigInt::from(m + 1),
        FormCase::B => binomial(m + 2, 2) - 2 * binomial(m - h + 3, 2),
        FormCase::C => binomial(m + 2, 2) - binomial(m - h + 3, 2),
        FormCase::D => binomial(m + 2, 2) - 3 * binomial(m - n + 2, 2),
    }
}

fn at_most_expr(case: FormCase, n: i64, m: i64) -> BigInt {
    let h = n / 2;
    match case {
        FormCase::A => binomial(m + 2, 2),
        FormCase::B => binomial(m + 3, 3) - 2 * binomial(m - h + 4, 3),
        FormCase::C => binomial(m + 3, 3) - binomial(m - h + 4, 3),
        FormCase::D => binomial(m + 3, 3) - 3 * binomial(m - n + 3, 3),
    }
}

/// The exact binomial expressions for the four box families.
pub fn special_form(
    case: FormCase,
    quantity: Quantity,
    reading: Reading,
    n: usize,
    m: i64,
) -> Result<BigInt, CountError> {
    let range = case
        .level_range(n)
        .ok_or_else(|| CountError::Domain(format!("case {case:?} is not defined for n={n}")))?;
    if !range.contains(&m) {
        return Err(CountError::Domain(format!(
            "case {case:?} with n={n} requires m in {}..={}, got {m}",
            range.start(),
            range.end()
        )));
    }
    let n = n as i64;
    Ok(match (quantity, reading) {
        (Quantity::Level, _) => level_expr(case, n, m),
        (Quantity::Below, Reading::AtMost) => at_most_expr(case, n, m),
        (Quantity::Below, Reading::Strict) => at_most_expr(case, n, m - 1),
    })
}

/// What a special form should equal, computed by counting.
pub fn special_form_oracle(
    case: FormCase,
    quantity: Quantity,
    reading: Reading,
    n: usize,
    m: i64,
) -> BigUint {
    let dims = case.dims(n);
    match (quantity, reading) {
        (Quantity::Level, _) => count_level(&dims, m),
        (Quantity::Below, Reading::AtMost) => count_below(&dims, m + 1),
        (Quantity::Below, Reading::Strict) => count_below(&dims, m),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeComponentBound {
    pub best_m: Option<i64>,
    pub bound: BigUint,
}

/// Best level-set lower bound on the largest component left by `c` cops:
/// the maximum of `L_m` over levels `m >= 1` with `C_m >= c`.
pub fn min_large_component_bound(c: usize, dims: &[usize]) -> LargeComponentBound {
    if c == 0 {
        return LargeComponentBound {
            best_m: None,
            bound: box_size(dims),
        };
    }
    let dist = level_distribution(dims);
    let total = box_size(dims);
    let mut best: Option<(i64, BigUint)> = None;
    let mut below = dist.first().cloned().unwrap_or_default();
    for m in 1..dist.len() {
        let cm = &dist[m];
        if *cm >= BigUint::from(c) {
            let l = &total - &below - cm;
            if best.as_ref().is_none_or(|(_, b)| l > *b) {
                best = Some((m as i64, l));
            }
        }
        below += cm;
    }
    match best {
        Some((m, bound)) => LargeComponentBound {
            best_m: Some(m),
            bound,
        },
        None => LargeComponentBound {
            best_m: None,
            bound: BigUint::zero(),
        },
    }
}

pub const DEFAULT_SUBSET_CAP: u128 = 10_000_000;

/// Exact minimum, over cop sets of size at most `c`, of the largest
/// component of the box graph with those vertices removed.
pub fn exhaustive_l(c: usize, dims: &[usize], cap: u128) -> Result<usize, CountError> {
    let g = GraphSpec::grid(dims).map_err(|e| CountError::Domain(e.to_string()))?;
    let v = g.vertex_count();
    if c >= v {
        return Ok(0);
    }
    let subsets = binomial(v as i64, c as i64).to_u128().unwrap_or(u128::MAX);
    if subsets > cap {
        return Err(CountError::TooLarge { subsets, cap });
    }
    // Removing more vertices never enlarges a component, so only |S| = c matters.
    let mut pick: Vec<usize> = (0..c).collect();
    let mut best = usize::MAX;
    let mut blocked = vec![false; v];
    loop {
        for &p in &pick {
            blocked[p] = true;
        }
        let (_, sizes) = component_labels(&g, &blocked);
        best = best.min(sizes.into_iter().max().unwrap_or(0));
        for &p in &pick {
            blocked[p] = false;
        }
        // Next c-combination in lexicographic order.
        let mut i = c;
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            if pick[i] < v - c + i {
                pick[i] += 1;
                for j in i + 1..c {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
        if c == 0 {
            return Ok(best);
        }
    }
}

pub fn harmonic(n: u64) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, k| {
        acc + BigRational::new(BigInt::one(), BigInt::from(k))
    })
}

/// `1 - n + (n + 1) H_n`.
pub fn aggregate_potential_identity(n: u64) -> BigRational {
    let n_big = BigRational::from_integer(BigInt::from(n));
    BigRational::one() - &n_big + (n_big + BigRational::one()) * harmonic(n)
}

/// Total potential one cop exerts on all vertices of the n-cube:
/// `1 + Σ_{k=1..n} C(n,k) / C(n,k-1)`. Checked against the harmonic identity.
pub fn aggregate_potential(n: u64) -> BigRational {
    let ni = n as i64;
    let mut total = BigRational::one();
    for k in 1..=ni {
        total += BigRational::new(binomial(ni, k), binomial(ni, k - 1));
    }
    assert_eq!(
        total,
        aggregate_potential_identity(n),
        "harmonic identity failed at n={n}"
    );
    total
}
