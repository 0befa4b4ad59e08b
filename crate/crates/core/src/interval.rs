//! Closed rational intervals, interval vectors and matrices.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, Neg};

use crate::error::{Error, Result};
use crate::rational::{half, Rational};

/// A nonempty closed interval `[lo, hi]` of rationals. A degenerate interval
/// (`lo == hi`) stands for a crisp coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvertedInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(value: Rational) -> Self {
        Interval {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn center(&self) -> Rational {
        (&self.hi + &self.lo) * half()
    }

    pub fn radius(&self) -> Rational {
        (&self.hi - &self.lo) * half()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// The point `lo + t (hi - lo)`; `t` in `[0, 1]` stays inside.
    pub fn lerp(&self, t: &Rational) -> Rational {
        &self.lo + t * (&self.hi - &self.lo)
    }

    /// Range of `a * x` over `a` in the interval.
    pub fn scale(&self, x: &Rational) -> Interval {
        let p = &self.lo * x;
        let q = &self.hi * x;
        if p <= q {
            Interval { lo: p, hi: q }
        } else {
            Interval { lo: q, hi: p }
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Neg for Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        -&self
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_degenerate() {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        IntervalVector(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn center(&self) -> Vec<Rational> {
        self.0.iter().map(Interval::center).collect()
    }

    pub fn radius(&self) -> Vec<Rational> {
        self.0.iter().map(Interval::radius).collect()
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;

    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

/// Dense row-major `rows x cols` interval matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn from_rows(rows: Vec<Vec<Interval>>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "matrix row",
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(IntervalMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Interval {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn center(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Interval::center).collect())
            .collect()
    }

    pub fn radius(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Interval::radius).collect())
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.data.iter().all(Interval::is_degenerate)
    }
}

/// Exact range of `a^T x` as `a` ranges over the box `a`.
///
/// Each coefficient varies independently, so the extremes are sums of the
/// per-entry extremes.
pub fn interval_dot_range(a: &[Interval], x: &[Rational]) -> Result<Interval> {
    if a.len() != x.len() {
        return Err(Error::DimensionMismatch {
            what: "interval dot product",
            expected: a.len(),
            found: x.len(),
        });
    }
    let mut lo = Rational::default();
    let mut hi = Rational::default();
    for (aj, xj) in a.iter().zip(x) {
        let term = aj.scale(xj);
        lo += term.lo;
        hi += term.hi;
    }
    Ok(Interval { lo, hi })
}

/// Iterator over all endpoint assignments of a list of intervals.
///
/// Every non-degenerate entry takes its lower or upper bound; degenerate
/// entries stay fixed. Assignments come in lexicographic order with the lower
/// bound first and the last entry varying fastest.
#[derive(Clone, Debug)]
pub struct EndpointScenarios<'a> {
    entries: &'a [Interval],
    varying: Vec<usize>,
    next: u64,
    total: u64,
}

/// Enumerates the `2^K` endpoint assignments of `entries`, `K` being the
/// number of non-degenerate entries. Fails when `2^K > cap`.
pub fn endpoint_scenarios(entries: &[Interval], cap: u64) -> Result<EndpointScenarios<'_>> {
    let varying: Vec<usize> = entries
        .iter()
        .enumerate()
        .filter(|(_, iv)| !iv.is_degenerate())
        .map(|(k, _)| k)
        .collect();
    let k = varying.len();
    let total = if k < 64 { 1u64 << k } else { u64::MAX };
    if k >= 64 || total > cap {
        return Err(Error::CapExceeded {
            nondegenerate: k,
            cap,
        });
    }
    Ok(EndpointScenarios {
        entries,
        varying,
        next: 0,
        total,
    })
}

fn point_for_code(entries: &[Interval], varying: &[usize], code: u64) -> Vec<Rational> {
    let k = varying.len();
    let mut out: Vec<Rational> = entries.iter().map(|iv| iv.lo.clone()).collect();
    for (rank, &idx) in varying.iter().enumerate() {
        if (code >> (k - 1 - rank)) & 1 == 1 {
            out[idx] = entries[idx].hi.clone();
        }
    }
    out
}

/// The `code`-th assignment in [`endpoint_scenarios`] order.
pub(crate) fn endpoint_point(entries: &[Interval], code: u64) -> Vec<Rational> {
    let varying: Vec<usize> = (0..entries.len())
        .filter(|&k| !entries[k].is_degenerate())
        .collect();
    point_for_code(entries, &varying, code)
}

impl EndpointScenarios<'_> {
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for EndpointScenarios<'_> {
    type Item = Vec<Rational>;

    fn next(&mut self) -> Option<Vec<Rational>> {
        if self.next >= self.total {
            return None;
        }
        let code = self.next;
        self.next += 1;
        Some(point_for_code(self.entries, &self.varying, code))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for EndpointScenarios<'_> {}
