//! Rational points of bounded height on the affine surface.
//!
//! The height of `p/q` in lowest terms is `max(|p|, q)`, and a point
//! `(x, y, t)` has height `hgt(x) + hgt(t)`; `y` is determined up to sign.
//! `N(B)` counts points with height at most `B`, both signs of a nonzero
//! `y` included.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{Field, Rational};
use crate::surface::QuadraticFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountingError {
    #[error("need at least 3 height bounds with nonzero counts, got {0}")]
    InsufficientData(usize),
    #[error("height bounds must be positive and strictly increasing")]
    BadBounds,
}

/// `max(|p|, q)` for `p/q` in lowest terms; `height(0) = 1`.
pub fn height(r: &Rational) -> BigInt {
    r.height()
}

fn small_height(r: &Rational) -> u64 {
    r.height().to_u64().expect("enumerated heights are small")
}

/// Every rational of height at most `h`, ordered by height, then value.
pub fn rationals_up_to_height(h: u64) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    for k in 1..=h as i64 {
        let mut level = Vec::new();
        for q in 1..=k {
            // max(|p|, q) = k: either q = k and |p| <= k, or |p| = k and q < k
            let ps: Vec<i64> = if q == k { (1..=k).collect() } else { vec![k] };
            for p in ps {
                if p.gcd(&q) == 1 {
                    level.push(Rational::new(p, q));
                    level.push(Rational::new(-p, q));
                }
            }
        }
        level.sort();
        out.extend(level);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CensusPoint {
    pub x: Rational,
    pub y: Rational,
    pub t: Rational,
    pub height: u64,
}

/// All points with `hgt(x) + hgt(t) <= bound`, `x` not in `exclude`.
///
/// Ordered by `x` (height, then value), then `t`, then `y`.
pub fn enumerate_points(f: &QuadraticFamily, bound: u64, exclude: &[Rational]) -> Vec<CensusPoint> {
    if bound < 2 {
        return Vec::new();
    }
    let rationals = rationals_up_to_height(bound - 1);
    let xs: Vec<&Rational> = rationals.iter().filter(|x| !exclude.contains(x)).collect();
    xs.par_iter()
        .map(|x| {
            let hx = small_height(x);
            let mut pts = Vec::new();
            for t in rationals.iter().take_while(|t| hx + small_height(t) <= bound) {
                let Some(y) = f.rhs(*x, t).sqrt() else { continue };
                let height = hx + small_height(t);
                if !y.is_zero() {
                    pts.push(CensusPoint { x: (*x).clone(), y: -y.clone(), t: t.clone(), height });
                }
                pts.push(CensusPoint { x: (*x).clone(), y, t: t.clone(), height });
            }
            pts
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightCensus {
    pub b_values: Vec<u64>,
    pub counts: Vec<u64>,
    /// Points per fiber `x` at the largest bound.
    pub per_fiber: BTreeMap<Rational, u64>,
    /// Log-log slope of `N` against `B`, when there are enough nonzero counts.
    pub fitted_epsilon: Option<f64>,
}

/// `N(B)` for each bound, from one enumeration at the largest bound.
pub fn census(f: &QuadraticFamily, b_values: &[u64], exclude: &[Rational]) -> Result<HeightCensus, CountingError> {
    if b_values.is_empty() || b_values[0] == 0 || b_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CountingError::BadBounds);
    }
    let points = enumerate_points(f, *b_values.last().unwrap(), exclude);
    let counts: Vec<u64> =
        b_values.iter().map(|&b| points.iter().filter(|p| p.height <= b).count() as u64).collect();
    let mut per_fiber = BTreeMap::new();
    for p in &points {
        *per_fiber.entry(p.x.clone()).or_insert(0) += 1;
    }
    let mut c = HeightCensus { b_values: b_values.to_vec(), counts, per_fiber, fitted_epsilon: None };
    c.fitted_epsilon = growth_report(&c).ok().map(|g| g.slope);
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub slope: f64,
    pub table: Vec<GrowthRow>,
}

/// Least-squares slope of `log N` against `log B` over the bounds with
/// nonzero counts.
pub fn growth_report(c: &HeightCensus) -> Result<GrowthReport, CountingError> {
    let table: Vec<GrowthRow> = c.b_values.iter().zip(&c.counts).map(|(&b, &n)| GrowthRow { b, n }).collect();
    let pts: Vec<(f64, f64)> =
        table.iter().filter(|r| r.n > 0).map(|r| ((r.b as f64).ln(), (r.n as f64).ln())).collect();
    if pts.len() < 3 {
        return Err(CountingError::InsufficientData(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(GrowthReport { slope: sxy / sxx, table })
}
