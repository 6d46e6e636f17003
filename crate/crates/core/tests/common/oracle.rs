//! Brute-force lattice-path oracle.
//!
//! Enumerates *every* concave lattice path from `(0,0)` to
//! `(m, floor(m*theta))` whose vertices stay on or below `y = theta*x`
//! (resp. every convex path to `(m, ceil(m*theta))` staying on or above),
//! then picks the pointwise-extremal one by total area. The extremal path's
//! consecutive lattice points give the expected partition. Exponential in
//! `m`, but fine for the ranges the checks sweep.

use ech_kit::exactnum::PerturbedRational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

type Point = (i64, BigInt);

/// All-paths reference for the positive partition of `m` at `theta`.
pub fn positive_partition_by_enumeration(theta: &PerturbedRational, m: u64) -> Vec<u64> {
    extremal_partition(theta, m, Side::Below)
}

/// All-paths reference for the negative partition of `m` at `theta`.
pub fn negative_partition_by_enumeration(theta: &PerturbedRational, m: u64) -> Vec<u64> {
    extremal_partition(theta, m, Side::Above)
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Below, // concave paths under the line; keep the area-maximal one
    Above, // convex paths over the line; keep the area-minimal one
}

fn extremal_partition(theta: &PerturbedRational, m: u64, side: Side) -> Vec<u64> {
    let theta = theta.fractional_part();
    let m = m as i64;
    let end_y = match side {
        Side::Below => theta.scaled(&BigInt::from(m)).floor(),
        Side::Above => theta.scaled(&BigInt::from(m)).ceil(),
    };
    let mut best: Option<(BigInt, Vec<Point>)> = None;
    let mut path = vec![(0i64, BigInt::zero())];
    search(&theta, m, &end_y, side, &mut path, &mut best);
    let (_, best_path) = best.expect("at least one lattice path exists");
    // Split each edge at its interior lattice points.
    let mut parts = Vec::new();
    for w in best_path.windows(2) {
        let dx = w[1].0 - w[0].0;
        let dy = &w[1].1 - &w[0].1;
        let g = dy.gcd(&BigInt::from(dx)).to_u64().unwrap();
        for _ in 0..g {
            parts.push((dx as u64) / g);
        }
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Depth-first over vertex sequences with strictly decreasing (Below) or
/// strictly increasing (Above) slopes. Vertex y-ranges are clamped to
/// `[0, floor(nx*theta)]` below and `[ceil(nx*theta), ceil(m*theta)]` above;
/// paths outside those bands are either invalid or dominated by the extremal
/// one, so dropping them cannot change the winner.
fn search(
    theta: &PerturbedRational,
    m: i64,
    end_y: &BigInt,
    side: Side,
    path: &mut Vec<Point>,
    best: &mut Option<(BigInt, Vec<Point>)>,
) {
    let (x, y) = path.last().unwrap().clone();
    if x == m {
        if y != *end_y {
            return;
        }
        let area = twice_area(path);
        let better = match (side, best.as_ref()) {
            (_, None) => true,
            (Side::Below, Some((a, _))) => area > *a,
            (Side::Above, Some((a, _))) => area < *a,
        };
        if better {
            *best = Some((area, path.clone()));
        }
        return;
    }
    for nx in (x + 1)..=m {
        let line = match side {
            Side::Below => theta.scaled(&BigInt::from(nx)).floor(),
            Side::Above => theta.scaled(&BigInt::from(nx)).ceil(),
        };
        let (lo, hi) = match side {
            Side::Below => (BigInt::zero(), line),
            Side::Above => (line, theta.scaled(&BigInt::from(m)).ceil()),
        };
        let mut ny = lo;
        while ny <= hi {
            if slope_ok(path, x, &y, nx, &ny, side) {
                path.push((nx, ny.clone()));
                search(theta, m, end_y, side, path, best);
                path.pop();
            }
            ny += 1;
        }
    }
}

/// Compare the incoming edge against the proposed next edge:
/// dy0/dx0 vs dy1/dx1 as dy0*dx1 vs dy1*dx0.
fn slope_ok(path: &[Point], x: i64, y: &BigInt, nx: i64, ny: &BigInt, side: Side) -> bool {
    if path.len() < 2 {
        return true;
    }
    let (px, py) = &path[path.len() - 2];
    let dy0 = y - py;
    let dx0 = BigInt::from(x - px);
    let dy1 = ny - y;
    let dx1 = BigInt::from(nx - x);
    match side {
        Side::Below => dy0 * dx1 > dy1 * dx0,
        Side::Above => dy0 * dx1 < dy1 * dx0,
    }
}

/// Twice the area between the path and the x-axis (trapezoid rule). Among
/// paths with common endpoints, the pointwise-extremal one is the unique
/// area extremum.
fn twice_area(path: &[Point]) -> BigInt {
    let mut acc = BigInt::zero();
    for w in path.windows(2) {
        acc += (&w[0].1 + &w[1].1) * BigInt::from(w[1].0 - w[0].0);
    }
    acc
}
