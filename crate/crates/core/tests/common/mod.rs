//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the library's geometry.

#![allow(dead_code)]

use std::collections::HashSet;

use conehilb::{IntMat, IntVec, SimplicialCone};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type V = Vec<i64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn big(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn small(v: &[BigInt]) -> V {
    v.iter().map(|x| x.to_i64().expect("fits i64")).collect()
}

pub fn mat(rows: &[V]) -> IntMat {
    IntMat::from_rows(rows.iter().map(|r| big(r)).collect())
}

pub fn simplex(rows: &[V]) -> SimplicialCone {
    SimplicialCone::closed(rows.iter().map(|r| big(r)).collect()).expect("independent rows")
}

/// Determinant by cofactor expansion along the first row.
pub fn det(rows: &[V]) -> i128 {
    let n = rows.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return rows[0][0] as i128;
    }
    let mut total = 0i128;
    for j in 0..n {
        if rows[0][j] == 0 {
            continue;
        }
        let minor: Vec<V> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * rows[0][j] as i128 * det(&minor);
    }
    total
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn primitive(v: &[i64]) -> V {
    let g = v.iter().fold(0, |a, &b| gcd(a, b));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Facet normals of a full-dimensional pointed cone in dimension 2 or 3,
/// from all normals of generator pairs (or single generators in 2D).
pub fn oracle_forms(gens: &[V]) -> Vec<V> {
    let d = gens[0].len();
    let mut normals: Vec<V> = Vec::new();
    match d {
        2 => {
            for g in gens {
                normals.push(vec![-g[1], g[0]]);
            }
        }
        3 => {
            for (i, a) in gens.iter().enumerate() {
                for b in &gens[i + 1..] {
                    normals.push(vec![
                        a[1] * b[2] - a[2] * b[1],
                        a[2] * b[0] - a[0] * b[2],
                        a[0] * b[1] - a[1] * b[0],
                    ]);
                }
            }
        }
        _ => panic!("oracle forms only in dimension 2 and 3"),
    }
    let mut out: Vec<V> = Vec::new();
    for n in normals {
        if n.iter().all(|&x| x == 0) {
            continue;
        }
        for cand in [n.clone(), n.iter().map(|x| -x).collect::<V>()] {
            let vals: Vec<i128> = gens.iter().map(|g| dot(&cand, g)).collect();
            // a facet: nonnegative everywhere and zero on d-1 independent generators
            if vals.iter().all(|&v| v >= 0) && vals.iter().any(|&v| v > 0) {
                let p = primitive(&cand);
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    out
}

pub fn in_cone(forms: &[V], x: &[i64]) -> bool {
    forms.iter().all(|f| dot(f, x) >= 0)
}

/// `x` in the closed simplicial cone over `rows`, by Cramer's rule.
pub fn in_simplex(rows: &[V], x: &[i64]) -> bool {
    let d0 = det(rows);
    (0..rows.len()).all(|i| {
        let mut r = rows.to_vec();
        r[i] = x.to_vec();
        let di = det(&r);
        di == 0 || (di > 0) == (d0 > 0)
    })
}

/// Lattice points `x` of the cone with `x[0] == k`, where every generator has
/// positive first coordinate. `visit` gets each point.
pub fn level_points(gens: &[V], forms: &[V], k: i64, mut visit: impl FnMut(&[i64])) {
    let d = gens[0].len();
    // the slice x[0] = k is conv(k g / g[0]), so each coordinate is boxed by the vertex ratios
    let bounds: Vec<(i64, i64)> = (1..d)
        .map(|j| {
            let lo = gens.iter().map(|g| div_floor(k * g[j], g[0])).min().unwrap();
            let hi = gens.iter().map(|g| div_ceil(k * g[j], g[0])).max().unwrap();
            (lo, hi)
        })
        .collect();
    let mut x = vec![0i64; d];
    x[0] = k;
    fill(&mut x, 1, &bounds, forms, &mut visit);
}

fn fill(x: &mut V, j: usize, bounds: &[(i64, i64)], forms: &[V], visit: &mut impl FnMut(&[i64])) {
    let d = x.len();
    if j == d {
        if in_cone(forms, x) {
            visit(x);
        }
        return;
    }
    let (lo, hi) = bounds[j - 1];
    for v in lo..=hi {
        x[j] = v;
        fill(x, j + 1, bounds, forms, visit);
    }
}

/// Floor of `a / b` for `b > 0`.
pub fn div_floor(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// Ceiling of `a / b` for `b > 0`.
pub fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

/// Hilbert basis of a full-dimensional cone whose generators have positive
/// first coordinate, by enumerating all points with `x[0] <= 2 max g[0]` and
/// pairwise reduction. Valid in dimension at most 3.
pub fn oracle_hilbert_basis(gens: &[V]) -> HashSet<V> {
    let forms = oracle_forms(gens);
    let bound = 2 * gens.iter().map(|g| g[0]).max().unwrap();
    let mut points: Vec<V> = Vec::new();
    for k in 1..=bound {
        level_points(gens, &forms, k, |x| points.push(x.to_vec()));
    }
    let set: HashSet<V> = points.iter().cloned().collect();
    points
        .iter()
        .filter(|x| {
            // a decomposition x = y + z has a summand with y[0] <= x[0] / 2
            !points.iter().take_while(|y| 2 * y[0] <= x[0]).any(|y| {
                let z: V = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                set.contains(&z)
            })
        })
        .cloned()
        .collect()
}

/// Number of lattice points of the cone with `x[0] == k` for `k < n`.
pub fn oracle_counts(gens: &[V], n: usize) -> Vec<u64> {
    let forms = oracle_forms(gens);
    (0..n as i64)
        .map(|k| {
            if k == 0 {
                return 1;
            }
            let mut c = 0;
            level_points(gens, &forms, k, |_| c += 1);
            c
        })
        .collect()
}

/// Random full-dimensional cone in dimension `d` (2 or 3) with generators of
/// positive first coordinate, entries at most `max_entry` in absolute value
/// and every `d`-subset determinant at most `max_det`.
pub fn random_cone(rng: &mut ChaCha8Rng, d: usize, max_entry: i64, max_det: i128) -> Vec<V> {
    loop {
        let n = rng.random_range(d..=d + 3);
        let h = rng.random_range(1..=max_entry / 2);
        let spread = rng.random_range(1..=max_entry);
        let mut gens: Vec<V> = Vec::new();
        for _ in 0..n {
            let mut g = vec![rng.random_range(h..=(2 * h).min(max_entry))];
            for _ in 1..d {
                g.push(rng.random_range(-spread..=spread));
            }
            if !gens.contains(&g) {
                gens.push(g);
            }
        }
        if gens.len() < d {
            continue;
        }
        let dets = subsets(gens.len(), d).into_iter().map(|idx| {
            let rows: Vec<V> = idx.iter().map(|&i| gens[i].clone()).collect();
            det(&rows).abs()
        });
        let mut full = false;
        let mut ok = true;
        for v in dets {
            full |= v != 0;
            ok &= v <= max_det;
        }
        if full && ok {
            return gens;
        }
    }
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Random nonsingular `d x d` matrix with entries in `[-max_entry, max_entry]`
/// and `1 < |det| <= max_det` (or exactly 1 if `max_det == 1`).
pub fn random_simplex(rng: &mut ChaCha8Rng, d: usize, max_entry: i64, max_det: i128) -> Vec<V> {
    loop {
        let rows: Vec<V> = (0..d)
            .map(|_| (0..d).map(|_| rng.random_range(-max_entry..=max_entry)).collect())
            .collect();
        let v = det(&rows).abs();
        if v != 0 && v <= max_det && (v > 1 || max_det == 1) {
            return rows;
        }
    }
}

/// Random unimodular matrix with its inverse, built from elementary row operations.
pub fn random_unimodular(rng: &mut ChaCha8Rng, d: usize, steps: usize) -> (Vec<V>, Vec<V>) {
    let mut t: Vec<V> = (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect();
    let mut inv = t.clone();
    for _ in 0..steps {
        let i = rng.random_range(0..d);
        let j = rng.random_range(0..d);
        if i == j {
            continue;
        }
        let c = rng.random_range(-2..=2i64);
        // t <- E t with E = I + c e_i e_j; inv <- inv E^{-1}
        for k in 0..d {
            t[i][k] += c * t[j][k];
        }
        for row in inv.iter_mut() {
            row[j] -= c * row[i];
        }
    }
    (t, inv)
}

/// Row vector times matrix.
pub fn apply(x: &[i64], m: &[V]) -> V {
    (0..m[0].len()).map(|j| x.iter().zip(m).map(|(a, row)| a * row[j]).sum()).collect()
}

/// Minimum of `N.x` over the nonzero lattice points of the closed simplex with
/// `N.x < N.x_1`, by scanning the bounding box of the parallelepiped.
pub fn oracle_star_min(rows: &[V], normal: &[i64]) -> Option<(i128, V)> {
    let d = rows.len();
    let height = dot(normal, &rows[0]);
    let bounds: Vec<(i64, i64)> = (0..d)
        .map(|j| {
            let lo: i64 = rows.iter().map(|r| r[j].min(0)).sum();
            let hi: i64 = rows.iter().map(|r| r[j].max(0)).sum();
            (lo, hi)
        })
        .collect();
    let mut best: Option<(i128, V)> = None;
    let mut x = vec![0i64; d];
    scan(&mut x, 0, &bounds, &mut |x| {
        if x.iter().all(|&v| v == 0) {
            return;
        }
        let h = dot(normal, x);
        if h >= height || best.as_ref().is_some_and(|(b, _)| *b <= h) {
            return;
        }
        if in_simplex(rows, x) {
            best = Some((h, x.to_vec()));
        }
    });
    best
}

pub fn scan(x: &mut V, j: usize, bounds: &[(i64, i64)], visit: &mut impl FnMut(&[i64])) {
    if j == x.len() {
        visit(x);
        return;
    }
    for v in bounds[j].0..=bounds[j].1 {
        x[j] = v;
        scan(x, j + 1, bounds, visit);
    }
}

/// Number of lattice points of the bounding box of the parallelepiped.
pub fn box_size(rows: &[V]) -> u64 {
    let d = rows.len();
    (0..d)
        .map(|j| {
            let lo: i64 = rows.iter().map(|r| r[j].min(0)).sum();
            let hi: i64 = rows.iter().map(|r| r[j].max(0)).sum();
            (hi - lo + 1) as u64
        })
        .product()
}
