//! Merging per-simplex data: global reduction to the Hilbert basis, series
//! accumulation and run statistics.

use std::collections::BTreeMap;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{dot, is_zero_vec, IntVec};
use crate::cone::{build_cone, triangulate, ConeInput};
use crate::arith::IntMat;
use crate::error::{Error, Result};
use crate::hull::hull;
use crate::scalar::{max_bits, Scalar, Width};
use crate::series::{lcm_all, poly_add_assign, HilbertSeries, Poly};
use crate::simplex::{evaluate, with_width, SeriesContribution, MAX_SERIES_DEGREE};
use crate::simplicial::SimplicialCone;

/// Largest determinant `bottom_volume` accepts.
pub const BOTTOM_VOLUME_GUARD: u64 = 1_000_000;

/// Minimal generating set of the monoid generated by `candidates` inside the
/// cone cut out by `forms`.
///
/// Candidates are swept in order of their total form value; `x` is dropped
/// when an accepted `y` has `x - y` in the cone. A reducer always has a
/// strictly smaller total, so one pass suffices.
pub fn reduce_to_hilbert_basis(candidates: &[IntVec], forms: &[IntVec]) -> Vec<IntVec> {
    let rows: Vec<(IntVec, IntVec)> = candidates
        .iter()
        .filter(|x| !is_zero_vec(x))
        .map(|x| (forms.iter().map(|f| dot(f, x)).collect(), x.clone()))
        .collect();
    let n = forms.len() as u64 + 1;
    let bits = max_bits(rows.iter().flat_map(|(v, _)| v.iter())) + 64 - n.leading_zeros() as u64 + 1;
    let keep = with_width!(Width::for_bits(bits), T => {
        let vals: Vec<(T, Vec<T>)> = rows
            .iter()
            .map(|(v, _)| {
                let v: Vec<T> = v.iter().map(T::from_big).collect();
                (v.iter().fold(T::zero(), |a, b| a + b.clone()), v)
            })
            .collect();
        sweep(&vals)
    });
    keep.into_iter().map(|i| rows[i].1.clone()).collect()
}

fn sweep<T: Scalar>(vals: &[(T, Vec<T>)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].0.cmp(&vals[b].0).then_with(|| vals[a].1.cmp(&vals[b].1)));
    let mut accepted: Vec<usize> = Vec::new();
    let mut prev: Option<usize> = None;
    for i in order {
        if prev.is_some_and(|p| vals[p].1 == vals[i].1) {
            // duplicate candidate
            continue;
        }
        prev = Some(i);
        let (sum, v) = &vals[i];
        let reducible = accepted
            .iter()
            .take_while(|&&j| &vals[j].0 < sum)
            .any(|&j| vals[j].1.iter().zip(v).all(|(a, b)| a <= b));
        if !reducible {
            accepted.push(i);
        }
    }
    accepted
}

/// Sums the contributions and rewrites the result over `(1 - t^e)^r` with
/// `e = lcm(extreme_degrees)`.
///
/// The sum is expanded as a power series through degree `e r + e`. Since the
/// numerator has degree below `e r`, multiplying by `(1 - t^e)^r` gives it
/// exactly, and the last `e` coefficients of the product must vanish.
pub fn accumulate_series(
    contribs: &[SeriesContribution],
    extreme_degrees: &[u64],
    rank: usize,
) -> Result<HilbertSeries> {
    if extreme_degrees.contains(&0) || contribs.iter().any(|c| c.denom_degrees.contains(&0)) {
        return Err(Error::Domain("degrees must be positive".into()));
    }
    let e = lcm_all(extreme_degrees.iter().copied());
    if rank == 0 {
        let mut total = Poly::new();
        for c in contribs {
            poly_add_assign(&mut total, &c.numerator);
        }
        if contribs.is_empty() {
            total = vec![BigInt::one()];
        }
        return Ok(HilbertSeries::new(total, e, 0));
    }

    let mut groups: BTreeMap<Vec<u64>, Poly> = BTreeMap::new();
    for c in contribs {
        if c.denom_degrees.len() != rank {
            return Err(Error::Internal(format!(
                "contribution with {} denominator factors in rank {rank}",
                c.denom_degrees.len()
            )));
        }
        let mut key = c.denom_degrees.clone();
        key.sort_unstable();
        poly_add_assign(groups.entry(key).or_default(), &c.numerator);
    }

    let span = e
        .checked_mul(rank as u64)
        .and_then(|x| x.checked_add(e))
        .filter(|&x| x <= MAX_SERIES_DEGREE)
        .ok_or_else(|| Error::Refused(format!("series of rank {rank} with period {e} is too long")))?
        as usize;
    let e = e as usize;
    let mut h = vec![BigInt::zero(); span];
    for (degs, num) in groups {
        let mut a: Poly = num.into_iter().take(span).collect();
        a.resize(span, BigInt::zero());
        for d in degs {
            let d = d as usize;
            for k in d..span {
                let prev = a[k - d].clone();
                a[k] += prev;
            }
        }
        for (x, y) in h.iter_mut().zip(a) {
            *x += y;
        }
    }
    for _ in 0..rank {
        for k in (e..span).rev() {
            let prev = h[k - e].clone();
            h[k] -= prev;
        }
    }
    if h[span - e..].iter().any(|x| !x.is_zero()) {
        return Err(Error::Internal(
            "series numerator does not fit over the target denominator".into(),
        ));
    }
    h.truncate(span - e);
    Ok(HilbertSeries::new(h, e as u64, rank))
}

/// Normalized volume of a triangulation of the bottom of `s`, the union of
/// the bounded faces of `conv(S ∩ Z^d \ {0})`.
pub fn bottom_volume(s: &SimplicialCone) -> Result<BigInt> {
    if s.det() > &BigInt::from(BOTTOM_VOLUME_GUARD) {
        return Err(Error::Refused(format!(
            "bottom volume of a simplex with det {} exceeds the guard {}",
            s.det(),
            BOTTOM_VOLUME_GUARD
        )));
    }
    let d = s.dim();
    // vertices of the bottom are irreducible, so the local Hilbert basis suffices
    let points = evaluate(s, None, crate::simplex::DEFAULT_BLOCK_SIZE)?.local_hb;
    let mut lifted: Vec<IntVec> = points
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.push(BigInt::one());
            v
        })
        .collect();
    for g in s.gens() {
        let mut v = g.clone();
        v.push(BigInt::zero());
        lifted.push(v);
    }
    let h = hull(&lifted, d + 1)?;
    let mut total = BigInt::zero();
    for f in &h.forms {
        let (a, b) = f.split_at(d);
        if !s.gens().iter().all(|g| dot(a, g).is_positive()) {
            continue;
        }
        let on: Vec<IntVec> = points
            .iter()
            .filter(|p| (dot(a, p) + &b[0]).is_zero())
            .cloned()
            .collect();
        let facet = build_cone(&ConeInput {
            ambient_dim: d,
            generators: Some(IntMat::from_rows(on)),
            ..Default::default()
        })?;
        total += triangulate(&facet)?.iter().map(|t| t.det().clone()).sum::<BigInt>();
    }
    Ok(total)
}

/// Volumes and counters of one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatsRecord {
    /// Total determinant of the initial triangulation.
    pub simplex_volume: BigInt,
    /// Total determinant of the simplices actually evaluated.
    pub volume_used: BigInt,
    pub ips_solved: u64,
    /// Highest approximation level used, 0 if none.
    pub approx_levels_used: u32,
    pub phase_times: Vec<(String, Duration)>,
}

impl StatsRecord {
    pub fn improvement_factor(&self) -> BigRational {
        if self.volume_used.is_zero() {
            return BigRational::one();
        }
        BigRational::new(self.simplex_volume.clone(), self.volume_used.clone())
    }

    /// Associative merge of counters; phase times are kept from `self`.
    pub fn merge(&mut self, other: &StatsRecord) {
        self.simplex_volume += &other.simplex_volume;
        self.volume_used += &other.volume_used;
        self.ips_solved += other.ips_solved;
        self.approx_levels_used = self.approx_levels_used.max(other.approx_levels_used);
    }
}

#[derive(Clone, Debug)]
pub struct ComputationResult {
    /// Ambient coordinates, graded-lexicographic order.
    pub hilbert_basis: Vec<IntVec>,
    /// Ambient coordinates.
    pub support_forms: Vec<IntVec>,
    pub series: Option<HilbertSeries>,
    pub stats: StatsRecord,
    pub rank: usize,
}
