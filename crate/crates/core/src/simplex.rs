//! Evaluation of a single simplicial cone: the lattice points of its
//! fundamental parallelepiped, Hilbert basis candidates and its share of the
//! Hilbert series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{add_vec, adjugate, determinant, dot, fmt_vec, is_zero_vec, smith_normal_form, IntVec};
use crate::error::{Error, Result};
use crate::scalar::{bits, convert, max_bits, to_big, Scalar, Width};
use crate::simplicial::SimplicialCone;

/// Points are streamed through the local reduction in blocks of this size.
pub const DEFAULT_BLOCK_SIZE: usize = 1 << 20;

/// Polynomial degrees above this are refused.
pub const MAX_SERIES_DEGREE: u64 = 1 << 26;

macro_rules! with_width {
    ($w:expr, $t:ident => $body:expr) => {
        match $w {
            Width::I64 => {
                type $t = i64;
                $body
            }
            Width::I128 => {
                type $t = i128;
                $body
            }
            Width::Big => {
                type $t = BigInt;
                $body
            }
        }
    };
}
pub(crate) use with_width;

/// Lattice points `sum q_i x_i` with `0 <= q_i < 1`.
#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    pub points: Vec<IntVec>,
}

/// `numerator / prod (1 - t^d)` over the generator degrees `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesContribution {
    pub numerator: Vec<BigInt>,
    pub denom_degrees: Vec<u64>,
}

/// Residue enumeration data for one simplex, converted to a machine width.
struct Enumerator<T> {
    det: T,
    gens: Vec<Vec<T>>,
    steps: Vec<Vec<T>>,
    orders: Vec<u64>,
}

impl<T: Scalar> Enumerator<T> {
    fn new(plan: &Plan) -> Self {
        Enumerator {
            det: T::from_big(&plan.det),
            gens: plan.gens.iter().map(|g| convert(g)).collect(),
            steps: plan.steps.iter().map(|g| convert(g)).collect(),
            orders: plan.orders.clone(),
        }
    }

    /// Visits every point of the fundamental domain as (q-numerators, point),
    /// in lexicographic order of the residue digits.
    fn visit(&self, mut f: impl FnMut(&[T], &[T])) {
        let d = self.gens.len();
        let mut digits = vec![0u64; self.orders.len()];
        let mut num = vec![T::zero(); d];
        let mut point = vec![T::zero(); d];
        loop {
            for (k, p) in point.iter_mut().enumerate() {
                let mut acc = T::zero();
                for (n, g) in num.iter().zip(&self.gens) {
                    if !n.is_zero() {
                        acc = acc + n.clone() * g[k].clone();
                    }
                }
                *p = acc / self.det.clone();
            }
            f(&num, &point);

            // odometer, last digit fastest
            let mut pos = self.orders.len();
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                digits[pos] += 1;
                for (n, s) in num.iter_mut().zip(&self.steps[pos]) {
                    let v = n.clone() + s.clone();
                    *n = if v >= self.det { v - self.det.clone() } else { v };
                }
                if digits[pos] < self.orders[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}

/// Width-independent preparation of the residue enumeration.
struct Plan {
    det: BigInt,
    gens: Vec<IntVec>,
    steps: Vec<IntVec>,
    orders: Vec<u64>,
}

impl Plan {
    fn new(s: &SimplicialCone) -> Result<Self> {
        let g = s.gen_matrix();
        let det = s.det().clone();
        let snf = smith_normal_form(&g);
        // residues of Z^d / U are z * v^{-1} with 0 <= z_i < d_i
        let vdet = determinant(&snf.v)?;
        let vinv = adjugate(&snf.v)?;
        let mut steps = Vec::new();
        let mut orders = Vec::new();
        for (i, di) in snf.d.iter().enumerate() {
            if di <= &BigInt::from(1) {
                continue;
            }
            let row: IntVec = vinv.row(i).iter().map(|x| x * &vdet).collect();
            let step: IntVec = s.dual().iter().map(|a| dot(a, &row).mod_floor(&det)).collect();
            steps.push(step);
            orders.push(di.to_u64().ok_or_else(|| {
                Error::Refused(format!("elementary divisor {di} too large to enumerate"))
            })?);
        }
        Ok(Plan {
            det,
            gens: s.gens().to_vec(),
            steps,
            orders,
        })
    }

    fn width(&self, extra: &[BigInt]) -> Width {
        let d = self.gens.len() as u64;
        let entry = max_bits(self.gens.iter().flatten()).max(max_bits(extra));
        Width::for_bits(bits(&self.det) + entry + bits(&BigInt::from(d)) + 2)
    }
}

/// All points of the fundamental domain, in residue enumeration order.
pub fn fundamental_points(s: &SimplicialCone) -> Result<FundamentalDomain> {
    let plan = Plan::new(s)?;
    let points = with_width!(plan.width(&[]), T => {
        let e = Enumerator::<T>::new(&plan);
        let mut out = Vec::new();
        e.visit(|_, p| out.push(to_big(p)));
        out
    });
    Ok(FundamentalDomain { points })
}

/// Representative of `p` in the half-open simplex: adds `x_i` for each
/// excluded facet `i` on which `p` lies.
pub fn half_open_shift(p: &[BigInt], s: &SimplicialCone) -> Result<IntVec> {
    let num = s.q_numerators(p);
    if num.iter().any(|n| n.is_negative() || n >= s.det()) {
        return Err(Error::Domain(format!(
            "{} is not in the fundamental domain",
            fmt_vec(p)
        )));
    }
    let mut out = p.to_vec();
    for &i in s.excluded_facets() {
        if num[i].is_zero() {
            out = add_vec(&out, &s.gens()[i]);
        }
    }
    Ok(out)
}

fn generator_degrees(s: &SimplicialCone, grading: &[BigInt]) -> Result<Vec<BigInt>> {
    s.gens()
        .iter()
        .map(|g| {
            let v = dot(grading, g);
            if v.is_positive() {
                Ok(v)
            } else {
                Err(Error::GradingNotPositive(fmt_vec(g), v.to_string()))
            }
        })
        .collect()
}

fn small_degree(v: &BigInt) -> Result<u64> {
    v.to_u64()
        .filter(|&x| x <= MAX_SERIES_DEGREE)
        .ok_or_else(|| Error::Refused(format!("degree {v} too large for series expansion")))
}

/// Hilbert series of the half-open simplex under `grading`.
pub fn series_contribution(s: &SimplicialCone, grading: &[BigInt]) -> Result<SeriesContribution> {
    Ok(evaluate(s, Some(grading), DEFAULT_BLOCK_SIZE)?
        .series
        .expect("grading supplied"))
}

/// `E \ {0}` together with the generators, without duplicates.
pub fn hb_candidates(s: &SimplicialCone) -> Result<Vec<IntVec>> {
    let mut out: Vec<IntVec> = s.gens().to_vec();
    for p in fundamental_points(s)?.points {
        if !is_zero_vec(&p) && !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Everything the collector needs from one simplex.
#[derive(Clone, Debug)]
pub struct SimplexEval {
    /// Generators and the irreducible points of `E \ {0}`.
    pub local_hb: Vec<IntVec>,
    pub series: Option<SeriesContribution>,
    pub det: BigInt,
}

/// Antichain of q-numerator vectors under componentwise order, kept sorted by
/// coordinate sum so small (likely reducing) elements are tried first.
struct Antichain<T> {
    items: Vec<(T, Vec<T>, Vec<T>)>,
}

impl<T: Scalar> Antichain<T> {
    fn new() -> Self {
        Antichain { items: Vec::new() }
    }

    fn insert_block(&mut self, mut block: Vec<(T, Vec<T>, Vec<T>)>) {
        block.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        for (sum, num, point) in block {
            let reduced = self
                .items
                .iter()
                .take_while(|(s, _, _)| s < &sum)
                .any(|(_, n, _)| n.iter().zip(&num).all(|(a, b)| a <= b));
            if reduced {
                continue;
            }
            let at = self.items.partition_point(|(s, _, _)| s <= &sum);
            // earlier blocks may hold elements above the new one
            let mut k = at;
            while k < self.items.len() {
                if num.iter().zip(&self.items[k].1).all(|(a, b)| a <= b) {
                    self.items.remove(k);
                } else {
                    k += 1;
                }
            }
            self.items.insert(at, (sum, num, point));
        }
    }
}

/// Streams the fundamental domain once, producing the local Hilbert basis
/// candidates and (with a grading) the series numerator.
pub fn evaluate(s: &SimplicialCone, grading: Option<&[BigInt]>, block_size: usize) -> Result<SimplexEval> {
    let plan = Plan::new(s)?;
    let degs = grading.map(|g| generator_degrees(s, g)).transpose()?;
    let block_size = block_size.max(1);
    let excluded: Vec<usize> = s.excluded_facets().to_vec();

    let (points, hist) = with_width!(plan.width(degs.as_deref().unwrap_or(&[])), T => {
        let e = Enumerator::<T>::new(&plan);
        let gdeg: Option<Vec<T>> = degs.as_ref().map(|d| convert(d));
        let mut hist: Vec<u64> = Vec::new();
        let mut overflow: Option<Error> = None;
        let mut chain = Antichain::<T>::new();
        let mut block = Vec::with_capacity(block_size.min(1 << 16));
        e.visit(|num, point| {
            if let Some(gd) = &gdeg {
                let mut acc = T::zero();
                for (n, g) in num.iter().zip(gd) {
                    acc = acc + n.clone() * g.clone();
                }
                let mut deg = acc / e.det.clone();
                for &i in &excluded {
                    if num[i].is_zero() {
                        deg = deg + gd[i].clone();
                    }
                }
                match small_degree(&deg.to_big()) {
                    Ok(k) => {
                        let k = k as usize;
                        if hist.len() <= k {
                            hist.resize(k + 1, 0);
                        }
                        hist[k] += 1;
                    }
                    Err(err) => overflow = Some(err),
                }
            }
            if num.iter().all(Zero::is_zero) {
                return;
            }
            let sum = num.iter().fold(T::zero(), |a, b| a + b.clone());
            block.push((sum, num.to_vec(), point.to_vec()));
            if block.len() >= block_size {
                chain.insert_block(std::mem::take(&mut block));
            }
        });
        if let Some(err) = overflow {
            return Err(err);
        }
        chain.insert_block(block);
        let points: Vec<IntVec> = chain.items.into_iter().map(|(_, _, p)| to_big(&p)).collect();
        (points, hist)
    });

    let mut local_hb: Vec<IntVec> = s.gens().to_vec();
    local_hb.extend(points);
    let series = match degs {
        Some(d) => Some(SeriesContribution {
            numerator: hist.into_iter().map(BigInt::from).collect(),
            denom_degrees: d.iter().map(small_degree).collect::<Result<_>>()?,
        }),
        None => None,
    };
    Ok(SimplexEval {
        local_hb,
        series,
        det: s.det().clone(),
    })
}
