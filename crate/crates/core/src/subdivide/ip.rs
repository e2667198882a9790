//! Lowest lattice point of a simplicial cone below the generators' hyperplane,
//! by exact depth-first branch and bound.
//!
//! The search fixes coordinates one at a time. Bounds for the next coordinate
//! come from the exact projection of the truncated cone
//! `{x in S : N.x <= T}` onto the coordinates fixed so far, so a branch is only
//! empty for integrality reasons. `T` drops to `best - 1` whenever a point is
//! found.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{dot, IntVec};
use crate::hull::hull;
use crate::scalar::{bits, convert, max_bits, Scalar, Width};
use crate::simplex::with_width;
use crate::simplicial::SimplicialCone;
use crate::subdivide::SubdivisionConfig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IpOutcome {
    /// Optimal point and its height `N.x`.
    Optimal { point: IntVec, value: BigInt },
    Infeasible,
    /// The search was cut off; the best point seen so far, if any.
    LimitReached { incumbent: Option<(IntVec, BigInt)> },
}

impl IpOutcome {
    /// Any feasible point found, optimal or not.
    pub fn point(&self) -> Option<&IntVec> {
        match self {
            IpOutcome::Optimal { point, .. } => Some(point),
            IpOutcome::LimitReached { incumbent: Some((p, _)) } => Some(p),
            _ => None,
        }
    }
}

/// Primitive normal `N` of the hyperplane through the generators, positive on
/// the cone. `N.x` is proportional to the sum of determinants obtained by
/// replacing each generator with `x`.
pub fn height_normal(s: &SimplicialCone) -> IntVec {
    s.height_normal()
}

/// Time budget `scale * (log10 det)^2` seconds.
pub fn time_limit(s: &SimplicialCone, scale: f64) -> Duration {
    let digits = s.det().bits() as f64 * std::f64::consts::LOG10_2;
    Duration::from_secs_f64((scale * digits * digits).max(0.0))
}

/// Solves `min { N.x : x in S ∩ Z^d, x != 0, N.x < N.x_1 }`.
pub fn solve_star_ip(s: &SimplicialCone, cfg: &SubdivisionConfig) -> IpOutcome {
    let d = s.dim();
    let normal = s.height_normal();
    let height = s.generator_height();
    let bound: BigInt = &height - 1;
    if d == 0 || !bound.is_positive() {
        return IpOutcome::Infeasible;
    }

    let order = variable_order(s, &bound, &height);
    let levels = projections(s, &order, &height);
    // x != 0: a coordinate positive on every generator must be >= 1
    let positive = (0..d).find(|&k| s.gens().iter().all(|g| g[k].is_positive()));

    let entry = max_bits(s.gens().iter().flatten()).max(bits(&height));
    let form_bits = max_bits(levels.iter().flatten().flatten()).max(max_bits(&normal));
    let width = Width::for_bits(form_bits + entry + bits(&BigInt::from(d as u64 + 2)) + 2);

    let deadline = Instant::now() + time_limit(s, cfg.time_limit_scale);
    with_width!(width, T => {
        let mut search = Search::<T> {
            levels: levels.iter().map(|l| l.iter().map(|f| convert(f)).collect()).collect(),
            order: order.clone(),
            positive_level: positive.map(|k| order.iter().position(|&o| o == k).unwrap()),
            normal: order.iter().map(|&k| T::from_big(&normal[k])).collect(),
            bound: T::from_big(&bound),
            prefix: Vec::with_capacity(d),
            best: None,
            nodes: 0,
            node_limit: cfg.node_limit,
            deadline,
            aborted: false,
        };
        search.descend();
        let best = search.best.take().map(|(y, v)| {
            let mut x = vec![BigInt::zero(); d];
            for (pos, &k) in search.order.iter().enumerate() {
                x[k] = y[pos].to_big();
            }
            (x, v.to_big())
        });
        if search.aborted {
            IpOutcome::LimitReached { incumbent: best }
        } else {
            match best {
                Some((point, value)) => IpOutcome::Optimal { point, value },
                None => IpOutcome::Infeasible,
            }
        }
    })
}

/// Coordinates by width of their range over the truncated cone, narrowest first.
fn variable_order(s: &SimplicialCone, bound: &BigInt, height: &BigInt) -> Vec<usize> {
    let d = s.dim();
    let mut widths: Vec<(BigInt, usize)> = (0..d)
        .map(|k| {
            let lo = s.gens().iter().map(|g| g[k].clone()).fold(BigInt::zero(), |a, b| a.min(b));
            let hi = s.gens().iter().map(|g| g[k].clone()).fold(BigInt::zero(), |a, b| a.max(b));
            let lo = (lo * bound).div_ceil(height);
            let hi = (hi * bound).div_floor(height);
            (hi - lo, k)
        })
        .collect();
    widths.sort();
    widths.into_iter().map(|(_, k)| k).collect()
}

/// For each prefix length `m`, the facets `(a_1..a_m, b)` of the cone over
/// `{(x_order[..m], s) : x in S, N.x <= s}`.
fn projections(s: &SimplicialCone, order: &[usize], height: &BigInt) -> Vec<Vec<IntVec>> {
    let d = s.dim();
    (1..=d)
        .map(|m| {
            let mut gens: Vec<IntVec> = s
                .gens()
                .iter()
                .map(|g| {
                    let mut v: IntVec = order[..m].iter().map(|&k| g[k].clone()).collect();
                    v.push(height.clone());
                    v
                })
                .collect();
            let mut apex = vec![BigInt::zero(); m];
            apex.push(BigInt::from(1));
            gens.push(apex);
            hull(&gens, m + 1)
                .expect("projected generators span the prefix space")
                .forms
        })
        .collect()
}

struct Search<T> {
    levels: Vec<Vec<Vec<T>>>,
    order: Vec<usize>,
    positive_level: Option<usize>,
    /// Height normal permuted into search order.
    normal: Vec<T>,
    bound: T,
    prefix: Vec<T>,
    best: Option<(Vec<T>, T)>,
    nodes: u64,
    node_limit: u64,
    deadline: Instant,
    aborted: bool,
}

impl<T: Scalar> Search<T> {
    /// Feasible range of the next coordinate, `None` if empty.
    fn range(&self) -> Option<(T, T)> {
        let m = self.prefix.len();
        let mut lo: Option<T> = None;
        let mut hi: Option<T> = None;
        for f in &self.levels[m] {
            let mut rest = f[m + 1].clone() * self.bound.clone();
            for (a, y) in f[..m].iter().zip(&self.prefix) {
                rest = rest + a.clone() * y.clone();
            }
            let a = &f[m];
            if a.is_zero() {
                if rest.is_negative() {
                    return None;
                }
            } else if a.is_positive() {
                let l = (-rest).div_ceil(a);
                if lo.as_ref().is_none_or(|x| &l > x) {
                    lo = Some(l);
                }
            } else {
                let h = rest.div_floor(&-a.clone());
                if hi.as_ref().is_none_or(|x| &h < x) {
                    hi = Some(h);
                }
            }
        }
        // the projected cone is pointed and truncated, so both sides are bounded
        let mut lo = lo.expect("lower bound from truncated cone");
        let hi = hi.expect("upper bound from truncated cone");
        if self.positive_level == Some(m) && lo < T::one() {
            lo = T::one();
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.aborted = true;
        } else if self.nodes % 1024 == 0 && Instant::now() > self.deadline {
            self.aborted = true;
        }
        self.aborted
    }

    fn descend(&mut self) {
        if self.tick() {
            return;
        }
        let m = self.prefix.len();
        let d = self.order.len();
        let Some((lo, hi)) = self.range() else {
            return;
        };
        if m + 1 == d {
            self.finish(lo, hi);
            return;
        }
        // values from the one nearest 0 outwards, re-reading the range as the bound drops
        let start = if lo > T::zero() {
            lo
        } else if hi < T::zero() {
            hi
        } else {
            T::zero()
        };
        let (mut down, mut up) = (start.clone() - T::one(), start);
        let mut prefer_up = true;
        loop {
            let Some((lo, hi)) = self.range() else {
                return;
            };
            if up < lo {
                up = lo.clone();
            }
            if down > hi {
                down = hi.clone();
            }
            let up_ok = up <= hi;
            let down_ok = down >= lo;
            let v = if up_ok && (prefer_up || !down_ok) {
                up = up.clone() + T::one();
                up.clone() - T::one()
            } else if down_ok {
                down = down.clone() - T::one();
                down.clone() + T::one()
            } else {
                return;
            };
            prefer_up = !prefer_up;
            self.prefix.push(v);
            self.descend();
            self.prefix.pop();
            if self.aborted {
                return;
            }
        }
    }

    /// Last coordinate: every value in range is feasible, take the lowest height.
    fn finish(&mut self, lo: T, hi: T) {
        let c = self.normal.last().expect("nonempty").clone();
        let all_zero = self.prefix.iter().all(Zero::is_zero);
        let v = if c.is_positive() {
            lo.clone()
        } else if c.is_negative() {
            hi.clone()
        } else if !lo.is_zero() {
            lo.clone()
        } else {
            hi.clone()
        };
        let v = if all_zero && v.is_zero() {
            // x != 0: step to the nearest nonzero value on the cheaper side
            if c.is_negative() {
                T::zero() - T::one()
            } else {
                T::one()
            }
        } else {
            v
        };
        if v < lo || v > hi {
            return;
        }
        self.prefix.push(v);
        let value = self
            .prefix
            .iter()
            .zip(&self.normal)
            .fold(T::zero(), |a, (x, n)| a + x.clone() * n.clone());
        debug_assert!(value <= self.bound);
        self.bound = value.clone() - T::one();
        self.best = Some((self.prefix.clone(), value));
        self.prefix.pop();
    }
}

/// Minimum height over a brute-force listing of lattice points of `S`.
#[doc(hidden)]
pub fn min_height_of(s: &SimplicialCone, points: &[IntVec]) -> Option<BigInt> {
    let n = s.height_normal();
    let h = s.generator_height();
    points
        .iter()
        .filter(|p| p.iter().any(|x| !x.is_zero()))
        .map(|p| dot(&n, p))
        .filter(|v| v < &h)
        .min()
}
