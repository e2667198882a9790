//! Stellar subdivision of simplicial cones with large determinant.

pub mod approx;
pub mod ip;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{dot, fmt_vec, is_zero_vec, IntVec};
use crate::collector::StatsRecord;
use crate::error::{Error, Result};
use crate::simplicial::{OrderVector, SimplicialCone};

use self::approx::approx_candidates;
use self::ip::{solve_star_ip, IpOutcome};

/// Simplices above this determinant may escalate to a finer approximation.
pub const ESCALATION_VOLUME: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    None,
    Ip,
    Approx,
    IpThenApprox,
}

#[derive(Clone, Debug)]
pub struct SubdivisionConfig {
    pub strategy: Strategy,
    /// Simplices with larger determinant are subdivided.
    pub volume_bound: BigInt,
    /// Per-simplex IP time limit is `scale * (log10 det)^2` seconds.
    pub time_limit_scale: f64,
    /// Branch-and-bound nodes per IP.
    pub node_limit: u64,
    pub approx_level_cap: u32,
}

impl Default for SubdivisionConfig {
    fn default() -> Self {
        SubdivisionConfig {
            strategy: Strategy::IpThenApprox,
            volume_bound: BigInt::from(1_000_000),
            time_limit_scale: 1.0,
            node_limit: 10_000_000,
            approx_level_cap: 3,
        }
    }
}

impl SubdivisionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.volume_bound < BigInt::from(1) {
            return Err(Error::Domain("volume bound must be at least 1".into()));
        }
        if self.approx_level_cap < 1 {
            return Err(Error::Domain("approximation level cap must be at least 1".into()));
        }
        if !(self.time_limit_scale >= 0.0) {
            return Err(Error::Domain("time limit scale must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Volumes of one stellar step: `sum piece_dets = parent_det * point_height / gen_height`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StellarStep {
    pub parent_det: BigInt,
    pub gen_height: BigInt,
    pub point_height: BigInt,
    pub piece_dets: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct SubdivisionOutcome {
    pub leaves: Vec<SimplicialCone>,
    pub stats: StatsRecord,
    pub steps: Vec<StellarStep>,
}

/// Replaces generator `i` by `xhat` for every facet `H_i` not containing
/// `xhat`. Exclusions of the pieces come from `order`.
pub fn stellar_subdivide(
    s: &SimplicialCone,
    xhat: &[BigInt],
    order: &OrderVector,
) -> Result<Vec<SimplicialCone>> {
    if xhat.len() != s.dim() {
        return Err(Error::Dimension(format!(
            "point of length {} for a simplex of dimension {}",
            xhat.len(),
            s.dim()
        )));
    }
    if is_zero_vec(xhat) {
        return Err(Error::Domain("subdivision point is zero".into()));
    }
    if !s.contains(xhat) {
        return Err(Error::Domain(format!("{} lies outside the simplex", fmt_vec(xhat))));
    }
    if s.on_ray(xhat) {
        return Err(Error::Domain(format!("{} lies on a ray of the simplex", fmt_vec(xhat))));
    }
    let q = s.q_numerators(xhat);
    q.iter()
        .enumerate()
        .filter(|(_, v)| v.is_positive())
        .map(|(i, _)| {
            let mut gens = s.gens().to_vec();
            gens[i] = xhat.to_vec();
            SimplicialCone::new(gens, order)
        })
        .collect()
}

/// A useful subdivision point of `s`: inside, nonzero and strictly below the
/// generators' hyperplane.
fn is_useful(s: &SimplicialCone, x: &[BigInt]) -> bool {
    !is_zero_vec(x) && s.contains(x) && dot(&s.height_normal(), x) < s.generator_height()
}

/// Stellar subdivision, except that a point on a ray (possible when a
/// generator is not primitive) just replaces that generator.
fn split(s: &SimplicialCone, x: &[BigInt], order: &OrderVector) -> Result<Vec<SimplicialCone>> {
    if !s.on_ray(x) {
        return stellar_subdivide(s, x, order);
    }
    let i = s
        .q_numerators(x)
        .iter()
        .position(|v| v.is_positive())
        .expect("point on a ray");
    let mut gens = s.gens().to_vec();
    gens[i] = x.to_vec();
    Ok(vec![SimplicialCone::new(gens, order)?])
}

struct Pending {
    simplex: SimplicialCone,
    candidates: Vec<IntVec>,
}

/// Subdivides `s` until every piece has determinant at most the volume bound
/// or no subdivision point is found.
pub fn recursive_subdivide(
    s: &SimplicialCone,
    cfg: &SubdivisionConfig,
    order: &OrderVector,
) -> Result<SubdivisionOutcome> {
    let mut stats = StatsRecord::default();
    let mut leaves = Vec::new();
    let mut steps = Vec::new();
    let mut stack = vec![Pending {
        simplex: s.clone(),
        candidates: Vec::new(),
    }];
    let escalation = BigInt::from(ESCALATION_VOLUME);

    while let Some(Pending { simplex, candidates }) = stack.pop() {
        if cfg.strategy == Strategy::None || simplex.det() <= &cfg.volume_bound {
            stats.volume_used += simplex.det();
            leaves.push(simplex);
            continue;
        }
        let mut candidates: Vec<IntVec> =
            candidates.into_iter().filter(|x| is_useful(&simplex, x)).collect();

        if candidates.is_empty() {
            let mut try_approx = cfg.strategy == Strategy::Approx;
            if matches!(cfg.strategy, Strategy::Ip | Strategy::IpThenApprox) {
                let outcome = solve_star_ip(&simplex, cfg);
                stats.ips_solved += 1;
                match &outcome {
                    IpOutcome::Optimal { point, .. } => candidates.push(point.clone()),
                    IpOutcome::LimitReached { incumbent: Some((point, _)) } => {
                        candidates.push(point.clone())
                    }
                    IpOutcome::LimitReached { incumbent: None } => {
                        try_approx = cfg.strategy == Strategy::IpThenApprox
                            && simplex.det() > &escalation;
                    }
                    IpOutcome::Infeasible => {}
                }
            }
            if try_approx {
                let mut level = 1;
                loop {
                    candidates = approx_candidates(&simplex, level)?;
                    stats.approx_levels_used = stats.approx_levels_used.max(level);
                    if !candidates.is_empty()
                        || level >= cfg.approx_level_cap
                        || simplex.det() <= &escalation
                    {
                        break;
                    }
                    level += 1;
                }
            }
        }

        if candidates.is_empty() {
            stats.volume_used += simplex.det();
            leaves.push(simplex);
            continue;
        }

        let point = candidates.remove(0);
        let pieces = split(&simplex, &point, order)?;
        steps.push(StellarStep {
            parent_det: simplex.det().clone(),
            gen_height: simplex.generator_height(),
            point_height: dot(&simplex.height_normal(), &point),
            piece_dets: pieces.iter().map(|t| t.det().clone()).collect(),
        });
        // reversed so leaves come out in piece order
        for piece in pieces.into_iter().rev() {
            stack.push(Pending {
                simplex: piece,
                candidates: candidates.clone(),
            });
        }
    }
    debug_assert!(!stats.volume_used.is_zero() || s.det().is_zero());
    Ok(SubdivisionOutcome {
        leaves,
        stats,
        steps,
    })
}
