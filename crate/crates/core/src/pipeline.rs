//! End-to-end computation: build, triangulate, subdivide, evaluate, collect.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{dot, IntVec};
use crate::collector::{accumulate_series, reduce_to_hilbert_basis, ComputationResult, StatsRecord};
use crate::cone::{build_cone, order_vector, total_volume, triangulate, Cone, ConeInput};
use crate::error::{Error, Result};
use crate::simplex::{evaluate, DEFAULT_BLOCK_SIZE};
use crate::subdivide::{recursive_subdivide, StellarStep, SubdivisionConfig};

#[derive(Clone, Debug)]
pub struct ComputeOptions {
    pub subdivision: SubdivisionConfig,
    pub hilbert_basis: bool,
    pub series: bool,
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    pub block_size: usize,
}

impl Default for ComputeOptions {
    fn default() -> Self {
        ComputeOptions {
            subdivision: SubdivisionConfig::default(),
            hilbert_basis: true,
            series: true,
            threads: 0,
            block_size: DEFAULT_BLOCK_SIZE,
        }
    }
}

/// Result of [`compute_traced`]: the computation and every stellar step taken.
#[derive(Clone, Debug)]
pub struct Trace {
    pub result: ComputationResult,
    pub steps: Vec<StellarStep>,
}

pub fn compute(input: &ConeInput, opts: &ComputeOptions) -> Result<ComputationResult> {
    compute_traced(input, opts).map(|t| t.result)
}

pub fn compute_traced(input: &ConeInput, opts: &ComputeOptions) -> Result<Trace> {
    opts.subdivision.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    pool.install(|| run(input, opts))
}

fn run(input: &ConeInput, opts: &ComputeOptions) -> Result<Trace> {
    let mut stats = StatsRecord::default();
    let mut clock = Instant::now();
    let mut lap = |stats: &mut StatsRecord, name: &str| {
        stats.phase_times.push((name.to_string(), clock.elapsed()));
        clock = Instant::now();
    };

    let cone = build_cone(input)?;
    if opts.series && cone.grading().is_none() {
        return Err(Error::NoGrading);
    }
    let simplices = triangulate(&cone)?;
    stats.simplex_volume = total_volume(&simplices);
    lap(&mut stats, "triangulation");

    let order = order_vector(&cone);
    let outcomes = simplices
        .par_iter()
        .map(|s| recursive_subdivide(s, &opts.subdivision, &order))
        .collect::<Result<Vec<_>>>()?;
    let mut leaves = Vec::new();
    let mut steps = Vec::new();
    for o in outcomes {
        stats.merge(&StatsRecord {
            simplex_volume: BigInt::zero(),
            ..o.stats
        });
        leaves.extend(o.leaves);
        steps.extend(o.steps);
    }
    lap(&mut stats, "subdivision");

    let grading = if opts.series { cone.grading() } else { None };
    let evals = leaves
        .par_iter()
        .map(|s| evaluate(s, grading.map(Vec::as_slice), opts.block_size))
        .collect::<Result<Vec<_>>>()?;
    lap(&mut stats, "evaluation");

    let hilbert_basis = if opts.hilbert_basis {
        let candidates: Vec<IntVec> = evals.iter().flat_map(|e| e.local_hb.iter().cloned()).collect();
        let hb = reduce_to_hilbert_basis(&candidates, cone.support_forms());
        graded_lex(&cone, hb)
    } else {
        Vec::new()
    };
    let series = match grading {
        Some(g) => {
            let contribs: Vec<_> = evals.into_iter().filter_map(|e| e.series).collect();
            let extreme = cone
                .generators()
                .iter()
                .map(|y| {
                    dot(g, y)
                        .to_u64()
                        .ok_or_else(|| Error::Refused("generator degree too large".into()))
                })
                .collect::<Result<Vec<u64>>>()?;
            Some(accumulate_series(&contribs, &extreme, cone.rank())?)
        }
        None => None,
    };
    lap(&mut stats, "collection");

    Ok(Trace {
        result: ComputationResult {
            hilbert_basis,
            support_forms: cone.ambient_support_forms(),
            series,
            stats,
            rank: cone.rank(),
        },
        steps,
    })
}

/// Ambient coordinates ordered by degree (coordinate sum without a grading),
/// then lexicographically.
fn graded_lex(cone: &Cone, hb: Vec<IntVec>) -> Vec<IntVec> {
    let mut rows: Vec<(BigInt, IntVec)> = hb
        .into_iter()
        .map(|y| {
            let deg = cone.degree(&y);
            let x = cone.to_ambient(&y);
            let deg = deg.unwrap_or_else(|| x.iter().sum());
            (deg, x)
        })
        .collect();
    rows.sort();
    rows.into_iter().map(|(_, x)| x).collect()
}
