//! Support hyperplanes of a full-dimensional cone given by generators.
//!
//! Generators are inserted one at a time into a simplicial start cone. Each
//! insertion is a Fourier-Motzkin step on the dual side: forms negative on the
//! new generator are dropped and every adjacent (positive, negative) pair is
//! combined into a new form. Adjacency uses the combinatorial zero-set test.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{adjugate, determinant, dot, independent_subset, make_primitive, rank, IntMat, IntVec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.words.len() * 64).filter(|&i| self.contains(i))
    }
}

/// Facet forms together with the generators each one vanishes on.
#[derive(Clone, Debug)]
pub struct Hull {
    pub forms: Vec<IntVec>,
    pub zero_sets: Vec<BitSet>,
}

/// Computes the facets of `cone(gens)`, which must span a space of dimension `dim`.
pub fn hull(gens: &[IntVec], dim: usize) -> Result<Hull> {
    let n = gens.len();
    let basis = independent_subset(gens);
    if basis.len() != dim {
        return Err(Error::Dimension(format!(
            "generators span a space of dimension {} instead of {}",
            basis.len(),
            dim
        )));
    }
    if dim == 0 {
        return Ok(Hull {
            forms: Vec::new(),
            zero_sets: Vec::new(),
        });
    }

    // start cone: forms are the columns of the adjugate, signed positive
    let start = IntMat::from_rows(basis.iter().map(|&i| gens[i].clone()).collect());
    let det = determinant(&start)?;
    let adj = adjugate(&start)?;
    let mut forms: Vec<IntVec> = (0..dim)
        .map(|j| {
            let col = adj.column(j);
            let col = if det.is_negative() {
                col.iter().map(|x| -x).collect::<Vec<_>>()
            } else {
                col
            };
            make_primitive(&col)
        })
        .collect();
    let mut zero_sets: Vec<BitSet> = (0..dim)
        .map(|j| {
            let mut z = BitSet::new(n);
            for (k, &i) in basis.iter().enumerate() {
                if k != j {
                    z.insert(i);
                }
            }
            z
        })
        .collect();

    for (gi, g) in gens.iter().enumerate() {
        if basis.contains(&gi) {
            continue;
        }
        let values: Vec<BigInt> = forms.iter().map(|f| dot(f, g)).collect();
        let neg: Vec<usize> = (0..forms.len()).filter(|&k| values[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, v) in values.iter().enumerate() {
                if v.is_zero() {
                    zero_sets[k].insert(gi);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..forms.len()).filter(|&k| values[k].is_positive()).collect();

        let mut new_forms = Vec::new();
        let mut new_zero = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = zero_sets[p].intersection(&zero_sets[q]);
                if common.len() + 2 < dim {
                    continue;
                }
                let blocked = (0..forms.len())
                    .any(|k| k != p && k != q && common.is_subset(&zero_sets[k]));
                if blocked {
                    continue;
                }
                let f: IntVec = forms[q]
                    .iter()
                    .zip(&forms[p])
                    .map(|(a, b)| &values[p] * a - &values[q] * b)
                    .collect();
                let f = make_primitive(&f);
                if f.iter().all(Zero::is_zero) {
                    continue;
                }
                let mut z = common;
                z.insert(gi);
                new_forms.push(f);
                new_zero.push(z);
            }
        }

        let mut kept_forms = Vec::new();
        let mut kept_zero = Vec::new();
        for k in 0..forms.len() {
            if values[k].is_negative() {
                continue;
            }
            let mut z = zero_sets[k].clone();
            if values[k].is_zero() {
                z.insert(gi);
            }
            kept_forms.push(forms[k].clone());
            kept_zero.push(z);
        }
        kept_forms.extend(new_forms);
        kept_zero.extend(new_zero);
        forms = kept_forms;
        zero_sets = kept_zero;
    }
    Ok(Hull { forms, zero_sets })
}

/// Irredundant primitive support forms of the cone generated by the rows of
/// `generators`. The rows must span the whole column space.
pub fn support_hyperplanes(generators: &IntMat) -> Result<IntMat> {
    let h = hull(generators.rows(), generators.ncols())?;
    IntMat::new(h.forms, generators.ncols())
}

/// Indices of generators spanning extreme rays, first occurrence per ray.
/// Only meaningful for pointed cones.
pub fn extreme_indices(gens: &[IntVec], h: &Hull, dim: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if out.iter().any(|&j| gens[j] == *g) {
            continue;
        }
        let on: Vec<IntVec> = h
            .forms
            .iter()
            .zip(&h.zero_sets)
            .filter(|(_, z)| z.contains(i))
            .map(|(f, _)| f.clone())
            .collect();
        if dim == 0 || rank(&on) + 1 == dim {
            out.push(i);
        }
    }
    out
}
