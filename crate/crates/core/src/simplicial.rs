use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{adjugate, determinant, dot, fmt_vec, make_primitive, IntMat, IntVec};
use crate::error::{Error, Result};

/// Reference point that decides which facets of a simplex are excluded.
///
/// A simplex keeps the points `x` for which `x + t * o` lies in its interior
/// for small `t > 0`, where `o` is this point perturbed by `(eps, eps^2, ..)`.
/// Facet forms with negative perturbed value on `o` are excluded. Any
/// dissection of a cone, stellar refinements included, is then partitioned
/// into disjoint half-open cells as long as `o` is interior to the cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderVector {
    point: IntVec,
}

impl OrderVector {
    pub fn new(point: IntVec) -> Self {
        OrderVector { point }
    }

    /// Order vector in the interior of `cone(gens)`: no facet is excluded.
    pub fn interior_of(gens: &[IntVec]) -> Self {
        let dim = gens.first().map_or(0, Vec::len);
        let mut point = vec![BigInt::zero(); dim];
        for g in gens {
            for (p, x) in point.iter_mut().zip(g) {
                *p += x;
            }
        }
        OrderVector { point }
    }

    pub fn point(&self) -> &IntVec {
        &self.point
    }

    pub fn excludes(&self, form: &[BigInt]) -> bool {
        let v = dot(form, &self.point);
        if !v.is_zero() {
            return v.is_negative();
        }
        form.iter()
            .find(|x| !x.is_zero())
            .is_some_and(Signed::is_negative)
    }
}

/// Simplicial cone over linearly independent lattice vectors, with the facets
/// that are removed to make it half-open.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialCone {
    gens: Vec<IntVec>,
    det: BigInt,
    // dual[j] . x = det * q_j(x), where x = sum q_j gens[j]
    dual: Vec<IntVec>,
    excluded: Vec<usize>,
}

impl SimplicialCone {
    fn build(gens: Vec<IntVec>) -> Result<Self> {
        let d = gens.len();
        if gens.iter().any(|g| g.len() != d) {
            return Err(Error::Dimension(format!(
                "simplicial cone needs {d} generators of length {d}"
            )));
        }
        let m = IntMat::from_rows(gens.clone());
        let det = determinant(&m)?;
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let adj = adjugate(&m)?;
        let negative = det.is_negative();
        let dual = (0..d)
            .map(|j| {
                let col = adj.column(j);
                if negative {
                    col.iter().map(|x| -x).collect()
                } else {
                    col
                }
            })
            .collect();
        Ok(SimplicialCone {
            gens,
            det: det.abs(),
            dual,
            excluded: Vec::new(),
        })
    }

    /// Closed simplicial cone, nothing excluded.
    pub fn closed(gens: Vec<IntVec>) -> Result<Self> {
        Self::build(gens)
    }

    /// Half-open simplicial cone with exclusions decided by `order`.
    pub fn new(gens: Vec<IntVec>, order: &OrderVector) -> Result<Self> {
        let mut s = Self::build(gens)?;
        s.excluded = (0..s.dim()).filter(|&j| order.excludes(&s.dual[j])).collect();
        Ok(s)
    }

    /// Simplicial cone with an explicit set of excluded facets (0-based,
    /// facet `i` is the one opposite generator `i`).
    pub fn with_excluded(gens: Vec<IntVec>, excluded: &[usize]) -> Result<Self> {
        let mut s = Self::build(gens)?;
        if let Some(&bad) = excluded.iter().find(|&&i| i >= s.dim()) {
            return Err(Error::Domain(format!("facet index {bad} out of range")));
        }
        let mut ex = excluded.to_vec();
        ex.sort_unstable();
        ex.dedup();
        s.excluded = ex;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[IntVec] {
        &self.gens
    }

    pub fn gen_matrix(&self) -> IntMat {
        IntMat::from_rows(self.gens.clone())
    }

    /// Normalized volume `|det(gens)|`.
    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn excluded_facets(&self) -> &[usize] {
        &self.excluded
    }

    pub fn is_excluded(&self, i: usize) -> bool {
        self.excluded.binary_search(&i).is_ok()
    }

    /// Rows `a_j` with `a_j . x = det * q_j(x)`.
    pub fn dual(&self) -> &[IntVec] {
        &self.dual
    }

    /// Numerators of the coordinates of `x` with respect to the generators,
    /// over the common denominator `det`.
    pub fn q_numerators(&self, x: &[BigInt]) -> IntVec {
        self.dual.iter().map(|a| dot(a, x)).collect()
    }

    /// Primitive facet forms; form `j` vanishes on all generators except `j`.
    pub fn facet_forms(&self) -> Vec<IntVec> {
        self.dual.iter().map(|a| make_primitive(a)).collect()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.dual.iter().all(|a| !dot(a, x).is_negative())
    }

    pub fn contains_half_open(&self, x: &[BigInt]) -> bool {
        self.dual.iter().enumerate().all(|(j, a)| {
            let v = dot(a, x);
            if self.is_excluded(j) {
                v.is_positive()
            } else {
                !v.is_negative()
            }
        })
    }

    /// True when `x` lies in the fundamental parallelepiped `0 <= q < 1`.
    pub fn in_fundamental_domain(&self, x: &[BigInt]) -> bool {
        self.q_numerators(x)
            .iter()
            .all(|n| !n.is_negative() && n < &self.det)
    }

    /// Primitive `N` with `N . x_i` equal and positive for every generator.
    pub fn height_normal(&self) -> IntVec {
        let dim = self.dim();
        let mut sum = vec![BigInt::zero(); dim];
        for a in &self.dual {
            for (s, x) in sum.iter_mut().zip(a) {
                *s += x;
            }
        }
        make_primitive(&sum)
    }

    /// Common value `N . x_i` of the height normal on the generators.
    pub fn generator_height(&self) -> BigInt {
        let n = self.height_normal();
        dot(&n, &self.gens[0])
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.is_one()
    }

    /// `x` is a positive multiple of one generator.
    pub fn on_ray(&self, x: &[BigInt]) -> bool {
        let q = self.q_numerators(x);
        q.iter().filter(|v| !v.is_zero()).count() == 1 && q.iter().all(|v| !v.is_negative())
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.gens
            .iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest power-of-two bit count of the generator entries.
    pub fn entry_bits(&self) -> u64 {
        self.max_abs_entry().bits()
    }
}

impl fmt::Debug for SimplicialCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|v| fmt_vec(v)).collect();
        write!(
            f,
            "Simplex[{}; det {}; excluded {:?}]",
            g.join(" "),
            self.det,
            self.excluded
        )
    }
}
