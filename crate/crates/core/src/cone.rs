//! Cone construction, coordinate transforms, grading normalization and the
//! placing triangulation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{
    adjugate, content, determinant, dot, fmt_vec, independent_subset, is_zero_vec, kernel_basis,
    make_primitive, rank, row_times, smith_normal_form, IntMat, IntVec,
};
use crate::error::{Error, Result};
use crate::hull::{extreme_indices, hull};
use crate::simplicial::{OrderVector, SimplicialCone};

/// Raw description of a cone in ambient coordinates `Z^d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeInput {
    pub ambient_dim: usize,
    pub generators: Option<IntMat>,
    /// Rows `l` meaning `l . x >= 0`.
    pub inequalities: Option<IntMat>,
    /// Rows `m` meaning `m . x = 0`.
    pub equations: Option<IntMat>,
    pub grading: Option<IntVec>,
}

impl ConeInput {
    pub fn from_generators(rows: &[&[i64]]) -> Self {
        let m = IntMat::from_i64(rows);
        ConeInput {
            ambient_dim: m.ncols(),
            generators: Some(m),
            ..Default::default()
        }
    }

    pub fn from_inequalities(rows: &[&[i64]]) -> Self {
        let m = IntMat::from_i64(rows);
        ConeInput {
            ambient_dim: m.ncols(),
            inequalities: Some(m),
            ..Default::default()
        }
    }

    pub fn with_grading(mut self, grading: &[i64]) -> Self {
        self.grading = Some(crate::arith::ivec(grading));
        self
    }

    fn validate(&self) -> Result<()> {
        let d = self.ambient_dim;
        if self.generators.is_none() && self.inequalities.is_none() {
            return Err(Error::Domain(
                "cone input needs generators or inequalities".into(),
            ));
        }
        for m in [&self.generators, &self.inequalities, &self.equations]
            .into_iter()
            .flatten()
        {
            if m.nrows() > 0 && m.ncols() != d {
                return Err(Error::Dimension(format!(
                    "rows of length {} in ambient dimension {d}",
                    m.ncols()
                )));
            }
        }
        if let Some(g) = &self.grading {
            if g.len() != d {
                return Err(Error::Dimension(format!(
                    "grading of length {} in ambient dimension {d}",
                    g.len()
                )));
            }
        }
        Ok(())
    }
}

/// A cone with both descriptions, expressed in coordinates of the lattice
/// `E = Z^d ∩ span(C)`.
#[derive(Clone, Debug)]
pub struct Cone {
    ambient_dim: usize,
    rank: usize,
    /// Extreme rays (all nonzero generators if not pointed), primitive, restricted coordinates.
    generators: Vec<IntVec>,
    /// Primitive forms, nonnegative on the cone, restricted coordinates.
    support_forms: Vec<IntVec>,
    /// Rows form a basis of `E` in ambient coordinates (`rank x d`).
    lattice_basis: IntMat,
    /// `x -> x * to_restricted` maps span(C) onto restricted coordinates (`d x rank`).
    to_restricted: IntMat,
    grading: Option<IntVec>,
    pointed: bool,
}

impl Cone {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[IntVec] {
        &self.generators
    }

    pub fn support_forms(&self) -> &[IntVec] {
        &self.support_forms
    }

    pub fn lattice_basis(&self) -> &IntMat {
        &self.lattice_basis
    }

    /// Normalized grading in restricted coordinates, if one was supplied.
    pub fn grading(&self) -> Option<&IntVec> {
        self.grading.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0
    }

    /// Restricted coordinates to ambient coordinates.
    pub fn to_ambient(&self, y: &[BigInt]) -> IntVec {
        if self.rank == 0 {
            return vec![BigInt::zero(); self.ambient_dim];
        }
        row_times(y, &self.lattice_basis)
    }

    /// Ambient coordinates of a point in span(C) to restricted coordinates.
    pub fn to_restricted(&self, x: &[BigInt]) -> IntVec {
        row_times(x, &self.to_restricted)
    }

    /// Support forms expressed on ambient coordinates.
    pub fn ambient_support_forms(&self) -> Vec<IntVec> {
        self.support_forms
            .iter()
            .map(|s| {
                let f: IntVec = self.to_restricted.rows().iter().map(|row| dot(row, s)).collect();
                make_primitive(&f)
            })
            .collect()
    }

    pub fn ambient_generators(&self) -> Vec<IntVec> {
        self.generators.iter().map(|g| self.to_ambient(g)).collect()
    }

    pub fn contains(&self, y: &[BigInt]) -> bool {
        self.support_forms.iter().all(|s| !dot(s, y).is_negative())
    }

    /// Degree of a restricted-coordinate vector under the normalized grading.
    pub fn degree(&self, y: &[BigInt]) -> Option<BigInt> {
        self.grading.as_ref().map(|g| dot(g, y))
    }
}

/// Builds the cone without enforcing pointedness.
pub fn build_cone_unchecked(input: &ConeInput) -> Result<Cone> {
    input.validate()?;
    let d = input.ambient_dim;

    let has_constraints = input.inequalities.is_some() || input.equations.is_some();
    let gens: Vec<IntVec> = match (&input.generators, has_constraints) {
        (Some(g), false) => g.rows().to_vec(),
        (gens, _) => {
            let mut ineqs: Vec<IntVec> = input
                .inequalities
                .as_ref()
                .map(|m| m.rows().to_vec())
                .unwrap_or_default();
            let mut eqs: Vec<IntVec> = input
                .equations
                .as_ref()
                .map(|m| m.rows().to_vec())
                .unwrap_or_default();
            if let Some(g) = gens {
                // intersect cone(g) with the constraints
                let (forms, span_eqs) = h_description(g.rows(), d)?;
                ineqs.extend(forms);
                eqs.extend(span_eqs);
            } else if input.inequalities.is_none() {
                return Err(Error::Domain("equations alone do not define a pointed cone".into()));
            }
            generators_from_constraints(d, &ineqs, &eqs)?
        }
    };
    from_ambient_generators(d, gens, input.grading.as_ref())
}

/// Builds a pointed cone; non-pointed input is an error.
pub fn build_cone(input: &ConeInput) -> Result<Cone> {
    let c = build_cone_unchecked(input)?;
    if !is_pointed(&c) {
        return Err(Error::NotPointed);
    }
    Ok(c)
}

/// True iff the support forms have full rank in restricted coordinates.
pub fn is_pointed(c: &Cone) -> bool {
    c.pointed
}

/// Inequalities and equations of `cone(gens)` in ambient coordinates.
fn h_description(gens: &[IntVec], d: usize) -> Result<(Vec<IntVec>, Vec<IntVec>)> {
    let gens: Vec<IntVec> = gens.iter().filter(|g| !is_zero_vec(g)).cloned().collect();
    if gens.is_empty() {
        return Ok((Vec::new(), IntMat::identity(d).into_rows()));
    }
    let c = from_ambient_generators(d, gens.clone(), None)?;
    let eqs = kernel_basis(&IntMat::from_rows(gens));
    Ok((c.ambient_support_forms(), eqs))
}

fn generators_from_constraints(d: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> Result<Vec<IntVec>> {
    let basis: Vec<IntVec> = if eqs.iter().any(|e| !is_zero_vec(e)) {
        kernel_basis(&IntMat::from_rows(eqs.to_vec()))
    } else {
        IntMat::identity(d).into_rows()
    };
    let m = basis.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let restricted: Vec<IntVec> = ineqs
        .iter()
        .map(|l| make_primitive(&basis.iter().map(|b| dot(l, b)).collect::<Vec<_>>()))
        .filter(|l| !is_zero_vec(l))
        .collect();
    if rank(&restricted) < m {
        return Err(Error::NotPointed);
    }
    // extreme rays of {y : l . y >= 0} are the facets of cone(l)
    let h = hull(&restricted, m)?;
    let bmat = IntMat::from_rows(basis);
    Ok(h.forms.iter().map(|y| row_times(y, &bmat)).collect())
}

fn from_ambient_generators(d: usize, gens: Vec<IntVec>, grading: Option<&IntVec>) -> Result<Cone> {
    let mut prim: Vec<IntVec> = Vec::new();
    for g in gens.iter().filter(|g| !is_zero_vec(g)) {
        let p = make_primitive(g);
        if !prim.contains(&p) {
            prim.push(p);
        }
    }
    let r = rank(&prim);
    let (lattice_basis, to_restricted) = if r == d {
        (IntMat::identity(d), IntMat::identity(d))
    } else if r == 0 {
        (IntMat::zero(0, d), IntMat::zero(d, 0))
    } else {
        saturated_basis(&prim, r)?
    };
    let restricted: Vec<IntVec> = prim.iter().map(|g| row_times(g, &to_restricted)).collect();

    let (generators, support_forms, pointed) = if r == 0 {
        (Vec::new(), Vec::new(), true)
    } else {
        let h = hull(&restricted, r)?;
        let pointed = rank(&h.forms) == r;
        let generators = if pointed {
            extreme_indices(&restricted, &h, r)
                .into_iter()
                .map(|i| restricted[i].clone())
                .collect()
        } else {
            restricted.clone()
        };
        (generators, h.forms, pointed)
    };

    let mut cone = Cone {
        ambient_dim: d,
        rank: r,
        generators,
        support_forms,
        lattice_basis,
        to_restricted,
        grading: None,
        pointed,
    };
    if let (Some(g), true) = (grading, pointed) {
        cone.grading = Some(normalize_grading(&cone, g)?);
    }
    Ok(cone)
}

/// Basis of `Z^d ∩ span(rows)` and the matching coordinate map.
fn saturated_basis(rows: &[IntVec], r: usize) -> Result<(IntMat, IntMat)> {
    let snf = smith_normal_form(&IntMat::from_rows(rows.to_vec()));
    let v = snf.v;
    let det = determinant(&v)?;
    let adj = adjugate(&v)?;
    // v^{-1} = det * adj since det = +-1
    let inv: Vec<IntVec> = adj
        .rows()
        .iter()
        .map(|row| row.iter().map(|x| x * &det).collect())
        .collect();
    let d = v.nrows();
    let basis = IntMat::from_rows(inv[..r].to_vec());
    let coords = IntMat::from_rows(
        (0..d)
            .map(|i| v.row(i)[..r].to_vec())
            .collect(),
    );
    Ok((basis, coords))
}

/// Rescales an ambient grading to restricted coordinates so that some lattice
/// element of `E` has degree 1.
pub fn normalize_grading(c: &Cone, deg: &[BigInt]) -> Result<IntVec> {
    if deg.len() != c.ambient_dim {
        return Err(Error::Dimension(format!(
            "grading of length {} in ambient dimension {}",
            deg.len(),
            c.ambient_dim
        )));
    }
    let restricted: IntVec = c.lattice_basis.rows().iter().map(|b| dot(b, deg)).collect();
    let g = content(&restricted);
    let normalized: IntVec = if g.is_zero() {
        restricted
    } else {
        restricted.iter().map(|x| x.div_floor(&g)).collect()
    };
    for y in &c.generators {
        let v = dot(&normalized, y);
        if !v.is_positive() {
            return Err(Error::GradingNotPositive(
                fmt_vec(&c.to_ambient(y)),
                dot(deg, &c.to_ambient(y)).to_string(),
            ));
        }
    }
    Ok(normalized)
}

/// Generators of the first simplex of the placing triangulation.
fn start_simplex(c: &Cone) -> Vec<usize> {
    independent_subset(&c.generators)
}

/// Order vector used for every half-open decomposition of `c`: the sum of the
/// first simplex's generators, interior to the cone.
pub fn order_vector(c: &Cone) -> OrderVector {
    let gens: Vec<IntVec> = start_simplex(c)
        .into_iter()
        .map(|i| c.generators[i].clone())
        .collect();
    OrderVector::interior_of(&gens)
}

/// Placing triangulation in generator order, as index sets into `c.generators()`.
pub fn placing_triangulation(c: &Cone) -> Result<Vec<Vec<usize>>> {
    let r = c.rank;
    if r == 0 {
        return Ok(Vec::new());
    }
    let gens = &c.generators;
    let start = start_simplex(c);
    let mut simplices = vec![start.clone()];
    let mut used: Vec<usize> = start.clone();
    let mut forms = hull(
        &used.iter().map(|&i| gens[i].clone()).collect::<Vec<_>>(),
        r,
    )?
    .forms;

    for i in 0..gens.len() {
        if used.contains(&i) {
            continue;
        }
        let g = &gens[i];
        let visible: Vec<&IntVec> = forms.iter().filter(|f| dot(f, g).is_negative()).collect();
        if visible.is_empty() {
            continue;
        }
        let mut added = Vec::new();
        for s in &simplices {
            for k in 0..r {
                let facet: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
                let on_visible = visible
                    .iter()
                    .any(|f| facet.iter().all(|&v| dot(f, &gens[v]).is_zero()));
                if on_visible {
                    let mut t = facet;
                    t.push(i);
                    added.push(t);
                }
            }
        }
        simplices.extend(added);
        used.push(i);
        forms = hull(&used.iter().map(|&j| gens[j].clone()).collect::<Vec<_>>(), r)?.forms;
    }
    Ok(simplices)
}

/// Half-open placing triangulation of a pointed cone.
pub fn triangulate(c: &Cone) -> Result<Vec<SimplicialCone>> {
    if !c.pointed {
        return Err(Error::NotPointed);
    }
    let order = order_vector(c);
    placing_triangulation(c)?
        .into_iter()
        .map(|idx| {
            let gens = idx.iter().map(|&i| c.generators[i].clone()).collect();
            SimplicialCone::new(gens, &order)
        })
        .collect()
}

/// Sum of all determinants of the triangulation.
pub fn total_volume(simplices: &[SimplicialCone]) -> BigInt {
    simplices.iter().map(|s| s.det().clone()).sum()
}
