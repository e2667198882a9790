//! Subdivision candidates from a lattice overcone of a simplicial cone.
//!
//! The cross section of the simplex at a fixed height is a rational simplex in
//! an affine lattice of dimension `d - 1`. Each of its vertices lies in a face
//! of the braid triangulation of the unit lattice cube around it; the vertices
//! of these faces generate a cone that contains the simplex and usually has
//! small determinants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{adjugate, determinant, dot, is_zero_vec, row_times, smith_normal_form, IntMat, IntVec};
use crate::collector::reduce_to_hilbert_basis;
use crate::cone::{build_cone_unchecked, is_pointed, triangulate, ConeInput};
use crate::error::{Error, Result};
use crate::hull::hull;
use crate::simplex::hb_candidates;
use crate::simplicial::SimplicialCone;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossSection {
    /// `x_i * level / (N . x_i)`.
    pub vertices: Vec<Vec<BigRational>>,
    pub height_form: IntVec,
    pub level: u32,
    /// Rows form a lattice basis whose first vector has height 1 and the
    /// others height 0, so the first coordinate in this basis is `N . x`.
    pub basis: IntMat,
    basis_inverse: IntMat,
}

impl CrossSection {
    /// Vertex coordinates in `basis`; the first one equals `level`.
    pub fn lattice_vertices(&self) -> Vec<Vec<BigRational>> {
        let inv: Vec<Vec<BigRational>> = self
            .basis_inverse
            .rows()
            .iter()
            .map(|r| r.iter().cloned().map(BigRational::from_integer).collect())
            .collect();
        self.vertices
            .iter()
            .map(|v| {
                (0..v.len())
                    .map(|j| v.iter().zip(&inv).map(|(x, row)| x * &row[j]).sum())
                    .collect()
            })
            .collect()
    }

    /// Basis coordinates back to ambient coordinates.
    pub fn to_ambient(&self, z: &[BigInt]) -> IntVec {
        row_times(z, &self.basis)
    }
}

/// Unimodular basis with `N . b_0 = 1` and `N . b_j = 0` for `j > 0`, with its inverse.
fn height_basis(normal: &[BigInt]) -> (IntMat, IntMat) {
    let snf = smith_normal_form(&IntMat::from_rows(vec![normal.to_vec()]));
    // N v = +-e_0, so the columns of v are such a basis up to the sign of the first
    let mut rows = snf.v.transpose().into_rows();
    if dot(normal, &rows[0]).is_negative() {
        rows[0] = rows[0].iter().map(|x| -x).collect();
    }
    let basis = IntMat::from_rows(rows);
    let det = determinant(&basis).expect("square");
    let inverse = IntMat::from_rows(
        adjugate(&basis)
            .expect("square")
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x * &det).collect())
            .collect(),
    );
    (basis, inverse)
}

pub fn cross_section(s: &SimplicialCone, level: u32) -> CrossSection {
    let n = s.height_normal();
    let h = s.generator_height();
    let vertices = s
        .gens()
        .iter()
        .map(|g| {
            g.iter()
                .map(|x| BigRational::new(x * BigInt::from(level), h.clone()))
                .collect()
        })
        .collect();
    let (basis, basis_inverse) = height_basis(&n);
    CrossSection {
        vertices,
        height_form: n,
        level,
        basis,
        basis_inverse,
    }
}

/// Vertices of the braid simplex containing `v`, each with its barycentric
/// weight. Vertices of weight zero are left out.
pub fn cube_face_decomposition(v: &[BigRational]) -> Vec<(IntVec, BigRational)> {
    let base: IntVec = v.iter().map(|x| x.floor().to_integer()).collect();
    let frac: Vec<BigRational> = v.iter().map(|x| x - x.floor()).collect();
    let mut order: Vec<usize> = (0..v.len()).collect();
    // decreasing fractional part, ties by index
    order.sort_by(|&a, &b| frac[b].cmp(&frac[a]).then(a.cmp(&b)));

    let mut out = Vec::new();
    let mut w = base;
    let mut prev = BigRational::one();
    for &k in &order {
        let weight = &prev - &frac[k];
        if weight.is_positive() {
            out.push((w.clone(), weight));
        }
        w[k] += 1;
        prev = frac[k].clone();
    }
    if prev.is_positive() {
        out.push((w, prev));
    }
    out
}

pub fn minimal_cube_face_vertices(v: &[BigRational]) -> Vec<IntVec> {
    cube_face_decomposition(v).into_iter().map(|(w, _)| w).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxCone {
    pub generators: Vec<IntVec>,
}

/// Overcone of `s` generated by the cube faces around its cross section at
/// height `level`, taken in the lattice of that hyperplane.
pub fn approximate_cone(s: &SimplicialCone, level: u32) -> Result<ApproxCone> {
    if level == 0 {
        return Err(Error::Domain("approximation level must be positive".into()));
    }
    let section = cross_section(s, level);
    let mut generators: Vec<IntVec> = Vec::new();
    for v in section.lattice_vertices() {
        for z in minimal_cube_face_vertices(&v) {
            // the first coordinate is the integer `level`, so every vertex has that height
            let w = section.to_ambient(&z);
            if !is_zero_vec(&w) && !generators.contains(&w) {
                generators.push(w);
            }
        }
    }
    let forms = hull(&generators, s.dim())
        .map_err(|_| Error::Internal("approximating cone is not full-dimensional".into()))?
        .forms;
    if s.gens().iter().any(|g| forms.iter().any(|f| dot(f, g).is_negative())) {
        return Err(Error::Internal("approximating cone does not contain the simplex".into()));
    }
    Ok(ApproxCone { generators })
}

/// Subdivision points of `s` found by evaluating the overcone at `level`,
/// reduced and ordered by their coordinate sum in `s`. Empty when the
/// overcone is unusable.
pub fn approx_candidates(s: &SimplicialCone, level: u32) -> Result<Vec<IntVec>> {
    let over = approximate_cone(s, level)?;
    let cone = build_cone_unchecked(&ConeInput {
        ambient_dim: s.dim(),
        generators: Some(IntMat::from_rows(over.generators.clone())),
        ..Default::default()
    })?;
    if !is_pointed(&cone) {
        return Ok(Vec::new());
    }
    let pieces = triangulate(&cone)?;
    if pieces.iter().any(|t| t.det() > s.det()) {
        return Ok(Vec::new());
    }

    let normal = s.height_normal();
    let height = s.generator_height();
    let mut found: Vec<IntVec> = Vec::new();
    // generators that are not extreme rays of the overcone are candidates too
    let mut pool = over.generators;
    for t in &pieces {
        pool.extend(hb_candidates(t)?.iter().map(|p| cone.to_ambient(p)));
    }
    for x in pool {
        if !is_zero_vec(&x)
            && s.contains(&x)
            && !s.on_ray(&x)
            && dot(&normal, &x) < height
            && !found.contains(&x)
        {
            found.push(x);
        }
    }
    let mut b = reduce_to_hilbert_basis(&found, s.dual());
    b.sort_by_cached_key(|x| {
        let q = s.q_numerators(x);
        (q.iter().sum::<BigInt>(), x.clone())
    });
    Ok(b)
}

/// `sum w * weight == v` and the weights sum to one.
pub fn reconstructs(v: &[BigRational], parts: &[(IntVec, BigRational)]) -> bool {
    let mut acc = vec![BigRational::zero(); v.len()];
    let mut total = BigRational::zero();
    for (w, lambda) in parts {
        for (a, x) in acc.iter_mut().zip(w) {
            *a += BigRational::from_integer(x.clone()) * lambda;
        }
        total += lambda;
    }
    total.is_one() && acc.as_slice() == v
}
