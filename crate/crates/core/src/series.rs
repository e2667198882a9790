//! Integer polynomials and Hilbert series in the form `R(t) / (1 - t^e)^r`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Poly = Vec<BigInt>;

pub fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn poly_add_assign(acc: &mut Poly, p: &[BigInt]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigInt::zero());
    }
    for (a, b) in acc.iter_mut().zip(p) {
        *a += b;
    }
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `(1 - t^total) / (1 - t^step) = 1 + t^step + ... + t^(total - step)`.
pub fn geometric(step: u64, total: u64) -> Poly {
    debug_assert!(step > 0 && total % step == 0);
    let mut out = vec![BigInt::zero(); (total - step + 1) as usize];
    let mut k = 0;
    while k <= total - step {
        out[k as usize] = BigInt::one();
        k += step;
    }
    out
}

/// Exact division by a polynomial with leading coefficient 1; `None` if a
/// remainder is left.
pub fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Option<Poly> {
    let mut rem: Poly = num.to_vec();
    trim(&mut rem);
    let mut den = den.to_vec();
    trim(&mut den);
    assert!(den.last().is_some_and(One::is_one), "divisor must be monic");
    if rem.is_empty() {
        return Some(Vec::new());
    }
    if rem.len() < den.len() {
        return None;
    }
    let dl = den.len();
    let mut quot = vec![BigInt::zero(); rem.len() - dl + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dl - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    if rem.iter().all(Zero::is_zero) {
        trim(&mut quot);
        Some(quot)
    } else {
        None
    }
}

pub fn lcm_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1, |a, b| a.lcm(&b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSeries {
    numerator: Poly,
    period: u64,
    rank: usize,
}

impl HilbertSeries {
    pub fn new(mut numerator: Poly, period: u64, rank: usize) -> Self {
        trim(&mut numerator);
        HilbertSeries {
            numerator,
            period,
            rank,
        }
    }

    /// Coefficients of `R`, constant term first.
    pub fn numerator(&self) -> &[BigInt] {
        &self.numerator
    }

    /// The exponent `e` in `(1 - t^e)^r`.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `deg R < e r`, i.e. the rational function has negative degree.
    pub fn has_negative_degree(&self) -> bool {
        (self.numerator.len() as u64) <= self.period * self.rank as u64
    }

    /// First `n` coefficients of the power series expansion.
    pub fn expand(&self, n: usize) -> Vec<BigInt> {
        let mut a: Vec<BigInt> = (0..n)
            .map(|i| self.numerator.get(i).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        let e = self.period as usize;
        for _ in 0..self.rank {
            for i in e..n {
                let prev = a[i - e].clone();
                a[i] += prev;
            }
        }
        a
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs: Vec<String> = if self.numerator.is_empty() {
            vec!["0".into()]
        } else {
            self.numerator.iter().map(ToString::to_string).collect()
        };
        write!(f, "{} / (1-t^{})^{}", coeffs.join(" "), self.period, self.rank)
    }
}
