//! Machine-width fast paths for the hot loops.
//!
//! Kernels that touch every point of a fundamental domain or every node of a
//! search tree are written once over [`Scalar`] and instantiated with `i64`,
//! `i128` or `BigInt`, depending on a bit bound computed from the inputs.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

pub trait Scalar: Integer + Signed + Clone + Ord + Hash + Debug + Send + Sync + 'static {
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i64().expect("value exceeds the selected i64 width")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("value exceeds the selected i128 width")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Width {
    I64,
    I128,
    Big,
}

impl Width {
    /// Narrowest width whose range holds every intermediate of `bits` bits.
    pub fn for_bits(bits: u64) -> Width {
        if bits <= 62 {
            Width::I64
        } else if bits <= 126 {
            Width::I128
        } else {
            Width::Big
        }
    }
}

pub fn bits(v: &BigInt) -> u64 {
    v.bits()
}

pub fn max_bits<'a>(vals: impl IntoIterator<Item = &'a BigInt>) -> u64 {
    vals.into_iter().map(BigInt::bits).max().unwrap_or(0)
}

pub fn convert<T: Scalar>(v: &[BigInt]) -> Vec<T> {
    v.iter().map(T::from_big).collect()
}

pub fn to_big<T: Scalar>(v: &[T]) -> Vec<BigInt> {
    v.iter().map(Scalar::to_big).collect()
}
