//! Mixed-radix numbers and the digit-reversal ("flip") operators.
//!
//! A value `y < H` is written in the base vector `b = (b_1, ..., b_{r-1})` as
//! `y = y_1 + y_2*B_1 + ... + y_{r-1}*B_{r-2}` with `0 <= y_i < b_i` and
//! `B_k = b_1 * ... * b_k`. Digits are stored least significant first.
//!
//! Everything here is generic over the unsigned integer type so the same
//! routines serve `u32` test sweeps and `u64` production instances.

use std::fmt::Debug;

use num_traits::{PrimInt, Unsigned};
use thiserror::Error;

/// Unsigned integer usable as a mixed-radix digit or value.
pub trait Radix: PrimInt + Unsigned + Debug {}

impl<T: PrimInt + Unsigned + Debug> Radix for T {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadixError {
    #[error("value {value} is outside [0, {limit})")]
    OutOfRange { value: String, limit: String },
    #[error("digit {digit} at position {position} is not below its base {base}")]
    DigitOutOfRange {
        position: usize,
        digit: String,
        base: String,
    },
    #[error("flip length {k} exceeds the {len} digits of the base vector")]
    KOutOfRange { k: usize, len: usize },
    #[error("digit count {digits} does not match base vector length {bases}")]
    LengthMismatch { digits: usize, bases: usize },
    #[error("base {0} is smaller than 2")]
    DegenerateBase(String),
}

/// Digits of a value with respect to a base vector, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedRadixDigits<T> {
    digits: Vec<T>,
    bases: Vec<T>,
}

impl<T: Radix> MixedRadixDigits<T> {
    pub fn new(digits: Vec<T>, bases: Vec<T>) -> Result<Self, RadixError> {
        if digits.len() != bases.len() {
            return Err(RadixError::LengthMismatch {
                digits: digits.len(),
                bases: bases.len(),
            });
        }
        check_bases(&bases)?;
        for (position, (&digit, &base)) in digits.iter().zip(&bases).enumerate() {
            if digit >= base {
                return Err(RadixError::DigitOutOfRange {
                    position,
                    digit: format!("{digit:?}"),
                    base: format!("{base:?}"),
                });
            }
        }
        Ok(Self { digits, bases })
    }

    pub fn digits(&self) -> &[T] {
        &self.digits
    }

    pub fn bases(&self) -> &[T] {
        &self.bases
    }
}

fn check_bases<T: Radix>(bases: &[T]) -> Result<(), RadixError> {
    let two = T::one() + T::one();
    match bases.iter().find(|&&b| b < two) {
        Some(b) => Err(RadixError::DegenerateBase(format!("{b:?}"))),
        None => Ok(()),
    }
}

/// Product of all bases, i.e. the number of representable values.
pub fn capacity<T: Radix>(bases: &[T]) -> T {
    bases.iter().fold(T::one(), |acc, &b| acc * b)
}

pub fn decompose<T: Radix>(value: T, bases: &[T]) -> Result<MixedRadixDigits<T>, RadixError> {
    check_bases(bases)?;
    let limit = capacity(bases);
    if value >= limit {
        return Err(RadixError::OutOfRange {
            value: format!("{value:?}"),
            limit: format!("{limit:?}"),
        });
    }
    let mut rest = value;
    let digits = bases
        .iter()
        .map(|&b| {
            let d = rest % b;
            rest = rest / b;
            d
        })
        .collect();
    Ok(MixedRadixDigits {
        digits,
        bases: bases.to_vec(),
    })
}

pub fn compose<T: Radix>(digits: &MixedRadixDigits<T>) -> T {
    // Horner from the most significant digit down.
    digits
        .digits
        .iter()
        .zip(&digits.bases)
        .rev()
        .fold(T::zero(), |acc, (&d, &b)| acc * b + d)
}

/// Reverses the first `k` components of the base vector.
pub fn bflip<T: Radix>(bases: &[T], k: usize) -> Result<Vec<T>, RadixError> {
    if k > bases.len() {
        return Err(RadixError::KOutOfRange {
            k,
            len: bases.len(),
        });
    }
    let mut flipped = bases.to_vec();
    flipped[..k].reverse();
    Ok(flipped)
}

/// Reverses the `k` least significant digits of `value` written in `bases`;
/// the result is read in the base vector `bflip(bases, k)`.
pub fn flip<T: Radix>(value: T, k: usize, bases: &[T]) -> Result<T, RadixError> {
    let flipped_bases = bflip(bases, k)?;
    let mut digits = decompose(value, bases)?.digits;
    digits[..k].reverse();
    Ok(compose(&MixedRadixDigits {
        digits,
        bases: flipped_bases,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: [u64; 3] = [2, 2, 3];

    #[test]
    fn decompose_worked_values() {
        assert_eq!(decompose(10u64, &B).unwrap().digits(), &[0, 1, 2]);
        assert_eq!(decompose(6u64, &B).unwrap().digits(), &[0, 1, 1]);
        assert_eq!(decompose(0u64, &B).unwrap().digits(), &[0, 0, 0]);
        assert!(matches!(
            decompose(12u64, &B),
            Err(RadixError::OutOfRange { .. })
        ));
    }

    #[test]
    fn compose_worked_values() {
        let ten = MixedRadixDigits::new(vec![0u64, 1, 2], B.to_vec()).unwrap();
        assert_eq!(compose(&ten), 10);
        let max = MixedRadixDigits::new(vec![1u64, 1, 2], B.to_vec()).unwrap();
        assert_eq!(compose(&max), 11);
        let zero = MixedRadixDigits::new(vec![0u64, 0, 0], B.to_vec()).unwrap();
        assert_eq!(compose(&zero), 0);
        assert!(matches!(
            MixedRadixDigits::new(vec![2u64, 0, 0], B.to_vec()),
            Err(RadixError::DigitOutOfRange { position: 0, .. })
        ));
    }

    #[test]
    fn bflip_reverses_prefix() {
        assert_eq!(bflip(&B, 3).unwrap(), vec![3, 2, 2]);
        assert_eq!(bflip(&B, 0).unwrap(), B.to_vec());
        assert_eq!(bflip(&[5u32, 7, 2], 1).unwrap(), vec![5, 7, 2]);
        assert_eq!(bflip(&[5u32, 7, 2], 2).unwrap(), vec![7, 5, 2]);
        assert!(matches!(
            bflip(&B, 4),
            Err(RadixError::KOutOfRange { k: 4, len: 3 })
        ));
    }

    #[test]
    fn flip_worked_values() {
        assert_eq!(flip(10u64, 3, &B).unwrap(), 5);
        assert_eq!(flip(6u64, 3, &B).unwrap(), 4);
        for y in 0..12u64 {
            assert_eq!(flip(y, 1, &B).unwrap(), y);
            assert_eq!(flip(y, 0, &B).unwrap(), y);
        }
        assert!(flip(12u64, 2, &B).is_err());
    }

    #[test]
    fn empty_base_vector_has_single_value() {
        let empty: [u32; 0] = [];
        assert_eq!(capacity(&empty), 1);
        assert_eq!(decompose(0u32, &empty).unwrap().digits(), &[] as &[u32]);
        assert_eq!(flip(0u32, 0, &empty).unwrap(), 0);
        assert!(decompose(1u32, &empty).is_err());
    }

    #[test]
    fn rejects_unit_base() {
        assert!(matches!(
            decompose(0u8, &[2, 1]),
            Err(RadixError::DegenerateBase(_))
        ));
    }
}
