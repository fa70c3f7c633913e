//! Truncated Laurent expansions in a local parameter.
//!
//! The window of known exponents is `[start, precision)`. A normalized
//! expansion has a nonzero leading coefficient, except for the expansion that
//! is identically zero up to its precision, stored with an empty coefficient
//! list and `start == precision`.

use crate::field::{FieldSpec, Fq};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentExpansion {
    pub start: i64,
    pub coeffs: Vec<Fq>,
    pub precision: i64,
}

impl LaurentExpansion {
    /// Normalize: trim leading zeros, pad/truncate the window to `precision`.
    pub fn new(field: &FieldSpec, mut start: i64, mut coeffs: Vec<Fq>, precision: i64) -> Self {
        // drop anything at or beyond the precision horizon
        let keep = (precision - start).max(0) as usize;
        coeffs.truncate(keep);
        while let Some(&c0) = coeffs.first() {
            if field.is_zero(c0) {
                coeffs.remove(0);
                start += 1;
            } else {
                break;
            }
        }
        if coeffs.is_empty() {
            return LaurentExpansion {
                start: precision,
                coeffs: vec![],
                precision,
            };
        }
        // pad the tail with zeros so the window is contiguous up to precision
        while (start + coeffs.len() as i64) < precision {
            coeffs.push(field.zero());
        }
        LaurentExpansion {
            start,
            coeffs,
            precision,
        }
    }

    pub fn zero(precision: i64) -> Self {
        LaurentExpansion {
            start: precision,
            coeffs: vec![],
            precision,
        }
    }

    pub fn monomial(field: &FieldSpec, c: Fq, exponent: i64, precision: i64) -> Self {
        if field.is_zero(c) || exponent >= precision {
            return LaurentExpansion::zero(precision);
        }
        LaurentExpansion::new(field, exponent, vec![c], precision)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The order of vanishing; None when identically zero up to precision.
    pub fn ord(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.start)
        }
    }

    pub fn coeff(&self, field: &FieldSpec, exponent: i64) -> Fq {
        if exponent < self.start {
            return field.zero();
        }
        let idx = (exponent - self.start) as usize;
        self.coeffs
            .get(idx)
            .copied()
            .unwrap_or_else(|| field.zero())
    }

    pub fn add(&self, field: &FieldSpec, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        if self.is_zero() && other.is_zero() {
            return LaurentExpansion::zero(precision);
        }
        let start = match (self.ord(), other.ord()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!(),
        };
        let mut coeffs = Vec::with_capacity((precision - start).max(0) as usize);
        let mut k = start;
        while k < precision {
            coeffs.push(field.add(self.coeff(field, k), other.coeff(field, k)));
            k += 1;
        }
        LaurentExpansion::new(field, start, coeffs, precision)
    }

    pub fn neg(&self, field: &FieldSpec) -> Self {
        LaurentExpansion {
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| field.neg(c)).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, field: &FieldSpec, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn mul(&self, field: &FieldSpec, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentExpansion::zero(self.precision.min(other.precision));
        }
        let start = self.start + other.start;
        // each factor is exact up to its precision; products of unknown tails
        // cap the reliable window
        let precision = (self.precision + other.start).min(other.precision + self.start);
        let len = (precision - start).max(0) as usize;
        let mut coeffs = vec![field.zero(); len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] = field.add(coeffs[i + j], field.mul(a, b));
                }
            }
        }
        LaurentExpansion::new(field, start, coeffs, precision)
    }

    /// Restrict the window to a smaller precision.
    pub fn truncate(&self, field: &FieldSpec, precision: i64) -> Self {
        let precision = precision.min(self.precision);
        LaurentExpansion::new(field, self.start, self.coeffs.clone(), precision)
    }
}
