//! Dense polynomials over `F_q`, lowest degree first, with no trailing zeros.

use crate::error::ArithmeticError;
use crate::field::{FieldSpec, Fq};

/// A polynomial over `F_q`. The zero polynomial is the empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    pub coeffs: Vec<Fq>,
}

impl Poly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last().is_some_and(|&c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: vec![] }
    }

    pub fn constant(field: &FieldSpec, c: Fq) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn one(field: &FieldSpec) -> Poly {
        Poly::constant(field, field.one())
    }

    /// The monomial `c·x^n`.
    pub fn monomial(field: &FieldSpec, c: Fq, n: usize) -> Poly {
        if field.is_zero(c) {
            return Poly::zero();
        }
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    /// `x - c`.
    pub fn linear_root(field: &FieldSpec, c: Fq) -> Poly {
        Poly {
            coeffs: vec![field.neg(c), field.one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self, field: &FieldSpec) -> Fq {
        self.coeffs.last().copied().unwrap_or_else(|| field.zero())
    }

    pub fn coeff(&self, field: &FieldSpec, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or_else(|| field.zero())
    }

    pub fn add(&self, field: &FieldSpec, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(self.coeff(field, i), other.coeff(field, i)));
        }
        Poly::new(field, out)
    }

    pub fn neg(&self, field: &FieldSpec) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, field: &FieldSpec, other: &Poly) -> Poly {
        self.add(field, &other.neg(field))
    }

    pub fn mul(&self, field: &FieldSpec, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(field, out)
    }

    pub fn scale(&self, field: &FieldSpec, c: Fq) -> Poly {
        Poly::new(
            field,
            self.coeffs.iter().map(|&a| field.mul(a, c)).collect(),
        )
    }

    pub fn pow(&self, field: &FieldSpec, mut n: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(field);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            base = base.mul(field, &base);
            n >>= 1;
        }
        acc
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    pub fn divrem(&self, field: &FieldSpec, den: &Poly) -> Result<(Poly, Poly), ArithmeticError> {
        if den.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let dd = den.degree().unwrap();
        let lead_inv = field.inv(den.leading(field))?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let factor = field.mul(*rem.last().unwrap(), lead_inv);
            if !field.is_zero(factor) {
                quot[k] = factor;
                for (i, &dc) in den.coeffs.iter().enumerate() {
                    rem[k + i] = field.sub(rem[k + i], field.mul(factor, dc));
                }
            }
            rem.pop();
        }
        Ok((Poly::new(field, quot), Poly::new(field, rem)))
    }

    pub fn gcd(&self, field: &FieldSpec, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(field, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self, field: &FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = field.inv(self.leading(field)).expect("nonzero leading");
        self.scale(field, inv)
    }

    pub fn eval(&self, field: &FieldSpec, x: Fq) -> Fq {
        let mut acc = field.zero();
        for &c in self.coeffs.iter().rev() {
            acc = field.add(field.mul(acc, x), c);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self, field: &FieldSpec) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| field.int_mul(i as i64, c))
            .collect();
        Poly::new(field, out)
    }

    /// Composition with the shift `x -> x + c`, i.e. the coefficients of
    /// `f(x + c)`.
    pub fn shift(&self, field: &FieldSpec, c: Fq) -> Poly {
        // Horner on f(x) = sum c_i x^i rewritten around x + c
        let mut out = Poly::zero();
        let shiftp = Poly {
            coeffs: vec![c, field.one()],
        };
        for &coeff in self.coeffs.iter().rev() {
            out = out.mul(field, &shiftp);
            out = out.add(field, &Poly::constant(field, coeff));
        }
        out
    }

    /// Coefficients reversed: `x^deg · f(1/x)`. Used for expansions at infinity.
    pub fn reversed(&self, field: &FieldSpec) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::new(field, coeffs)
    }

    /// Multiplicity of the root `c` (0 when `f(c) != 0`).
    pub fn root_multiplicity(&self, field: &FieldSpec, c: Fq) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Poly::linear_root(field, c);
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(field, &lin).expect("nonzero");
            if !r.is_zero() {
                return m;
            }
            m += 1;
            cur = q;
        }
    }

    /// Exact p-th root when every exponent with a nonzero coefficient is a
    /// multiple of p (Frobenius is bijective on F_q); None otherwise.
    pub fn pth_root(&self, field: &FieldSpec) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let p = field.p() as usize;
        let mut out = vec![field.zero(); (self.coeffs.len() - 1) / p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            if i % p != 0 {
                return None;
            }
            out[i / p] = field.pth_root(c);
        }
        Some(Poly::new(field, out))
    }

    /// Split into rational linear factors: returns `(constant, [(root, multiplicity)])`
    /// or None when an irreducible factor of degree > 1 remains.
    pub fn split_roots(&self, field: &FieldSpec) -> Option<(Fq, Vec<(Fq, usize)>)> {
        if self.is_zero() {
            return None;
        }
        let lead = self.leading(field);
        let mut cur = self.monic(field);
        let mut roots = vec![];
        for r in field.elements() {
            if cur.degree() == Some(0) {
                break;
            }
            let m = cur.root_multiplicity(field, r);
            if m > 0 {
                roots.push((r, m));
                let lin = Poly::linear_root(field, r).pow(field, m as u32);
                cur = cur.divrem(field, &lin).expect("nonzero").0;
            }
        }
        if cur.degree() != Some(0) {
            return None;
        }
        Some((lead, roots))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldSpec {
        FieldSpec::standard(2, 1).unwrap()
    }

    #[test]
    fn divrem_and_gcd() {
        let f = f2();
        // (x^2 + x) / (x + 1) = x remainder 0
        let num = Poly::new(&f, vec![f.zero(), f.one(), f.one()]);
        let den = Poly::new(&f, vec![f.one(), f.one()]);
        let (q, r) = num.divrem(&f, &den).unwrap();
        assert_eq!(q.coeffs, vec![f.zero(), f.one()]);
        assert!(r.is_zero());
        let g = num.gcd(&f, &den);
        assert_eq!(g, den.monic(&f));
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let f = f2();
        // x^2 has zero derivative in characteristic 2
        let sq = Poly::monomial(&f, f.one(), 2);
        assert!(sq.derivative(&f).is_zero());
        assert_eq!(sq.pth_root(&f).unwrap(), Poly::monomial(&f, f.one(), 1));
        let x3 = Poly::monomial(&f, f.one(), 3);
        assert!(x3.pth_root(&f).is_none());
    }

    #[test]
    fn shift_is_composition() {
        let f = FieldSpec::standard(5, 1).unwrap();
        let poly = Poly::new(&f, vec![f.element(1), f.element(2), f.element(3)]);
        let c = f.element(4);
        let shifted = poly.shift(&f, c);
        for x in f.elements() {
            assert_eq!(shifted.eval(&f, x), poly.eval(&f, f.add(x, c)));
        }
    }

    #[test]
    fn split_roots_detects_irreducible() {
        let f = f2();
        // x^2 + x + 1 is irreducible over F_2
        let p = Poly::new(&f, vec![f.one(), f.one(), f.one()]);
        assert!(p.split_roots(&f).is_none());
        let q = Poly::new(&f, vec![f.zero(), f.one(), f.one()]); // x(x+1)
        let (lead, roots) = q.split_roots(&f).unwrap();
        assert_eq!(lead, f.one());
        assert_eq!(roots.len(), 2);
    }
}
