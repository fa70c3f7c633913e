//! Rational functions on the projective line over `F_q`, with exact orders,
//! Laurent expansions, differential orders and logarithmic residues at
//! rational places.

use crate::error::ArithmeticError;
use crate::field::{FieldSpec, Fq};
use crate::laurent::LaurentExpansion;
use crate::poly::Poly;

/// A rational place of the projective line over `F_q`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Finite(Fq),
    Infinity,
}

impl Place {
    /// The fixed total order: finite places by field-element encoding, then
    /// the place at infinity. Deterministic point selection relies on it.
    pub fn order_index(&self, field: &FieldSpec) -> u32 {
        match self {
            Place::Finite(c) => c.0,
            Place::Infinity => field.q(),
        }
    }
}

/// All rational places in the fixed total order.
pub fn all_places(field: &FieldSpec) -> Vec<Place> {
    let mut v: Vec<Place> = field.elements().map(Place::Finite).collect();
    v.push(Place::Infinity);
    v
}

/// A quotient of polynomials in canonical form: `gcd(num, den) = 1`, monic
/// denominator. The zero function is `0/1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(field: &FieldSpec, num: Poly, den: Poly) -> Result<Self, ArithmeticError> {
        if den.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: Poly::zero(),
                den: Poly::one(field),
            });
        }
        let g = num.gcd(field, &den);
        let num = num.divrem(field, &g)?.0;
        let den = den.divrem(field, &g)?.0;
        let lead_inv = field.inv(den.leading(field))?;
        Ok(RationalFunction {
            num: num.scale(field, lead_inv),
            den: den.scale(field, lead_inv),
        })
    }

    pub fn from_poly(field: &FieldSpec, num: Poly) -> Self {
        RationalFunction {
            num,
            den: Poly::one(field),
        }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        RationalFunction::from_poly(field, Poly::zero())
    }

    pub fn one(field: &FieldSpec) -> Self {
        RationalFunction::from_poly(field, Poly::one(field))
    }

    pub fn constant(field: &FieldSpec, c: Fq) -> Self {
        RationalFunction::from_poly(field, Poly::constant(field, c))
    }

    /// The coordinate function `x`.
    pub fn x(field: &FieldSpec) -> Self {
        RationalFunction::from_poly(field, Poly::monomial(field, field.one(), 1))
    }

    /// `Π (x - root_i)^{e_i}` with integer exponents of either sign.
    pub fn from_root_powers(
        field: &FieldSpec,
        factors: &[(Fq, i64)],
    ) -> Result<Self, ArithmeticError> {
        let mut num = Poly::one(field);
        let mut den = Poly::one(field);
        for &(root, exp) in factors {
            let lin = Poly::linear_root(field, root);
            if exp >= 0 {
                num = num.mul(field, &lin.pow(field, exp as u32));
            } else {
                den = den.mul(field, &lin.pow(field, (-exp) as u32));
            }
        }
        RationalFunction::new(field, num, den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, field: &FieldSpec, other: &Self) -> Self {
        let num = self
            .num
            .mul(field, &other.den)
            .add(field, &other.num.mul(field, &self.den));
        let den = self.den.mul(field, &other.den);
        RationalFunction::new(field, num, den).expect("nonzero denominator")
    }

    pub fn neg(&self, field: &FieldSpec) -> Self {
        RationalFunction {
            num: self.num.neg(field),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, field: &FieldSpec, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn mul(&self, field: &FieldSpec, other: &Self) -> Self {
        let num = self.num.mul(field, &other.num);
        let den = self.den.mul(field, &other.den);
        RationalFunction::new(field, num, den).expect("nonzero denominator")
    }

    pub fn div(&self, field: &FieldSpec, other: &Self) -> Result<Self, ArithmeticError> {
        if other.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let num = self.num.mul(field, &other.den);
        let den = self.den.mul(field, &other.num);
        RationalFunction::new(field, num, den)
    }

    pub fn pow(&self, field: &FieldSpec, n: i64) -> Result<Self, ArithmeticError> {
        if n == 0 {
            return Ok(RationalFunction::one(field));
        }
        if self.is_zero() {
            if n < 0 {
                return Err(ArithmeticError::DivisionByZero);
            }
            return Ok(RationalFunction::zero(field));
        }
        let base = if n > 0 {
            self.clone()
        } else {
            RationalFunction::one(field).div(field, self)?
        };
        let mut exp = n.unsigned_abs() as u32;
        let mut acc = RationalFunction::one(field);
        let mut cur = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(field, &cur);
            }
            cur = cur.mul(field, &cur);
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Quotient-rule formal derivative.
    pub fn derivative(&self, field: &FieldSpec) -> Self {
        let num = self
            .num
            .derivative(field)
            .mul(field, &self.den)
            .sub(field, &self.num.mul(field, &self.den.derivative(field)));
        let den = self.den.mul(field, &self.den);
        RationalFunction::new(field, num, den).expect("nonzero denominator")
    }

    /// The function `f(1/s)` as a rational function in `s`.
    pub fn at_infinity(&self, field: &FieldSpec) -> Self {
        if self.is_zero() {
            return RationalFunction::zero(field);
        }
        let dn = self.num.degree().unwrap() as i64;
        let dd = self.den.degree().unwrap() as i64;
        let mut num = self.num.reversed(field);
        let mut den = self.den.reversed(field);
        let shift = dd - dn;
        if shift >= 0 {
            num = num.mul(field, &Poly::monomial(field, field.one(), shift as usize));
        } else {
            den = den.mul(
                field,
                &Poly::monomial(field, field.one(), (-shift) as usize),
            );
        }
        RationalFunction::new(field, num, den).expect("nonzero denominator")
    }

    pub fn eval(&self, field: &FieldSpec, x: Fq) -> Result<Fq, ArithmeticError> {
        let d = self.den.eval(field, x);
        if field.is_zero(d) {
            return Err(ArithmeticError::DivisionByZero);
        }
        field.div(self.num.eval(field, x), d)
    }

    /// Vanishing order at a place; None encodes +∞ (the zero function).
    pub fn ord_at(&self, field: &FieldSpec, place: Place) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        match place {
            Place::Finite(c) => {
                let vn = self.num.root_multiplicity(field, c) as i64;
                let vd = self.den.root_multiplicity(field, c) as i64;
                Some(vn - vd)
            }
            Place::Infinity => {
                Some(self.den.degree().unwrap() as i64 - self.num.degree().unwrap() as i64)
            }
        }
    }

    /// Laurent expansion in the local parameter `x - c` (or `1/x` at
    /// infinity), up to but excluding the given precision.
    pub fn expand_at(
        &self,
        field: &FieldSpec,
        place: Place,
        precision: i64,
    ) -> Result<LaurentExpansion, ArithmeticError> {
        let ord = self.ord_at(field, place);
        match ord {
            None => Err(ArithmeticError::EmptyWindow),
            Some(v) if precision <= v => Err(ArithmeticError::EmptyWindow),
            Some(v) => match place {
                Place::Infinity => {
                    self.at_infinity(field)
                        .expand_at(field, Place::Finite(field.zero()), precision)
                }
                Place::Finite(c) => {
                    let num = self.num.shift(field, c);
                    let den = self.den.shift(field, c);
                    // strip the common power of x and divide unit series
                    let vn = num.coeffs.iter().take_while(|&&a| field.is_zero(a)).count();
                    let vd = den.coeffs.iter().take_while(|&&a| field.is_zero(a)).count();
                    debug_assert_eq!(vn as i64 - vd as i64, v);
                    let terms = (precision - v) as usize;
                    let coeffs = series_div(field, &num.coeffs[vn..], &den.coeffs[vd..], terms)?;
                    Ok(LaurentExpansion::new(field, v, coeffs, precision))
                }
            },
        }
    }

    /// Expansion with the default window of 32 coefficients past the order.
    pub fn expand_at_default(
        &self,
        field: &FieldSpec,
        place: Place,
    ) -> Result<LaurentExpansion, ArithmeticError> {
        let ord = self.ord_at(field, place).ok_or(ArithmeticError::EmptyWindow)?;
        self.expand_at(field, place, ord + 32)
    }

    /// Order of the differential `df` at a place (using `dx = -s^{-2} ds` at
    /// infinity); None encodes +∞, i.e. `df = 0` and `f` is a p-th power.
    pub fn diff_ord(&self, field: &FieldSpec, place: Place) -> Option<i64> {
        let df = self.derivative(field);
        if df.is_zero() {
            return None;
        }
        match place {
            Place::Finite(_) => df.ord_at(field, place),
            Place::Infinity => Some(df.ord_at(field, Place::Infinity).unwrap() - 2),
        }
    }

    /// Residue of the differential `self · dx` at a place.
    pub fn residue(&self, field: &FieldSpec, place: Place) -> Result<Fq, ArithmeticError> {
        match place {
            Place::Finite(_) => match self.ord_at(field, place) {
                None => Ok(field.zero()),
                Some(v) if v >= 0 => Ok(field.zero()),
                Some(_) => Ok(self.expand_at(field, place, 0)?.coeff(field, -1)),
            },
            Place::Infinity => {
                // f dx = -f(1/s) s^{-2} ds
                let h = self.at_infinity(field);
                match h.ord_at(field, Place::Finite(field.zero())) {
                    None => Ok(field.zero()),
                    Some(v) if v >= 2 => Ok(field.zero()),
                    Some(_) => {
                        let e = h.expand_at(field, Place::Finite(field.zero()), 2)?;
                        Ok(field.neg(e.coeff(field, 1)))
                    }
                }
            }
        }
    }

    /// Residue of `df/f` at a place, as an element of the prime field.
    /// For functions with rational divisor this equals `ord_at(f, P) mod p`.
    pub fn dlog_residue(&self, field: &FieldSpec, place: Place) -> Result<u32, ArithmeticError> {
        if self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let dlog = self.derivative(field).div(field, self)?;
        let res = dlog.residue(field, place)?;
        field
            .as_prime_int(res)
            .ok_or_else(|| ArithmeticError::BadField("residue outside the prime field".into()))
    }

    /// All places with nonzero order, in the fixed place order, infinity
    /// included. Errors when a zero or pole lives at a non-rational place.
    pub fn divisor(&self, field: &FieldSpec) -> Result<Vec<(Place, i64)>, ArithmeticError> {
        if self.is_zero() {
            return Err(ArithmeticError::DivisionByZero);
        }
        let (_, zeros) = self
            .num
            .split_roots(field)
            .ok_or(ArithmeticError::NonRationalPlace)?;
        let (_, poles) = self
            .den
            .split_roots(field)
            .ok_or(ArithmeticError::NonRationalPlace)?;
        let mut out: Vec<(Place, i64)> = vec![];
        for (root, m) in zeros {
            out.push((Place::Finite(root), m as i64));
        }
        for (root, m) in poles {
            out.push((Place::Finite(root), -(m as i64)));
        }
        let at_inf = self.ord_at(field, Place::Infinity).unwrap();
        if at_inf != 0 {
            out.push((Place::Infinity, at_inf));
        }
        out.sort_by_key(|(p, _)| p.order_index(field));
        debug_assert_eq!(out.iter().map(|&(_, n)| n).sum::<i64>(), 0);
        Ok(out)
    }

    /// True when `self = g^p` for a rational `g` (Frobenius is bijective on
    /// the coefficient field, so exponent divisibility is the whole test).
    pub fn is_pth_power(&self, field: &FieldSpec) -> bool {
        if self.is_zero() {
            return true;
        }
        self.num.pth_root(field).is_some() && self.den.pth_root(field).is_some()
    }

    /// The p-th root when it exists as a rational function.
    pub fn pth_root(&self, field: &FieldSpec) -> Option<Self> {
        let num = self.num.pth_root(field)?;
        let den = self.den.pth_root(field)?;
        Some(RationalFunction::new(field, num, den).expect("nonzero denominator"))
    }
}

/// Quotient of two power series given by coefficient slices with nonzero
/// leading divisor coefficient, to `terms` coefficients.
fn series_div(
    field: &FieldSpec,
    num: &[Fq],
    den: &[Fq],
    terms: usize,
) -> Result<Vec<Fq>, ArithmeticError> {
    let d0 = den.first().copied().unwrap_or_else(|| field.zero());
    let d0_inv = field.inv(d0)?;
    let mut out = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = num.get(k).copied().unwrap_or_else(|| field.zero());
        for (j, &q) in out.iter().enumerate() {
            let dk = den.get(k - j).copied().unwrap_or_else(|| field.zero());
            acc = field.sub(acc, field.mul(q, dk));
        }
        out.push(field.mul(acc, d0_inv));
    }
    Ok(out)
}
