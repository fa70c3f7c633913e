//! Finite fields `F_q` with `q = p^e`, small enough for table-based arithmetic.
//!
//! Elements are stored in vector encoding: the element `c_0 + c_1·x + … +
//! c_{e-1}·x^{e-1}` (mod the defining polynomial) is the integer
//! `c_0 + c_1·p + … + c_{e-1}·p^{e-1}`. All products go through exp/log
//! tables built at construction time, so `Fq` itself is a plain `u32`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::ArithmeticError;

/// An element of `F_q` in vector encoding. Only meaningful together with the
/// `FieldSpec` that created it.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fq(pub u32);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.0)
    }
}

/// A concrete finite field `F_{p^e}`, defined by an irreducible monic
/// polynomial of degree `e` over `F_p`.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Coefficients of the defining polynomial, lowest degree first, length `e + 1`.
    modulus: Vec<u32>,
    /// exp[i] = g^i for a fixed multiplicative generator g, i in 0..q-1.
    exp: Vec<u32>,
    /// log[a] for a in 1..q (index a-1), inverse of `exp`.
    log: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Multiply two F_p-polynomials given as coefficient vectors (lowest first).
fn polymul_fp(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    out
}

/// Reduce an F_p-polynomial modulo a monic polynomial.
fn polymod_fp(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let deg_m = m.len() - 1;
    let mut a = a.to_vec();
    while a.len() > deg_m {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - deg_m;
        if lead != 0 {
            for (k, &mk) in m.iter().enumerate() {
                let idx = shift + k;
                let sub = (lead * mk) % p;
                a[idx] = (a[idx] + p * p - sub) % p;
            }
        }
        a.pop();
    }
    a
}

fn trim_fp(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Check irreducibility over F_p by trial division with all monic polynomials
/// of degree up to deg/2. Fields here are tiny, so this is plenty fast.
fn is_irreducible_fp(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // enumerate monic polynomials of degree d
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                div.push(k % p);
                k /= p;
            }
            div.push(1);
            let rem = trim_fp(polymod_fp(m, &div, p));
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Build `F_{p^e}` from a defining polynomial (coefficients lowest first,
    /// length `e + 1`, monic, irreducible over `F_p`).
    pub fn new(p: u32, e: u32, modulus: Vec<u32>) -> Result<FieldSpec, ArithmeticError> {
        if !is_prime(p) {
            return Err(ArithmeticError::BadField(format!("{p} is not prime")));
        }
        if e == 0 || modulus.len() != e as usize + 1 {
            return Err(ArithmeticError::BadField(format!(
                "modulus must have degree e = {e}"
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(ArithmeticError::BadField(
                "modulus coefficients must lie in [0, p)".into(),
            ));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(ArithmeticError::BadField("modulus must be monic".into()));
        }
        if !is_irreducible_fp(&modulus, p) {
            return Err(ArithmeticError::BadField(
                "modulus is not irreducible".into(),
            ));
        }
        let q = p
            .checked_pow(e)
            .filter(|&q| q <= 1 << 16)
            .ok_or_else(|| ArithmeticError::BadField("field too large for tables".into()))?;

        let mut field = FieldSpec {
            p,
            e,
            q,
            modulus,
            exp: vec![],
            log: vec![],
        };
        field.build_tables()?;
        Ok(field)
    }

    /// The standard field for a given (p, e), using a fixed irreducible polynomial.
    pub fn standard(p: u32, e: u32) -> Result<FieldSpec, ArithmeticError> {
        if e == 1 {
            return FieldSpec::new(p, 1, vec![default_deg1_constant(p), 1]);
        }
        let modulus = match (p, e) {
            (2, 2) => vec![1, 1, 1],
            (2, 3) => vec![1, 1, 0, 1],
            (2, 4) => vec![1, 1, 0, 0, 1],
            (3, 2) => vec![1, 0, 1],
            (3, 3) => vec![1, 2, 0, 1],
            (5, 2) => vec![2, 1, 1],
            (5, 3) => vec![2, 0, 1, 1],
            (7, 2) => vec![3, 1, 1],
            _ => {
                return Err(ArithmeticError::BadField(format!(
                    "no standard modulus for p = {p}, e = {e}"
                )))
            }
        };
        FieldSpec::new(p, e, modulus)
    }

    fn build_tables(&mut self) -> Result<(), ArithmeticError> {
        let q = self.q as usize;
        // slow-path product on vector encodings, used only while bootstrapping
        let slow_mul = |a: u32, b: u32| -> u32 {
            let av = self.decode(a);
            let bv = self.decode(b);
            let prod = polymod_fp(&polymul_fp(&av, &bv, self.p), &self.modulus, self.p);
            self.encode(&prod)
        };
        // find a multiplicative generator
        let order = (q - 1) as u32;
        let mut generator = None;
        'candidates: for cand in 2..self.q.max(3) {
            if cand >= self.q {
                break;
            }
            let mut seen = 1u32;
            let mut acc = cand;
            while acc != 1 {
                seen += 1;
                if seen > order {
                    break 'candidates;
                }
                acc = slow_mul(acc, cand);
            }
            if seen == order {
                generator = Some(cand);
                break;
            }
        }
        // p = 2, e = 1 has trivial multiplicative group
        let generator = generator.unwrap_or(1);
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![0u32; q - 1];
        let mut acc = 1u32;
        for i in 0..order {
            exp.push(acc);
            log[(acc - 1) as usize] = i;
            acc = slow_mul(acc, generator);
        }
        if acc != 1 {
            return Err(ArithmeticError::BadField(
                "arithmetic tables inconsistent".into(),
            ));
        }
        self.exp = exp;
        self.log = log;
        // consistency: a * a^{-1} = 1 for all nonzero a
        for a in 1..self.q {
            let inv = self.inv(Fq(a)).expect("nonzero");
            if self.mul(Fq(a), inv) != Fq(1) {
                return Err(ArithmeticError::BadField(
                    "arithmetic tables inconsistent".into(),
                ));
            }
        }
        Ok(())
    }

    fn decode(&self, a: u32) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut k = a;
        for _ in 0..self.e {
            v.push(k % self.p);
            k /= self.p;
        }
        v
    }

    fn encode(&self, coeffs: &[u32]) -> u32 {
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            acc = acc * self.p + c;
        }
        acc
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq(0)
    }

    pub fn one(&self) -> Fq {
        Fq(1)
    }

    /// Element with a given vector encoding; panics if out of range.
    pub fn element(&self, encoding: u32) -> Fq {
        assert!(encoding < self.q, "encoding out of range");
        Fq(encoding)
    }

    /// The image of an integer under Z -> F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coefficient vector of an element, length `e`, lowest degree first.
    pub fn to_vector(&self, a: Fq) -> Vec<u32> {
        self.decode(a.0)
    }

    pub fn from_vector(&self, v: &[u32]) -> Result<Fq, ArithmeticError> {
        if v.len() != self.e as usize || v.iter().any(|&c| c >= self.p) {
            return Err(ArithmeticError::BadField(format!(
                "bad element vector {v:?} for F_{{{}^{}}}",
                self.p, self.e
            )));
        }
        Ok(Fq(self.encode(v)))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    pub fn is_zero(&self, a: Fq) -> bool {
        a.0 == 0
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let mut out = 0u32;
        let mut pk = 1u32;
        let (mut x, mut y) = (a.0, b.0);
        for _ in 0..self.e {
            out += ((x + y) % self.p) * pk;
            x /= self.p;
            y /= self.p;
            pk *= self.p;
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let mut out = 0u32;
        let mut pk = 1u32;
        let mut x = a.0;
        for _ in 0..self.e {
            out += ((self.p - x % self.p) % self.p) * pk;
            x /= self.p;
            pk *= self.p;
        }
        Fq(out)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        let order = self.q - 1;
        let la = self.log[(a.0 - 1) as usize];
        let lb = self.log[(b.0 - 1) as usize];
        Fq(self.exp[((la + lb) % order) as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, ArithmeticError> {
        if a.0 == 0 {
            return Err(ArithmeticError::DivisionByZero);
        }
        let order = self.q - 1;
        let la = self.log[(a.0 - 1) as usize];
        Ok(Fq(self.exp[((order - la) % order) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, ArithmeticError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, n: u64) -> Fq {
        if n == 0 {
            return Fq(1);
        }
        if a.0 == 0 {
            return Fq(0);
        }
        let order = (self.q - 1) as u64;
        let la = self.log[(a.0 - 1) as usize] as u64;
        Fq(self.exp[((la * (n % order)) % order) as usize])
    }

    /// Scale by an integer (repeated addition through F_p).
    pub fn int_mul(&self, n: i64, a: Fq) -> Fq {
        self.mul(self.from_int(n), a)
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p as u64)
    }

    /// The unique p-th root; Frobenius is bijective on a finite field.
    pub fn pth_root(&self, a: Fq) -> Fq {
        if self.e == 1 {
            return a; // a^p = a in F_p
        }
        self.pow(a, self.q as u64 / self.p as u64)
    }

    /// Absolute trace down to F_p, returned as an integer in [0, p).
    pub fn trace_to_prime(&self, a: Fq) -> u32 {
        let mut acc = self.zero();
        let mut x = a;
        for _ in 0..self.e {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// True when the element lies in the prime field; then returns its value.
    pub fn as_prime_int(&self, a: Fq) -> Option<u32> {
        if a.0 < self.p {
            Some(a.0)
        } else {
            None
        }
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{}^{}}}", self.p, self.e)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}
impl Eq for FieldSpec {}

fn default_deg1_constant(_p: u32) -> u32 {
    // any monic linear polynomial defines F_p; x itself is fine
    0
}
