//! Degree-p torsor presentations on charts of the projective line:
//! classification into local normal forms, Artin–Schreier reduction,
//! conductors and residues at rational places, equivalence of presentations,
//! unit normalization of multiplicative data, and the symbolic equations that
//! lift a presentation over a one-parameter base.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{ArithmeticError, TorsorError};
use crate::field::{FieldSpec, Fq};
use crate::laurent::LaurentExpansion;
use crate::poly::Poly;
use crate::rational::{Place, RationalFunction};

/// The group scheme of a degree-p chart.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum GroupTag {
    /// The constant group Z/pZ.
    Etale,
    AlphaP,
    MuP,
    /// The kernel of `x -> x^p - t^{(p-1)n} x` over a one-parameter base;
    /// `Mn(0)` is the constant group Z/pZ again.
    Mn(u32),
}

impl GroupTag {
    /// Collapse `Mn(0)` into `Etale`.
    pub fn normalized(self) -> GroupTag {
        match self {
            GroupTag::Mn(0) => GroupTag::Etale,
            other => other,
        }
    }

    pub fn is_radiciel(self) -> bool {
        matches!(self.normalized(), GroupTag::AlphaP | GroupTag::MuP)
    }
}

/// One chart of a degree-p cover: a group tag plus its defining datum,
/// either globally on the line or locally as a truncated expansion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsorSpec {
    pub group: GroupTag,
    pub chart: Chart,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Chart {
    Global(RationalFunction),
    Local(LaurentExpansion),
}

impl TorsorSpec {
    pub fn global(group: GroupTag, u: RationalFunction) -> Self {
        TorsorSpec {
            group,
            chart: Chart::Global(u),
        }
    }

    pub fn local(group: GroupTag, u: LaurentExpansion) -> Self {
        TorsorSpec {
            group,
            chart: Chart::Local(u),
        }
    }

    pub fn global_datum(&self) -> Result<&RationalFunction, TorsorError> {
        match &self.chart {
            Chart::Global(u) => Ok(u),
            Chart::Local(_) => Err(TorsorError::LocalChart),
        }
    }
}

/// Conductor and residue of a chart at one place.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConductorResidue {
    pub m: i64,
    /// Residue in the prime field, as an integer in [0, p).
    pub h: u32,
}

/// Local normal form of a degree-p torsor over the punctured formal disk.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum NormalForm {
    /// `y^p - y = x'^{-m}` with `m > 0` prime to p.
    Etale {
        m: i64,
    },
    /// `y^p = x'^{-m}` with `m` prime to p.
    AlphaP {
        m: i64,
    },
    /// `y^p = x'^{-m}` with `m` prime to p, multiplicative datum.
    MuPRamified {
        m: i64,
    },
    /// `y^p = 1 + x'·Q`.
    MuPUnit,
    Unramified,
}

/// Artin–Schreier reduction of a local datum: repeatedly cancels principal
/// parts of order divisible by p. Returns the reduced datum together with its
/// conductor: the remaining pole order when prime to p, and 0 when the pole
/// has been cleared entirely.
pub fn as_reduce(
    field: &FieldSpec,
    u: &LaurentExpansion,
) -> Result<(LaurentExpansion, i64), ArithmeticError> {
    if u.precision < 0 {
        return Err(ArithmeticError::InsufficientPrecision);
    }
    let p = field.p() as i64;
    let mut cur = u.clone();
    loop {
        let Some(ord) = cur.ord() else {
            return Ok((cur, 0));
        };
        if ord >= 0 {
            return Ok((cur, 0));
        }
        let pole = -ord;
        if pole % p != 0 {
            return Ok((cur, pole));
        }
        let c = cur.coeff(field, ord);
        let root = field.pth_root(c);
        // subtract a^p - a with a = root · x^{ord/p}
        cur = cur.sub(
            field,
            &LaurentExpansion::monomial(field, c, ord, cur.precision),
        );
        cur = cur.add(
            field,
            &LaurentExpansion::monomial(field, root, ord / p, cur.precision),
        );
    }
}

/// The conductor m(P) and residue h(P) of a global chart at a rational place.
pub fn conductor_residue(
    field: &FieldSpec,
    spec: &TorsorSpec,
    place: Place,
) -> Result<ConductorResidue, TorsorError> {
    let u = spec.global_datum()?;
    match spec.group.normalized() {
        GroupTag::Etale => {
            let m = etale_conductor(field, u, place)?;
            Ok(ConductorResidue { m, h: 0 })
        }
        GroupTag::Mn(_) | GroupTag::AlphaP => {
            let d = u
                .diff_ord(field, place)
                .ok_or(TorsorError::DegenerateDatum)?;
            Ok(ConductorResidue { m: -(1 + d), h: 0 })
        }
        GroupTag::MuP => {
            if u.is_zero() {
                return Err(TorsorError::DegenerateDatum);
            }
            let dlog = u
                .derivative(field)
                .div(field, u)
                .map_err(TorsorError::Arithmetic)?;
            if dlog.is_zero() {
                return Err(TorsorError::DegenerateDatum);
            }
            let d = match place {
                Place::Finite(_) => dlog.ord_at(field, place).unwrap(),
                Place::Infinity => dlog.ord_at(field, Place::Infinity).unwrap() - 2,
            };
            let h = u.dlog_residue(field, place)?;
            Ok(ConductorResidue { m: -(1 + d), h })
        }
    }
}

/// Hasse conductor of an etale chart at a place, through Artin–Schreier
/// reduction of the local expansion.
fn etale_conductor(
    field: &FieldSpec,
    u: &RationalFunction,
    place: Place,
) -> Result<i64, TorsorError> {
    match u.ord_at(field, place) {
        None => Ok(0),
        Some(v) if v >= 0 => Ok(0),
        Some(_) => {
            let e = u.expand_at(field, place, 1)?;
            let (_, m) = as_reduce(field, &e)?;
            Ok(m)
        }
    }
}

/// Classify a local chart into its normal form over the punctured disk.
pub fn normal_form_local(
    field: &FieldSpec,
    group: GroupTag,
    u: &LaurentExpansion,
) -> Result<NormalForm, TorsorError> {
    let p = field.p() as i64;
    match group.normalized() {
        GroupTag::Etale => {
            let (_, m) = as_reduce(field, u)?;
            if m > 0 {
                Ok(NormalForm::Etale { m })
            } else {
                Ok(NormalForm::Unramified)
            }
        }
        GroupTag::Mn(_) | GroupTag::AlphaP => {
            // order of du read off the window: first exponent prime to p with
            // a nonzero coefficient
            let mut k = u.start;
            while k < u.precision {
                if k % p != 0 && !field.is_zero(u.coeff(field, k)) {
                    return Ok(NormalForm::AlphaP { m: -k });
                }
                k += 1;
            }
            Err(TorsorError::Arithmetic(
                ArithmeticError::InsufficientPrecision,
            ))
        }
        GroupTag::MuP => {
            let Some(n) = u.ord() else {
                return Err(TorsorError::DegenerateDatum);
            };
            if n % p != 0 {
                Ok(NormalForm::MuPRamified { m: -n })
            } else {
                Ok(NormalForm::MuPUnit)
            }
        }
    }
}

/// Decide global Artin–Schreier triviality: is `w = c^p - c` for some
/// rational `c`? Requires the poles of `w` to be rational.
pub fn as_trivial(field: &FieldSpec, w: &RationalFunction) -> Result<bool, TorsorError> {
    let p = field.p() as i64;
    let mut w = w.clone();
    loop {
        if w.is_zero() {
            return Ok(true);
        }
        // collect the poles, infinity included
        let (_, pole_roots) = w
            .den
            .split_roots(field)
            .ok_or(ArithmeticError::NonRationalPlace)?;
        let mut poles: Vec<(Place, i64)> = pole_roots
            .into_iter()
            .map(|(r, k)| (Place::Finite(r), k as i64))
            .collect();
        let inf_ord = w.ord_at(field, Place::Infinity).unwrap();
        if inf_ord < 0 {
            poles.push((Place::Infinity, -inf_ord));
        }
        let Some(&(place, k)) = poles.first() else {
            // w is a constant
            let c = w.num.coeff(field, 0);
            return Ok(field.trace_to_prime(c) == 0);
        };
        if k % p != 0 {
            return Ok(false);
        }
        let lead = w.expand_at(field, place, -k + 1)?.coeff(field, -k);
        let root = field.pth_root(lead);
        let a = match place {
            Place::Finite(c) => RationalFunction::new(
                field,
                Poly::constant(field, root),
                Poly::linear_root(field, c).pow(field, (k / p) as u32),
            )
            .expect("nonzero denominator"),
            Place::Infinity => {
                RationalFunction::from_poly(field, Poly::monomial(field, root, (k / p) as usize))
            }
        };
        let ap = a.pow(field, p).expect("positive power");
        w = w.sub(field, &ap).add(field, &a);
    }
}

/// Whether the chart datum defines a nontrivial torsor on its chart.
pub fn is_nontrivial(field: &FieldSpec, spec: &TorsorSpec) -> Result<bool, TorsorError> {
    let u = spec.global_datum()?;
    match spec.group.normalized() {
        GroupTag::Etale => Ok(!as_trivial(field, u)?),
        GroupTag::Mn(_) | GroupTag::AlphaP => Ok(!u.is_pth_power(field)),
        GroupTag::MuP => Ok(!u.is_zero() && !u.is_pth_power(field)),
    }
}

/// Equivalence of two presentations with the same group tag on the same chart.
pub fn equivalent(field: &FieldSpec, a: &TorsorSpec, b: &TorsorSpec) -> Result<bool, TorsorError> {
    if a.group.normalized() != b.group.normalized() {
        return Err(TorsorError::Incomparable);
    }
    let ua = a.global_datum()?;
    let ub = b.global_datum()?;
    match a.group.normalized() {
        GroupTag::Etale => as_trivial(field, &ua.sub(field, ub)),
        GroupTag::Mn(_) | GroupTag::AlphaP => Ok(ua.sub(field, ub).is_pth_power(field)),
        GroupTag::MuP => {
            if ua.is_zero() || ub.is_zero() {
                return Err(TorsorError::DegenerateDatum);
            }
            let ratio = ua.div(field, ub).map_err(TorsorError::Arithmetic)?;
            Ok(ratio.is_pth_power(field))
        }
    }
}

/// Multiply a multiplicative datum by a p-th power so that no place carries a
/// nonzero order divisible by p. The datum is then a unit at every place with
/// a nonzero conductor.
pub fn mu_p_normalize(
    field: &FieldSpec,
    u: &RationalFunction,
    ramified_places: &[Place],
) -> Result<RationalFunction, TorsorError> {
    let p = field.p() as i64;
    let div = u.divisor(field)?;
    let d0: Vec<(Place, i64)> = div.iter().copied().filter(|&(_, n)| n % p != 0).collect();
    let d1: Vec<(Place, i64)> = div
        .iter()
        .copied()
        .filter(|&(_, n)| n % p == 0)
        .map(|(pl, n)| (pl, n / p))
        .collect();
    if d0.is_empty() {
        return Err(TorsorError::TrivialTorsor);
    }
    let q0 = d0[0].0; // least support point of the prime-to-p part
    let deg_d1: i64 = d1.iter().map(|&(_, n)| n).sum();
    // realize (w) = D1 - deg(D1)·Q0 through its finite part; the order at
    // infinity balances automatically
    let mut factors: Vec<(Fq, i64)> = vec![];
    for &(pl, n) in &d1 {
        if let Place::Finite(c) = pl {
            factors.push((c, n));
        }
    }
    if let Place::Finite(c) = q0 {
        factors.push((c, -deg_d1));
    }
    let w = RationalFunction::from_root_powers(field, &factors)?;
    let wp = w.pow(field, p)?;
    let out = u.div(field, &wp).map_err(TorsorError::Arithmetic)?;
    // postcondition: no nonzero order divisible by p remains
    for (pl, n) in out.divisor(field)? {
        if n != 0 && n % p == 0 {
            return Err(TorsorError::Arithmetic(ArithmeticError::BadField(format!(
                "normalization left order {n} at {pl:?}"
            ))));
        }
    }
    for &pl in ramified_places {
        let n = out.ord_at(field, pl).unwrap_or(0);
        debug_assert!(n % p != 0 || n == 0);
        let _ = n;
    }
    Ok(out)
}

/// A symbolic equation over the one-parameter base, reducing to a given
/// special-fiber presentation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LiftedEquation {
    /// `w^p - t^{(p-1)n} w - ũ = 0` with `ũ` the coefficient-wise lift.
    Affine {
        p: u32,
        level: u32,
        datum: RationalFunction,
    },
    /// `U^p - t^{(p-1)n} V^{(p-1)m} U + V = 0`, the boundary chart whose
    /// special fiber presents a datum of valuation `1 - pm`.
    Boundary { p: u32, level: u32, conductor: u32 },
}

/// What a lifted equation reduces to modulo the uniformizer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SpecialFiber {
    /// `w^p - w = u`
    ArtinSchreier(RationalFunction),
    /// `w^p = u`
    AlphaP(RationalFunction),
    /// `u^p = -v·(unit)`: the chart of datum valuation `1 - p·m`.
    Boundary { conductor: u32, valuation: i64 },
}

impl LiftedEquation {
    pub fn level(&self) -> u32 {
        match self {
            LiftedEquation::Affine { level, .. } | LiftedEquation::Boundary { level, .. } => *level,
        }
    }

    /// Exponent of t on the linear term.
    pub fn t_exponent(&self) -> u32 {
        match self {
            LiftedEquation::Affine { p, level, .. } | LiftedEquation::Boundary { p, level, .. } => {
                (p - 1) * level
            }
        }
    }

    pub fn reduce_mod_t(&self) -> SpecialFiber {
        match self {
            LiftedEquation::Affine { level, datum, .. } => {
                if *level == 0 {
                    SpecialFiber::ArtinSchreier(datum.clone())
                } else {
                    SpecialFiber::AlphaP(datum.clone())
                }
            }
            LiftedEquation::Boundary { p, conductor, .. } => SpecialFiber::Boundary {
                conductor: *conductor,
                valuation: 1 - (*p as i64) * (*conductor as i64),
            },
        }
    }
}

impl fmt::Display for LiftedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftedEquation::Affine { p, level, .. } => {
                let te = (p - 1) * level;
                if *level == 0 {
                    write!(f, "w^{p} - w - u")
                } else if te == 1 {
                    write!(f, "w^{p} - t*w - u")
                } else {
                    write!(f, "w^{p} - t^{te}*w - u")
                }
            }
            LiftedEquation::Boundary {
                p,
                level,
                conductor,
            } => {
                let te = (p - 1) * level;
                let ve = (p - 1) * conductor;
                let t_part = if te == 1 {
                    "t".into()
                } else {
                    format!("t^{te}")
                };
                match ve {
                    0 => write!(f, "U^{p} - {t_part}*U + V"),
                    1 => write!(f, "U^{p} - {t_part}*V*U + V"),
                    _ => write!(f, "U^{p} - {t_part}*V^{ve}*U + V"),
                }
            }
        }
    }
}

/// Lift an affine chart datum to level n: the equation
/// `w^p - t^{(p-1)n} w - ũ = 0`.
pub fn lift_affine(field: &FieldSpec, u: &RationalFunction, level: u32) -> LiftedEquation {
    LiftedEquation::Affine {
        p: field.p(),
        level,
        datum: u.clone(),
    }
}

/// Lift the boundary chart of a datum with valuation `1 - pm` to level n > 0.
pub fn lift_boundary(m: i64, level: u32, p: u32) -> Result<LiftedEquation, TorsorError> {
    if m < 0 {
        return Err(TorsorError::BoundaryHypothesis);
    }
    Ok(LiftedEquation::Boundary {
        p,
        level,
        conductor: m as u32,
    })
}

/// Numerics of deforming a boundary chart into an ordinary double point:
/// the terminal different and the genus of the completed component.
pub fn double_point_model(m_o: i64, d_o: i64, e: i64, p: u32) -> Result<(i64, i64), TorsorError> {
    let p = p as i64;
    if m_o % p == 0 {
        return Err(TorsorError::ConductorDivisible);
    }
    let d_t = d_o + e * m_o * (p - 1);
    let genus = (m_o - 1) * (p - 1) / 2;
    Ok((d_t, genus))
}
