//! Valuation calculus for a degenerating hyperelliptic curve of genus g over
//! a discrete valuation ring whose special fiber has at most two components:
//! discriminant valuation from the branch configuration, vertical divisor of
//! the canonical differial basis, the integral-basis valuations, and the
//! order of the canonical Hodge-bundle section, checked against the bounds
//! `g·δ_s ≤ Ord_s(Λ) ≤ g²·δ_s`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("vertical-divisor route unavailable in residue characteristic 2")]
    NoVerticalDivisor,
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

/// Node type of the special fiber: a separating node fixed by the involution
/// (`Beta`), or a swapped pair of nodes (`Alpha`), indexed by the genus of
/// the smaller piece.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularKind {
    Beta { j: u32 },
    Alpha { j: u32 },
}

/// Input of the calculus: genus, node type, thickness of the node downstairs,
/// valuation of the leading coefficient, and optionally the valuation of 2
/// for the residue-characteristic-2 branch.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ReductionConfig {
    pub g: u32,
    pub kind: SingularKind,
    pub b: u32,
    pub nu_a: u32,
    /// `Some(ν(2))` activates the residue-characteristic-2 branch.
    pub nu2: Option<u32>,
}

impl ReductionConfig {
    pub fn new(
        g: u32,
        kind: SingularKind,
        b: u32,
        nu_a: u32,
        nu2: Option<u32>,
    ) -> Result<Self, HodgeError> {
        if g < 2 {
            return Err(HodgeError::InvalidConfig(format!("genus {g} below 2")));
        }
        if b == 0 {
            return Err(HodgeError::InvalidConfig(
                "thickness must be positive".into(),
            ));
        }
        match kind {
            SingularKind::Beta { j } => {
                if j < 1 || j > g / 2 {
                    return Err(HodgeError::InvalidConfig(format!(
                        "separating index j = {j} outside [1, {}]",
                        g / 2
                    )));
                }
                if !b.is_multiple_of(2) {
                    return Err(HodgeError::InvalidConfig(format!(
                        "odd thickness b = {b} for a fixed node"
                    )));
                }
            }
            SingularKind::Alpha { j } => {
                if j > (g - 1) / 2 {
                    return Err(HodgeError::InvalidConfig(format!(
                        "swapped-pair index j = {j} outside [0, {}]",
                        (g - 1) / 2
                    )));
                }
            }
        }
        if nu2 == Some(0) {
            return Err(HodgeError::InvalidConfig(
                "ν(2) must be positive in residue characteristic 2".into(),
            ));
        }
        Ok(ReductionConfig {
            g,
            kind,
            b,
            nu_a,
            nu2,
        })
    }
}

/// An exact rational as an integer pair, the on-disk form for every
/// non-integer quantity.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RationalPair {
    pub num: i64,
    pub den: i64,
}

impl From<Q> for RationalPair {
    fn from(q: Q) -> RationalPair {
        RationalPair {
            num: *q.numer(),
            den: *q.denom(),
        }
    }
}

/// Output report: the discriminant valuation, the basis-valuation sum when
/// the vertical-divisor route is available, the order of the canonical
/// section, the total node thickness upstairs, and the bound check.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct HodgeReport {
    pub nu_disc: i64,
    /// Sum of the integral-basis valuations, absent in residue
    /// characteristic 2 where the vertical-divisor route is disabled.
    pub sum_mi: Option<RationalPair>,
    pub ord_lambda: i64,
    pub delta_s: i64,
    pub lower: i64,
    pub upper: i64,
    pub ok: bool,
    pub notes: Vec<String>,
}

/// Valuation of the discriminant of the branch polynomial.
pub fn disc_valuation(cfg: &ReductionConfig) -> i64 {
    let g = cfg.g as i64;
    let b = cfg.b as i64;
    let nu_a = cfg.nu_a as i64;
    let base = match cfg.kind {
        SingularKind::Beta { j } => {
            let j = j as i64;
            (4 * g + 2) * nu_a + 2 * j * (2 * j + 1) * b
        }
        SingularKind::Alpha { j } => {
            let j = j as i64;
            (4 * g + 2) * nu_a + (2 * j + 1) * (2 * j + 2) * b
        }
    };
    match cfg.nu2 {
        Some(nu2) => base + (4 * g + 4) * nu2 as i64,
        None => base,
    }
}

/// Valuations of the relative differential basis element along the two
/// components. Only available away from residue characteristic 2.
pub fn vertical_divisor(cfg: &ReductionConfig) -> Result<(Q, Q), HodgeError> {
    if cfg.nu2.is_some() {
        return Err(HodgeError::NoVerticalDivisor);
    }
    let nu_a = Q::from_integer(cfg.nu_a as i64);
    let b = Q::from_integer(cfg.b as i64);
    let half = Q::new(1, 2);
    let y1 = -half * nu_a;
    let y2 = match cfg.kind {
        SingularKind::Beta { j } => {
            let f = Q::from_integer(2 * j as i64 - 1);
            -half * nu_a - half * f * b
        }
        SingularKind::Alpha { j } => {
            let f = Q::from_integer(2 * j as i64);
            -half * nu_a - half * f * b
        }
    };
    Ok((y1, y2))
}

/// Valuations of the integral basis `t^{-m_i}·x^i·ω`:
/// `m_i = min(i·b + ν_{Y2}, ν_{Y1})`.
pub fn basis_valuations(cfg: &ReductionConfig) -> Result<Vec<Q>, HodgeError> {
    let (y1, y2) = vertical_divisor(cfg)?;
    let b = Q::from_integer(cfg.b as i64);
    Ok((0..cfg.g as i64)
        .map(|i| (Q::from_integer(i) * b + y2).min(y1))
        .collect())
}

fn closed_form_sum(cfg: &ReductionConfig) -> Q {
    let g = Q::from_integer(cfg.g as i64);
    let b = Q::from_integer(cfg.b as i64);
    let nu_a = Q::from_integer(cfg.nu_a as i64);
    let half = Q::new(1, 2);
    match cfg.kind {
        SingularKind::Beta { j } => {
            let j = Q::from_integer(j as i64);
            -half * j * j * b - half * g * nu_a
        }
        SingularKind::Alpha { j } => {
            let j = Q::from_integer(j as i64);
            -half * (j * j + j) * b - half * g * nu_a
        }
    }
}

/// Order of the canonical section and the bound check. Two routes compute
/// the order: the discriminant/basis route (away from residue characteristic
/// 2) and the closed forms; when both are available they must agree exactly.
pub fn ord_lambda(cfg: &ReductionConfig) -> Result<HodgeReport, HodgeError> {
    let g = cfg.g as i64;
    let b = cfg.b as i64;
    let nu_disc = disc_valuation(cfg);
    let mut notes = vec![];

    let (route2, delta_s) = match (cfg.kind, cfg.nu2.is_some()) {
        (SingularKind::Beta { j }, char2) => {
            let j = j as i64;
            if char2 {
                notes.push(
                    "residue characteristic 2: the fixed-node thickness relation 2·δ_s = b \
                     is applied as in the odd-characteristic case"
                        .to_string(),
                );
            }
            (2 * (g - j) * j * b, b / 2)
        }
        (SingularKind::Alpha { j }, false) => {
            let j = j as i64;
            (2 * (g - j) * (j + 1) * b, 2 * b)
        }
        (SingularKind::Alpha { j }, true) => {
            let j = j as i64;
            notes.push(
                "residue characteristic 2: the swapped-pair order carries an extra +b term \
                 and is not an integer multiple of δ_s = 2b"
                    .to_string(),
            );
            (2 * (g - j) * (j + 1) * b + b, 2 * b)
        }
    };

    let sum_mi = if cfg.nu2.is_none() {
        let mis = basis_valuations(cfg)?;
        let total: Q = mis.iter().sum();
        let closed = closed_form_sum(cfg);
        if total != closed {
            return Err(HodgeError::Inconsistency(format!(
                "basis-valuation sum {total} differs from its closed form {closed}"
            )));
        }
        let route1 = Q::from_integer(g * nu_disc) + Q::from_integer(8 * g + 4) * total;
        if !route1.is_integer() || route1.to_integer() != route2 {
            return Err(HodgeError::Inconsistency(format!(
                "discriminant route gives {route1}, closed form gives {route2}"
            )));
        }
        Some(RationalPair::from(total))
    } else {
        None
    };

    let lower = g * delta_s;
    let upper = g * g * delta_s;
    let ok = lower <= route2 && route2 <= upper;
    Ok(HodgeReport {
        nu_disc,
        sum_mi,
        ord_lambda: route2,
        delta_s,
        lower,
        upper,
        ok,
        notes,
    })
}

/// The two-sided bound on the order of the canonical section.
pub fn check_chx(report: &HodgeReport) -> bool {
    report.lower <= report.ord_lambda && report.ord_lambda <= report.upper
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(g: u32, j: u32, b: u32, nu_a: u32) -> ReductionConfig {
        ReductionConfig::new(g, SingularKind::Beta { j }, b, nu_a, None).unwrap()
    }

    fn alpha(g: u32, j: u32, b: u32, nu_a: u32) -> ReductionConfig {
        ReductionConfig::new(g, SingularKind::Alpha { j }, b, nu_a, None).unwrap()
    }

    #[test]
    fn disc_examples() {
        assert_eq!(disc_valuation(&beta(2, 1, 2, 0)), 12);
        assert_eq!(disc_valuation(&alpha(3, 1, 1, 0)), 12);
        let char2 = ReductionConfig::new(2, SingularKind::Beta { j: 1 }, 2, 0, Some(1)).unwrap();
        assert_eq!(disc_valuation(&char2), 24);
    }

    #[test]
    fn vertical_divisor_examples() {
        assert_eq!(
            vertical_divisor(&beta(2, 1, 2, 0)).unwrap(),
            (Q::from_integer(0), Q::from_integer(-1))
        );
        assert_eq!(
            vertical_divisor(&alpha(3, 0, 7, 0)).unwrap(),
            (Q::from_integer(0), Q::from_integer(0))
        );
        assert_eq!(
            vertical_divisor(&beta(2, 1, 2, 2)).unwrap(),
            (Q::from_integer(-1), Q::from_integer(-2))
        );
        let char2 = ReductionConfig::new(2, SingularKind::Beta { j: 1 }, 2, 0, Some(1)).unwrap();
        assert_eq!(
            vertical_divisor(&char2).unwrap_err(),
            HodgeError::NoVerticalDivisor
        );
    }

    #[test]
    fn basis_valuation_examples() {
        let mis = basis_valuations(&beta(2, 1, 2, 0)).unwrap();
        assert_eq!(mis, vec![Q::from_integer(-1), Q::from_integer(0)]);
        let mis = basis_valuations(&alpha(3, 1, 1, 0)).unwrap();
        assert_eq!(
            mis,
            vec![Q::from_integer(-1), Q::from_integer(0), Q::from_integer(0)]
        );
        let mis = basis_valuations(&alpha(2, 0, 5, 0)).unwrap();
        assert_eq!(mis, vec![Q::from_integer(0), Q::from_integer(0)]);
    }

    #[test]
    fn ord_lambda_examples() {
        let r = ord_lambda(&beta(2, 1, 2, 0)).unwrap();
        assert_eq!(r.ord_lambda, 4);
        assert_eq!(r.delta_s, 1);
        assert_eq!((r.lower, r.upper), (2, 4));
        assert!(r.ok);

        let r = ord_lambda(&alpha(3, 1, 1, 0)).unwrap();
        assert_eq!(r.ord_lambda, 8);
        assert_eq!(r.delta_s, 2);
        assert_eq!((r.lower, r.upper), (6, 18));
        assert!(r.ok);

        let r = ord_lambda(&alpha(2, 0, 1, 0)).unwrap();
        assert_eq!(r.ord_lambda, 4);
        assert_eq!(r.delta_s, 2);
        assert_eq!((r.lower, r.upper), (4, 8));
        assert!(r.ok);
        assert_eq!(r.ord_lambda, r.lower);
    }

    #[test]
    fn char2_branch_reports() {
        // fixed node: same order and thickness relation as away from 2,
        // with an explanatory note and no basis-valuation route
        let cfg = ReductionConfig::new(2, SingularKind::Beta { j: 1 }, 2, 0, Some(3)).unwrap();
        let r = ord_lambda(&cfg).unwrap();
        assert_eq!(r.ord_lambda, 4);
        assert_eq!(r.delta_s, 1);
        assert!(r.ok);
        assert!(r.sum_mi.is_none());
        assert_eq!(r.notes.len(), 1);

        // swapped pair: the tabulated order carries the extra thickness term
        let cfg = ReductionConfig::new(3, SingularKind::Alpha { j: 1 }, 1, 0, Some(2)).unwrap();
        let r = ord_lambda(&cfg).unwrap();
        assert_eq!(r.ord_lambda, 2 * (3 - 1) * 2 + 1);
        assert_eq!(r.delta_s, 2);
        assert!(r.ok);
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn chx_rejects_synthetic_violation() {
        let mut r = ord_lambda(&alpha(2, 0, 1, 0)).unwrap();
        assert!(check_chx(&r));
        r.ord_lambda = r.lower - 1;
        assert!(!check_chx(&r));
    }

    #[test]
    fn config_validation() {
        assert!(ReductionConfig::new(2, SingularKind::Beta { j: 1 }, 3, 0, None).is_err());
        assert!(ReductionConfig::new(2, SingularKind::Beta { j: 2 }, 2, 0, None).is_err());
        assert!(ReductionConfig::new(2, SingularKind::Alpha { j: 1 }, 1, 0, None).is_err());
        assert!(ReductionConfig::new(1, SingularKind::Alpha { j: 0 }, 1, 0, None).is_err());
    }
}
