//! Property tests for the exact arithmetic and the conductor calculus.

use proptest::prelude::*;

use pcover::field::{FieldSpec, Fq};
use pcover::rational::{all_places, Place, RationalFunction};
use pcover::torsors::{
    conductor_residue, equivalent, mu_p_normalize, ConductorResidue, GroupTag, TorsorSpec,
};
use pcover::TorsorError;

fn field_for(idx: u8) -> FieldSpec {
    match idx % 3 {
        0 => FieldSpec::standard(2, 1).unwrap(),
        1 => FieldSpec::standard(3, 1).unwrap(),
        _ => FieldSpec::standard(5, 1).unwrap(),
    }
}

/// c · Π (x - r_i)^{e_i} from raw generator data.
fn build_u(field: &FieldSpec, scalar: u8, factors: &[(u8, i8)]) -> RationalFunction {
    let c = field.element(1 + scalar as u32 % (field.q() - 1));
    let factors: Vec<(Fq, i64)> = factors
        .iter()
        .map(|&(r, e)| (field.element(r as u32 % field.q()), (e % 5) as i64))
        .collect();
    let base = RationalFunction::from_root_powers(field, &factors).unwrap();
    base.mul(field, &RationalFunction::constant(field, c))
}

fn factor_strategy() -> impl Strategy<Value = Vec<(u8, i8)>> {
    prop::collection::vec((any::<u8>(), any::<i8>()), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Orders over all places of the projective line sum to zero.
    #[test]
    fn divisor_sums_to_zero(idx in any::<u8>(), scalar in any::<u8>(), factors in factor_strategy()) {
        let field = field_for(idx);
        let u = build_u(&field, scalar, &factors);
        prop_assume!(!u.is_zero());
        let total: i64 = u.divisor(&field).unwrap().iter().map(|&(_, n)| n).sum();
        prop_assert_eq!(total, 0);
    }

    /// The residue of du/u equals the order of u modulo p at every place,
    /// and the residues sum to zero in the prime field.
    #[test]
    fn dlog_residue_is_order_mod_p(idx in any::<u8>(), scalar in any::<u8>(), factors in factor_strategy()) {
        let field = field_for(idx);
        let p = field.p() as i64;
        let u = build_u(&field, scalar, &factors);
        prop_assume!(!u.is_zero());
        let mut total = 0u32;
        for place in all_places(&field) {
            let res = u.dlog_residue(&field, place).unwrap();
            let ord = u.ord_at(&field, place).unwrap();
            prop_assert_eq!(res as i64, ord.rem_euclid(p));
            total = (total + res) % field.p();
        }
        prop_assert_eq!(total, 0);
    }

    /// p-th powers are killed by the differential: adding one never moves
    /// the order of du, and a p-th-power factor shifts it by exactly p times
    /// the order of the factor.
    #[test]
    fn diff_ord_ignores_pth_power_summands(
        idx in any::<u8>(),
        scalar in any::<u8>(),
        factors in factor_strategy(),
        wfactors in factor_strategy(),
    ) {
        let field = field_for(idx);
        let p = field.p() as i64;
        let u = build_u(&field, scalar, &factors);
        let w = build_u(&field, scalar.wrapping_add(1), &wfactors);
        prop_assume!(!u.is_zero() && !w.is_zero());
        prop_assume!(!u.derivative(&field).is_zero());
        let wp = w.pow(&field, p).unwrap();
        let shifted = u.add(&field, &wp);
        let scaled = u.mul(&field, &wp);
        for place in all_places(&field) {
            prop_assert_eq!(shifted.diff_ord(&field, place), u.diff_ord(&field, place));
            let expect = u
                .diff_ord(&field, place)
                .map(|d| d + p * w.ord_at(&field, place).unwrap());
            prop_assert_eq!(scaled.diff_ord(&field, place), expect);
        }
    }

    /// Expansions reconstruct the function up to the precision horizon: the
    /// difference between f and the truncated Laurent polynomial vanishes to
    /// order at least `precision` at the place.
    #[test]
    fn expansion_matches_reconstruction(
        idx in any::<u8>(),
        scalar in any::<u8>(),
        factors in factor_strategy(),
        place_idx in any::<u8>(),
        window in 1i64..8,
    ) {
        let field = field_for(idx);
        let u = build_u(&field, scalar, &factors);
        prop_assume!(!u.is_zero());
        let places = all_places(&field);
        let place = places[place_idx as usize % places.len()];
        let ord = u.ord_at(&field, place).unwrap();
        let precision = ord + window;
        let e = u.expand_at(&field, place, precision).unwrap();
        prop_assert_eq!(e.start, ord);
        // rebuild sum of c_k · t^k in the local parameter
        let param = match place {
            Place::Finite(c) => RationalFunction::new(
                &field,
                pcover::Poly::linear_root(&field, c),
                pcover::Poly::one(&field),
            )
            .unwrap(),
            Place::Infinity => RationalFunction::new(
                &field,
                pcover::Poly::one(&field),
                pcover::Poly::monomial(&field, field.one(), 1),
            )
            .unwrap(),
        };
        let mut rebuilt = RationalFunction::zero(&field);
        let mut k = e.start;
        while k < precision {
            let c = e.coeff(&field, k);
            if !field.is_zero(c) {
                let term = param
                    .pow(&field, k)
                    .unwrap()
                    .mul(&field, &RationalFunction::constant(&field, c));
                rebuilt = rebuilt.add(&field, &term);
            }
            k += 1;
        }
        let diff = u.sub(&field, &rebuilt);
        match diff.ord_at(&field, place) {
            None => {}
            Some(v) => prop_assert!(v >= precision, "tail of order {v} below precision {precision}"),
        }
    }

    /// Conductors and residues only depend on the torsor, not on the chosen
    /// presentation: additive charts absorb p-th powers, étale charts absorb
    /// Artin–Schreier coboundaries, multiplicative charts absorb p-th-power
    /// factors.
    #[test]
    fn conductor_invariance_under_presentation_changes(
        idx in any::<u8>(),
        scalar in any::<u8>(),
        factors in factor_strategy(),
        cfactors in factor_strategy(),
    ) {
        let field = field_for(idx);
        let p = field.p() as i64;
        let u = build_u(&field, scalar, &factors);
        let c = build_u(&field, scalar.wrapping_add(2), &cfactors);
        prop_assume!(!u.is_zero() && !c.is_zero());

        let cp = c.pow(&field, p).unwrap();
        let pairs = [
            (GroupTag::Etale, u.add(&field, &cp.sub(&field, &c))),
            (GroupTag::AlphaP, u.add(&field, &cp)),
            (GroupTag::MuP, u.mul(&field, &cp)),
        ];
        for (group, twisted) in pairs {
            let a = TorsorSpec::global(group, u.clone());
            let b = TorsorSpec::global(group, twisted);
            prop_assume!(equivalent(&field, &a, &b).unwrap());
            for place in all_places(&field) {
                let ca = conductor_residue(&field, &a, place);
                let cb = conductor_residue(&field, &b, place);
                match (ca, cb) {
                    (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
                    (Err(TorsorError::DegenerateDatum), Err(TorsorError::DegenerateDatum)) => {}
                    (x, y) => prop_assert!(false, "mismatched outcomes {x:?} vs {y:?}"),
                }
            }
        }
    }

    /// Additive charts never have conductor zero: the differential of a
    /// rational function cannot have a simple pole.
    #[test]
    fn additive_conductors_never_vanish(idx in any::<u8>(), scalar in any::<u8>(), factors in factor_strategy()) {
        let field = field_for(idx);
        let u = build_u(&field, scalar, &factors);
        prop_assume!(!u.is_zero() && !u.derivative(&field).is_zero());
        let spec = TorsorSpec::global(GroupTag::AlphaP, u);
        for place in all_places(&field) {
            let cr = conductor_residue(&field, &spec, place).unwrap();
            prop_assert_ne!(cr.m, 0);
        }
    }

    /// Multiplicative charts: conductor zero exactly at prime-to-p orders,
    /// and there the residue is the order, computed along two independent
    /// routes.
    #[test]
    fn multiplicative_conductor_dichotomy(idx in any::<u8>(), scalar in any::<u8>(), factors in factor_strategy()) {
        let field = field_for(idx);
        let p = field.p() as i64;
        let u = build_u(&field, scalar, &factors);
        prop_assume!(!u.is_zero() && !u.is_pth_power(&field));
        let spec = TorsorSpec::global(GroupTag::MuP, u.clone());
        for place in all_places(&field) {
            let ConductorResidue { m, h } = conductor_residue(&field, &spec, place).unwrap();
            let ord = u.ord_at(&field, place).unwrap();
            prop_assert_eq!(m == 0, ord % p != 0);
            if m == 0 {
                prop_assert_eq!(h as i64, ord.rem_euclid(p));
            }
        }
    }

    /// Unit normalization: afterwards no place carries a nonzero order
    /// divisible by p, and the torsor class is unchanged.
    #[test]
    fn mu_normalization_postconditions(idx in any::<u8>(), scalar in any::<u8>(), factors in factor_strategy()) {
        let field = field_for(idx);
        let p = field.p() as i64;
        let u = build_u(&field, scalar, &factors);
        prop_assume!(!u.is_zero());
        match mu_p_normalize(&field, &u, &[]) {
            Err(TorsorError::TrivialTorsor) => prop_assert!(u.is_pth_power(&field)),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
            Ok(out) => {
                for (_, n) in out.divisor(&field).unwrap() {
                    prop_assert!(n % p != 0 || n == 0);
                }
                let a = TorsorSpec::global(GroupTag::MuP, u);
                let b = TorsorSpec::global(GroupTag::MuP, out);
                prop_assert!(equivalent(&field, &a, &b).unwrap());
            }
        }
    }
}
