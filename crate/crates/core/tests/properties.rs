mod common;

use proptest::prelude::*;

use sigma_groups::ambient::{AmbientSpec, GroupSpec};
use sigma_groups::diff::closure_ideal;
use sigma_groups::hopf::is_hopf_ideal;
use sigma_groups::morphisms::{image_closure, kernel_group, preimage_group, MorphismSpec};
use sigma_groups::{
    ideal_equal, parse_poly, print_poly, Coord, Extended, IdealBasis, Monomial, MonomialOrder,
    Polynomial, Rational, VarId,
};

fn var() -> impl Strategy<Value = VarId> {
    prop_oneof![
        (1u16..=2, 0u32..=2).prop_map(|(j, s)| VarId::y(j, s)),
        (1u16..=2, 0u32..=1).prop_map(|(j, s)| VarId::iy(j, s)),
        (1u16..=2, 1u16..=2, 0u32..=1).prop_map(|(j, k, s)| VarId::x(j, k, s)),
        (0u32..=1).prop_map(VarId::idet),
    ]
}

fn coefficient() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (
            prop::collection::vec((var(), 1u32..=3), 0..3),
            coefficient(),
        ),
        0..5,
    )
    .prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(m, c)| (Monomial::from_pairs(m), c)))
    })
}

fn small_poly(vars: &'static [VarId]) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, vars.len()), -3i64..=3),
        1..4,
    )
    .prop_map(move |terms| {
        Polynomial::from_terms(terms.into_iter().map(|(es, c)| {
            (
                Monomial::from_pairs(vars.iter().copied().zip(es)),
                Rational::from_integer(c.into()),
            )
        }))
    })
}

const XY: [VarId; 2] = [VarId::y(1, 0), VarId::y(2, 0)];

fn extended() -> impl Strategy<Value = Extended> {
    prop_oneof![
        (0u64..1000).prop_map(Extended::Finite),
        Just(Extended::Infinite)
    ]
}

/// `y1 ↦ y1^a σ(y1)^b` on `Gm`, with `a, b` not both zero.
fn character_map() -> impl Strategy<Value = MorphismSpec> {
    (-2i32..=2, -1i32..=1)
        .prop_filter("nonconstant", |&(a, b)| (a, b) != (0, 0))
        .prop_map(|(a, b)| {
            let gm = GroupSpec::free("gm", AmbientSpec::gm(1));
            let factor = |e: i32, s: u32| {
                let v = if e >= 0 {
                    VarId::y(1, s)
                } else {
                    VarId::iy(1, s)
                };
                Polynomial::var(v).pow(e.unsigned_abs())
            };
            let image = &factor(a, 0) * &factor(b, 1);
            MorphismSpec::new(gm.clone(), gm, [(Coord::Y(1), image)].into_iter().collect()).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_then_parse_is_identity(p in poly()) {
        let text = print_poly(&p);
        prop_assert_eq!(parse_poly(&text).unwrap(), p);
    }

    #[test]
    fn basis_contains_generators_and_is_stable(gens in prop::collection::vec(small_poly(&XY), 1..3)) {
        let gb = IdealBasis::computed(XY, gens.clone(), MonomialOrder::Grevlex);
        for g in &gens {
            prop_assert!(gb.contains(g).unwrap());
        }
        let again = IdealBasis::computed(XY, gb.polynomials().to_vec(), MonomialOrder::Grevlex);
        prop_assert_eq!(again.polynomials(), gb.polynomials());
    }

    #[test]
    fn membership_matches_linear_algebra(gens in prop::collection::vec(small_poly(&XY), 1..3), h in small_poly(&XY)) {
        let gb = IdealBasis::computed(XY, gens.clone(), MonomialOrder::Grevlex);
        let f = &h * &gens[0];
        prop_assert!(gb.contains(&f).unwrap());
        prop_assert!(common::member_at_degree(&f, &gens, &XY, f.total_degree().max(1)));
    }

    #[test]
    fn extended_arithmetic(a in extended(), b in extended(), c in extended()) {
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + Extended::Finite(0), a);
        prop_assert_eq!(a * Extended::Finite(1), a);
        prop_assert_eq!(a * Extended::Finite(0), Extended::Finite(0));
        prop_assert!(a + b >= a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn preimage_of_trivial_is_kernel(phi in character_map()) {
        let trivial = GroupSpec::trivial("e", AmbientSpec::gm(1));
        let pre = preimage_group(&phi, &trivial).unwrap();
        let ker = kernel_group(&phi);
        for level in 1..=2 {
            let a = closure_ideal(&pre, level, 2).unwrap().ideal;
            let b = closure_ideal(&ker, level, 2).unwrap().ideal;
            prop_assert!(ideal_equal(&a, &b));
        }
    }

    #[test]
    fn image_is_a_subgroup(phi in character_map()) {
        let ideal = image_closure(&phi, 2, 2, 8).unwrap();
        let image = GroupSpec::new("im", AmbientSpec::gm(1), ideal.polynomials().to_vec()).unwrap();
        let report = is_hopf_ideal(&image, image.max_order().max(2), 2).unwrap();
        prop_assert!(report.hopf, "{:?}", report.failures);
    }
}
