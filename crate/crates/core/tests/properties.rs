//! Property tests for the arithmetic substrate: the absolute value, the
//! Frobenius/root pair, inverses, and text round trips.

use fqcalc::field::{Fq, FqContext};
use fqcalc::series::{parse_laurent, Laurent, Poly, EXACT};
use proptest::prelude::*;

fn ctx_strategy() -> impl Strategy<Value = FqContext> {
    prop_oneof![Just(2u32), Just(3), Just(4), Just(9)]
        .prop_map(|q| FqContext::with_q(q).unwrap())
}

fn laurent_strategy(exact_only: bool) -> impl Strategy<Value = (FqContext, Laurent)> {
    (
        ctx_strategy(),
        -4i64..4,
        proptest::collection::vec(0u32..36, 0..8),
        0i64..30,
        proptest::bool::ANY,
    )
        .prop_map(move |(ctx, val, raw, extra, exact)| {
            let coeffs: Vec<Fq> = raw.iter().map(|&c| Fq((c % ctx.q()) as u8)).collect();
            let hi = val + coeffs.len() as i64;
            let prec = if exact || exact_only { EXACT } else { hi + extra };
            let l = Laurent::new(&ctx, val, coeffs, prec);
            (ctx, l)
        })
}

proptest! {
    #[test]
    fn abs_is_multiplicative((ctx, a) in laurent_strategy(false), braw in proptest::collection::vec(0u32..36, 0..8), bval in -4i64..4) {
        let coeffs: Vec<Fq> = braw.iter().map(|&c| Fq((c % ctx.q()) as u8)).collect();
        let b = Laurent::new(&ctx, bval, coeffs, EXACT);
        if let (Ok(aa), Ok(ab)) = (a.abs(), b.abs()) {
            let prod = a.mul(&b);
            if let Ok(ap) = prod.abs() {
                prop_assert_eq!(ap, aa.mul(ab));
            }
        }
    }

    #[test]
    fn abs_is_ultrametric((ctx, a) in laurent_strategy(true), braw in proptest::collection::vec(0u32..36, 0..8), bval in -4i64..4) {
        let coeffs: Vec<Fq> = braw.iter().map(|&c| Fq((c % ctx.q()) as u8)).collect();
        let b = Laurent::new(&ctx, bval, coeffs, EXACT);
        let (aa, ab) = (a.abs().unwrap(), b.abs().unwrap());
        let sum = a.add(&b).abs().unwrap();
        prop_assert!(sum <= aa.max(ab));
        if aa != ab {
            prop_assert_eq!(sum, aa.max(ab));
        }
    }

    #[test]
    fn q_root_inverts_frobenius((_ctx, z) in laurent_strategy(false)) {
        let back = z.frob_q(1).q_root().unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn inverse_multiplies_back((_ctx, z) in laurent_strategy(true)) {
        prop_assume!(!z.is_zero_within_prec());
        let v = z.valuation().unwrap().unwrap();
        let inv = z.inv(24).unwrap();
        let one = Laurent::one(z.ctx());
        let residual = z.mul(&inv).sub(&one);
        prop_assert!(residual.is_zero_within_prec());
        // the product rule puts the residual window at target + val z
        prop_assert!(residual.precision() >= 24 + v);
    }

    #[test]
    fn display_parse_roundtrip((ctx, z) in laurent_strategy(false)) {
        let text = z.to_string();
        let back = parse_laurent(&ctx, &text).unwrap();
        prop_assert_eq!(back, z);
    }

    #[test]
    fn poly_division_reconstructs(
        ctx in ctx_strategy(),
        araw in proptest::collection::vec(0u32..36, 0..10),
        braw in proptest::collection::vec(0u32..36, 1..6),
    ) {
        let a = Poly::from_coeffs(&ctx, araw.iter().map(|&c| Fq((c % ctx.q()) as u8)).collect());
        let b = Poly::from_coeffs(&ctx, braw.iter().map(|&c| Fq((c % ctx.q()) as u8)).collect());
        prop_assume!(!b.is_zero());
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(b.mul(&q).add(&r), a);
        prop_assert!(r.degree().is_none_or(|dr| dr < b.degree().unwrap()));
    }

    #[test]
    fn frobenius_respects_products(
        ctx in ctx_strategy(),
        araw in proptest::collection::vec(0u32..36, 0..6),
        braw in proptest::collection::vec(0u32..36, 0..6),
    ) {
        let a = Poly::from_coeffs(&ctx, araw.iter().map(|&c| Fq((c % ctx.q()) as u8)).collect());
        let b = Poly::from_coeffs(&ctx, braw.iter().map(|&c| Fq((c % ctx.q()) as u8)).collect());
        prop_assert_eq!(a.mul(&b).frobenius_q(1), a.frobenius_q(1).mul(&b.frobenius_q(1)));
        prop_assert_eq!(a.frobenius_q(1), a.pow(ctx.q()));
    }
}
