//! The indefinite sum S (right inverse of the lowering ladder operator,
//! normalized by Sf(1) = 0) and the Volkenborn-type integral
//! lim Sf(x^n)/x^n, in both a closed coefficient form and the defining
//! limit form.
//!
//! The closed form, integral of f = sum phi_l f_l equals
//! sum phi_l^q (-1)^{l+1}/L_{l+1}, is a derived linear extension of the
//! basis values; it is only trusted because the limit method is run
//! against it over the whole test corpus (the verification suite gates on
//! that agreement).

use crate::constants::CarlitzConstants;
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::fqlinear::{CarlitzExpansion, QExpansion, Rep, ValueTable};
use crate::series::Laurent;

const GUARD: i64 = 8;

fn val_slack(c: &Laurent) -> i64 {
    match c.valuation() {
        Ok(Some(v)) if v < 0 => -v,
        _ => 0,
    }
}

/// S on Carlitz coefficients: a right shift with a q-power twist,
/// c_0 = 0 and c_{l+1} = phi_l^q. Exact.
pub fn indefinite_sum(f: &CarlitzExpansion) -> CarlitzExpansion {
    let ctx = f.ctx();
    let mut coeffs = vec![Laurent::zero(ctx)];
    coeffs.extend(f.coeffs().iter().map(|c| c.frob_q(1)));
    CarlitzExpansion::new(ctx, coeffs)
}

/// S on interpolation tables: u(1) = 0, u(x^n) = x u(x^{n-1}) + f(x^{n-1})^q.
pub fn indefinite_sum_values(f: &ValueTable) -> Result<ValueTable> {
    if f.len() < 2 {
        return Err(Error::OutsideDomain("table too short for the sum scheme".into()));
    }
    let ctx = f.ctx();
    let mut values = Vec::with_capacity(f.len());
    values.push(Laurent::zero(ctx));
    for n in 1..f.len() {
        let prev: &Laurent = &values[n - 1];
        values.push(prev.shift(1).add(&f.values()[n - 1].frob_q(1)));
    }
    Ok(ValueTable::new(ctx, values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMethod {
    ClosedForm,
    LimitSequence,
}

#[derive(Debug, Clone)]
pub struct IntegralResult {
    pub value: Laurent,
    pub method: IntegralMethod,
    /// Sf(x^n)/x^n for n = 1..n_max when the limit method ran.
    pub trace: Option<Vec<Laurent>>,
    /// First n whose trace entry agrees with its predecessor to the
    /// working precision; None when no stabilization was observed.
    pub stabilized_at: Option<usize>,
}

/// Closed-form integral of a Carlitz expansion:
/// sum over the support of phi_l^q (-1)^{l+1} / L_{l+1}.
pub fn volkenborn_closed(
    consts: &CarlitzConstants,
    f: &CarlitzExpansion,
    prec: i64,
) -> Result<IntegralResult> {
    let ctx = f.ctx();
    let mut acc = Laurent::zero_prec(ctx, prec);
    if f.is_zero() {
        acc = Laurent::zero(ctx);
    }
    for (l, phi) in f.coeffs().iter().enumerate() {
        if phi.is_exact_zero() {
            continue;
        }
        let inv = consts.inv_l(l + 1, prec + 2 * val_slack(phi) + GUARD)?;
        let term = phi
            .frob_q(1)
            .mul_prec(&inv.scale(ctx.sign(l as u64 + 1)), prec);
        acc = acc.add(&term);
    }
    Ok(IntegralResult {
        value: acc,
        method: IntegralMethod::ClosedForm,
        trace: None,
        stabilized_at: None,
    })
}

/// Termwise integral of a q-expansion: each monomial t^{q^n} contributes
/// a_n^q * (-1/\[n+1\]).
pub fn volkenborn_qexp(
    consts: &CarlitzConstants,
    f: &QExpansion,
    prec: i64,
) -> Result<Laurent> {
    let ctx = f.ctx();
    let mut acc = if f.is_zero() {
        Laurent::zero(ctx)
    } else {
        Laurent::zero_prec(ctx, prec)
    };
    for (n, a) in f.coeffs().iter().enumerate() {
        if a.is_exact_zero() {
            continue;
        }
        let inv = consts.inv_bracket(n + 1, prec + 2 * val_slack(a) + GUARD)?;
        acc = acc.add(&a.frob_q(1).mul_prec(&inv, prec).neg());
    }
    Ok(acc)
}

/// The defining limit: emits the whole trace Sf(x^n)/x^n, the first index
/// where consecutive entries agree to the working precision, and the value
/// there. Missing stabilization is reported, not fatal.
pub fn volkenborn_limit(
    consts: &CarlitzConstants,
    f: &Rep,
    n_max: usize,
    prec: i64,
) -> Result<IntegralResult> {
    if n_max < 2 {
        return Err(Error::OutsideDomain("limit trace needs n_max >= 2".into()));
    }
    let ctx = f.ctx();
    let cap = prec + n_max as i64 + GUARD;
    let values: Result<Vec<Laurent>> = (0..=n_max)
        .map(|j| f.evaluate(consts, &Laurent::monomial(ctx, Fq::ONE, j as i64), cap))
        .collect();
    let table = ValueTable::new(ctx, values?);
    let s = indefinite_sum_values(&table)?;
    let trace: Vec<Laurent> = (1..=n_max)
        .map(|n| s.values()[n].shift(-(n as i64)).truncated(prec))
        .collect();
    let stabilized_at =
        crate::fqlinear::constant_suffix_head(&trace, prec).map(|h| h + 1);
    let value = match stabilized_at {
        Some(n) => trace[n - 1].clone(),
        None => trace.last().unwrap().clone(),
    };
    Ok(IntegralResult {
        value,
        method: IntegralMethod::LimitSequence,
        trace: Some(trace),
        stabilized_at,
    })
}

/// Runs both methods and reports whether they agree to the working
/// precision; the gate for trusting the closed form.
pub fn integrate_both(
    consts: &CarlitzConstants,
    f: &CarlitzExpansion,
    n_max: usize,
    prec: i64,
) -> Result<(IntegralResult, IntegralResult, bool)> {
    let closed = volkenborn_closed(consts, f, prec)?;
    let limit = volkenborn_limit(consts, &Rep::Carlitz(f.clone()), n_max, prec)?;
    let upto = prec
        .min(closed.value.precision())
        .min(limit.value.precision());
    let agree = limit.stabilized_at.is_some()
        && closed.value.agrees_to(&limit.value, upto).unwrap_or(false);
    Ok((closed, limit, agree))
}

#[derive(Debug, Clone)]
pub struct LawCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Verifies the invariance laws of the integral on one function:
/// the basic twist under t -> xt, its iterates, the twisted scalar rule,
/// and the clean scaling for functions vanishing on low degrees.
pub fn invariance_report(
    consts: &CarlitzConstants,
    f: &CarlitzExpansion,
    prec: i64,
) -> Result<Vec<LawCheck>> {
    let ctx = f.ctx();
    let mut out = Vec::new();
    let x = Laurent::monomial(ctx, Fq::ONE, 1);
    let qexp = f.to_qexp(consts, prec + GUARD)?;
    let base = volkenborn_closed(consts, f, prec)?.value;

    let mut push = |name: &str, lhs: &Laurent, rhs: &Laurent| {
        let upto = prec.min(lhs.precision()).min(rhs.precision());
        let holds = lhs.agrees_to(rhs, upto).unwrap_or(false);
        out.push(LawCheck {
            name: name.to_string(),
            holds,
            detail: if holds {
                format!("agrees mod x^{upto}")
            } else {
                format!("lhs {lhs} vs rhs {rhs}")
            },
        });
    };

    // iterated dilation law, n = 1 is the basic invariance:
    // integral of f(x^n t) = x^n I - sum x^{n-k} f^q(x^{k-1})
    for n in 1..=3usize {
        let xn = Laurent::monomial(ctx, Fq::ONE, n as i64);
        let lhs = volkenborn_qexp(consts, &qexp.dilate(&xn), prec)?;
        let mut rhs = base.shift(n as i64);
        for k in 1..=n {
            let fv = f.evaluate(
                consts,
                &Laurent::monomial(ctx, Fq::ONE, k as i64 - 1),
                prec + GUARD,
            )?;
            rhs = rhs.sub(&fv.frob_q(1).shift(n as i64 - k as i64));
        }
        push(&format!("dilation_x^{n}"), &lhs, &rhs);
    }

    // twisted scalar rule: integral of c f = c^q integral of f,
    // limit method on the left against the closed form on the right
    for c in [x.clone(), Laurent::one(ctx).add(&x)] {
        let scaled = f.scale(&c);
        let lhs = volkenborn_limit(consts, &Rep::Carlitz(scaled), 2 * prec as usize, prec)?;
        let rhs = base.mul_prec(&c.frob_q(1), prec);
        push(&format!("scalar_twist_c={c}"), &lhs.value, &rhs);
    }

    // functions vanishing on all degrees < n scale cleanly under
    // t -> g t for deg g <= n
    if let Some(n0) = f.coeffs().iter().position(|c| !c.is_exact_zero()) {
        if n0 >= 1 {
            for g in [x.clone(), x.add(&Laurent::one(ctx))] {
                let lhs = volkenborn_qexp(consts, &qexp.dilate(&g), prec)?;
                let rhs = base.mul_prec(&g, prec);
                push(&format!("vanishing_scale_g={g}"), &lhs, &rhs);
            }
        }
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqContext;
    use crate::series::{AbsValue, Poly};
    use rand::{Rng, SeedableRng};

    fn setup(q: u32) -> CarlitzConstants {
        CarlitzConstants::new(&FqContext::with_q(q).unwrap())
    }

    #[test]
    fn sum_of_basis_vector_shifts() {
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            for k in 0..=6usize {
                let s = indefinite_sum(&CarlitzExpansion::basis_vector(ctx, k));
                assert_eq!(s, CarlitzExpansion::basis_vector(ctx, k + 1), "q={q} k={k}");
            }
        }
    }

    #[test]
    fn sum_of_zero() {
        let c = setup(2);
        assert!(indefinite_sum(&CarlitzExpansion::zero(c.ctx())).is_zero());
    }

    #[test]
    fn sum_is_left_inverted_by_a_minus() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            for _ in 0..5 {
                let coeffs: Vec<Laurent> = (0..4)
                    .map(|_| {
                        let p = Poly::from_coeffs(
                            ctx,
                            (0..3).map(|_| Fq(rng.gen_range(0..q) as u8)).collect(),
                        );
                        Laurent::from_poly(&p)
                    })
                    .collect();
                let f = CarlitzExpansion::new(ctx, coeffs);
                let u = indefinite_sum(&f);
                assert_eq!(u.a_minus().unwrap(), f, "q={q}");
                assert!(u.coeff(0).is_exact_zero(), "Sf(1) = 0 normalization");
                // uniqueness: adding c f_0 still solves the same equation
                let shifted = u.add(
                    &CarlitzExpansion::basis_vector(ctx, 0)
                        .scale(&Laurent::monomial(ctx, Fq::ONE, 2)),
                );
                assert_eq!(shifted.a_minus().unwrap(), f, "q={q} uniqueness");
            }
        }
    }

    #[test]
    fn value_scheme_examples() {
        // f = f_0 has f(x^n) = x^n: u(x) = f(1)^q = 1,
        // u(x^2) = f(x)^q + x f(1)^q = x^q + x
        let c = setup(2);
        let ctx = c.ctx();
        let f_table = ValueTable::new(
            ctx,
            (0..4).map(|n| Laurent::monomial(ctx, Fq::ONE, n)).collect(),
        );
        let u = indefinite_sum_values(&f_table).unwrap();
        assert!(u.values()[0].is_exact_zero());
        assert_eq!(u.values()[1], Laurent::one(ctx));
        let expect = Laurent::monomial(ctx, Fq::ONE, 2).add(&Laurent::monomial(ctx, Fq::ONE, 1));
        assert_eq!(u.values()[2], expect);
        assert!(indefinite_sum_values(&ValueTable::new(ctx, vec![Laurent::one(ctx)])).is_err());
    }

    #[test]
    fn value_scheme_matches_coefficient_route() {
        // table of S(f_1) equals the f_2 table
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            let f1 = CarlitzExpansion::basis_vector(ctx, 1);
            let table = f1.to_table(&c, 8, 80).unwrap();
            let via_values = indefinite_sum_values(&table).unwrap();
            let f2 = CarlitzExpansion::basis_vector(ctx, 2);
            let direct = f2.to_table(&c, 8, 80).unwrap();
            for n in 0..8 {
                let (a, b) = (&via_values.values()[n], &direct.values()[n]);
                let upto = 60.min(a.precision()).min(b.precision());
                assert!(a.agrees_to(b, upto).unwrap(), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn closed_form_on_basis_vectors() {
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            for n in 0..=5usize {
                let r = volkenborn_closed(&c, &CarlitzExpansion::basis_vector(ctx, n), 40)
                    .unwrap();
                let expect = c.inv_l(n + 1, 45).unwrap().scale(ctx.sign(n as u64 + 1));
                assert!(r.value.agrees_to(&expect, 40).unwrap(), "q={q} n={n}");
                assert_eq!(r.value.valuation().unwrap(), Some(-(n as i64 + 1)));
            }
        }
    }

    #[test]
    fn qexp_route_gives_minus_inverse_bracket() {
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            for n in 0..=3usize {
                let v = volkenborn_qexp(&c, &QExpansion::monomial(ctx, n), 40).unwrap();
                let expect = c.inv_bracket(n + 1, 45).unwrap().neg();
                assert!(v.agrees_to(&expect, 40).unwrap(), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn limit_trace_for_f0_q2() {
        // integral of t at q = 2 is -1/[1] = 1/(x^2+x) = x^-1 + 1 + x + ...
        let c = setup(2);
        let ctx = c.ctx();
        let f = CarlitzExpansion::basis_vector(ctx, 0);
        let (closed, limit, agree) = integrate_both(&c, &f, 80, 40).unwrap();
        assert!(agree);
        assert!(limit.stabilized_at.is_some());
        for e in -1..6i64 {
            assert_eq!(closed.value.coeff_at(e).unwrap(), Fq::ONE, "coefficient at x^{e}");
        }
        // successive trace differences sharpen strictly
        let trace = limit.trace.unwrap();
        let mut last = None;
        for w in trace.windows(2) {
            let d = w[1].sub(&w[0]);
            if d.is_zero_within_prec() {
                break;
            }
            let v = d.valuation().unwrap().unwrap();
            if let Some(prev) = last {
                assert!(v > prev, "trace differences must sharpen: {v} after {prev}");
            }
            last = Some(v);
        }
    }

    #[test]
    fn limit_matches_closed_for_f1() {
        let c = setup(2);
        let ctx = c.ctx();
        let f = CarlitzExpansion::basis_vector(ctx, 1);
        let (closed, limit, agree) = integrate_both(&c, &f, 80, 40).unwrap();
        assert!(agree, "closed {} vs limit {}", closed.value, limit.value);
        let expect = c.inv_l(2, 45).unwrap(); // char-2 sign
        assert!(closed.value.agrees_to(&expect, 40).unwrap());
    }

    #[test]
    fn limit_of_zero_is_zero() {
        let c = setup(2);
        let f = CarlitzExpansion::zero(c.ctx());
        let r = volkenborn_limit(&c, &Rep::Carlitz(f), 6, 40).unwrap();
        assert!(r.value.is_zero_within_prec());
        assert!(r.trace.unwrap().iter().all(|t| t.is_zero_within_prec()));
    }

    #[test]
    fn monomial_trace_formula() {
        // S(t^{q^n})(x^k)/x^k = (x^{k(q^{n+1}-1)} - 1)/[n+1]
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            for n in 0..=2usize {
                let u = QExpansion::monomial(ctx, n);
                let r = volkenborn_limit(&c, &Rep::Q(u), 6, 40).unwrap();
                let trace = r.trace.unwrap();
                for (idx, got) in trace.iter().enumerate() {
                    let k = (idx + 1) as i64;
                    let e = k * ((ctx.q() as i64).pow(n as u32 + 1) - 1);
                    let numer = Laurent::monomial(ctx, Fq::ONE, e).sub(&Laurent::one(ctx));
                    let expect = numer.mul_prec(&c.inv_bracket(n + 1, 50).unwrap(), 40);
                    let upto = 38.min(got.precision()).min(expect.precision());
                    assert!(got.agrees_to(&expect, upto).unwrap(), "q={q} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn monomial_sum_closed_form() {
        // S(t^{q^n}) = (t^{q^{n+1}} - t)/[n+1], checked functionally
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            for n in 0..=2usize {
                let u = QExpansion::monomial(ctx, n).to_carlitz(&c).unwrap();
                let s = indefinite_sum(&u);
                let t = Laurent::one(ctx).add(&Laurent::monomial(ctx, Fq::ONE, 1));
                let lhs = s.evaluate(&c, &t, 40).unwrap();
                let numer = t.frob_q(n as u32 + 1).sub(&t);
                let rhs = numer.mul_prec(&c.inv_bracket(n + 1, 48).unwrap(), 40);
                let upto = 38.min(lhs.precision()).min(rhs.precision());
                assert!(lhs.agrees_to(&rhs, upto).unwrap(), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn invariance_laws_hold() {
        for q in [2u32, 3] {
            let c = setup(q);
            let ctx = c.ctx();
            for f in [
                CarlitzExpansion::basis_vector(ctx, 0),
                CarlitzExpansion::basis_vector(ctx, 2),
                CarlitzExpansion::new(
                    ctx,
                    vec![
                        Laurent::one(ctx),
                        Laurent::monomial(ctx, Fq::ONE, 1),
                        Laurent::one(ctx),
                    ],
                ),
            ] {
                for law in invariance_report(&c, &f, 36).unwrap() {
                    assert!(law.holds, "q={q} law {}: {}", law.name, law.detail);
                }
            }
        }
    }

    #[test]
    fn basic_invariance_concrete_f0() {
        // integral of f_0(xt) = x I - f_0^q(1) = x I - 1
        let c = setup(2);
        let ctx = c.ctx();
        let f = CarlitzExpansion::basis_vector(ctx, 0);
        let base = volkenborn_closed(&c, &f, 40).unwrap().value;
        let qexp = f.to_qexp(&c, 48).unwrap();
        let lhs = volkenborn_qexp(&c, &qexp.dilate(&Laurent::monomial(ctx, Fq::ONE, 1)), 40)
            .unwrap();
        let rhs = base.shift(1).sub(&Laurent::one(ctx));
        assert!(lhs.agrees_to(&rhs, 38).unwrap());
    }

    #[test]
    fn continuity_bound_on_corpus() {
        // |integral f| <= q * max_l q^l |phi_l|
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let c = setup(3);
        let ctx = c.ctx();
        for _ in 0..6 {
            let coeffs: Vec<Laurent> = (0..4)
                .map(|_| {
                    let p = Poly::from_coeffs(
                        ctx,
                        (0..3).map(|_| Fq(rng.gen_range(0..3) as u8)).collect(),
                    );
                    Laurent::from_poly(&p)
                })
                .collect();
            let f = CarlitzExpansion::new(ctx, coeffs);
            let v = volkenborn_closed(&c, &f, 40).unwrap().value;
            if v.is_zero_within_prec() {
                continue;
            }
            let mut bound = AbsValue::Zero;
            for (l, phi) in f.coeffs().iter().enumerate() {
                if phi.is_exact_zero() || phi.is_zero_within_prec() {
                    continue;
                }
                bound = bound.max(AbsValue::PowQ(
                    l as i64 + 1 - phi.valuation().unwrap().unwrap(),
                ));
            }
            assert!(v.abs().unwrap() <= bound);
        }
    }
}
