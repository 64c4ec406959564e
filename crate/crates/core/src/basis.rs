//! Carlitz polynomial families in the function argument t: e_i, f_i, G_j,
//! g_j, h_j, tau_m, expansion in the orthonormal h-basis, sup-norms, and
//! the monic summation identity.
//!
//! Polynomials in t carry series coefficients: e_i, G_j, g_j stay exact,
//! the normalized families pick up precision-tracked inverses of D_i and
//! Gamma_j. Norms are computed by basis expansion, never by sampling:
//! the h-family is orthonormal, so the coefficient sup *is* the sup-norm,
//! while sampling could only ever lower-bound it.

use std::fmt;

use crate::constants::CarlitzConstants;
use crate::error::{Error, Result};
use crate::field::FqContext;
use crate::series::{poly_enumerate, AbsValue, Laurent, Poly};

/// Polynomial in t with coefficients in K, dense by t-degree.
#[derive(Clone, PartialEq)]
pub struct TPoly {
    ctx: FqContext,
    coeffs: Vec<Laurent>,
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly[{self}]")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_exact_zero() {
                continue;
            }
            let unit = c == &Laurent::one(&self.ctx);
            let part = match (d, unit) {
                (0, true) => "1".to_string(),
                (0, false) => format!("({c})"),
                (1, true) => "t".to_string(),
                (1, false) => format!("({c})*t"),
                (_, true) => format!("t^{d}"),
                (_, false) => format!("({c})*t^{d}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl TPoly {
    pub fn zero(ctx: &FqContext) -> TPoly {
        TPoly { ctx: ctx.clone(), coeffs: vec![] }
    }

    pub fn one(ctx: &FqContext) -> TPoly {
        TPoly::constant(Laurent::one(ctx))
    }

    pub fn constant(c: Laurent) -> TPoly {
        let ctx = c.ctx().clone();
        TPoly { ctx, coeffs: vec![c] }.trimmed()
    }

    /// c * t^d
    pub fn term(c: Laurent, d: usize) -> TPoly {
        let ctx = c.ctx().clone();
        let mut coeffs = vec![Laurent::zero(&ctx); d + 1];
        coeffs[d] = c;
        TPoly { ctx, coeffs }.trimmed()
    }

    pub fn from_coeffs(ctx: &FqContext, coeffs: Vec<Laurent>) -> TPoly {
        TPoly { ctx: ctx.clone(), coeffs }.trimmed()
    }

    fn trimmed(mut self) -> TPoly {
        while self.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn ctx(&self) -> &FqContext {
        &self.ctx
    }

    /// Degree by stored length; trailing coefficients that are exactly
    /// zero are never stored.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, d: usize) -> Laurent {
        self.coeffs.get(d).cloned().unwrap_or_else(|| Laurent::zero(&self.ctx))
    }

    pub fn coeffs(&self) -> &[Laurent] {
        &self.coeffs
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|d| self.coeff(d).add(&other.coeff(d))).collect();
        TPoly { ctx: self.ctx.clone(), coeffs }.trimmed()
    }

    pub fn sub(&self, other: &TPoly) -> TPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TPoly {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        TPoly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn scale(&self, c: &Laurent) -> TPoly {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        TPoly { ctx: self.ctx.clone(), coeffs }.trimmed()
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero(&self.ctx);
        }
        let mut out = vec![Laurent::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TPoly { ctx: self.ctx.clone(), coeffs: out }.trimmed()
    }

    /// Coefficient-Frobenius plus t-degree dilation: P(t) -> P(t)^{p^j}.
    pub fn frob_p(&self, j: u32) -> TPoly {
        if j == 0 || self.is_zero() {
            return self.clone();
        }
        let step = (self.ctx.p() as usize).pow(j);
        let mut coeffs = vec![Laurent::zero(&self.ctx); (self.coeffs.len() - 1) * step + 1];
        for (d, c) in self.coeffs.iter().enumerate() {
            if !c.is_exact_zero() {
                coeffs[d * step] = c.frob_p(j);
            }
        }
        TPoly { ctx: self.ctx.clone(), coeffs }
    }

    /// P^e via base-p digits of e.
    pub fn pow(&self, e: u32) -> TPoly {
        if e == 0 {
            return TPoly::one(&self.ctx);
        }
        if self.is_zero() {
            return TPoly::zero(&self.ctx);
        }
        let p = self.ctx.p();
        let mut acc: Option<TPoly> = None;
        let mut n = e;
        let mut j = 0u32;
        while n > 0 {
            let d = n % p;
            if d > 0 {
                let base = self.frob_p(j);
                let mut part = base.clone();
                for _ in 1..d {
                    part = part.mul(&base);
                }
                acc = Some(match acc {
                    None => part,
                    Some(a) => a.mul(&part),
                });
            }
            n /= p;
            j += 1;
        }
        acc.unwrap()
    }

    /// Horner evaluation; intermediates truncated to x^cap.
    pub fn eval(&self, t: &Laurent, cap: i64) -> Laurent {
        let mut acc = Laurent::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_prec(t, cap).add(c);
        }
        acc.truncated(cap)
    }

    pub fn eval_exact(&self, t: &Poly) -> Laurent {
        self.eval(&Laurent::from_poly(t), crate::series::EXACT)
    }
}

/// F_q-linear polynomial in t: support restricted to exponents q^n.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearTPoly {
    ctx: FqContext,
    /// coeffs\[n\] multiplies t^{q^n}.
    coeffs: Vec<Laurent>,
}

impl LinearTPoly {
    pub fn zero(ctx: &FqContext) -> LinearTPoly {
        LinearTPoly { ctx: ctx.clone(), coeffs: vec![] }
    }

    pub fn from_coeffs(ctx: &FqContext, coeffs: Vec<Laurent>) -> LinearTPoly {
        let mut l = LinearTPoly { ctx: ctx.clone(), coeffs };
        while l.coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            l.coeffs.pop();
        }
        l
    }

    pub fn ctx(&self) -> &FqContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[Laurent] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Laurent {
        self.coeffs.get(n).cloned().unwrap_or_else(|| Laurent::zero(&self.ctx))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Evaluation: sum of coeff_n * t^{q^n}; intermediates truncated to cap.
    pub fn eval(&self, t: &Laurent, cap: i64) -> Laurent {
        let mut acc = Laurent::zero(&self.ctx);
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            acc = acc.add(&c.mul_prec(&t.frob_q(n as u32), cap));
        }
        acc.truncated(cap)
    }

    pub fn eval_exact(&self, t: &Poly) -> Laurent {
        self.eval(&Laurent::from_poly(t), crate::series::EXACT)
    }

    pub fn to_tpoly(&self) -> TPoly {
        let ctx = &self.ctx;
        let q = ctx.q() as usize;
        let mut out = TPoly::zero(ctx);
        for (n, c) in self.coeffs.iter().enumerate() {
            if !c.is_exact_zero() {
                out = out.add(&TPoly::term(c.clone(), q.pow(n as u32)));
            }
        }
        out
    }
}

/// e_i as the product over all polynomials m of degree < i of (t - m).
/// Exact; the enumeration of q^i factors is budget-guarded.
pub fn e_product(consts: &CarlitzConstants, i: usize, budget: u64) -> Result<TPoly> {
    let ctx = consts.ctx();
    if i == 0 {
        return Ok(TPoly::term(Laurent::one(ctx), 1));
    }
    let t = TPoly::term(Laurent::one(ctx), 1);
    let mut acc = TPoly::one(ctx);
    for m in poly_enumerate(ctx, i, false, budget)? {
        acc = acc.mul(&t.sub(&TPoly::constant(Laurent::from_poly(&m))));
    }
    Ok(acc)
}

/// e_i from the signed Carlitz binomial column: exact F_q-linear form.
pub fn e_binomial(consts: &CarlitzConstants, i: usize) -> Result<LinearTPoly> {
    let ctx = consts.ctx();
    let mut coeffs = Vec::with_capacity(i + 1);
    for j in 0..=i {
        let b = consts.carlitz_binomial(i, j)?;
        let signed = b.scale(ctx.sign((i - j) as u64));
        coeffs.push(Laurent::from_poly(&signed));
    }
    Ok(LinearTPoly::from_coeffs(ctx, coeffs))
}

/// f_i = e_i / D_i with coefficients known modulo x^prec.
pub fn f_basis(consts: &CarlitzConstants, i: usize, prec: i64) -> Result<LinearTPoly> {
    let ctx = consts.ctx();
    let coeffs: Result<Vec<Laurent>> = (0..=i).map(|j| consts.f_coeff(i, j, prec)).collect();
    Ok(LinearTPoly::from_coeffs(ctx, coeffs?))
}

/// G_j = prod e_i^{alpha_i} over the base-q digits of j. Exact and monic
/// of degree j.
pub fn g_big(consts: &CarlitzConstants, j: u64) -> Result<TPoly> {
    let ctx = consts.ctx();
    let mut acc = TPoly::one(ctx);
    for (i, &a) in consts.digit_expansion(j).iter().enumerate() {
        if a > 0 {
            acc = acc.mul(&e_binomial(consts, i)?.to_tpoly().pow(a));
        }
    }
    Ok(acc)
}

/// g_j: digit-wise product with the two-case rule
/// (e_i^alpha below q-1, e_i^{q-1} - D_i^{q-1} at q-1). Exact.
pub fn g_small(consts: &CarlitzConstants, j: u64) -> Result<TPoly> {
    let ctx = consts.ctx();
    let q = ctx.q();
    let mut acc = TPoly::one(ctx);
    for (i, &a) in consts.digit_expansion(j).iter().enumerate() {
        if a == 0 {
            continue;
        }
        let e = e_binomial(consts, i)?.to_tpoly();
        let factor = if a < q - 1 {
            e.pow(a)
        } else {
            let d_pow = consts.d(i)?.pow(q - 1);
            e.pow(q - 1).sub(&TPoly::constant(Laurent::from_poly(&d_pow)))
        };
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// g_j(0) without building g_j: zero unless every digit is 0 or q-1, in
/// which case it is the product of -D_i^{q-1} over the full digits.
pub fn g_at_zero(consts: &CarlitzConstants, j: u64) -> Result<Poly> {
    let ctx = consts.ctx();
    let q = ctx.q();
    let mut acc = Poly::one(ctx);
    for (i, &a) in consts.digit_expansion(j).iter().enumerate() {
        match a {
            0 => {}
            a if a == q - 1 => {
                acc = acc.mul(&consts.d(i)?.pow(q - 1)).neg();
            }
            _ => return Ok(Poly::zero(ctx)),
        }
    }
    Ok(acc)
}

/// h_j = G_j / Gamma_j with coefficients known modulo x^prec.
pub fn h_poly(consts: &CarlitzConstants, j: u64, prec: i64) -> Result<TPoly> {
    let g = g_big(consts, j)?;
    let inv = consts.inv_gamma(j, prec)?;
    Ok(g.scale(&inv))
}

/// tau_m as the product of (f_i^{q-1} - 1) over i < m.
pub fn tau_product(consts: &CarlitzConstants, m: usize, prec: i64) -> Result<TPoly> {
    let ctx = consts.ctx();
    let q = ctx.q();
    let mut acc = TPoly::one(ctx);
    for i in 0..m {
        let f = f_basis(consts, i, prec + consts.val_d(i)? * (q as i64 - 1))?.to_tpoly();
        acc = acc.mul(&f.pow(q - 1).sub(&TPoly::one(ctx)));
    }
    Ok(acc)
}

/// tau_m as g_{q^m - 1} / Gamma_{q^m - 1}; independent construction used
/// as an oracle against [`tau_product`].
pub fn tau_from_g(consts: &CarlitzConstants, m: usize, prec: i64) -> Result<TPoly> {
    let j = (consts.ctx().q() as u64).pow(m as u32) - 1;
    let g = g_small(consts, j)?;
    let inv = consts.inv_gamma(j, prec)?;
    Ok(g.scale(&inv))
}

/// Precomputed h-basis data up to a fixed degree: the exact monic G_j and
/// the gamma factorials, which make expansion division-free.
pub struct HBasis<'a> {
    consts: &'a CarlitzConstants,
    g: Vec<TPoly>,
    gammas: Vec<Poly>,
}

impl<'a> HBasis<'a> {
    pub fn new(consts: &'a CarlitzConstants, max_deg: u64) -> Result<HBasis<'a>> {
        let ctx = consts.ctx();
        let q = ctx.q() as u64;
        let mut g: Vec<TPoly> = Vec::with_capacity(max_deg as usize + 1);
        g.push(TPoly::one(ctx));
        let mut e_cache: Vec<TPoly> = Vec::new();
        for j in 1..=max_deg {
            // peel the top digit: G_j = G_{j - q^nu} * e_nu
            let mut pw = 1u64;
            let mut nu = 0usize;
            while pw * q <= j {
                pw *= q;
                nu += 1;
            }
            while e_cache.len() <= nu {
                e_cache.push(e_binomial(consts, e_cache.len())?.to_tpoly());
            }
            let prev = g[(j - pw) as usize].clone();
            g.push(prev.mul(&e_cache[nu]));
        }
        let gammas: Result<Vec<Poly>> = (0..=max_deg).map(|j| consts.gamma(j)).collect();
        Ok(HBasis { consts, g, gammas: gammas? })
    }

    pub fn max_degree(&self) -> usize {
        self.g.len() - 1
    }

    pub fn g_poly(&self, j: usize) -> &TPoly {
        &self.g[j]
    }

    /// Coefficients of p over {h_j}: back-substitution on the triangular
    /// system. G_j is monic and c_j = lead * Gamma_j, so every step is an
    /// exact multiplication; exact inputs expand exactly.
    pub fn to_h(&self, p: &TPoly) -> Result<Vec<Laurent>> {
        let ctx = self.consts.ctx();
        let deg = match p.degree() {
            None => return Ok(vec![]),
            Some(d) => d,
        };
        if deg > self.max_degree() {
            return Err(Error::IndexCap { index: deg, cap: self.max_degree(), q: ctx.q() });
        }
        let mut residual = p.clone();
        let mut out = vec![Laurent::zero(ctx); deg + 1];
        for j in (0..=deg).rev() {
            let lead = residual.coeff(j);
            if lead.is_exact_zero() {
                continue;
            }
            out[j] = lead.mul(&Laurent::from_poly(&self.gammas[j]));
            residual = residual.sub(&self.g[j].scale(&lead));
        }
        Ok(out)
    }

    /// Reassembles sum c_j h_j with the h_j known modulo x^prec.
    pub fn synthesize(&self, coeffs: &[Laurent], prec: i64) -> Result<TPoly> {
        let ctx = self.consts.ctx();
        let mut acc = TPoly::zero(ctx);
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let scaled = c.mul(&self.consts.inv_gamma(j as u64, prec)?);
            acc = acc.add(&self.g[j].scale(&scaled));
        }
        Ok(acc)
    }

    /// Sup-norm on O via the orthonormal expansion: sup over j of |c_j|.
    ///
    /// A coefficient that is zero within precision N is only known to have
    /// |c| <= q^{-N}; if that bound cannot affect the max the entry is
    /// skipped, otherwise the norm is genuinely undetermined.
    pub fn sup_norm(&self, p: &TPoly) -> Result<AbsValue> {
        let mut best = AbsValue::Zero;
        let mut undetermined_bound = AbsValue::Zero;
        for c in self.to_h(p)? {
            if c.is_exact_zero() {
                continue;
            }
            if c.is_zero_within_prec() {
                undetermined_bound = undetermined_bound.max(AbsValue::PowQ(-c.precision()));
            } else {
                best = best.max(c.abs()?);
            }
        }
        if undetermined_bound > best {
            return Err(Error::ValuationUndetermined);
        }
        Ok(best)
    }
}

/// Sum of g_l(t) G_k(t) over all monic t of degree m, exactly.
/// Vanishes unless k + l = q^m - 1, where it equals (-1)^m D_m/L_m.
pub fn monic_sum(
    consts: &CarlitzConstants,
    l: u64,
    k: u64,
    m: usize,
    budget: u64,
) -> Result<Poly> {
    let ctx = consts.ctx();
    let qm = (ctx.q() as u64)
        .checked_pow(m as u32)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
    if k >= qm || l >= qm {
        return Err(Error::OutsideDomain(format!(
            "monic_sum needs k, l < q^m = {qm}, got k = {k}, l = {l}"
        )));
    }
    let gl = g_small(consts, l)?;
    let gk = g_big(consts, k)?;
    let mut acc = Laurent::zero(ctx);
    for t in poly_enumerate(ctx, m, true, budget)? {
        acc = acc.add(&gl.eval_exact(&t).mul(&gk.eval_exact(&t)));
    }
    acc.to_poly()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::series::parse_poly;

    const BUDGET: u64 = 1 << 16;

    fn consts(q: u32) -> CarlitzConstants {
        CarlitzConstants::new(&FqContext::with_q(q).unwrap())
    }

    #[test]
    fn e_zero_is_t() {
        let c = consts(2);
        let e0 = e_product(&c, 0, BUDGET).unwrap();
        assert_eq!(e0.degree(), Some(1));
        assert_eq!(e0.coeff(1), Laurent::one(c.ctx()));
        assert!(e0.coeff(0).is_exact_zero());
    }

    #[test]
    fn e_one_dual_path_q2() {
        let c = consts(2);
        let prod = e_product(&c, 1, BUDGET).unwrap();
        let bino = e_binomial(&c, 1).unwrap().to_tpoly();
        assert_eq!(prod, bino);
        // t(t+1) = t^2 + t over F_2
        assert_eq!(prod.coeff(1), Laurent::one(c.ctx()));
        assert_eq!(prod.coeff(2), Laurent::one(c.ctx()));
    }

    #[test]
    fn e_one_q3_is_t_cubed_minus_t() {
        let c = consts(3);
        let prod = e_product(&c, 1, BUDGET).unwrap();
        let bino = e_binomial(&c, 1).unwrap().to_tpoly();
        assert_eq!(prod, bino);
        assert_eq!(prod.coeff(3), Laurent::one(c.ctx()));
        assert_eq!(
            prod.coeff(1),
            Laurent::monomial(c.ctx(), c.ctx().from_int(-1), 0)
        );
    }

    #[test]
    fn e_dual_path_up_to_three() {
        for q in [2u32, 3, 4] {
            let c = consts(q);
            for i in 0..=3usize {
                let prod = e_product(&c, i, BUDGET).unwrap();
                let bino = e_binomial(&c, i).unwrap().to_tpoly();
                assert_eq!(prod, bino, "q={q} i={i}");
            }
        }
    }

    #[test]
    fn e_at_x_i_equals_d_i() {
        // the interpolation normalization: e_i evaluated at x^i gives D_i
        for q in [2u32, 3] {
            let c = consts(q);
            for i in 0..=3usize {
                let e = e_binomial(&c, i).unwrap();
                let xi = Poly::monomial(c.ctx(), Fq::ONE, i);
                let v = e.eval_exact(&xi).to_poly().unwrap();
                assert_eq!(v, c.d(i).unwrap(), "q={q} i={i}");
            }
        }
    }

    #[test]
    fn f_vanishes_below_its_degree() {
        let c = consts(2);
        for i in 1..=3usize {
            let f = f_basis(&c, i, 40).unwrap();
            for m in poly_enumerate(c.ctx(), i, false, BUDGET).unwrap() {
                let v = f.eval_exact(&m);
                assert!(
                    v.is_zero_within_prec(),
                    "f_{i} at deg<{i} input should vanish, got {v}"
                );
            }
        }
    }

    #[test]
    fn f_zero_is_identity_and_f1_q2() {
        let c = consts(2);
        let f0 = f_basis(&c, 0, 20).unwrap();
        let x = Poly::monomial(c.ctx(), Fq::ONE, 1);
        assert_eq!(f0.eval_exact(&x), Laurent::monomial(c.ctx(), Fq::ONE, 1));
        // f_1 = (t^2 + t)/(x^2 + x); the t-coefficient is 1/[1]
        let f1 = f_basis(&c, 1, 20).unwrap();
        let c1 = f1.coeff(0);
        let invd1 = c.inv_d(1, 20).unwrap();
        assert!(c1.agrees_to(&invd1, 18).unwrap());
    }

    #[test]
    fn h_one_is_t_and_h_qpow_is_f() {
        let c = consts(2);
        let h1 = h_poly(&c, 1, 30).unwrap();
        assert_eq!(h1.degree(), Some(1));
        assert!(h1.coeff(1).agrees_to(&Laurent::one(c.ctx()), 30).unwrap());
        for i in 0..=2usize {
            let h = h_poly(&c, 1 << i, 30).unwrap();
            let f = f_basis(&c, i, 30).unwrap().to_tpoly();
            for d in 0..=h.degree().unwrap() {
                let (a, b) = (h.coeff(d), f.coeff(d));
                if a.is_zero_within_prec() && b.is_zero_within_prec() {
                    continue;
                }
                assert!(a.agrees_to(&b, 25).unwrap(), "h_{} vs f_{i} at t^{d}", 1 << i);
            }
        }
    }

    #[test]
    fn tau_dual_path() {
        for q in [2u32, 3] {
            let c = consts(q);
            for m in 0..=3usize {
                let a = tau_product(&c, m, 40).unwrap();
                let b = tau_from_g(&c, m, 40).unwrap();
                assert_eq!(a.degree(), b.degree(), "q={q} m={m}");
                if let Some(d) = a.degree() {
                    for t in 0..=d {
                        let (ca, cb) = (a.coeff(t), b.coeff(t));
                        if ca.is_zero_within_prec() && cb.is_zero_within_prec() {
                            continue;
                        }
                        assert!(ca.agrees_to(&cb, 30).unwrap(), "q={q} m={m} t^{t}");
                    }
                }
            }
        }
    }

    #[test]
    fn tau_one_q2_is_t_minus_one() {
        let c = consts(2);
        let tau = tau_product(&c, 1, 30).unwrap();
        assert_eq!(tau.degree(), Some(1));
        let minus_one = Laurent::monomial(c.ctx(), Fq::ONE, 0).neg();
        assert!(tau.coeff(0).agrees_to(&minus_one, 25).unwrap());
        assert!(tau.coeff(1).agrees_to(&Laurent::one(c.ctx()), 25).unwrap());
        let tau0 = tau_from_g(&c, 0, 30).unwrap();
        assert_eq!(tau0.degree(), Some(0)); // tau_0 = 1
    }

    #[test]
    fn tau_at_zero_has_unit_abs() {
        // computed sign is (-1)^m; only |tau_m(0)| = 1 is relied upon
        for q in [2u32, 3] {
            let c = consts(q);
            for m in 1..=3usize {
                let tau = tau_product(&c, m, 40).unwrap();
                let v = tau.coeff(0);
                assert_eq!(v.abs().unwrap(), AbsValue::PowQ(0), "q={q} m={m}");
                let expect = Laurent::monomial(c.ctx(), c.ctx().sign(m as u64), 0);
                assert!(v.agrees_to(&expect, 30).unwrap(), "q={q} m={m}");
            }
        }
    }

    #[test]
    fn h_expansion_roundtrip() {
        let c = consts(2);
        let hb = HBasis::new(&c, 8).unwrap();
        // h_5 expands to the unit vector at index 5
        let h5 = h_poly(&c, 5, 40).unwrap();
        let coeffs = hb.to_h(&h5).unwrap();
        for (j, cj) in coeffs.iter().enumerate() {
            if j == 5 {
                assert!(cj.agrees_to(&Laurent::one(c.ctx()), 30).unwrap());
            } else {
                assert!(cj.is_zero_within_prec(), "h_5 coefficient at {j}: {cj}");
            }
        }
        // t^j has a triangular expansion with j-th entry Gamma_j
        for j in [2usize, 5, 7] {
            let tj = TPoly::term(Laurent::one(c.ctx()), j);
            let coeffs = hb.to_h(&tj).unwrap();
            assert_eq!(
                coeffs[j],
                Laurent::from_poly(&c.gamma(j as u64).unwrap()),
                "leading h-coefficient of t^{j}"
            );
            let back = hb.synthesize(&coeffs, 40).unwrap();
            for d in 0..=j {
                let (a, b) = (back.coeff(d), tj.coeff(d));
                if a.is_zero_within_prec() && (b.is_exact_zero() || b.is_zero_within_prec()) {
                    continue;
                }
                assert!(a.agrees_to(&b, 30).unwrap(), "roundtrip t^{j} at t^{d}");
            }
        }
    }

    #[test]
    fn sigma_coefficients_exact_identity() {
        // h-coefficients of g_{q^m-1}: d_j = g_{q^m-1-j}(0) * Gamma_j exactly
        for q in [2u32, 3] {
            let c = consts(q);
            let m = if q == 2 { 3usize } else { 2 };
            let top = (q as u64).pow(m as u32) - 1;
            let hb = HBasis::new(&c, top).unwrap();
            let g = g_small(&c, top).unwrap();
            let coeffs = hb.to_h(&g).unwrap();
            for (j, dj) in coeffs.iter().enumerate() {
                let expect = g_at_zero(&c, top - j as u64)
                    .unwrap()
                    .mul(&c.gamma(j as u64).unwrap());
                assert_eq!(dj.clone(), Laurent::from_poly(&expect), "q={q} j={j}");
            }
            // sigma_{m, q^m-1} = g_0(0)/Gamma_0 = 1
            assert_eq!(
                coeffs[top as usize],
                Laurent::from_poly(&c.gamma(top).unwrap())
            );
        }
    }

    #[test]
    fn sup_norm_examples() {
        let c = consts(2);
        let hb = HBasis::new(&c, 16).unwrap();
        for i in 0..=3usize {
            let f = f_basis(&c, i, 40).unwrap().to_tpoly();
            assert_eq!(hb.sup_norm(&f).unwrap(), AbsValue::PowQ(0), "norm of f_{i}");
        }
        for m in 0..=3usize {
            let tau = tau_product(&c, m, 40).unwrap();
            assert_eq!(hb.sup_norm(&tau).unwrap(), AbsValue::PowQ(0), "norm of tau_{m}");
        }
        let x = Laurent::monomial(c.ctx(), Fq::ONE, 1);
        let xf0 = f_basis(&c, 0, 40).unwrap().to_tpoly().scale(&x);
        assert_eq!(hb.sup_norm(&xf0).unwrap(), AbsValue::PowQ(-1));
    }

    #[test]
    fn monic_sum_examples() {
        let c2 = consts(2);
        // q=2, m=1: k+l = 0 != q-1 = 1 gives 0
        assert!(monic_sum(&c2, 0, 0, 1, BUDGET).unwrap().is_zero());
        // k=0, l=1: (-1)^1 D_1/L_1 = -1 = 1 in characteristic 2
        let s = monic_sum(&c2, 1, 0, 1, BUDGET).unwrap();
        assert_eq!(s, c2.dl_quotient(1).unwrap().neg());
        assert_eq!(s, parse_poly(c2.ctx(), "1").unwrap());
        // specialized form: sum of g_{q^n-1} over monic deg m vanishes for n < m
        let s = monic_sum(&c2, 3, 0, 3, BUDGET).unwrap(); // n=2 < m=3
        assert!(s.is_zero());
    }

    #[test]
    fn monic_sum_identity_exhaustive_small() {
        for (q, m) in [(2u32, 2usize), (3, 1)] {
            let c = consts(q);
            let qm = (q as u64).pow(m as u32);
            for l in 0..qm {
                for k in 0..qm {
                    let s = monic_sum(&c, l, k, m, BUDGET).unwrap();
                    if k + l == qm - 1 {
                        let mut expect = c.dl_quotient(m).unwrap();
                        if m % 2 == 1 {
                            expect = expect.neg();
                        }
                        assert_eq!(s, expect, "q={q} m={m} k={k} l={l}");
                    } else {
                        assert!(s.is_zero(), "q={q} m={m} k={k} l={l} gave {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthonormality_inequality_samples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for q in [2u32, 3] {
            let c = consts(q);
            let m = 3usize;
            let top = (q as u64).pow(m as u32) - 1;
            let hb = HBasis::new(&c, top).unwrap();
            let taus: Vec<TPoly> = (0..=m).map(|k| tau_product(&c, k, 60).unwrap()).collect();
            for _ in 0..5 {
                let mut sum = TPoly::zero(c.ctx());
                let mut lambda_m = Laurent::zero(c.ctx());
                for (k, tau) in taus.iter().enumerate() {
                    let coeffs: Vec<Fq> =
                        (0..3).map(|_| Fq(rng.gen_range(0..q) as u8)).collect();
                    let lambda = Laurent::from_poly(&Poly::from_coeffs(c.ctx(), coeffs));
                    if k == m {
                        lambda_m = lambda.clone();
                    }
                    sum = sum.add(&tau.scale(&lambda));
                }
                let norm = hb.sup_norm(&sum).unwrap();
                let bound = if lambda_m.is_exact_zero() {
                    AbsValue::Zero
                } else {
                    lambda_m.abs().unwrap()
                };
                assert!(norm >= bound, "q={q}: norm {norm} < |lambda_m| {bound}");
            }
        }
    }
}
