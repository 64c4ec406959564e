//! Truncated formal Laurent series over F_q with explicit precision.
//!
//! A value represents an element of K = F_q((x)) known modulo x^prec:
//! coefficients at exponents in [val, prec) are determined (stored ones,
//! implicitly zero past the stored block), everything at or above prec is
//! unknown. `prec == EXACT` marks series known at every exponent, which is
//! how exact polynomials embed; arithmetic then loses nothing.
//!
//! The exact zero and "zero within precision" are distinct states: the
//! first has no nonzero coefficient anywhere, the second merely has none
//! below its precision horizon. Valuation and absolute value refuse the
//! latter instead of guessing.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fq, FqContext};
use crate::series::{AbsValue, Poly};

pub const EXACT: i64 = i64::MAX;

#[inline]
pub(crate) fn prec_add(p: i64, d: i64) -> i64 {
    if p == EXACT {
        EXACT
    } else {
        p + d
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    ctx: FqContext,
    /// Exponent of the first stored coefficient. For an empty coefficient
    /// block this is the first *unknown* exponent (= prec) when prec is
    /// finite, and 0 for the exact zero.
    val: i64,
    coeffs: Vec<Fq>,
    prec: i64,
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl Laurent {
    pub fn new(ctx: &FqContext, val: i64, coeffs: Vec<Fq>, prec: i64) -> Laurent {
        let mut l = Laurent { ctx: ctx.clone(), val, coeffs, prec };
        l.normalize();
        l
    }

    /// The exact zero of K.
    pub fn zero(ctx: &FqContext) -> Laurent {
        Laurent { ctx: ctx.clone(), val: 0, coeffs: vec![], prec: EXACT }
    }

    /// Zero within precision: all coefficients below x^prec vanish, the
    /// tail is unknown.
    pub fn zero_prec(ctx: &FqContext, prec: i64) -> Laurent {
        assert!(prec != EXACT);
        Laurent { ctx: ctx.clone(), val: prec, coeffs: vec![], prec }
    }

    pub fn one(ctx: &FqContext) -> Laurent {
        Laurent::monomial(ctx, Fq::ONE, 0)
    }

    /// c * x^e, exact.
    pub fn monomial(ctx: &FqContext, c: Fq, e: i64) -> Laurent {
        if c.is_zero() {
            return Laurent::zero(ctx);
        }
        Laurent { ctx: ctx.clone(), val: e, coeffs: vec![c], prec: EXACT }
    }

    pub fn from_poly(p: &Poly) -> Laurent {
        match p.valuation() {
            None => Laurent::zero(p.ctx()),
            Some(v) => Laurent {
                ctx: p.ctx().clone(),
                val: v as i64,
                coeffs: p.coeffs()[v..].to_vec(),
                prec: EXACT,
            },
        }
    }

    /// Exact conversion back to a polynomial; requires an exact series
    /// with no pole.
    pub fn to_poly(&self) -> Result<Poly> {
        if self.coeffs.is_empty() {
            return if self.prec == EXACT {
                Ok(Poly::zero(&self.ctx))
            } else {
                Err(Error::ValuationUndetermined)
            };
        }
        if self.prec != EXACT {
            return Err(Error::InsufficientPrecision { needed: EXACT, have: self.prec });
        }
        if self.val < 0 {
            return Err(Error::OutsideDomain(format!(
                "valuation {} is negative",
                self.val
            )));
        }
        let mut coeffs = vec![Fq::ZERO; self.val as usize];
        coeffs.extend_from_slice(&self.coeffs);
        Ok(Poly::from_coeffs(&self.ctx, coeffs))
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&Fq::ZERO) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.val += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.val = if self.prec == EXACT { 0 } else { self.prec };
        } else {
            debug_assert!(self.val + self.coeffs.len() as i64 <= self.prec);
        }
    }

    pub fn ctx(&self) -> &FqContext {
        &self.ctx
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec == EXACT
    }

    /// True when no coefficient below the precision horizon is nonzero
    /// (covers the exact zero as well).
    pub fn is_zero_within_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation: Ok(None) for the exact zero, error when zero within
    /// finite precision.
    pub fn valuation(&self) -> Result<Option<i64>> {
        if !self.coeffs.is_empty() {
            Ok(Some(self.val))
        } else if self.prec == EXACT {
            Ok(None)
        } else {
            Err(Error::ValuationUndetermined)
        }
    }

    /// |z| as a power of q; |x^v * unit| = q^{-v}.
    pub fn abs(&self) -> Result<AbsValue> {
        Ok(match self.valuation()? {
            None => AbsValue::Zero,
            Some(v) => AbsValue::PowQ(-v),
        })
    }

    /// Coefficient of x^e. Unknown exponents (e >= prec) are an error.
    pub fn coeff_at(&self, e: i64) -> Result<Fq> {
        if e >= self.prec {
            return Err(Error::InsufficientPrecision { needed: e + 1, have: self.prec });
        }
        if e < self.val || e - self.val >= self.coeffs.len() as i64 {
            return Ok(Fq::ZERO);
        }
        Ok(self.coeffs[(e - self.val) as usize])
    }

    /// (first stored exponent, stored block) for iteration.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, &c)| (self.val + k as i64, c))
    }

    fn assert_ctx(&self, other: &Laurent) {
        assert!(self.ctx == other.ctx, "mixed field contexts");
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        self.assert_ctx(other);
        let prec = self.prec.min(other.prec);
        if self.coeffs.is_empty() && other.coeffs.is_empty() {
            return if prec == EXACT {
                Laurent::zero(&self.ctx)
            } else {
                Laurent::zero_prec(&self.ctx, prec)
            };
        }
        let lo = self.val.min(other.val);
        let hi_known = {
            let a_hi = self.val + self.coeffs.len() as i64;
            let b_hi = other.val + other.coeffs.len() as i64;
            a_hi.max(b_hi).min(prec)
        };
        let mut coeffs = Vec::with_capacity((hi_known - lo).max(0) as usize);
        for e in lo..hi_known {
            let a = self.stored(e);
            let b = other.stored(e);
            coeffs.push(self.ctx.add(a, b));
        }
        Laurent::new(&self.ctx, lo, coeffs, prec)
    }

    #[inline]
    fn stored(&self, e: i64) -> Fq {
        if e < self.val || e - self.val >= self.coeffs.len() as i64 {
            Fq::ZERO
        } else {
            self.coeffs[(e - self.val) as usize]
        }
    }

    pub fn neg(&self) -> Laurent {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect();
        Laurent { ctx: self.ctx.clone(), val: self.val, coeffs, prec: self.prec }
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        self.mul_prec(other, EXACT)
    }

    /// Product truncated to x^cap on top of the usual precision rule
    /// prec = min(N_a + v_b, N_b + v_a). The cap keeps chains of exact
    /// operands from growing unboundedly when only a window is needed.
    pub fn mul_prec(&self, other: &Laurent, cap: i64) -> Laurent {
        self.assert_ctx(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Laurent::zero(&self.ctx);
        }
        let prec = prec_add(self.prec, other.val)
            .min(prec_add(other.prec, self.val))
            .min(cap);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent::zero_prec(&self.ctx, prec);
        }
        let lo = self.val + other.val;
        if prec != EXACT && prec <= lo {
            return Laurent::zero_prec(&self.ctx, prec);
        }
        let a_hi = self.val + self.coeffs.len() as i64;
        let b_hi = other.val + other.coeffs.len() as i64;
        // the cap bounds cost, not knowledge: when two exact operands fit
        // the whole product under it, the result is still exact
        let prec = if self.prec == EXACT && other.prec == EXACT && a_hi + b_hi - 1 <= cap {
            EXACT
        } else {
            prec
        };
        let hi = (a_hi + b_hi - 1).min(prec);
        let mut out = vec![Fq::ZERO; (hi - lo) as usize];
        let ctx = &self.ctx;
        for (ka, &ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ea = self.val + ka as i64;
            if ea + other.val >= hi {
                break;
            }
            for (kb, &cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let e = ea + other.val + kb as i64;
                if e >= hi {
                    break;
                }
                let slot = (e - lo) as usize;
                out[slot] = ctx.add(out[slot], ctx.mul(ca, cb));
            }
        }
        Laurent::new(ctx, lo, out, prec)
    }

    pub fn scale(&self, c: Fq) -> Laurent {
        if c.is_zero() {
            return Laurent::zero(&self.ctx);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        Laurent { ctx: self.ctx.clone(), val: self.val, coeffs, prec: self.prec }
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: i64) -> Laurent {
        if self.is_exact_zero() {
            return self.clone();
        }
        Laurent {
            ctx: self.ctx.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec: prec_add(self.prec, k),
        }
    }

    /// Multiplicative inverse known modulo x^target_prec. The input must
    /// not be zero within precision and must carry enough coefficients:
    /// inverting x^v * unit needs the unit part to target_prec + 2v.
    pub fn inv(&self, target_prec: i64) -> Result<Laurent> {
        if self.coeffs.is_empty() {
            return Err(if self.prec == EXACT {
                Error::DivisionByZero
            } else {
                Error::ValuationUndetermined
            });
        }
        // a single exact term c x^v inverts exactly
        if self.prec == EXACT && self.coeffs.len() == 1 {
            return Ok(Laurent::monomial(
                &self.ctx,
                self.ctx.inv(self.coeffs[0])?,
                -self.val,
            ));
        }
        assert!(target_prec != EXACT, "inverse precision must be finite");
        let v = self.val;
        // unit part u = self * x^{-v}; need n coefficients of u^{-1} where
        // n = target_prec + v (result valuation is -v).
        let n = target_prec + v;
        if n <= 0 {
            return Ok(Laurent::zero_prec(&self.ctx, target_prec));
        }
        let n = n as usize;
        let have = if self.prec == EXACT { EXACT } else { self.prec - v };
        if have < n as i64 {
            return Err(Error::InsufficientPrecision { needed: n as i64, have });
        }
        let ctx = &self.ctx;
        let u = |k: usize| -> Fq {
            self.coeffs.get(k).copied().unwrap_or(Fq::ZERO)
        };
        let lead_inv = ctx.inv(u(0))?;
        let mut out = vec![Fq::ZERO; n];
        out[0] = lead_inv;
        for k in 1..n {
            let mut acc = Fq::ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let c = u(j);
                if c.is_zero() || out[k - j].is_zero() {
                    continue;
                }
                acc = ctx.add(acc, ctx.mul(c, out[k - j]));
            }
            out[k] = ctx.neg(ctx.mul(acc, lead_inv));
        }
        Ok(Laurent::new(ctx, -v, out, target_prec))
    }

    /// z -> z^{p^j}: coefficient Frobenius plus exponent dilation.
    pub fn frob_p(&self, j: u32) -> Laurent {
        if j == 0 || self.is_exact_zero() {
            return self.clone();
        }
        let step = (self.ctx.p() as i64).pow(j);
        let prec = if self.prec == EXACT { EXACT } else { self.prec.checked_mul(step).expect("precision overflow") };
        if self.coeffs.is_empty() {
            return Laurent::zero_prec(&self.ctx, prec);
        }
        let mut coeffs = vec![Fq::ZERO; (self.coeffs.len() - 1) * step as usize + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[k * step as usize] = self.ctx.frob(c, j);
            }
        }
        Laurent::new(&self.ctx, self.val * step, coeffs, prec)
    }

    /// z -> z^{q^j}; F_q coefficients are fixed, exponents are dilated.
    pub fn frob_q(&self, j: u32) -> Laurent {
        self.frob_p(j * self.ctx.gamma())
    }

    /// Inverse of z -> z^q, defined exactly on q-th powers in K.
    pub fn q_root(&self) -> Result<Laurent> {
        let q = self.ctx.q() as i64;
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        // first unknown exponent of the root
        let prec = if self.prec == EXACT {
            EXACT
        } else {
            (self.prec - 1).div_euclid(q) + 1
        };
        if self.coeffs.is_empty() {
            return Ok(Laurent::zero_prec(&self.ctx, prec));
        }
        let mut coeffs = Vec::new();
        let mut root_val = None;
        for (e, c) in self.terms() {
            if e.rem_euclid(q) != 0 {
                return Err(Error::NotAQthPower(format!(
                    "nonzero coefficient at exponent {e}"
                )));
            }
            let re = e.div_euclid(q);
            let rv = *root_val.get_or_insert(re);
            let k = (re - rv) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Fq::ZERO);
            }
            // a^q = a in F_q, so the coefficient is its own q-th root
            coeffs[k] = c;
        }
        Ok(Laurent::new(&self.ctx, root_val.unwrap(), coeffs, prec))
    }

    /// Drops knowledge above x^cap.
    pub fn truncated(&self, cap: i64) -> Laurent {
        if cap >= self.prec {
            return self.clone();
        }
        let keep = ((cap - self.val).max(0) as usize).min(self.coeffs.len());
        Laurent::new(&self.ctx, self.val, self.coeffs[..keep].to_vec(), cap)
    }

    /// Small powers via base-p digits (p-power steps are Frobenius);
    /// intermediate products are truncated to `cap`.
    pub fn pow_prec(&self, e: u32, cap: i64) -> Laurent {
        if e == 0 {
            return Laurent::one(&self.ctx);
        }
        if self.is_exact_zero() {
            return Laurent::zero(&self.ctx);
        }
        let p = self.ctx.p();
        let mut acc: Option<Laurent> = None;
        let mut n = e;
        let mut j = 0u32;
        while n > 0 {
            let d = n % p;
            if d > 0 {
                let mut part = self.frob_p(j);
                let mut dd = d - 1;
                let base = part.clone();
                while dd > 0 {
                    part = part.mul_prec(&base, cap);
                    dd -= 1;
                }
                acc = Some(match acc {
                    None => part,
                    Some(a) => a.mul_prec(&part, cap),
                });
            }
            n /= p;
            j += 1;
        }
        acc.unwrap()
    }

    /// True when both series are known to x^upto and agree there.
    pub fn agrees_to(&self, other: &Laurent, upto: i64) -> Result<bool> {
        if self.prec < upto || other.prec < upto {
            return Err(Error::InsufficientPrecision {
                needed: upto,
                have: self.prec.min(other.prec),
            });
        }
        let lo = self.val.min(other.val);
        // beyond the stored blocks all known coefficients are zero
        let hi = (self.val + self.coeffs.len() as i64)
            .max(other.val + other.coeffs.len() as i64)
            .min(upto);
        for e in lo..hi {
            if self.stored(e) != other.stored(e) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = crate::series::format_terms(
            &self.ctx,
            self.coeffs.iter().enumerate().map(|(k, &c)| (self.val + k as i64, c)),
        );
        if self.prec == EXACT {
            write!(f, "{body}")
        } else {
            write!(f, "{body} (mod x^{})", self.prec)
        }
    }
}
