//! Exact polynomials over F_q, low coefficient first.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fq, FqContext};

/// Dense polynomial in F_q\[x\]. Invariant: the highest stored coefficient is
/// nonzero; the zero polynomial stores no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: FqContext,
    coeffs: Vec<Fq>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Poly {
    pub fn zero(ctx: &FqContext) -> Poly {
        Poly { ctx: ctx.clone(), coeffs: vec![] }
    }

    pub fn one(ctx: &FqContext) -> Poly {
        Poly::constant(ctx, Fq::ONE)
    }

    pub fn constant(ctx: &FqContext, c: Fq) -> Poly {
        let coeffs = if c.is_zero() { vec![] } else { vec![c] };
        Poly { ctx: ctx.clone(), coeffs }
    }

    /// c * x^e
    pub fn monomial(ctx: &FqContext, c: Fq, e: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero(ctx);
        }
        let mut coeffs = vec![Fq::ZERO; e + 1];
        coeffs[e] = c;
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn from_coeffs(ctx: &FqContext, coeffs: Vec<Fq>) -> Poly {
        let mut p = Poly { ctx: ctx.clone(), coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&Fq::ZERO) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &FqContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fq::ONE
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// x-adic valuation; None for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fq::ONE)
    }

    fn assert_ctx(&self, other: &Poly) {
        assert!(self.ctx == other.ctx, "mixed field contexts");
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_ctx(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.ctx.add(self.coeff(i), other.coeff(i)));
        }
        Poly::from_coeffs(&self.ctx, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let coeffs = self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect();
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn scale(&self, c: Fq) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let coeffs = self.coeffs.iter().map(|&a| self.ctx.mul(a, c)).collect();
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_ctx(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        // iterate over the sparser operand on the outside
        let (a, b) = if self.coeffs.len() <= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let ctx = &self.ctx;
        let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj));
            }
        }
        Poly { ctx: ctx.clone(), coeffs: out }
    }

    /// Squaring with the symmetric shortcut (halves the coefficient
    /// products for odd characteristic; even characteristic goes through
    /// the Frobenius path in `pow`).
    pub fn square(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let ctx = &self.ctx;
        let a = &self.coeffs;
        let mut out = vec![Fq::ZERO; 2 * a.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            out[2 * i] = ctx.add(out[2 * i], ctx.mul(ai, ai));
            for (j, &aj) in a.iter().enumerate().skip(i + 1) {
                if aj.is_zero() {
                    continue;
                }
                out[i + j] = ctx.add(out[i + j], ctx.dbl(ctx.mul(ai, aj)));
            }
        }
        Poly { ctx: ctx.clone(), coeffs: out }
    }

    /// P -> P^{p^j}: Frobenius on coefficients, exponents dilated by p^j.
    pub fn frobenius_p(&self, j: u32) -> Poly {
        if j == 0 || self.is_zero() {
            return self.clone();
        }
        let step = (self.ctx.p() as u64).pow(j) as usize;
        let deg = self.coeffs.len() - 1;
        let mut coeffs = vec![Fq::ZERO; deg * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * step] = self.ctx.frob(c, j);
            }
        }
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    /// P -> P^{q^j}; coefficients are fixed by the q-power Frobenius.
    pub fn frobenius_q(&self, j: u32) -> Poly {
        self.frobenius_p(j * self.ctx.gamma())
    }

    /// P^e via the base-p expansion of e: p-power factors are coefficient
    /// Frobenius plus re-indexing, so only the sub-p digits cost
    /// multiplications.
    pub fn pow(&self, e: u32) -> Poly {
        if e == 0 {
            return Poly::one(&self.ctx);
        }
        if self.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let p = self.ctx.p();
        let mut digits = Vec::new();
        let mut n = e;
        while n > 0 {
            digits.push(n % p);
            n /= p;
        }
        let mut acc: Option<Poly> = None;
        for (j, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let part = self.frobenius_p(j as u32).pow_small(d);
            acc = Some(match acc {
                None => part,
                Some(a) => a.mul(&part),
            });
        }
        acc.unwrap()
    }

    /// Binary powering for exponents below p.
    fn pow_small(&self, e: u32) -> Poly {
        debug_assert!(e >= 1 && e < self.ctx.p());
        let mut acc: Option<Poly> = None;
        let mut base = self.clone();
        let mut n = e;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.square();
        }
        acc.unwrap()
    }

    pub fn mul_xk(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![Fq::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.assert_ctx(divisor);
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        if self.degree().is_none_or(|dn| dn < dd) {
            return Ok((Poly::zero(&self.ctx), self.clone()));
        }
        let ctx = &self.ctx;
        let lead_inv = ctx.inv(divisor.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        let dn = rem.len() - 1;
        let mut quot = vec![Fq::ZERO; dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = ctx.mul(rem[k + dd], lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[k] = c;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + i] = ctx.sub(rem[k + i], ctx.mul(c, dc));
                }
            }
        }
        Ok((
            Poly::from_coeffs(ctx, quot),
            Poly::from_coeffs(ctx, rem),
        ))
    }

    /// Division that must be exact; a nonzero remainder is an error.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::NonzeroRemainder);
        }
        Ok(q)
    }

    /// Substitute x^k for x.
    pub fn dilate(&self, k: usize) -> Poly {
        assert!(k >= 1);
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let deg = self.coeffs.len() - 1;
        let mut coeffs = vec![Fq::ZERO; deg * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        Poly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn eval_fq(&self, at: Fq) -> Fq {
        let mut acc = Fq::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = self.ctx.add(self.ctx.mul(acc, at), c);
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // leading term first, the usual convention for polynomials
        // (series print ascending instead)
        write!(
            f,
            "{}",
            crate::series::format_terms(
                &self.ctx,
                self.coeffs.iter().enumerate().rev().map(|(i, &c)| (i as i64, c)),
            )
        )
    }
}

/// All polynomials of degree < d (`monic_only = false`, q^d of them
/// including zero) or all monic polynomials of exact degree d
/// (`monic_only = true`, also q^d). Deterministic order.
pub fn poly_enumerate(
    ctx: &FqContext,
    d: usize,
    monic_only: bool,
    budget: u64,
) -> Result<Vec<Poly>> {
    let count = (ctx.q() as u128)
        .checked_pow(d as u32)
        .ok_or(Error::BudgetExceeded { needed: u128::MAX, budget })?;
    if count > budget as u128 {
        return Err(Error::BudgetExceeded { needed: count, budget });
    }
    let q = ctx.q() as u128;
    let mut out = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut n = idx;
        for _ in 0..d {
            coeffs.push(Fq((n % q) as u8));
            n /= q;
        }
        if monic_only {
            coeffs.push(Fq::ONE);
        }
        out.push(Poly::from_coeffs(ctx, coeffs));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u32) -> FqContext {
        FqContext::with_q(q).unwrap()
    }

    fn poly(ctx: &FqContext, coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(ctx, coeffs.iter().map(|&c| ctx.from_int(c)).collect())
    }

    #[test]
    fn char_two_square_is_dilation() {
        let f2 = ctx(2);
        let p = poly(&f2, &[1, 1]); // 1 + x
        assert_eq!(p.mul(&p), poly(&f2, &[1, 0, 1])); // 1 + x^2
        assert_eq!(p.square(), p.frobenius_p(1));
    }

    #[test]
    fn pow_matches_repeated_mul() {
        for q in [2u32, 3, 4, 9] {
            let f = ctx(q);
            let p = poly(&f, &[2, 1, 0, 1]);
            let mut acc = Poly::one(&f);
            for e in 0..=7u32 {
                assert_eq!(p.pow(e), acc, "q={q} e={e}");
                acc = acc.mul(&p);
            }
        }
    }

    #[test]
    fn div_rem_reconstructs() {
        let f3 = ctx(3);
        let a = poly(&f3, &[1, 2, 0, 1, 2, 2]);
        let b = poly(&f3, &[2, 0, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(b.mul(&q).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn exact_div_detects_remainder() {
        let f2 = ctx(2);
        let a = poly(&f2, &[1, 1, 1]);
        let b = poly(&f2, &[1, 1]);
        assert_eq!(a.exact_div(&b), Err(Error::NonzeroRemainder));
        assert_eq!(a.mul(&b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn enumerate_counts() {
        let f2 = ctx(2);
        let monic1 = poly_enumerate(&f2, 1, true, 1 << 16).unwrap();
        assert_eq!(monic1, vec![poly(&f2, &[0, 1]), poly(&f2, &[1, 1])]);
        let all2 = poly_enumerate(&f2, 2, false, 1 << 16).unwrap();
        assert_eq!(all2.len(), 4);
        assert!(all2.contains(&Poly::zero(&f2)));
        let f3 = ctx(3);
        assert_eq!(poly_enumerate(&f3, 2, true, 1 << 16).unwrap().len(), 9);
        assert!(matches!(
            poly_enumerate(&f3, 20, false, 1 << 16),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn display_form() {
        let f3 = ctx(3);
        assert_eq!(poly(&f3, &[1, 0, 2]).to_string(), "2*x^2 + 1");
        assert_eq!(Poly::zero(&f3).to_string(), "0");
        let f2 = ctx(2);
        assert_eq!(poly(&f2, &[0, 1, 1]).to_string(), "x^2 + x");
    }
}
