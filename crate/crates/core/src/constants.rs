//! The Carlitz arithmetic constants: brackets \[i\], the factorials D_i and
//! L_i, the digit-wise gamma factorial, and the Carlitz binomial.
//!
//! Everything here is an exact polynomial; the module also hands out
//! precision-tracked inverses of the constants, since those drive every
//! downstream series computation. All families are memoized per context
//! behind one lock (D_i has degree i*q^i, recomputation would dominate).

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::field::{Fq, FqContext};
use crate::series::{Laurent, Poly};

/// Degree ceiling for the exact families; keeps deg D_i bounded.
/// i <= 12 for q = 2; the acceptance ranges (D_6 at q = 5, D_8 at q = 3)
/// sit just below it.
const CAP_DEG: u64 = 98_304;

#[derive(Default)]
struct Cache {
    brackets: Vec<Poly>,
    d: Vec<Poly>,
    l: Vec<Poly>,
    gamma: HashMap<u64, Poly>,
    inv: HashMap<InvKey, Laurent>,
}

#[derive(PartialEq, Eq, Hash, Clone, Copy)]
enum InvKey {
    D(usize),
    L(usize),
    Gamma(u64),
    Bracket(usize),
    /// Denominator D_j * L_{i-j}^{q^j} of the normalized basis coefficient.
    FDenom(usize, usize),
}

pub struct CarlitzConstants {
    ctx: FqContext,
    cache: Mutex<Cache>,
}

impl CarlitzConstants {
    pub fn new(ctx: &FqContext) -> CarlitzConstants {
        CarlitzConstants { ctx: ctx.clone(), cache: Mutex::new(Cache::default()) }
    }

    pub fn ctx(&self) -> &FqContext {
        &self.ctx
    }

    /// Largest index i with deg D_i = i * q^i within the cap.
    pub fn index_cap(&self) -> usize {
        let q = self.ctx.q() as u64;
        let mut i = 0u64;
        loop {
            let next = i + 1;
            match q.checked_pow(next as u32).and_then(|p| p.checked_mul(next)) {
                Some(d) if d <= CAP_DEG => i = next,
                _ => return i as usize,
            }
        }
    }

    fn check_cap(&self, i: usize) -> Result<()> {
        let cap = self.index_cap();
        if i > cap {
            Err(Error::IndexCap { index: i, cap, q: self.ctx.q() })
        } else {
            Ok(())
        }
    }

    /// \[i\] = x^{q^i} - x, i >= 1.
    pub fn bracket(&self, i: usize) -> Result<Poly> {
        if i == 0 {
            return Err(Error::OutsideDomain("bracket index must be >= 1".into()));
        }
        self.check_cap(i)?;
        let mut cache = self.cache.lock().unwrap();
        while cache.brackets.len() < i {
            let k = cache.brackets.len() + 1;
            let e = (self.ctx.q() as u64).pow(k as u32) as usize;
            let b = Poly::monomial(&self.ctx, Fq::ONE, e)
                .sub(&Poly::monomial(&self.ctx, Fq::ONE, 1));
            cache.brackets.push(b);
        }
        Ok(cache.brackets[i - 1].clone())
    }

    /// D_i = \[i\] D_{i-1}^q, D_0 = 1.
    pub fn d(&self, i: usize) -> Result<Poly> {
        self.check_cap(i)?;
        let mut cache = self.cache.lock().unwrap();
        if cache.d.is_empty() {
            cache.d.push(Poly::one(&self.ctx));
        }
        while cache.d.len() <= i {
            let k = cache.d.len();
            drop(cache);
            let bracket = self.bracket(k)?;
            cache = self.cache.lock().unwrap();
            if cache.d.len() > k {
                continue;
            }
            let next = bracket.mul(&cache.d[k - 1].frobenius_q(1));
            cache.d.push(next);
        }
        Ok(cache.d[i].clone())
    }

    /// L_i = \[i\] L_{i-1}, L_0 = 1.
    pub fn l(&self, i: usize) -> Result<Poly> {
        self.check_cap(i)?;
        let mut cache = self.cache.lock().unwrap();
        if cache.l.is_empty() {
            cache.l.push(Poly::one(&self.ctx));
        }
        while cache.l.len() <= i {
            let k = cache.l.len();
            drop(cache);
            let bracket = self.bracket(k)?;
            cache = self.cache.lock().unwrap();
            if cache.l.len() > k {
                continue;
            }
            let next = bracket.mul(&cache.l[k - 1]);
            cache.l.push(next);
        }
        Ok(cache.l[i].clone())
    }

    /// Base-q digits of j, least significant first, no trailing zeros.
    pub fn digit_expansion(&self, j: u64) -> Vec<u32> {
        let q = self.ctx.q() as u64;
        let mut digits = Vec::new();
        let mut n = j;
        while n > 0 {
            digits.push((n % q) as u32);
            n /= q;
        }
        digits
    }

    /// Gamma_j = prod D_i^{alpha_i} over the base-q digits of j.
    ///
    /// Factors sharing a digit threshold are grouped, so the common shape
    /// Gamma_{q^m - 1} = (D_0 ... D_{m-1})^{q-1} costs one product plus one
    /// power instead of m separate powers.
    pub fn gamma(&self, j: u64) -> Result<Poly> {
        if let Some(g) = self.cache.lock().unwrap().gamma.get(&j) {
            return Ok(g.clone());
        }
        let digits = self.digit_expansion(j);
        let mut result = Poly::one(&self.ctx);
        let mut thresholds: Vec<u32> = digits.iter().copied().filter(|&d| d > 0).collect();
        thresholds.sort_unstable();
        thresholds.dedup();
        let mut prev = 0u32;
        for &t in &thresholds {
            let mut layer = Poly::one(&self.ctx);
            for (i, &d) in digits.iter().enumerate() {
                if d >= t {
                    layer = layer.mul(&self.d(i)?);
                }
            }
            result = result.mul(&layer.pow(t - prev));
            prev = t;
        }
        self.cache.lock().unwrap().gamma.insert(j, result.clone());
        Ok(result)
    }

    /// Carlitz binomial D_i / (D_j L_{i-j}^{q^j}); the division is exact,
    /// a nonzero remainder would be an internal inconsistency.
    pub fn carlitz_binomial(&self, i: usize, j: usize) -> Result<Poly> {
        if j > i {
            return Err(Error::OutsideDomain(format!("binomial needs j <= i, got ({i}, {j})")));
        }
        let denom = self.d(j)?.mul(&self.l(i - j)?.frobenius_q(j as u32));
        self.d(i)?.exact_div(&denom)
    }

    /// D_n / D_{n-k}^{q^k} = \[n\] \[n-1\]^q ... [n-k+1]^{q^{k-1}}, exact
    /// (each factor is a two-term polynomial, so this stays cheap).
    pub fn d_ratio(&self, n: usize, k: usize) -> Result<Poly> {
        if k > n {
            return Err(Error::OutsideDomain(format!("d_ratio needs k <= n, got ({n}, {k})")));
        }
        let mut out = Poly::one(&self.ctx);
        for s in 0..k {
            out = out.mul(&self.bracket(n - s)?.frobenius_q(s as u32));
        }
        Ok(out)
    }

    /// D_m / L_m, computed by dividing out the sparse bracket factors of
    /// L_m one at a time (each division is linear in the degree).
    pub fn dl_quotient(&self, m: usize) -> Result<Poly> {
        let mut out = self.d(m)?;
        for i in 1..=m {
            out = out.exact_div(&self.bracket(i)?)?;
        }
        Ok(out)
    }

    fn cached_inv(&self, key: InvKey, poly: &Poly, prec: i64) -> Result<Laurent> {
        if let Some(inv) = self.cache.lock().unwrap().inv.get(&key) {
            if inv.precision() >= prec {
                return Ok(inv.truncated(prec));
            }
        }
        let inv = Laurent::from_poly(poly).inv(prec)?;
        self.cache.lock().unwrap().inv.insert(key, inv.clone());
        Ok(inv)
    }

    /// 1/D_i known modulo x^prec.
    pub fn inv_d(&self, i: usize, prec: i64) -> Result<Laurent> {
        let d = self.d(i)?;
        self.cached_inv(InvKey::D(i), &d, prec)
    }

    /// 1/L_i known modulo x^prec.
    pub fn inv_l(&self, i: usize, prec: i64) -> Result<Laurent> {
        let l = self.l(i)?;
        self.cached_inv(InvKey::L(i), &l, prec)
    }

    /// 1/Gamma_j known modulo x^prec.
    pub fn inv_gamma(&self, j: u64, prec: i64) -> Result<Laurent> {
        let g = self.gamma(j)?;
        self.cached_inv(InvKey::Gamma(j), &g, prec)
    }

    /// 1/\[i\] known modulo x^prec.
    pub fn inv_bracket(&self, i: usize, prec: i64) -> Result<Laurent> {
        let b = self.bracket(i)?;
        self.cached_inv(InvKey::Bracket(i), &b, prec)
    }

    /// Coefficient of t^{q^j} in the normalized basis polynomial f_i:
    /// (-1)^{i-j} / (D_j L_{i-j}^{q^j}), known modulo x^prec.
    pub fn f_coeff(&self, i: usize, j: usize, prec: i64) -> Result<Laurent> {
        if j > i {
            return Err(Error::OutsideDomain(format!("f_coeff needs j <= i, got ({i}, {j})")));
        }
        let denom = self.d(j)?.mul(&self.l(i - j)?.frobenius_q(j as u32));
        let inv = self.cached_inv(InvKey::FDenom(i, j), &denom, prec)?;
        Ok(inv.scale(self.ctx.sign((i - j) as u64)))
    }

    /// x-adic valuation of D_i, read off the cached polynomial.
    pub fn val_d(&self, i: usize) -> Result<i64> {
        Ok(self.d(i)?.valuation().unwrap() as i64)
    }

    pub fn val_l(&self, i: usize) -> Result<i64> {
        Ok(self.l(i)?.valuation().unwrap() as i64)
    }
}
