//! F_q-linear functions on the ring of integers O in three interchangeable
//! representations, together with the operator calculus on them:
//!
//! * [`QExpansion`]: raw coefficients a_n of the monomials t^{q^n};
//! * [`CarlitzExpansion`]: coefficients c_n of the normalized Carlitz
//!   polynomials f_n (the orthonormal expansion, so ||u|| = sup |c_n|);
//! * [`ValueTable`]: values u(x^n), which determine u on O by
//!   F_q-linearity and continuity.
//!
//! The difference operator acts diagonally on q-expansions and by a shift
//! recursion on value tables; the two routes are kept separate so tests can
//! play them against each other. The "H-normalized" coefficients of the
//! holomorphic-space picture are D_n * a_n; both normalizations are exposed
//! explicitly since the two conventions are easy to mix up.

use crate::basis::{f_basis, LinearTPoly};
use crate::constants::CarlitzConstants;
use crate::error::{Error, Result};
use crate::field::{Fq, FqContext};
use crate::series::{AbsValue, Laurent};

/// Guard digits added on top of a requested precision when an internal
/// inverse is involved.
const GUARD: i64 = 8;

fn check_in_o(t: &Laurent) -> Result<()> {
    match t.valuation() {
        Ok(None) => Ok(()),
        Ok(Some(v)) if v >= 0 => Ok(()),
        Ok(Some(v)) => Err(Error::OutsideDomain(format!(
            "argument has absolute value q^{} > 1",
            -v
        ))),
        Err(_) if t.precision() >= 0 => Ok(()),
        Err(e) => Err(e),
    }
}

/// max(0, -val) of a coefficient: how far the working window must widen
/// when multiplying by it.
fn val_slack(c: &Laurent) -> i64 {
    match c.valuation() {
        Ok(Some(v)) if v < 0 => -v,
        _ => 0,
    }
}

fn trim(mut coeffs: Vec<Laurent>) -> Vec<Laurent> {
    while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
        coeffs.pop();
    }
    coeffs
}

// ---------------------------------------------------------------------------
// QExpansion
// ---------------------------------------------------------------------------

/// u(t) = sum of a_n t^{q^n} with raw coefficients a_n.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    ctx: FqContext,
    coeffs: Vec<Laurent>,
}

impl QExpansion {
    pub fn new(ctx: &FqContext, coeffs: Vec<Laurent>) -> QExpansion {
        QExpansion { ctx: ctx.clone(), coeffs: trim(coeffs) }
    }

    pub fn zero(ctx: &FqContext) -> QExpansion {
        QExpansion::new(ctx, vec![])
    }

    /// t^{q^n}
    pub fn monomial(ctx: &FqContext, n: usize) -> QExpansion {
        let mut coeffs = vec![Laurent::zero(ctx); n + 1];
        coeffs[n] = Laurent::one(ctx);
        QExpansion::new(ctx, coeffs)
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

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &QExpansion) -> QExpansion {
        let n = self.coeffs.len().max(other.coeffs.len());
        QExpansion::new(&self.ctx, (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &QExpansion) -> QExpansion {
        let n = self.coeffs.len().max(other.coeffs.len());
        QExpansion::new(&self.ctx, (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn scale(&self, c: &Laurent) -> QExpansion {
        QExpansion::new(&self.ctx, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// u(t) -> u(g t): a_n picks up g^{q^n}.
    pub fn dilate(&self, g: &Laurent) -> QExpansion {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| a.mul(&g.frob_q(n as u32)))
            .collect();
        QExpansion::new(&self.ctx, coeffs)
    }

    /// Pointwise q-th power R_q u = u^q: shift with coefficient Frobenius.
    pub fn r_q(&self) -> QExpansion {
        let mut coeffs = vec![Laurent::zero(&self.ctx)];
        coeffs.extend(self.coeffs.iter().map(|a| a.frob_q(1)));
        QExpansion::new(&self.ctx, coeffs)
    }

    pub fn evaluate(&self, t: &Laurent, cap: i64) -> Result<Laurent> {
        check_in_o(t)?;
        let mut acc = Laurent::zero(&self.ctx);
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            acc = acc.add(&a.mul_prec(&t.frob_q(n as u32), cap));
        }
        Ok(acc.truncated(cap))
    }

    /// H-normalized coefficients D_n a_n (exact multiplications).
    pub fn h_coefficients(&self, consts: &CarlitzConstants) -> Result<Vec<Laurent>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| Ok(a.mul(&Laurent::from_poly(&consts.d(n)?))))
            .collect()
    }

    /// Builds the expansion from H-normalized coefficients; the raw
    /// coefficients pick up 1/D_n at precision prec.
    pub fn from_h_coefficients(
        consts: &CarlitzConstants,
        h: &[Laurent],
        prec: i64,
    ) -> Result<QExpansion> {
        let coeffs: Result<Vec<Laurent>> = h
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if c.is_exact_zero() {
                    return Ok(c.clone());
                }
                let inv = consts.inv_d(n, prec + consts.val_d(n)? + val_slack(c))?;
                Ok(c.mul(&inv))
            })
            .collect();
        Ok(QExpansion::new(consts.ctx(), coeffs?))
    }

    /// Difference operator iterate: diagonal action
    /// a_n -> (D_n / D_{n-k}^{q^k}) a_n for n >= k, zero below k.
    pub fn delta_k(&self, consts: &CarlitzConstants, k: usize) -> Result<QExpansion> {
        let mut coeffs = vec![Laurent::zero(&self.ctx); self.coeffs.len()];
        for (n, a) in self.coeffs.iter().enumerate() {
            if n < k || a.is_exact_zero() {
                continue;
            }
            coeffs[n] = a.mul(&Laurent::from_poly(&consts.d_ratio(n, k)?));
        }
        Ok(QExpansion::new(&self.ctx, coeffs))
    }

    /// a^+ = R_q - I.
    pub fn a_plus(&self) -> QExpansion {
        self.r_q().sub(self)
    }

    /// a^- = q-th root after the difference operator:
    /// b_n = (a_{n+1} \[n+1\])^{1/q}. Errors when a coefficient is not a
    /// q-th power in K (the root would live outside the scalar field).
    pub fn a_minus(&self, consts: &CarlitzConstants) -> Result<QExpansion> {
        if self.coeffs.len() <= 1 {
            return Ok(QExpansion::zero(&self.ctx));
        }
        let coeffs: Result<Vec<Laurent>> = (1..self.coeffs.len())
            .map(|n| {
                let prod = self.coeffs[n].mul(&Laurent::from_poly(&consts.bracket(n)?));
                prod.q_root()
            })
            .collect();
        Ok(QExpansion::new(&self.ctx, coeffs?))
    }

    /// Change of basis to the Carlitz expansion:
    /// c_j = sum over n >= j of (D_n / D_{n-j}^{q^j}) a_n, all exact.
    pub fn to_carlitz(&self, consts: &CarlitzConstants) -> Result<CarlitzExpansion> {
        let mut out = vec![Laurent::zero(&self.ctx); self.coeffs.len()];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut acc = Laurent::zero(&self.ctx);
            for (n, a) in self.coeffs.iter().enumerate().skip(j) {
                if a.is_exact_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&Laurent::from_poly(&consts.d_ratio(n, j)?)));
            }
            *slot = acc;
        }
        Ok(CarlitzExpansion::new(&self.ctx, out))
    }

    pub fn to_table(&self, len: usize, cap: i64) -> Result<ValueTable> {
        let values: Result<Vec<Laurent>> = (0..len)
            .map(|n| self.evaluate(&Laurent::monomial(&self.ctx, Fq::ONE, n as i64), cap))
            .collect();
        Ok(ValueTable::new(&self.ctx, values?))
    }
}

// ---------------------------------------------------------------------------
// CarlitzExpansion
// ---------------------------------------------------------------------------

/// u = sum of c_n f_n over the orthonormal Carlitz basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CarlitzExpansion {
    ctx: FqContext,
    coeffs: Vec<Laurent>,
}

impl CarlitzExpansion {
    pub fn new(ctx: &FqContext, coeffs: Vec<Laurent>) -> CarlitzExpansion {
        CarlitzExpansion { ctx: ctx.clone(), coeffs: trim(coeffs) }
    }

    pub fn zero(ctx: &FqContext) -> CarlitzExpansion {
        CarlitzExpansion::new(ctx, vec![])
    }

    /// f_n itself.
    pub fn basis_vector(ctx: &FqContext, n: usize) -> CarlitzExpansion {
        let mut coeffs = vec![Laurent::zero(ctx); n + 1];
        coeffs[n] = Laurent::one(ctx);
        CarlitzExpansion::new(ctx, coeffs)
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

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &CarlitzExpansion) -> CarlitzExpansion {
        let n = self.coeffs.len().max(other.coeffs.len());
        CarlitzExpansion::new(
            &self.ctx,
            (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &CarlitzExpansion) -> CarlitzExpansion {
        let n = self.coeffs.len().max(other.coeffs.len());
        CarlitzExpansion::new(
            &self.ctx,
            (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect(),
        )
    }

    pub fn scale(&self, c: &Laurent) -> CarlitzExpansion {
        CarlitzExpansion::new(&self.ctx, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// ||u|| = sup |c_n| by orthonormality. Zero-within-precision entries
    /// are skipped when their bound q^{-prec} cannot reach the max,
    /// otherwise the norm is undetermined.
    pub fn sup_norm(&self) -> Result<AbsValue> {
        let mut best = AbsValue::Zero;
        let mut bound = AbsValue::Zero;
        for c in &self.coeffs {
            if c.is_exact_zero() {
                continue;
            }
            if c.is_zero_within_prec() {
                bound = bound.max(AbsValue::PowQ(-c.precision()));
            } else {
                best = best.max(c.abs()?);
            }
        }
        if bound > best {
            return Err(Error::ValuationUndetermined);
        }
        Ok(best)
    }

    pub fn evaluate(&self, consts: &CarlitzConstants, t: &Laurent, cap: i64) -> Result<Laurent> {
        check_in_o(t)?;
        let mut acc = Laurent::zero(&self.ctx);
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let inner = cap_add(cap, val_slack(c) + GUARD);
            let f = f_basis(consts, n, inner)?;
            acc = acc.add(&c.mul_prec(&f.eval(t, inner), cap));
        }
        Ok(acc.truncated(cap))
    }

    /// a^+ = R_q - I on Carlitz coefficients:
    /// b_k = (c_k^q - c_k) + \[k\] c_{k-1}^q.
    pub fn a_plus(&self, consts: &CarlitzConstants) -> Result<CarlitzExpansion> {
        let n = self.coeffs.len();
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let ck = self.coeff(k);
            let mut b = ck.frob_q(1).sub(&ck);
            if k >= 1 {
                let prev = self.coeff(k - 1);
                if !prev.is_exact_zero() {
                    b = b.add(&prev.frob_q(1).mul(&Laurent::from_poly(&consts.bracket(k)?)));
                }
            }
            out.push(b);
        }
        Ok(CarlitzExpansion::new(&self.ctx, out))
    }

    /// a^-: left shift with coefficient q-th roots, b_k = c_{k+1}^{1/q}.
    pub fn a_minus(&self) -> Result<CarlitzExpansion> {
        if self.coeffs.len() <= 1 {
            return Ok(CarlitzExpansion::zero(&self.ctx));
        }
        let coeffs: Result<Vec<Laurent>> =
            self.coeffs[1..].iter().map(|c| c.q_root()).collect();
        Ok(CarlitzExpansion::new(&self.ctx, coeffs?))
    }

    /// Expansion over the monomials t^{q^j} via the F_q-linear form of
    /// each f_n; coefficients are known modulo x^prec.
    pub fn to_qexp(&self, consts: &CarlitzConstants, prec: i64) -> Result<QExpansion> {
        let mut out = vec![Laurent::zero(&self.ctx); self.coeffs.len()];
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate().take(n + 1) {
                let fc = consts.f_coeff(n, j, prec + val_slack(c) + GUARD)?;
                *slot = slot.add(&c.mul_prec(&fc, prec));
            }
        }
        Ok(QExpansion::new(&self.ctx, out))
    }

    pub fn to_table(&self, consts: &CarlitzConstants, len: usize, cap: i64) -> Result<ValueTable> {
        let values: Result<Vec<Laurent>> = (0..len)
            .map(|n| self.evaluate(consts, &Laurent::monomial(&self.ctx, Fq::ONE, n as i64), cap))
            .collect();
        Ok(ValueTable::new(&self.ctx, values?))
    }
}

fn cap_add(cap: i64, extra: i64) -> i64 {
    if cap == crate::series::EXACT {
        cap
    } else {
        cap + extra
    }
}

// ---------------------------------------------------------------------------
// ValueTable
// ---------------------------------------------------------------------------

/// Values u(x^n) for n = 0 .. len-1.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    ctx: FqContext,
    values: Vec<Laurent>,
}

impl ValueTable {
    pub fn new(ctx: &FqContext, values: Vec<Laurent>) -> ValueTable {
        ValueTable { ctx: ctx.clone(), values }
    }

    pub fn ctx(&self) -> &FqContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Laurent] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Result<&Laurent> {
        self.values.get(n).ok_or_else(|| {
            Error::OutsideDomain(format!("table holds {} entries, asked for x^{n}", self.len()))
        })
    }

    /// u(t) = sum of zeta_n u(x^n) over the digits zeta_n of t. Digits the
    /// table cannot see (known nonzero at exponents past the horizon) are
    /// an error; unknown digits inside the horizon cap the precision at
    /// the valuation of the corresponding table entries.
    pub fn evaluate(&self, t: &Laurent) -> Result<Laurent> {
        check_in_o(t)?;
        let len = self.values.len() as i64;
        let t_prec = t.precision();
        let mut acc = Laurent::zero(&self.ctx);
        for (e, digit) in t.terms() {
            if e >= len {
                return Err(Error::OutsideDomain(format!(
                    "argument has digit at x^{e} past the table horizon {len}"
                )));
            }
            acc = acc.add(&self.values[e as usize].scale(digit));
        }
        if t_prec < len {
            // tail digits unknown: result only known below the smallest
            // valuation a tail term could carry
            for n in t_prec.max(0)..len {
                let v = &self.values[n as usize];
                if v.is_exact_zero() {
                    continue;
                }
                let floor = match v.valuation() {
                    Ok(Some(val)) => val,
                    _ => v.precision(),
                };
                acc = acc.add(&Laurent::zero_prec(&self.ctx, floor));
            }
        }
        Ok(acc)
    }

    /// One difference step at level s (1-based):
    /// new\[j\] = old\[j+1\] - x^{q^{s-1}} old\[j\]; the table shrinks by one.
    pub fn delta_step(&self, s: u32) -> Result<ValueTable> {
        if self.values.len() < 2 {
            return Err(Error::OutsideDomain("table too short for a difference step".into()));
        }
        let e = (self.ctx.q() as i64).pow(s - 1);
        let values: Vec<Laurent> = (0..self.values.len() - 1)
            .map(|j| self.values[j + 1].sub(&self.values[j].shift(e)))
            .collect();
        Ok(ValueTable::new(&self.ctx, values))
    }

    /// Difference operator iterate via the defining recursion.
    pub fn delta_k(&self, k: usize) -> Result<ValueTable> {
        let mut t = self.clone();
        for s in 1..=k {
            t = t.delta_step(s as u32)?;
        }
        Ok(t)
    }

    /// Interpolation back to Carlitz coefficients. The system is
    /// triangular with f_n(x^n) = 1, so
    /// c_n = u(x^n) - sum over k < n of c_k f_k(x^n).
    pub fn to_carlitz(&self, consts: &CarlitzConstants, prec: i64) -> Result<CarlitzExpansion> {
        let mut cs: Vec<Laurent> = Vec::with_capacity(self.values.len());
        let mut fs: Vec<LinearTPoly> = Vec::with_capacity(self.values.len());
        for n in 0..self.values.len() {
            let xn = Laurent::monomial(&self.ctx, Fq::ONE, n as i64);
            let mut c = self.values[n].clone();
            for k in 0..n {
                if cs[k].is_exact_zero() {
                    continue;
                }
                c = c.sub(&cs[k].mul(&fs[k].eval(&xn, prec + val_slack(&cs[k]) + GUARD)));
            }
            fs.push(f_basis(consts, n, prec + GUARD)?);
            cs.push(c.truncated(prec));
        }
        Ok(CarlitzExpansion::new(&self.ctx, cs))
    }
}

// ---------------------------------------------------------------------------
// Unified representation
// ---------------------------------------------------------------------------

/// Any of the three representations, for operations that only need to
/// evaluate the function.
#[derive(Clone, Debug)]
pub enum Rep {
    Q(QExpansion),
    Carlitz(CarlitzExpansion),
    Table(ValueTable),
}

impl Rep {
    pub fn ctx(&self) -> &FqContext {
        match self {
            Rep::Q(u) => u.ctx(),
            Rep::Carlitz(u) => u.ctx(),
            Rep::Table(u) => u.ctx(),
        }
    }

    pub fn evaluate(&self, consts: &CarlitzConstants, t: &Laurent, cap: i64) -> Result<Laurent> {
        match self {
            Rep::Q(u) => u.evaluate(t, cap),
            Rep::Carlitz(u) => u.evaluate(consts, t, cap),
            Rep::Table(u) => Ok(u.evaluate(t)?.truncated(cap)),
        }
    }

    pub fn at_x_pow(&self, consts: &CarlitzConstants, n: usize, cap: i64) -> Result<Laurent> {
        self.evaluate(consts, &Laurent::monomial(self.ctx(), Fq::ONE, n as i64), cap)
    }
}

// ---------------------------------------------------------------------------
// Taylor coefficient recovery
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TaylorReport {
    pub n: usize,
    /// Quotients at t = x^m for m = 1, 2, ...
    pub quotients: Vec<Laurent>,
    /// First m >= 2 whose quotient agrees with its predecessor.
    pub stabilized_at: Option<usize>,
    pub stabilized: Option<Laurent>,
}

/// One Taylor quotient Delta^{(n)} u (x^m) / x^{m q^n}, computed through
/// the value-table recursion (independent of the diagonal coefficient
/// action that Taylor recovery is tested against).
pub fn taylor_quotient(
    u: &QExpansion,
    n: usize,
    m: usize,
    cap: i64,
) -> Result<Laurent> {
    let shift = (u.ctx().q() as i64)
        .checked_pow(n as u32)
        .and_then(|p| p.checked_mul(m as i64))
        .ok_or_else(|| Error::OutsideDomain("q^n m overflows".into()))?;
    let table = u.to_table(m + n + 1, cap_add(cap, shift))?;
    let dk = table.delta_k(n)?;
    Ok(dk.get(m)?.shift(-shift))
}

/// 1-based index of the first entry of the longest tail of `seq` whose
/// entries all agree to `window` digits; None when even the last pair
/// disagrees. Scanning from the end ignores accidental early
/// coincidences in a sequence that has not converged yet.
pub(crate) fn constant_suffix_head(seq: &[Laurent], window: i64) -> Option<usize> {
    if seq.len() < 2 {
        return None;
    }
    let mut h = seq.len();
    while h >= 2 {
        let a = &seq[h - 2];
        let b = &seq[h - 1];
        let upto = window.min(a.precision()).min(b.precision());
        if a.agrees_to(b, upto).unwrap_or(false) {
            h -= 1;
        } else {
            break;
        }
    }
    if h < seq.len() {
        Some(h)
    } else {
        None
    }
}

/// Sweeps m = 1..m_max and reports from which m on the quotients stay
/// constant to `window` digits. For expansions probed at or above their
/// top support index the quotients are exactly constant and stabilization
/// is immediate; below it the agreement only deepens with m instead.
pub fn taylor_recover(
    u: &QExpansion,
    n: usize,
    m_max: usize,
    window: i64,
) -> Result<TaylorReport> {
    let mut quotients = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        quotients.push(taylor_quotient(u, n, m, window)?);
    }
    // the reported m is the first whose difference from its predecessor
    // dropped below the window, with the agreement persisting to m_max
    let stabilized_at = constant_suffix_head(&quotients, window).map(|h| h + 1);
    let stabilized = stabilized_at.map(|m| quotients[m - 1].clone());
    Ok(TaylorReport { n, quotients, stabilized_at, stabilized })
}

// ---------------------------------------------------------------------------
// Smoothness diagnostics
// ---------------------------------------------------------------------------

/// Pointwise t^{-q^k} Delta^{(k)} u(t) via the argument-shift recursion
/// (values of u at t, xt, ..., x^k t).
pub fn dk_apply(
    consts: &CarlitzConstants,
    u: &Rep,
    k: usize,
    t: &Laurent,
    cap: i64,
) -> Result<Laurent> {
    if t.is_zero_within_prec() {
        return Err(Error::OutsideDomain("dk_apply needs t != 0".into()));
    }
    let tv = t.valuation()?.unwrap();
    let qk = (u.ctx().q() as i64).pow(k as u32);
    let eval_cap = cap_add(cap, qk * tv + GUARD);
    let mut level: Vec<Laurent> = (0..=k)
        .map(|j| u.evaluate(consts, &t.shift(j as i64), eval_cap))
        .collect::<Result<_>>()?;
    for s in 1..=k {
        let e = (u.ctx().q() as i64).pow(s as u32 - 1);
        level = (0..level.len() - 1)
            .map(|j| level[j + 1].sub(&level[j].shift(e)))
            .collect();
    }
    let tqk = t.frob_q(k as u32);
    let inv = tqk.inv(cap + GUARD.max(qk * tv))?;
    Ok(level[0].mul_prec(&inv, cap))
}

/// Coefficient side of the smoothness norm identity:
/// sup over n >= k of q^{(n-k) q^k} |c_n|.
pub fn dk_norm(u: &CarlitzExpansion, k: usize) -> Result<AbsValue> {
    let qk = (u.ctx().q() as i64).pow(k as u32);
    let mut best = AbsValue::Zero;
    let mut bound = AbsValue::Zero;
    for (n, c) in u.coeffs().iter().enumerate().skip(k) {
        if c.is_exact_zero() {
            continue;
        }
        let weight = (n as i64 - k as i64) * qk;
        if c.is_zero_within_prec() {
            bound = bound.max(AbsValue::PowQ(weight - c.precision()));
        } else {
            best = best.max(AbsValue::PowQ(weight - c.valuation()?.unwrap()));
        }
    }
    if bound > best {
        return Err(Error::ValuationUndetermined);
    }
    Ok(best)
}

/// Exponent s_{nj} with |D_n / (D_j L_{n-j}^{q^j})| = q^{s_{nj}}:
/// (n-j) q^j - (q^j + ... + q^{n-1}) for n > j, zero at n = j.
pub fn s_exponent(q: u32, n: usize, j: usize) -> i64 {
    assert!(n >= j);
    if n == j {
        return 0;
    }
    let mut geom = 0i64;
    for s in j..n {
        geom += (q as i64).pow(s as u32);
    }
    (n as i64 - j as i64) * (q as i64).pow(j as u32) - geom
}

/// Measures |[n over j]| from the defining polynomials and returns the
/// exponent, to be compared with the closed form above.
pub fn measured_s_exponent(consts: &CarlitzConstants, n: usize, j: usize) -> Result<i64> {
    let denom_val = consts.val_d(j)?
        + (consts.ctx().q() as i64).pow(j as u32) * consts.val_l(n - j)?;
    Ok(-(consts.val_d(n)? - denom_val))
}

#[derive(Debug, Clone)]
pub struct DecayReport {
    pub holds: bool,
    pub detail: String,
}

/// Forward coefficient bound for analytic expansions:
/// val c_n >= (q^n - 1)/(q - 1) + min over k >= n of val a_k.
pub fn forward_bound_check(
    consts: &CarlitzConstants,
    u: &QExpansion,
) -> Result<DecayReport> {
    let q = consts.ctx().q() as i64;
    let c = u.to_carlitz(consts)?;
    let mut vals: Vec<Option<i64>> = Vec::new();
    for a in u.coeffs() {
        vals.push(if a.is_zero_within_prec() { None } else { Some(a.valuation()?.unwrap()) });
    }
    for (n, cn) in c.coeffs().iter().enumerate() {
        if cn.is_zero_within_prec() {
            continue;
        }
        let tail_min = vals[n..].iter().flatten().min();
        let Some(&tail_min) = tail_min else { continue };
        let lhs = cn.valuation()?.unwrap();
        let rhs = (q.pow(n as u32) - 1) / (q - 1) + tail_min;
        if lhs < rhs {
            return Ok(DecayReport {
                holds: false,
                detail: format!("val c_{n} = {lhs} below bound {rhs}"),
            });
        }
    }
    Ok(DecayReport { holds: true, detail: "forward bound holds".into() })
}

/// Combined coefficient-decay report for one expansion: the forward bound
/// on its Carlitz coefficients, the backward bound after converting back,
/// and the measured absolute-value exponents of the binomials in range
/// against their closed form.
pub fn analyticity_bounds(
    consts: &CarlitzConstants,
    u: &QExpansion,
    prec: i64,
) -> Result<DecayReport> {
    let forward = forward_bound_check(consts, u)?;
    if !forward.holds {
        return Ok(forward);
    }
    let c = u.to_carlitz(consts)?;
    let backward = backward_bound_check(consts, &c, prec)?;
    if !backward.holds {
        return Ok(backward);
    }
    let n_hi = u.support_len().min(consts.index_cap());
    for n in 0..=n_hi {
        for j in 0..=n {
            let closed = s_exponent(consts.ctx().q(), n, j);
            let measured = measured_s_exponent(consts, n, j)?;
            if closed != measured || closed > 0 {
                return Ok(DecayReport {
                    holds: false,
                    detail: format!(
                        "exponent at ({n},{j}): closed {closed}, measured {measured}"
                    ),
                });
            }
        }
    }
    Ok(DecayReport {
        holds: true,
        detail: format!(
            "forward and backward bounds hold; exponents verified for n <= {n_hi}"
        ),
    })
}

/// Backward bound: val a_n >= min over k >= n of (val c_k - val D_k).
pub fn backward_bound_check(
    consts: &CarlitzConstants,
    u: &CarlitzExpansion,
    prec: i64,
) -> Result<DecayReport> {
    let a = u.to_qexp(consts, prec)?;
    let mut floor: Vec<Option<i64>> = Vec::new();
    for (k, c) in u.coeffs().iter().enumerate() {
        floor.push(if c.is_zero_within_prec() {
            None
        } else {
            Some(c.valuation()?.unwrap() - consts.val_d(k)?)
        });
    }
    for (n, an) in a.coeffs().iter().enumerate() {
        if an.is_zero_within_prec() {
            continue;
        }
        let tail_min = floor[n..].iter().flatten().min();
        let Some(&tail_min) = tail_min else { continue };
        let lhs = an.valuation()?.unwrap();
        if lhs < tail_min {
            return Ok(DecayReport {
                holds: false,
                detail: format!("val a_{n} = {lhs} below bound {tail_min}"),
            });
        }
    }
    Ok(DecayReport { holds: true, detail: "backward bound holds".into() })
}
