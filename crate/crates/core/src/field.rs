//! Arithmetic in the coefficient field F_q, q = p^gamma.
//!
//! A context owns the defining data (characteristic, extension degree,
//! modulus) together with dense operation tables; elements are plain
//! indices into the table, so containers can hold millions of them without
//! per-element overhead. Index i corresponds to the coordinate vector given
//! by the base-p digits of i in the power basis of the modulus, which makes
//! the canonical enumeration order lexicographic on coordinates.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element of F_q, valid only together with the [`FqContext`] it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u8);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct CtxInner {
    p: u32,
    gamma: u32,
    q: u32,
    /// Monic irreducible modulus over F_p, degree gamma, low coefficient first.
    /// Present iff gamma > 1.
    modulus: Option<Vec<u8>>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// Frobenius a -> a^p.
    frob: Vec<u8>,
    /// Doubling a -> a + a (used by squaring loops).
    dbl: Vec<u8>,
}

/// Cheap-to-clone handle to a finite field F_{p^gamma}.
#[derive(Clone)]
pub struct FqContext(Arc<CtxInner>);

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.gamma == other.0.gamma
                && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FqContext {}

impl fmt::Debug for FqContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqContext(q = {}^{})", self.0.p, self.0.gamma)
    }
}

/// Built-in moduli for the composite q the library ships with.
/// Every entry is re-validated at construction time.
fn builtin_modulus(p: u32, gamma: u32) -> Option<Vec<u8>> {
    match (p, gamma) {
        (2, 2) => Some(vec![1, 1, 1]),    // u^2 + u + 1
        (2, 3) => Some(vec![1, 1, 0, 1]), // u^3 + u + 1
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]), // u^2 + 1
        (3, 3) => Some(vec![1, 2, 0, 1]),
        (5, 2) => Some(vec![2, 0, 1]), // u^2 + 2
        _ => None,
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- bootstrap polynomial arithmetic over F_p (coefficients low-first) ---

fn fp_trim(v: &mut Vec<u8>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u8], m: &[u8], p: u32) -> Vec<u8> {
    let mut r: Vec<u8> = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv_scalar(m[dm], p);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = (r[r.len() - 1] as u32 * lead_inv as u32 % p) as u8;
        for (i, &mc) in m.iter().enumerate() {
            let sub = (c as u32 * mc as u32) % p;
            let cur = r[k + i] as u32;
            r[k + i] = ((cur + p - sub) % p) as u8;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mul(a: &[u8], b: &[u8], p: u32) -> Vec<u8> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai as u32 * bj as u32) % p;
        }
    }
    let mut out: Vec<u8> = out.into_iter().map(|c| c as u8).collect();
    fp_trim(&mut out);
    out
}

fn fp_inv_scalar(a: u8, p: u32) -> u8 {
    // p is tiny; brute force.
    (1..p).find(|&b| (a as u32 * b) % p == 1).unwrap() as u8
}

/// Irreducibility by trial division against all monic polynomials of
/// degree <= deg(m)/2.
fn fp_is_irreducible(m: &[u8], p: u32) -> std::result::Result<(), String> {
    let d = m.len() - 1;
    if d == 0 {
        return Err("constant polynomial".into());
    }
    if m[0] == 0 {
        return Err("divisible by u".into());
    }
    for dd in 1..=d / 2 {
        // enumerate monic divisors of degree dd
        let count = (p as u64).pow(dd as u32);
        for idx in 0..count {
            let mut div = vec![0u8; dd + 1];
            let mut n = idx;
            for c in div.iter_mut().take(dd) {
                *c = (n % p as u64) as u8;
                n /= p as u64;
            }
            div[dd] = 1;
            if fp_rem(m, &div, p).is_empty() {
                return Err(format!("divisible by a monic factor of degree {dd}"));
            }
        }
    }
    Ok(())
}

impl FqContext {
    /// Builds F_{p^gamma}. `modulus` (low coefficient first, over F_p) is
    /// required semantics for gamma > 1; pass `None` to use the built-in
    /// table. q is capped at 256 so elements fit one byte.
    pub fn new(p: u32, gamma: u32, modulus: Option<Vec<u8>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if gamma == 0 {
            return Err(Error::UnsupportedField("gamma must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(gamma).filter(|&q| q <= 256).ok_or(
            Error::UnsupportedField(format!("q = {p}^{gamma} exceeds the supported limit 256")),
        )? as u32;

        let modulus = if gamma == 1 {
            if modulus.is_some() {
                return Err(Error::InvalidModulus(
                    "a modulus is only meaningful for gamma > 1".into(),
                ));
            }
            None
        } else {
            let m = match modulus {
                Some(m) => m,
                None => builtin_modulus(p, gamma).ok_or_else(|| {
                    Error::UnsupportedField(format!(
                        "no built-in modulus for q = {p}^{gamma}; supply one"
                    ))
                })?,
            };
            if m.len() != gamma as usize + 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected degree {gamma}, got degree {}",
                    m.len().saturating_sub(1)
                )));
            }
            if m.iter().any(|&c| c as u32 >= p) {
                return Err(Error::InvalidModulus("coefficient out of range".into()));
            }
            if m[gamma as usize] != 1 {
                return Err(Error::InvalidModulus("modulus must be monic".into()));
            }
            fp_is_irreducible(&m, p).map_err(|detail| Error::ReducibleModulus { p, detail })?;
            Some(m)
        };

        Ok(FqContext(Arc::new(CtxInner::build(p, gamma, q, modulus))))
    }

    /// Builds the field of size q, factoring q as a prime power.
    pub fn with_q(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::UnsupportedField(format!("q = {q}")));
        }
        let p = (2..=q).find(|&d| q.is_multiple_of(d)).unwrap();
        let mut gamma = 0;
        let mut n = q;
        while n.is_multiple_of(p) {
            n /= p;
            gamma += 1;
        }
        if n != 1 {
            return Err(Error::UnsupportedField(format!("q = {q} is not a prime power")));
        }
        FqContext::new(p, gamma, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn gamma(&self) -> u32 {
        self.0.gamma
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> Option<&[u8]> {
        self.0.modulus.as_deref()
    }

    /// All q elements; starts 0, 1, then lexicographic on coordinates.
    pub fn enumerate(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(|i| Fq(i as u8))
    }

    pub fn element_from_coords(&self, coords: &[u8]) -> Result<Fq> {
        if coords.len() > self.0.gamma as usize {
            return Err(Error::Parse("too many coordinates".into()));
        }
        let mut idx: u32 = 0;
        for (i, &c) in coords.iter().enumerate() {
            if c as u32 >= self.0.p {
                return Err(Error::Parse(format!("coordinate {c} out of range")));
            }
            idx += c as u32 * self.0.p.pow(i as u32);
        }
        Ok(Fq(idx as u8))
    }

    /// Coordinates of `a` in the power basis (length gamma).
    pub fn coords(&self, a: Fq) -> Vec<u8> {
        let mut v = Vec::with_capacity(self.0.gamma as usize);
        let mut n = a.0 as u32;
        for _ in 0..self.0.gamma {
            v.push((n % self.0.p) as u8);
            n /= self.0.p;
        }
        v
    }

    pub fn from_int(&self, n: i64) -> Fq {
        let p = self.0.p as i64;
        Fq(n.rem_euclid(p) as u8)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.0.add[a.0 as usize * self.0.q as usize + b.0 as usize])
    }
    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.0.mul[a.0 as usize * self.0.q as usize + b.0 as usize])
    }
    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.0.neg[a.0 as usize])
    }
    #[inline]
    pub fn dbl(&self, a: Fq) -> Fq {
        Fq(self.0.dbl[a.0 as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Fq(self.0.inv[a.0 as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius a -> a^{p^j}.
    #[inline]
    pub fn frob(&self, a: Fq, j: u32) -> Fq {
        let mut r = a;
        for _ in 0..(j % self.0.gamma) {
            r = Fq(self.0.frob[r.0 as usize]);
        }
        r
    }

    pub fn minus_one(&self) -> Fq {
        self.neg(Fq::ONE)
    }

    /// (-1)^k in this field.
    pub fn sign(&self, k: u64) -> Fq {
        if self.0.p == 2 || k.is_multiple_of(2) {
            Fq::ONE
        } else {
            self.minus_one()
        }
    }

    /// Text form: integer for prime fields, polynomial in `u` otherwise.
    pub fn format_element(&self, a: Fq) -> String {
        if self.0.gamma == 1 {
            return format!("{}", a.0);
        }
        if a.is_zero() {
            return "0".into();
        }
        let coords = self.coords(a);
        let mut parts: Vec<String> = Vec::new();
        for (i, &c) in coords.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "u".into(),
                _ => format!("u^{i}"),
            };
            let part = match (c, i) {
                (_, 0) => format!("{c}"),
                (1, _) => var,
                (_, _) => format!("{c}{var}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }

    /// Parses the text form produced by [`Self::format_element`].
    pub fn parse_element(&self, s: &str) -> Result<Fq> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut coords = vec![0i64; self.0.gamma as usize];
        // split into monomials on +/-, keeping signs
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign = 1i64;
        for ch in s.chars() {
            if ch == '+' || ch == '-' {
                if !cur.is_empty() {
                    terms.push((sign, std::mem::take(&mut cur)));
                } else if ch == '+' && terms.is_empty() && sign == 1 {
                    // leading '+'
                }
                sign = if ch == '-' { -1 } else { 1 };
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("dangling sign in '{s}'")));
        }
        terms.push((sign, cur));
        for (sgn, t) in terms {
            let (coeff, power) = if let Some(rest) = t.strip_prefix('u') {
                (1u32, parse_power(rest)?)
            } else if let Some(pos) = t.find('u') {
                let c: u32 = t[..pos]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in '{t}'")))?;
                (c, parse_power(&t[pos + 1..])?)
            } else {
                let c: u32 = t
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element term '{t}'")))?;
                (c, 0)
            };
            if power >= self.0.gamma as usize {
                return Err(Error::Parse(format!(
                    "u^{power} out of range for gamma = {}",
                    self.0.gamma
                )));
            }
            coords[power] += sgn * coeff as i64;
        }
        let p = self.0.p as i64;
        let coords: Vec<u8> = coords.into_iter().map(|c| c.rem_euclid(p) as u8).collect();
        self.element_from_coords(&coords)
    }
}

fn parse_power(rest: &str) -> Result<usize> {
    if rest.is_empty() {
        Ok(1)
    } else if let Some(e) = rest.strip_prefix('^') {
        e.parse()
            .map_err(|_| Error::Parse(format!("bad exponent '{e}'")))
    } else {
        Err(Error::Parse(format!("unexpected trailing '{rest}'")))
    }
}

impl CtxInner {
    fn build(p: u32, gamma: u32, q: u32, modulus: Option<Vec<u8>>) -> CtxInner {
        let qs = q as usize;
        let digits = |mut n: u32| -> Vec<u8> {
            let mut v = vec![0u8; gamma as usize];
            for d in v.iter_mut() {
                *d = (n % p) as u8;
                n /= p;
            }
            v
        };
        let index = |coords: &[u8]| -> u8 {
            let mut idx = 0u32;
            for (i, &c) in coords.iter().enumerate() {
                idx += c as u32 * p.pow(i as u32);
            }
            idx as u8
        };

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        let mut neg = vec![0u8; qs];
        for a in 0..q {
            let da = digits(a);
            let nc: Vec<u8> = da.iter().map(|&c| ((p - c as u32) % p) as u8).collect();
            neg[a as usize] = index(&nc);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u8> = da
                    .iter()
                    .zip(&db)
                    .map(|(&x, &y)| ((x as u32 + y as u32) % p) as u8)
                    .collect();
                add[a as usize * qs + b as usize] = index(&sum);
                let prod = fp_mul(&da, &db, p);
                let red = match &modulus {
                    Some(m) => fp_rem(&prod, m, p),
                    None => prod, // gamma == 1: product of two scalars already reduced
                };
                let mut coords = red;
                coords.resize(gamma as usize, 0);
                mul[a as usize * qs + b as usize] = index(&coords);
            }
        }
        let mut inv = vec![0u8; qs];
        for a in 1..q {
            inv[a as usize] = (0..q)
                .find(|&b| mul[a as usize * qs + b as usize] == 1)
                .expect("field element without inverse") as u8;
        }
        let mut frob = vec![0u8; qs];
        for a in 0..q {
            let mut acc = 1u8;
            for _ in 0..p {
                acc = mul[acc as usize * qs + a as usize];
            }
            // acc = a^p computed as repeated multiplication, a^p = a * a^(p-1)
            frob[a as usize] = {
                let mut r = 1u8;
                let mut e = p;
                let mut base = a as u8;
                while e > 0 {
                    if e & 1 == 1 {
                        r = mul[r as usize * qs + base as usize];
                    }
                    base = mul[base as usize * qs + base as usize];
                    e >>= 1;
                }
                r
            };
        }
        let dbl: Vec<u8> = (0..qs).map(|a| add[a * qs + a]).collect();
        CtxInner {
            p,
            gamma,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            frob,
            dbl,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(q: u32) -> FqContext {
        FqContext::with_q(q).unwrap()
    }

    #[test]
    fn f2_characteristic() {
        let f2 = ctx(2);
        assert_eq!(f2.add(Fq::ONE, Fq::ONE), Fq::ZERO);
    }

    #[test]
    fn f3_inverse_of_two() {
        let f3 = ctx(3);
        assert_eq!(f3.inv(Fq(2)).unwrap(), Fq(2));
    }

    #[test]
    fn f4_generator_square() {
        // u^2 reduced by u^2 + u + 1 is u + 1
        let f4 = ctx(4);
        let u = f4.element_from_coords(&[0, 1]).unwrap();
        let expect = f4.element_from_coords(&[1, 1]).unwrap();
        assert_eq!(f4.mul(u, u), expect);
    }

    #[test]
    fn enumeration_order() {
        let f4 = ctx(4);
        let names: Vec<String> = f4.enumerate().map(|a| f4.format_element(a)).collect();
        assert_eq!(names, vec!["0", "1", "u", "u+1"]);
        let f3 = ctx(3);
        let all: Vec<Fq> = f3.enumerate().collect();
        assert_eq!(all, vec![Fq(0), Fq(1), Fq(2)]);
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for q in [2u32, 3, 4, 5, 8, 9, 16, 25, 27] {
            let f = ctx(q);
            for a in f.enumerate() {
                assert_eq!(f.pow(a, q as u64), a, "a^q != a for q = {q}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small_q() {
        for q in [2u32, 3, 4, 5, 8, 9] {
            let f = ctx(q);
            for a in f.enumerate() {
                for b in f.enumerate() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.enumerate() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
                }
            }
        }
    }

    #[test]
    fn division_by_zero_rejected() {
        let f3 = ctx(3);
        assert_eq!(f3.inv(Fq::ZERO), Err(Error::DivisionByZero));
        assert_eq!(f3.div(Fq(2), Fq::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn parse_format_roundtrip() {
        for q in [2u32, 3, 9, 27] {
            let f = ctx(q);
            for a in f.enumerate() {
                let s = f.format_element(a);
                assert_eq!(f.parse_element(&s).unwrap(), a, "roundtrip failed for '{s}'");
            }
        }
        let f9 = ctx(9);
        assert_eq!(
            f9.parse_element("2u + 1").unwrap(),
            f9.element_from_coords(&[1, 2]).unwrap()
        );
    }

    #[test]
    fn bad_contexts_rejected() {
        assert!(matches!(FqContext::new(4, 1, None), Err(Error::NotPrime(4))));
        assert!(FqContext::with_q(6).is_err());
        // u^2 + 1 is reducible over F_2 ((u+1)^2)
        assert!(matches!(
            FqContext::new(2, 2, Some(vec![1, 0, 1])),
            Err(Error::ReducibleModulus { .. })
        ));
        // not monic
        assert!(FqContext::new(3, 2, Some(vec![1, 0, 2])).is_err());
    }

    #[test]
    fn frobenius_map_is_p_power() {
        let f9 = ctx(9);
        for a in f9.enumerate() {
            assert_eq!(f9.frob(a, 1), f9.pow(a, 3));
        }
    }
}
