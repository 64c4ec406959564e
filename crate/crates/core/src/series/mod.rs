//! Exact polynomials F_q\[x\] and truncated Laurent series K = F_q((x)).

pub mod laurent;
pub mod poly;

pub use laurent::{Laurent, EXACT};
pub use poly::{poly_enumerate, Poly};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fq, FqContext};

/// Absolute value on K as a power of q (or zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsValue {
    Zero,
    /// q^exponent
    PowQ(i64),
}

impl AbsValue {
    pub fn exponent(self) -> Option<i64> {
        match self {
            AbsValue::Zero => None,
            AbsValue::PowQ(e) => Some(e),
        }
    }

    pub fn max(self, other: AbsValue) -> AbsValue {
        match (self, other) {
            (AbsValue::Zero, b) => b,
            (a, AbsValue::Zero) => a,
            (AbsValue::PowQ(a), AbsValue::PowQ(b)) => AbsValue::PowQ(a.max(b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: AbsValue) -> AbsValue {
        match (self, other) {
            (AbsValue::PowQ(a), AbsValue::PowQ(b)) => AbsValue::PowQ(a + b),
            _ => AbsValue::Zero,
        }
    }
}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (AbsValue::Zero, AbsValue::Zero) => std::cmp::Ordering::Equal,
            (AbsValue::Zero, _) => std::cmp::Ordering::Less,
            (_, AbsValue::Zero) => std::cmp::Ordering::Greater,
            (AbsValue::PowQ(a), AbsValue::PowQ(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for AbsValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AbsValue::Zero => write!(f, "0"),
            AbsValue::PowQ(0) => write!(f, "1"),
            AbsValue::PowQ(e) => write!(f, "q^{e}"),
        }
    }
}

/// Shared term formatter: ascending exponents, `*` between a non-unit
/// coefficient and the power of x, extension-field coefficients in parens.
pub(crate) fn format_terms(
    ctx: &FqContext,
    terms: impl Iterator<Item = (i64, Fq)>,
) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (e, c) in terms {
        if c.is_zero() {
            continue;
        }
        let coeff = ctx.format_element(c);
        let coeff = if ctx.gamma() > 1 && coeff.contains('+') {
            format!("({coeff})")
        } else {
            coeff
        };
        let part = match e {
            0 => coeff,
            1 if c == Fq::ONE => "x".to_string(),
            _ if c == Fq::ONE => format!("x^{e}"),
            1 => format!("{coeff}*x"),
            _ => format!("{coeff}*x^{e}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// JSON-facing form of a Laurent series. `valuation`/`precision` are null
/// for (respectively) series with no known nonzero coefficient and exact
/// series; coefficients are in field text form starting at the valuation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaurentRepr {
    pub valuation: Option<i64>,
    pub coeffs: Vec<String>,
    pub precision: Option<i64>,
}

impl Laurent {
    pub fn to_repr(&self) -> LaurentRepr {
        let val = self.valuation().ok().flatten();
        let coeffs = match val {
            None => vec![],
            Some(v) => {
                let hi = self
                    .terms()
                    .map(|(e, _)| e)
                    .max()
                    .unwrap();
                (v..=hi)
                    .map(|e| self.ctx().format_element(self.coeff_at(e).unwrap()))
                    .collect()
            }
        };
        LaurentRepr {
            valuation: val,
            coeffs,
            precision: if self.is_exact() { None } else { Some(self.precision()) },
        }
    }

    pub fn from_repr(ctx: &FqContext, repr: &LaurentRepr) -> Result<Laurent> {
        let prec = repr.precision.unwrap_or(EXACT);
        match repr.valuation {
            None => Ok(if prec == EXACT {
                Laurent::zero(ctx)
            } else {
                Laurent::zero_prec(ctx, prec)
            }),
            Some(v) => {
                let coeffs: Result<Vec<Fq>> =
                    repr.coeffs.iter().map(|s| ctx.parse_element(s)).collect();
                Ok(Laurent::new(ctx, v, coeffs?, prec))
            }
        }
    }
}

/// Parses the canonical text form of a series, e.g.
/// `x^-1 + 1 + x + x^3 (mod x^64)` or `(u+1)*x^2 + 2`.
pub fn parse_laurent(ctx: &FqContext, input: &str) -> Result<Laurent> {
    let input = input.trim();
    let (body, prec) = match input.find("(mod") {
        None => (input, EXACT),
        Some(pos) => {
            let tail = input[pos..]
                .trim_start_matches("(mod")
                .trim()
                .trim_end_matches(')')
                .trim();
            let n = tail
                .strip_prefix("x^")
                .ok_or_else(|| Error::Parse(format!("bad precision marker '{tail}'")))?;
            let n: i64 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad precision '{n}'")))?;
            (input[..pos].trim(), n)
        }
    };
    if body.is_empty() {
        return Err(Error::Parse("empty series".into()));
    }
    let mut acc = if prec == EXACT {
        Laurent::zero(ctx)
    } else {
        Laurent::zero_prec(ctx, prec)
    };
    for (sign, term) in split_signed_terms(body)? {
        let (coeff, exp) = parse_term(ctx, &term)?;
        let coeff = if sign < 0 { ctx.neg(coeff) } else { coeff };
        acc = acc.add(&Laurent::monomial(ctx, coeff, exp));
    }
    Ok(acc.truncated(prec))
}

/// Strict polynomial parse: exact, no negative exponents.
pub fn parse_poly(ctx: &FqContext, input: &str) -> Result<Poly> {
    let l = parse_laurent(ctx, input)?;
    l.to_poly()
        .map_err(|_| Error::Parse(format!("'{input}' is not a polynomial in x")))
}

/// Splits on top-level +/- (ignoring signs inside parentheses and in
/// exponents like x^-1).
fn split_signed_terms(s: &str) -> Result<Vec<(i8, String)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut sign: i8 = 1;
    let mut depth = 0usize;
    let mut prev_caret = false;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| Error::Parse("unbalanced parentheses".into()))?;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && !prev_caret => {
                if cur.trim().is_empty() {
                    if ch == '-' {
                        sign = -sign;
                    }
                } else {
                    out.push((sign, std::mem::take(&mut cur)));
                    sign = if ch == '-' { -1 } else { 1 };
                }
            }
            _ => cur.push(ch),
        }
        prev_caret = ch == '^';
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced parentheses".into()));
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse("dangling sign".into()));
    }
    out.push((sign, cur));
    Ok(out)
}

fn parse_term(ctx: &FqContext, term: &str) -> Result<(Fq, i64)> {
    let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    // split off the x-part, if any
    let xpos = find_x_var(&t);
    let (coeff_str, xpart) = match xpos {
        None => (t.as_str(), None),
        Some(i) => (&t[..i], Some(&t[i..])),
    };
    let exp = match xpart {
        None => 0i64,
        Some(xp) => {
            let rest = &xp[1..];
            if rest.is_empty() {
                1
            } else if let Some(e) = rest.strip_prefix('^') {
                e.parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?
            } else {
                return Err(Error::Parse(format!("unexpected '{rest}' after x")));
            }
        }
    };
    let coeff_str = coeff_str.trim_end_matches('*');
    let coeff = if coeff_str.is_empty() {
        Fq::ONE
    } else {
        let inner = coeff_str
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(coeff_str);
        ctx.parse_element(inner)?
    };
    Ok((coeff, exp))
}

/// Index of the series variable `x` at top level (not inside parens; `u`
/// belongs to the coefficient).
fn find_x_var(t: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, ch) in t.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            'x' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_display_roundtrip_prime_field() {
        let f3 = FqContext::with_q(3).unwrap();
        for s in ["x^-1 + 1 + 2*x + x^3", "2", "x^2", "0"] {
            let l = parse_laurent(&f3, s).unwrap();
            assert_eq!(l.to_string(), s, "roundtrip for '{s}'");
        }
        let l = parse_laurent(&f3, "1 + x (mod x^8)").unwrap();
        assert_eq!(l.precision(), 8);
        assert_eq!(l.to_string(), "1 + x (mod x^8)");
    }

    #[test]
    fn parse_display_roundtrip_extension() {
        let f4 = FqContext::with_q(4).unwrap();
        let s = "(u+1)*x^-2 + u*x + x^3";
        let l = parse_laurent(&f4, s).unwrap();
        assert_eq!(l.to_string(), s);
    }

    #[test]
    fn parse_minus_normalizes() {
        let f3 = FqContext::with_q(3).unwrap();
        let l = parse_laurent(&f3, "x^3 - x").unwrap();
        assert_eq!(l.to_string(), "2*x + x^3");
    }

    #[test]
    fn repr_roundtrip() {
        let f4 = FqContext::with_q(4).unwrap();
        let l = parse_laurent(&f4, "(u+1)*x^-1 + 1 (mod x^5)").unwrap();
        let r = l.to_repr();
        assert_eq!(r.valuation, Some(-1));
        assert_eq!(r.precision, Some(5));
        let back = Laurent::from_repr(&f4, &r).unwrap();
        assert_eq!(back, l);
    }

    #[test]
    fn poly_parse_rejects_poles() {
        let f2 = FqContext::with_q(2).unwrap();
        assert!(parse_poly(&f2, "x^-1 + 1").is_err());
        assert_eq!(parse_poly(&f2, "x^2 + x").unwrap().degree(), Some(2));
    }
}
