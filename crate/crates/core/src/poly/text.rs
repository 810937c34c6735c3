//! Plain-text polynomial format.
//!
//! ```text
//! ring: x0000 x0001 x0011 over QQ order grevlex
//! # comment
//! 2*x0000*x0011^2 - 1/3*x0001
//! ```
//!
//! Each term is `coef*var^e*…` with the exponent omitted when it is one.
//! Terms are joined by ` + ` or ` - `; the Unicode minus is accepted on
//! input. Coefficients that contain a sign of their own are parenthesized.

use std::sync::Arc;

use super::monomial::{Monomial, MonomialOrder, MAX_VARS};
use super::multipoly::{MultiPoly, PolyRing};
use crate::arith::ScalarText;
use crate::error::{Error, Result};

pub fn format_poly<K: ScalarText>(f: &MultiPoly<K>) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let vars = f.ring().vars();
    let mut out = String::new();
    for (i, (m, c)) in f.terms().iter().enumerate() {
        let c = if i > 0 && c.is_negative_rendering() {
            out.push_str(" - ");
            -c.clone()
        } else {
            if i > 0 {
                out.push_str(" + ");
            }
            c.clone()
        };
        if c.needs_parens() {
            out.push('(');
            out.push_str(&c.render());
            out.push(')');
        } else {
            out.push_str(&c.render());
        }
        for (v, name) in vars.iter().enumerate() {
            match m.exponent(v) {
                0 => {}
                1 => {
                    out.push('*');
                    out.push_str(name);
                }
                e => {
                    out.push('*');
                    out.push_str(name);
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
    }
    out
}

pub fn format_header<K: ScalarText>(ring: &PolyRing) -> String {
    format!(
        "ring: {} over {} order {}",
        ring.vars().join(" "),
        K::FIELD_NAME,
        ring.order().name()
    )
}

/// Parses one polynomial in `ring`.
pub fn parse_poly<K: ScalarText>(ring: &Arc<PolyRing>, s: &str) -> Result<MultiPoly<K>> {
    parse_poly_at(ring, s, 1)
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ParseAt {
        line,
        column,
        message: message.into(),
    }
}

fn parse_poly_at<K: ScalarText>(
    ring: &Arc<PolyRing>,
    s: &str,
    line: usize,
) -> Result<MultiPoly<K>> {
    let s = s.replace('\u{2212}', "-");
    let zero = K::zero();
    let mut terms = Vec::new();
    for (col, negative, term) in split_terms(&s).map_err(|(c, m)| parse_err(line, c, m))? {
        let (m, c) = parse_term::<K>(ring, term).map_err(|msg| parse_err(line, col, msg))?;
        terms.push((m, if negative { -c } else { c }));
    }
    if terms.is_empty() {
        return Err(parse_err(line, 1, "empty polynomial"));
    }
    Ok(MultiPoly::from_terms(ring.clone(), &zero, terms))
}

/// Splits at top-level `+`/`-` signs, returning (column, negated, term).
fn split_terms(s: &str) -> std::result::Result<Vec<(usize, bool, &str)>, (usize, String)> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let mut sign_pending = false;
    // last non-space byte before the current position
    let mut prev: Option<u8> = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err((i + 1, "unbalanced ')'".into()));
                }
            }
            b'+' | b'-' if depth == 0 && !matches!(prev, Some(b'*' | b'/' | b'^')) => {
                let piece = s[start..i].trim();
                if !piece.is_empty() {
                    out.push((start + 1, negative, piece));
                } else if sign_pending {
                    return Err((i + 1, "repeated sign".into()));
                }
                negative = b == b'-';
                sign_pending = true;
                start = i + 1;
            }
            _ => {}
        }
        if !b.is_ascii_whitespace() {
            prev = Some(b);
        }
    }
    if depth != 0 {
        return Err((s.len(), "unbalanced '('".into()));
    }
    let piece = s[start..].trim();
    if piece.is_empty() {
        if sign_pending {
            return Err((s.len() + 1, "dangling sign".into()));
        }
    } else {
        out.push((start + 1, negative, piece));
    }
    Ok(out)
}

fn parse_term<K: ScalarText>(
    ring: &PolyRing,
    term: &str,
) -> std::result::Result<(Monomial, K), String> {
    let mut exps = [0u32; MAX_VARS];
    let mut coef_parts: Vec<&str> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut factors = Vec::new();
    for (i, b) in term.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                factors.push(term[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    factors.push(term[start..].trim());
    for f in factors {
        if f.is_empty() {
            return Err(format!("empty factor in term {term:?}"));
        }
        let (base, exp) = match f.split_once('^') {
            Some((b, e)) if !b.starts_with('(') => {
                let e: u32 = e
                    .trim()
                    .parse()
                    .map_err(|_| format!("bad exponent in {f:?}"))?;
                (b.trim(), e)
            }
            _ => (f, 1),
        };
        if let Some(v) = ring.var_index(base) {
            exps[v] += exp;
        } else if exp == 1 {
            coef_parts.push(f);
        } else {
            return Err(format!("unknown variable {base:?}"));
        }
    }
    let coef = if coef_parts.is_empty() {
        K::zero().one_like()
    } else {
        let joined = coef_parts.join("*");
        K::parse_text(&joined).ok_or_else(|| format!("bad coefficient {joined:?}"))?
    };
    if exps.iter().any(|&e| e > u16::MAX as u32) {
        return Err("exponent overflow".into());
    }
    Ok((Monomial::from_exponents(&exps[..ring.nvars()]), coef))
}

/// A header plus a list of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFile<K> {
    pub ring: Arc<PolyRing>,
    pub polys: Vec<MultiPoly<K>>,
}

impl<K: ScalarText> PolyFile<K> {
    pub fn parse(text: &str) -> Result<Self> {
        let mut ring: Option<Arc<PolyRing>> = None;
        let mut polys = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match &ring {
                None => ring = Some(parse_header::<K>(line, line_no)?),
                Some(r) => polys.push(parse_poly_at(r, line, line_no)?),
            }
        }
        let ring = ring.ok_or_else(|| Error::Parse("missing ring header".into()))?;
        Ok(PolyFile { ring, polys })
    }

    pub fn render(&self) -> String {
        let mut out = format_header::<K>(&self.ring);
        out.push('\n');
        for p in &self.polys {
            out.push_str(&format_poly(p));
            out.push('\n');
        }
        out
    }
}

fn parse_header<K: ScalarText>(line: &str, line_no: usize) -> Result<Arc<PolyRing>> {
    let body = line
        .strip_prefix("ring:")
        .ok_or_else(|| parse_err(line_no, 1, "expected 'ring:' header"))?;
    let words: Vec<&str> = body.split_whitespace().collect();
    let over = words
        .iter()
        .position(|w| *w == "over")
        .ok_or_else(|| parse_err(line_no, 1, "header lacks 'over'"))?;
    let vars = &words[..over];
    let rest = &words[over + 1..];
    let field = rest
        .first()
        .ok_or_else(|| parse_err(line_no, 1, "header lacks a field"))?;
    if *field != K::FIELD_NAME {
        return Err(parse_err(
            line_no,
            1,
            format!("field {field} does not match expected {}", K::FIELD_NAME),
        ));
    }
    let order = match rest.get(1..) {
        Some(["order", o]) => MonomialOrder::parse(o)
            .ok_or_else(|| parse_err(line_no, 1, format!("unknown order {o}")))?,
        Some([]) => MonomialOrder::GrevLex,
        _ => return Err(parse_err(line_no, 1, "malformed order clause")),
    };
    PolyRing::new(vars.iter().copied(), order).map_err(|e| parse_err(line_no, 1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int, QuadExt, Rational};

    fn ring() -> Arc<PolyRing> {
        PolyRing::grevlex(["x", "y", "z"])
    }

    #[test]
    fn round_trip_rational() {
        let r = ring();
        let f: MultiPoly<Rational> = parse_poly(&r, "2*x^2*y - 1/3*z + 5 - x").unwrap();
        let s = format_poly(&f);
        assert_eq!(s, "2*x^2*y - 1*x - 1/3*z + 5");
        assert_eq!(parse_poly::<Rational>(&r, &s).unwrap(), f);
        assert_eq!(
            f.coeff_of(&Monomial::from_exponents(&[0, 0, 1])),
            rat(-1, 3)
        );
    }

    #[test]
    fn unicode_minus_and_leading_sign() {
        let r = ring();
        let f: MultiPoly<Rational> = parse_poly(&r, "−x + y").unwrap();
        let g: MultiPoly<Rational> = parse_poly(&r, "-1*x+1*y").unwrap();
        assert_eq!(f, g);
        assert_eq!(format_poly(&g), "-1*x + 1*y");
    }

    #[test]
    fn quadratic_coefficients() {
        let r = ring();
        let f: MultiPoly<QuadExt> = parse_poly(&r, "(1+2*sqrt2)*x - sqrt2*y^2 + 3").unwrap();
        let s = format_poly(&f);
        assert_eq!(parse_poly::<QuadExt>(&r, &s).unwrap(), f);
        assert_eq!(
            f.coeff_of(&Monomial::from_exponents(&[0, 2, 0])),
            QuadExt::new(rat_int(0), rat_int(-1))
        );
    }

    #[test]
    fn file_round_trip_and_errors() {
        let text = "# test\nring: x y z over QQ order lex\nx*y - 1\n\nz^3 # trailing\n";
        let file = PolyFile::<Rational>::parse(text).unwrap();
        assert_eq!(file.polys.len(), 2);
        assert_eq!(file.ring.order(), MonomialOrder::Lex);
        let again = PolyFile::<Rational>::parse(&file.render()).unwrap();
        assert_eq!(again, file);
        assert_eq!(
            file.render(),
            PolyFile::<Rational>::parse(&file.render())
                .unwrap()
                .render()
        );

        let bad = PolyFile::<Rational>::parse("ring: x y over QQ\nx + w\n");
        assert!(
            matches!(bad, Err(Error::ParseAt { line: 2, .. })),
            "{bad:?}"
        );
        assert!(PolyFile::<Rational>::parse("ring: x over QQ(sqrt2)\nx\n").is_err());
        assert!(parse_poly::<Rational>(&ring(), "x + ").is_err());
        assert!(parse_poly::<Rational>(&ring(), "x + + y").is_err());
    }
}
