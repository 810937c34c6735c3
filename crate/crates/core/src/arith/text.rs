use super::{ComplexF, QuadExt, Rational, Ring};

/// Context-free text form of a scalar, shared by the JSON tensor format and
/// the polynomial text format.
pub trait ScalarText: Ring {
    /// Name used in `ring:` headers.
    const FIELD_NAME: &'static str;

    fn render(&self) -> String;
    fn parse_text(s: &str) -> Option<Self>;
    /// Whether the rendering must be parenthesized inside a product.
    fn needs_parens(&self) -> bool {
        false
    }
    /// Canonical zero, for building values without an existing element.
    fn zero() -> Self;
    /// Sign of the leading part, used to print `a - b` instead of `a + -b`.
    fn is_negative_rendering(&self) -> bool {
        self.render().starts_with('-')
    }
}

impl ScalarText for Rational {
    const FIELD_NAME: &'static str = "QQ";
    fn render(&self) -> String {
        self.to_string()
    }
    fn parse_text(s: &str) -> Option<Self> {
        super::parse_rational(s)
    }
    fn zero() -> Self {
        super::rat_int(0)
    }
}

impl ScalarText for QuadExt {
    const FIELD_NAME: &'static str = "QQ(sqrt2)";
    fn render(&self) -> String {
        self.to_string()
    }
    fn parse_text(s: &str) -> Option<Self> {
        QuadExt::parse(s)
    }
    fn needs_parens(&self) -> bool {
        !self.b.is_zero() && !self.a.is_zero()
    }
    fn zero() -> Self {
        QuadExt::from_rational(super::rat_int(0))
    }
}

impl ScalarText for ComplexF {
    const FIELD_NAME: &'static str = "CC";
    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.im < 0.0 {
            format!("{}-{}*i", self.re, -self.im)
        } else {
            format!("{}+{}*i", self.re, self.im)
        }
    }
    fn parse_text(s: &str) -> Option<Self> {
        let mut s = s.trim();
        if s.starts_with('(') && s.ends_with(')') {
            s = s[1..s.len() - 1].trim();
        }
        let Some(body) = s.strip_suffix('i') else {
            return s.parse::<f64>().ok().map(|re| ComplexF::new(re, 0.0));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let (re, im) = match split {
            Some(i) => (body[..i].parse::<f64>().ok()?, &body[i..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => t.strip_prefix('+').unwrap_or(t).parse::<f64>().ok()?,
        };
        Some(ComplexF::new(re, im))
    }
    fn needs_parens(&self) -> bool {
        self.im != 0.0 && self.re != 0.0
    }
    fn zero() -> Self {
        ComplexF::new(0.0, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_text_round_trip() {
        for z in [
            ComplexF::new(0.5, -2.0),
            ComplexF::new(0.0, 1.0),
            ComplexF::new(-3.0, 0.0),
            ComplexF::new(1e-20, 2.5e10),
        ] {
            assert_eq!(ComplexF::parse_text(&z.render()), Some(z));
        }
        assert_eq!(ComplexF::parse_text("i"), Some(ComplexF::new(0.0, 1.0)));
    }
}
