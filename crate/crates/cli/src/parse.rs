//! Text format for dg algebra presentations.
//!
//! Line-oriented, `#` starts a comment. Sections appear in order:
//!
//! ```text
//! base Q[x]                      # or: base Q
//! kind commutative               # or: kind associative
//! generator t degree -2 weight 1 # weight is optional (default 0)
//! generator xi degree -5 weight 3
//! relation t^3 = 0               # nilpotency relations only
//! d xi = t^3
//! curvature = -1*x*t             # optional
//! ```
//!
//! Expressions are sums of terms; a term is a `*`-separated product of
//! rational constants (`3`, `-5/2`), the coefficient variable `x` (over
//! Q[x] only), and generator names, each with an optional `^k` power.

use exacthom::dgcore::{AlgebraElement, DgPresentation, GeneratorSpec, MulKind};
use exacthom::exactalg::{PolyScalar, RingTag};

#[derive(Clone, Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "parse error at line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, col: usize, msg: impl ToString) -> ParseError {
    ParseError { line, col, msg: msg.to_string() }
}

/// A word of the line with its 1-based starting column.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct PendingExpr {
    line_no: usize,
    col: usize,
    text: String,
}

pub fn parse_presentation(text: &str) -> Result<DgPresentation, ParseError> {
    let mut base: Option<RingTag> = None;
    let mut kind = MulKind::GradedCommutative;
    let mut gens: Vec<GeneratorSpec> = Vec::new();
    let mut relations: Vec<(usize, usize, String, u32)> = Vec::new();
    let mut diffs: Vec<(String, PendingExpr)> = Vec::new();
    let mut curvature: Option<PendingExpr> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let ws = words(line);
        if ws.is_empty() {
            continue;
        }
        let (kw_col, kw) = ws[0];
        match kw {
            "base" => {
                let (c, v) = *ws.get(1).ok_or_else(|| {
                    err(line_no, kw_col + kw.len(), "expected a base ring: Q or Q[x]")
                })?;
                base = Some(match v {
                    "Q" => RingTag::Q,
                    "Q[x]" => RingTag::Qx,
                    other => {
                        return Err(err(line_no, c, format!("unknown base ring '{}'", other)))
                    }
                });
            }
            "kind" => {
                let (c, v) = *ws.get(1).ok_or_else(|| {
                    err(line_no, kw_col + kw.len(), "expected: commutative or associative")
                })?;
                kind = match v {
                    "commutative" => MulKind::GradedCommutative,
                    "associative" => MulKind::FreeAssociative,
                    other => {
                        return Err(err(line_no, c, format!("unknown kind '{}'", other)))
                    }
                };
            }
            "generator" => {
                let (_, name) = *ws
                    .get(1)
                    .ok_or_else(|| err(line_no, kw_col, "expected a generator name"))?;
                let mut degree: Option<i64> = None;
                let mut weight: i64 = 0;
                let mut i = 2;
                while i < ws.len() {
                    let (kc, key) = ws[i];
                    let (vc, val) = *ws.get(i + 1).ok_or_else(|| {
                        err(line_no, kc + key.len(), format!("'{}' needs a value", key))
                    })?;
                    let parsed: i64 = val
                        .parse()
                        .map_err(|_| err(line_no, vc, format!("'{}' is not an integer", val)))?;
                    match key {
                        "degree" => degree = Some(parsed),
                        "weight" => weight = parsed,
                        other => {
                            return Err(err(line_no, kc, format!("unknown attribute '{}'", other)))
                        }
                    }
                    i += 2;
                }
                let degree = degree.ok_or_else(|| {
                    err(line_no, kw_col, format!("generator '{}' is missing a degree", name))
                })?;
                gens.push(GeneratorSpec::with_weight(name, degree, weight));
            }
            "relation" => {
                // relation NAME^k = 0
                let rest: String =
                    ws[1..].iter().map(|(_, w)| *w).collect::<Vec<_>>().join(" ");
                let rcol = ws.get(1).map(|(c, _)| *c).unwrap_or(kw_col + kw.len());
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| {
                    err(line_no, rcol, "expected: relation NAME^k = 0")
                })?;
                if rhs.trim() != "0" {
                    return Err(err(line_no, rcol, "only nilpotency relations NAME^k = 0 are supported"));
                }
                let lhs = lhs.trim();
                let (name, pow) = lhs.split_once('^').ok_or_else(|| {
                    err(line_no, rcol, "expected: relation NAME^k = 0")
                })?;
                let pow: u32 = pow
                    .trim()
                    .parse()
                    .map_err(|_| err(line_no, rcol, format!("'{}' is not a power", pow)))?;
                relations.push((line_no, rcol, name.trim().to_string(), pow));
            }
            "d" => {
                let (_, name) = *ws
                    .get(1)
                    .ok_or_else(|| err(line_no, kw_col, "expected: d NAME = expression"))?;
                let eq_pos = line.find('=').ok_or_else(|| {
                    err(line_no, kw_col, "expected: d NAME = expression")
                })?;
                diffs.push((
                    name.to_string(),
                    PendingExpr {
                        line_no,
                        col: eq_pos + 2,
                        text: line[eq_pos + 1..].to_string(),
                    },
                ));
            }
            "curvature" => {
                let eq_pos = line.find('=').ok_or_else(|| {
                    err(line_no, kw_col, "expected: curvature = expression")
                })?;
                curvature = Some(PendingExpr {
                    line_no,
                    col: eq_pos + 2,
                    text: line[eq_pos + 1..].to_string(),
                });
            }
            other => {
                return Err(err(line_no, kw_col, format!("unknown keyword '{}'", other)));
            }
        }
    }

    let base = base.ok_or_else(|| err(1, 1, "missing 'base' line"))?;
    let mut p = DgPresentation::new(base, kind, gens);

    for (line_no, col, name, pow) in relations {
        if p.gen_index(&name).is_none() {
            return Err(err(line_no, col, format!("unknown generator '{}'", name)));
        }
        p.set_nilpotent(&name, pow);
    }
    for (name, expr) in diffs {
        if p.gen_index(&name).is_none() {
            return Err(err(expr.line_no, 3, format!("unknown generator '{}'", name)));
        }
        let value = parse_expression(&p, &expr)?;
        p.set_differential(&name, value);
    }
    if let Some(expr) = &curvature {
        let value = parse_expression(&p, expr)?;
        p.set_curvature(value);
    }

    p.validate().map_err(|e| err(0, 0, format!("presentation invalid: {}", e)))?;
    Ok(p)
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Caret,
    Int(i64),
    Ident(String),
    End,
}

impl<'a> Lexer<'a> {
    fn col(&self) -> usize {
        self.col0 + self.pos
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
        let start = self.col();
        if self.pos >= self.src.len() {
            return Ok((start, Tok::End));
        }
        let c = self.src[self.pos] as char;
        self.pos += 1;
        match c {
            '+' => Ok((start, Tok::Plus)),
            '-' => Ok((start, Tok::Minus)),
            '*' => Ok((start, Tok::Star)),
            '^' => Ok((start, Tok::Caret)),
            _ if c.is_ascii_digit() => {
                let mut n = c.to_digit(10).unwrap() as i64;
                while self.pos < self.src.len() && (self.src[self.pos] as char).is_ascii_digit() {
                    n = n * 10 + (self.src[self.pos] - b'0') as i64;
                    self.pos += 1;
                }
                Ok((start, Tok::Int(n)))
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let s = self.pos - 1;
                while self.pos < self.src.len() {
                    let ch = self.src[self.pos] as char;
                    if ch.is_ascii_alphanumeric() || ch == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok((start, Tok::Ident(String::from_utf8_lossy(&self.src[s..self.pos]).into())))
            }
            '/' => Ok((start, Tok::Ident("/".into()))),
            other => Err(err(self.line, start, format!("unexpected character '{}'", other))),
        }
    }
}

fn parse_expression(p: &DgPresentation, expr: &PendingExpr) -> Result<AlgebraElement, ParseError> {
    let mut lx = Lexer {
        src: expr.text.as_bytes(),
        pos: 0,
        line: expr.line_no,
        col0: expr.col,
    };
    let mut total = AlgebraElement::zero();
    let (mut col, mut tok) = lx.next()?;
    if tok == Tok::End {
        return Err(err(expr.line_no, col, "empty expression"));
    }
    loop {
        // Leading sign of the term.
        let mut sign = 1i64;
        loop {
            match tok {
                Tok::Plus => {}
                Tok::Minus => sign = -sign,
                _ => break,
            }
            (col, tok) = lx.next()?;
        }
        let mut term = p.scalar(PolyScalar::from_int(p.base, sign));
        loop {
            let factor = parse_factor(p, &mut lx, col, &tok)?;
            term = p.multiply(&term, &factor);
            (col, tok) = lx.next()?;
            if tok == Tok::Star {
                (col, tok) = lx.next()?;
            } else {
                break;
            }
        }
        total = total.add(&term);
        match tok {
            Tok::End => break,
            Tok::Plus | Tok::Minus => continue,
            _ => return Err(err(expr.line_no, col, "expected '+', '-', '*', or end of line")),
        }
    }
    Ok(total)
}

fn parse_factor(
    p: &DgPresentation,
    lx: &mut Lexer,
    col: usize,
    tok: &Tok,
) -> Result<AlgebraElement, ParseError> {
    let base = match tok {
        Tok::Int(n) => {
            // Optional '/denominator'.
            let save = lx.pos;
            let (dcol, next) = lx.next()?;
            if next == Tok::Ident("/".into()) {
                let (ncol, den) = lx.next()?;
                match den {
                    Tok::Int(d) if d != 0 => {
                        return apply_power(p, lx, p.scalar(PolyScalar::from_fraction(p.base, *n, d)), col)
                    }
                    _ => return Err(err(lx.line, ncol.max(dcol), "expected a nonzero denominator")),
                }
            }
            lx.pos = save;
            p.scalar(PolyScalar::from_int(p.base, *n))
        }
        Tok::Ident(name) if name == "x" => {
            if p.base != RingTag::Qx {
                return Err(err(lx.line, col, "'x' is only available over the base Q[x]"));
            }
            p.scalar(PolyScalar::x())
        }
        Tok::Ident(name) => {
            if p.gen_index(name).is_none() {
                return Err(err(lx.line, col, format!("unknown generator '{}'", name)));
            }
            p.gen_elem(name)
        }
        _ => return Err(err(lx.line, col, "expected a constant, 'x', or a generator")),
    };
    apply_power(p, lx, base, col)
}

fn apply_power(
    p: &DgPresentation,
    lx: &mut Lexer,
    base: AlgebraElement,
    col: usize,
) -> Result<AlgebraElement, ParseError> {
    let save = lx.pos;
    let (_, next) = lx.next()?;
    if next != Tok::Caret {
        lx.pos = save;
        return Ok(base);
    }
    let (ecol, e) = lx.next()?;
    let Tok::Int(k) = e else {
        return Err(err(lx.line, ecol, "expected an integer exponent"));
    };
    if k < 0 {
        return Err(err(lx.line, ecol, "negative exponents are not supported"));
    }
    let mut out = p.one();
    for _ in 0..k {
        out = p.multiply(&out, &base);
    }
    let _ = col;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_tower_presentation_parses() {
        let text = "\
base Q[x]
kind associative
generator y1 degree 1
generator y2 degree 3
d y1 = x
d y2 = y1*y1
";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.gens.len(), 2);
        let want = p.multiply(&p.gen_elem("y1"), &p.gen_elem("y1"));
        assert_eq!(p.diff[1], want);
    }

    #[test]
    fn curved_truncation_parses() {
        let text = "\
base Q[x]
kind commutative
generator t degree -2 weight 1
relation t^2 = 0
curvature = -1*x*t
";
        let p = parse_presentation(text).unwrap();
        assert!(!p.curvature.is_zero());
        assert_eq!(p.nilpotency.get(&0), Some(&2));
    }

    #[test]
    fn missing_degree_is_reported_at_its_line() {
        let text = "base Q\ngenerator a weight 1\n";
        let e = parse_presentation(text).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("missing a degree"), "{}", e.msg);
    }

    #[test]
    fn unknown_generator_in_expression_is_located() {
        let text = "base Q\ngenerator a degree 2\nd a = b*b\n";
        let e = parse_presentation(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.col, 7);
    }

    #[test]
    fn x_rejected_over_q() {
        let text = "base Q\ngenerator a degree 2\nd a = x\n";
        let e = parse_presentation(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("Q[x]"));
    }

    #[test]
    fn rational_coefficients_and_powers() {
        let text = "\
base Q
kind commutative
generator a degree 0
generator b degree 1
d b = 3/2*a^2 - a
";
        let p = parse_presentation(text).unwrap();
        let a = p.gen_elem("a");
        let a2 = p.multiply(&a, &a);
        let want = a2.scale(&PolyScalar::from_fraction(RingTag::Q, 3, 2)).sub(&a);
        assert_eq!(p.diff[1], want);
    }

    #[test]
    fn invalid_differential_fails_validation() {
        // d(b) = a has degree -1 only if |a| = |b| - 1; here it is not.
        let text = "base Q\ngenerator a degree 0\ngenerator b degree 2\nd b = a\n";
        assert!(parse_presentation(text).is_err());
    }
}
