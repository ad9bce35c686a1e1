//! ASCII notation for resource inequalities.
//!
//! ```text
//! ri       := [name ':'] side ('>=' | '>=!') side flag*
//! side     := term (('+' | '-') term)*
//! term     := [coeff] resource
//! coeff    := ['-'] (number ['*' symbol] | symbol | '(' expr ')')
//! expr     := ['-'] atom (('+' | '-') atom)*
//! atom     := number ['*' symbol] | symbol
//! symbol   := 'H(' parties ')' | 'I(A:B)' | 'I(A:E)' | 'Ic(A>B)'
//! resource := '[c->c]' | '[q->q]' | '[qq]' | '[q->qq]'
//!           | '{qq' [':' handle] '}' | '{q->q' [':' handle] '}'
//! flag     := '@rule_I' | '@rule_O'
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::expr::{canonicalize, EntropicExpr, Parties, RawExpr, RawSymbol, Rational};
use super::inequality::{Mode, ResourceInequality, RuleFlags};
use super::resource::{ResourceKind, ResourceVector};
use super::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown resource `{token}` at byte {pos}")]
    UnknownResource { pos: usize, token: String },
    #[error(transparent)]
    Invalid(#[from] AlgebraError),
}

/// Full text form: `name: lhs >= rhs` plus any certified rule flags.
pub fn format_ri(ri: &ResourceInequality) -> String {
    let mut s = String::new();
    if !ri.name.is_empty() {
        s.push_str(&ri.name);
        s.push_str(": ");
    }
    s.push_str(&ri.to_string());
    if ri.flags.rule_i_ok {
        s.push_str(" @rule_I");
    }
    if ri.flags.rule_o_ok {
        s.push_str(" @rule_O");
    }
    s
}

pub fn parse_ri(text: &str) -> Result<ResourceInequality, ParseError> {
    let mut p = Parser::new(text);
    let name = p.optional_name();
    let lhs = p.side()?;
    p.skip_ws();
    let mode = if p.eat(">=!") {
        Mode::Exact
    } else if p.eat(">=") {
        Mode::Asymptotic
    } else {
        return Err(p.syntax("expected `>=` or `>=!`"));
    };
    p.skip_ws();
    if p.at_end() || p.peek() == Some(b'@') {
        return Err(ParseError::Invalid(AlgebraError::EmptySide("right")));
    }
    let rhs = p.side()?;
    let mut flags = RuleFlags::NONE;
    loop {
        p.skip_ws();
        if p.at_end() {
            break;
        }
        if p.eat("@rule_I") {
            flags.rule_i_ok = true;
        } else if p.eat("@rule_O") {
            flags.rule_o_ok = true;
        } else {
            return Err(p.syntax("unexpected trailing input"));
        }
    }
    Ok(ResourceInequality::new(name, lhs, rhs, mode)?.with_flags(flags))
}

pub fn parse_vector(text: &str) -> Result<ResourceVector, ParseError> {
    let mut p = Parser::new(text);
    let v = p.side()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_raw_expr(text: &str) -> Result<RawExpr, ParseError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses and canonicalizes an entropic expression.
pub fn parse_expr(text: &str) -> Result<EntropicExpr, ParseError> {
    parse_raw_expr(text).map(|raw| canonicalize(&raw))
}

pub fn parse_kind(text: &str) -> Result<ResourceKind, ParseError> {
    let mut p = Parser::new(text);
    p.skip_ws();
    let k = p.resource()?.ok_or_else(|| p.syntax("expected a resource"))?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(k)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn optional_name(&mut self) -> String {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'\'' | b'-'))
            .count();
        if len > 0 && rest.as_bytes().get(len) == Some(&b':') {
            let name = rest[..len].to_string();
            self.pos += len + 1;
            name
        } else {
            String::new()
        }
    }

    fn side(&mut self) -> Result<ResourceVector, ParseError> {
        let mut v = ResourceVector::new();
        let mut sign = Rational::from_integer(1);
        loop {
            self.skip_ws();
            let (coeff, kind) = self.term()?;
            v.add_term(kind, coeff.scale(sign));
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rational::from_integer(1);
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = Rational::from_integer(-1);
                }
                _ => break,
            }
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<(EntropicExpr, ResourceKind), ParseError> {
        if let Some(kind) = self.resource()? {
            return Ok((EntropicExpr::one(), kind));
        }
        let coeff = self.coeff()?;
        self.skip_ws();
        let kind = self.resource()?.ok_or_else(|| self.syntax("expected a resource after coefficient"))?;
        Ok((coeff, kind))
    }

    fn coeff(&mut self) -> Result<EntropicExpr, ParseError> {
        self.skip_ws();
        let negate = self.eat("-");
        self.skip_ws();
        let raw = if self.eat("(") {
            let e = self.expr()?;
            self.skip_ws();
            if !self.eat(")") {
                return Err(self.syntax("expected `)`"));
            }
            e
        } else {
            self.atom()?
        };
        let c = canonicalize(&raw);
        Ok(if negate { -c } else { c })
    }

    fn expr(&mut self) -> Result<RawExpr, ParseError> {
        self.skip_ws();
        let mut sign = if self.eat("-") { -1 } else { 1 };
        let mut out = RawExpr::new();
        loop {
            self.skip_ws();
            let atom = self.atom()?;
            for (c, s) in atom.terms {
                out.terms.push((c * Rational::from_integer(sign), s));
            }
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<RawExpr, ParseError> {
        if let Some(n) = self.number()? {
            self.skip_ws();
            if self.eat("*") {
                self.skip_ws();
                let s = self.symbol()?;
                return Ok(RawExpr::new().term(n, s));
            }
            return Ok(RawExpr::new().term(n, RawSymbol::One));
        }
        let s = self.symbol()?;
        Ok(RawExpr::new().term(Rational::from_integer(1), s))
    }

    fn digits(&mut self) -> Option<i64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        self.src[start..self.pos].parse().ok()
    }

    fn number(&mut self) -> Result<Option<Rational>, ParseError> {
        let start = self.pos;
        let Some(num) = self.digits() else {
            if self.pos != start {
                return Err(ParseError::Syntax { pos: start, msg: "integer out of range".to_string() });
            }
            return Ok(None);
        };
        if self.eat("/") {
            let den_pos = self.pos;
            match self.digits() {
                Some(den) if den != 0 => Ok(Some(Rational::new(num, den))),
                _ => Err(ParseError::Syntax { pos: den_pos, msg: "expected nonzero denominator".to_string() }),
            }
        } else {
            Ok(Some(Rational::from_integer(num)))
        }
    }

    fn symbol(&mut self) -> Result<RawSymbol, ParseError> {
        let start = self.pos;
        let rest = self.rest();
        let head = rest.bytes().take_while(|b| b.is_ascii_alphabetic()).count();
        if head == 0 {
            return Err(self.syntax("expected a number, symbol or resource"));
        }
        if rest.as_bytes().get(head) != Some(&b'(') {
            return Err(ParseError::UnknownSymbol(rest[..head].to_string()));
        }
        let Some(close) = rest.find(')') else {
            return Err(ParseError::Syntax { pos: start + head, msg: "unclosed `(`".to_string() });
        };
        let token = &rest[..=close];
        let inner = &rest[head + 1..close];
        let sym = match &rest[..head] {
            "H" => Parties::from_label(inner).map(RawSymbol::Entropy),
            "I" => match inner {
                "A:B" | "B:A" => Some(RawSymbol::MutualAB),
                "A:E" | "E:A" => Some(RawSymbol::MutualAE),
                _ => None,
            },
            "Ic" => (inner == "A>B").then_some(RawSymbol::CoherentAB),
            _ => None,
        };
        let sym = sym.ok_or_else(|| ParseError::UnknownSymbol(token.to_string()))?;
        self.pos += close + 1;
        Ok(sym)
    }

    fn resource(&mut self) -> Result<Option<ResourceKind>, ParseError> {
        let start = self.pos;
        match self.peek() {
            Some(b'[') => {
                for (tok, kind) in [
                    ("[c->c]", ResourceKind::Cbit),
                    ("[q->qq]", ResourceKind::Cobit),
                    ("[q->q]", ResourceKind::QubitChannel),
                    ("[qq]", ResourceKind::Ebit),
                ] {
                    if self.eat(tok) {
                        return Ok(Some(kind));
                    }
                }
                Err(self.unknown_resource(start, ']'))
            }
            Some(b'{') => {
                let noisy_state = self.eat("{qq");
                let noisy_channel = !noisy_state && self.eat("{q->q");
                if !noisy_state && !noisy_channel {
                    return Err(self.unknown_resource(start, '}'));
                }
                let handle = if self.eat(":") {
                    let len = self
                        .rest()
                        .bytes()
                        .take_while(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
                        .count();
                    if len == 0 {
                        return Err(self.syntax("expected a handle name"));
                    }
                    let h = self.rest()[..len].to_string();
                    self.pos += len;
                    Some(h)
                } else {
                    None
                };
                if !self.eat("}") {
                    self.pos = start;
                    return Err(self.unknown_resource(start, '}'));
                }
                Ok(Some(if noisy_state {
                    ResourceKind::NoisyState(handle)
                } else {
                    ResourceKind::NoisyChannel(handle)
                }))
            }
            _ => Ok(None),
        }
    }

    fn unknown_resource(&self, start: usize, close: char) -> ParseError {
        let rest = &self.src[start..];
        let end = rest.find(close).map(|i| i + 1).unwrap_or(rest.len());
        ParseError::UnknownResource { pos: start, token: rest[..end].to_string() }
    }
}

/// Parses a list of `name: statement` lines, skipping blanks and `#` comments.
pub fn parse_many(text: &str) -> Result<Vec<ResourceInequality>, (usize, ParseError)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_ri(l).map_err(|e| (i + 1, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mother_text_round_trip() {
        let text = "1/2*I(A:E) [q->q] + {qq} >= 1/2*I(A:B) [qq]";
        let ri = parse_ri(text).unwrap();
        assert_eq!(ri.mode, Mode::Asymptotic);
        assert_eq!(ri.to_string(), text);
        assert_eq!(
            ri.lhs.get(&ResourceKind::QubitChannel),
            EntropicExpr::mutual_ae().scale(Rational::new(1, 2))
        );
        assert_eq!(ri.lhs.get(&ResourceKind::noisy_state()), EntropicExpr::one());
    }

    #[test]
    fn teleportation_is_exact() {
        let text = "2 [c->c] + [qq] >=! [q->q]";
        let ri = parse_ri(text).unwrap();
        assert_eq!(ri.mode, Mode::Exact);
        assert_eq!(ri.to_string(), text);
    }

    #[test]
    fn names_and_flags_round_trip() {
        let text = "eq2: I(A:E) [c->c] + {qq} >= Ic(A>B) [qq] @rule_I";
        let ri = parse_ri(text).unwrap();
        assert_eq!(ri.name, "eq2");
        assert!(ri.flags.rule_i_ok);
        assert_eq!(format_ri(&ri), text);
    }

    #[test]
    fn empty_rhs_rejected() {
        let err = parse_ri("2 [c->c] + [qq] >=").unwrap_err();
        assert_eq!(err, ParseError::Invalid(AlgebraError::EmptySide("right")));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_ri("[qq] => [q->q]").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { pos: 5, .. }), "{err:?}");
    }

    #[test]
    fn unknown_resource_token() {
        let err = parse_ri("[cq] >= [qq]").unwrap_err();
        assert_eq!(err, ParseError::UnknownResource { pos: 0, token: "[cq]".into() });
    }

    #[test]
    fn unknown_symbol_named() {
        assert_eq!(parse_expr("H(AX)").unwrap_err(), ParseError::UnknownSymbol("H(AX)".into()));
        assert_eq!(parse_expr("2*J(A)").unwrap_err(), ParseError::UnknownSymbol("J(A)".into()));
        assert_eq!(parse_expr("I(B:E)").unwrap_err(), ParseError::UnknownSymbol("I(B:E)".into()));
    }

    #[test]
    fn parenthesized_coefficients() {
        let ri = parse_ri("(H(A) + H(E) - H(B)) [c->c] + {qq} >= (H(B) - H(AB)) [qq]").unwrap();
        assert_eq!(ri.lhs.get(&ResourceKind::Cbit), EntropicExpr::mutual_ae());
        assert_eq!(ri.rhs.get(&ResourceKind::Ebit), EntropicExpr::coherent_ab());
    }

    #[test]
    fn handles_parse() {
        let ri = parse_ri("{q->q:erasure} >= Ic(A>B) [q->q]").unwrap();
        assert!(ri.lhs.contains(&ResourceKind::NoisyChannel(Some("erasure".into()))));
        assert_eq!(ri.to_string(), "{q->q:erasure} >= Ic(A>B) [q->q]");
    }

    #[test]
    fn fractional_noisy_rejected() {
        let err = parse_ri("1/2 {qq} >= [qq]").unwrap_err();
        assert!(matches!(err, ParseError::Invalid(AlgebraError::FractionalNoisy { .. })));
    }
}
