//! Text form of group-ring elements: `3*e - x(1) - x(-1)`, `2*x(1,0) + e`.

use permeas_core::groupring::GroupRingElement;
use permeas_core::groups::ZdElem;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected '{}' at offset {}", c as char, self.pos))
        }
    }

    fn int(&mut self) -> Result<i64, String> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse().map_err(|_| format!("expected an integer at offset {start}"))
    }
}

/// Parses a group-ring element over `Z^dim`.
pub fn parse_group_ring(text: &str, dim: usize) -> Result<GroupRingElement<ZdElem>, String> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let sign = if cur.eat(b'-') {
            -1
        } else if cur.eat(b'+') || first {
            1
        } else {
            return Err(format!("expected '+' or '-' at offset {}", cur.pos));
        };
        first = false;
        let coeff = if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let k = cur.int()?;
            if !cur.eat(b'*') {
                // A bare integer is a multiple of the identity.
                terms.push((ZdElem::zero(dim), sign * k));
                if cur.peek().is_none() {
                    break;
                }
                continue;
            }
            k
        } else {
            1
        };
        let at = match cur.peek() {
            Some(b'e') => {
                cur.pos += 1;
                ZdElem::zero(dim)
            }
            Some(b'x') => {
                cur.pos += 1;
                cur.expect(b'(')?;
                let mut coords = vec![cur.int()?];
                while cur.eat(b',') {
                    coords.push(cur.int()?);
                }
                cur.expect(b')')?;
                if coords.len() != dim {
                    return Err(format!("x(...) has {} coordinates, expected {dim}", coords.len()));
                }
                ZdElem::new(&coords)
            }
            _ => return Err(format!("expected 'e' or 'x(...)' at offset {}", cur.pos)),
        };
        terms.push((at, sign * coeff));
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(GroupRingElement::from_terms(terms))
}

/// Canonical text, terms in element order.
pub fn format_group_ring(v: &GroupRingElement<ZdElem>) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in v.terms().enumerate() {
        let atom = if e.is_zero() {
            "e".to_string()
        } else {
            let coords: Vec<String> = e.coords().iter().map(i64::to_string).collect();
            format!("x({})", coords.join(","))
        };
        match (i, c < 0) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&format!("{}*{atom}", c.unsigned_abs()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: i64) -> ZdElem {
        ZdElem::new(&[v])
    }

    #[test]
    fn harmonic_forms_agree() {
        let want = GroupRingElement::from_terms([(z(0), 3), (z(1), -1), (z(-1), -1)]);
        for text in ["3*e - 1*x(1) - 1*x(-1)", "3*e-x(1)-x(-1)", " - x(-1) + 3 - x( 1 )", "x(1) + 3*e - 2*x(1) - x(-1)"] {
            assert_eq!(parse_group_ring(text, 1).unwrap(), want, "{text}");
        }
        assert_eq!(format_group_ring(&want), "-1*x(-1) + 3*e - 1*x(1)");
        assert_eq!(parse_group_ring(&format_group_ring(&want), 1).unwrap(), want);
    }

    #[test]
    fn two_dimensional_terms() {
        let v = parse_group_ring("5*e - x(1,0) - x(0,-1)", 2).unwrap();
        assert_eq!(v.coeff(&ZdElem::new(&[1, 0])), -1);
        assert_eq!(v.coeff(&ZdElem::new(&[0, 0])), 5);
        assert_eq!(parse_group_ring(&format_group_ring(&v), 2).unwrap(), v);
    }

    #[test]
    fn malformed_input_is_rejected() {
        for text in ["", "3*", "x(1", "x(1,2)", "3 e", "y(1)", "3*e x(1)", "--x(1)"] {
            assert!(parse_group_ring(text, 1).is_err(), "{text}");
        }
    }
}
