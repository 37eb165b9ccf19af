//! Line-oriented netlist parser.
//!
//! ```text
//! * comment
//! R<id> n+ n- value
//! C<id> n+ n- value
//! L<id> n+ n- value
//! D<id> n+ n- [IS=..] [VT=..]
//! M<id> nd ng ns [K=..] [VT0=..]
//! V<id>/I<id> n+ n-  DC v
//!                  | SIN(off amp freq [fast|slow])
//!                  | FMSIN(off amp fcenter fdev fmod)
//!                  | PULSE(v1 v2 freq [riseFrac] [fast|slow])
//! ```
//!
//! Device letters are case-insensitive; node `0` is ground. Values accept
//! the engineering suffixes f, p, n, u, m, k, meg, g.

use crate::circuit::device::{
    DIODE_IS_DEFAULT, DIODE_VT_DEFAULT, MOS_K_DEFAULT, MOS_VT0_DEFAULT, PULSE_RISE_DEFAULT,
};
use crate::circuit::source::{SourceRole, Waveform};
use crate::circuit::{Circuit, CircuitBuilder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() || ch == '(' || ch == ')' {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    col: s + 1,
                });
            }
            if ch == '(' || ch == ')' {
                out.push(Token {
                    text: &line[i..i + 1],
                    col: i + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parse a number with optional engineering suffix.
fn parse_value(tok: &Token, line: usize) -> Result<f64> {
    let s = tok.text.to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let (body, mult) = if let Some(b) = s.strip_suffix("meg") {
        (b, 1e6)
    } else if let Some(b) = s.strip_suffix('f') {
        (b, 1e-15)
    } else if let Some(b) = s.strip_suffix('p') {
        (b, 1e-12)
    } else if let Some(b) = s.strip_suffix('n') {
        (b, 1e-9)
    } else if let Some(b) = s.strip_suffix('u') {
        (b, 1e-6)
    } else if let Some(b) = s.strip_suffix('m') {
        (b, 1e-3)
    } else if let Some(b) = s.strip_suffix('k') {
        (b, 1e3)
    } else if let Some(b) = s.strip_suffix('g') {
        (b, 1e9)
    } else {
        return Err(err(line, tok.col, format!("bad number literal '{}'", tok.text)));
    };
    body.parse::<f64>()
        .map(|v| v * mult)
        .map_err(|_| err(line, tok.col, format!("bad number literal '{}'", tok.text)))
}

struct Cursor<'a> {
    toks: &'a [Token<'a>],
    pos: usize,
    line: usize,
    line_len: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<&Token<'a>> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| err(self.line, self.line_len + 1, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn peek(&self) -> Option<&Token<'a>> {
        self.toks.get(self.pos)
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<()> {
        if let Some(t) = self.peek() {
            return Err(err(
                self.line,
                t.col,
                format!("unexpected trailing token '{}'", t.text),
            ));
        }
        Ok(())
    }

    fn value(&mut self, what: &str) -> Result<f64> {
        let line = self.line;
        let t = *self.next(what)?;
        parse_value(&t, line)
    }
}

fn parse_role(tok: &Token, line: usize) -> Result<SourceRole> {
    match tok.text.to_ascii_lowercase().as_str() {
        "fast" => Ok(SourceRole::Fast),
        "slow" => Ok(SourceRole::Slow),
        other => Err(err(line, tok.col, format!("expected fast|slow, got '{other}'"))),
    }
}

/// Optional `fast|slow` token just before the closing paren.
fn maybe_role(cur: &mut Cursor) -> Result<Option<SourceRole>> {
    if let Some(t) = cur.peek() {
        if t.text != ")" {
            let t = *cur.next("role")?;
            return parse_role(&t, cur.line).map(Some);
        }
    }
    Ok(None)
}

fn parse_wave(cur: &mut Cursor) -> Result<Waveform> {
    let line = cur.line;
    let kw = *cur.next("source specification")?;
    let upper = kw.text.to_ascii_uppercase();
    match upper.as_str() {
        "DC" => {
            let value = cur.value("DC value")?;
            Ok(Waveform::Dc { value })
        }
        "SIN" | "FMSIN" | "PULSE" => {
            let open = cur.next("'('")?;
            if open.text != "(" {
                return Err(err(line, open.col, "expected '('"));
            }
            let wave = match upper.as_str() {
                "SIN" => {
                    let offset = cur.value("offset")?;
                    let amplitude = cur.value("amplitude")?;
                    let freq = cur.value("frequency")?;
                    let role = maybe_role(cur)?.unwrap_or(SourceRole::Fast);
                    Waveform::Sin {
                        offset,
                        amplitude,
                        freq,
                        role,
                    }
                }
                "FMSIN" => Waveform::FmSin {
                    offset: cur.value("offset")?,
                    amplitude: cur.value("amplitude")?,
                    f_center: cur.value("center frequency")?,
                    f_dev: cur.value("frequency deviation")?,
                    f_mod: cur.value("modulation frequency")?,
                },
                "PULSE" => {
                    let low = cur.value("low level")?;
                    let high = cur.value("high level")?;
                    let freq = cur.value("frequency")?;
                    let mut rise_frac = PULSE_RISE_DEFAULT;
                    let mut role = SourceRole::Fast;
                    if let Some(t) = cur.peek() {
                        if t.text != ")" {
                            // optional rise fraction, then optional role
                            if t.text.eq_ignore_ascii_case("fast")
                                || t.text.eq_ignore_ascii_case("slow")
                            {
                                let t = *cur.next("role")?;
                                role = parse_role(&t, line)?;
                            } else {
                                rise_frac = cur.value("rise fraction")?;
                                if let Some(r) = maybe_role(cur)? {
                                    role = r;
                                }
                            }
                        }
                    }
                    Waveform::Pulse {
                        low,
                        high,
                        freq,
                        rise_frac,
                        role,
                    }
                }
                _ => unreachable!(),
            };
            let close = cur.next("')'")?;
            if close.text != ")" {
                return Err(err(line, close.col, "expected ')'"));
            }
            Ok(wave)
        }
        other => Err(err(
            line,
            kw.col,
            format!("unknown source specification '{other}'"),
        )),
    }
}

/// Parse `KEY=value` options into the listed slots.
fn parse_options(cur: &mut Cursor, slots: &mut [(&str, &mut f64)]) -> Result<()> {
    let line = cur.line;
    while !cur.done() {
        let t = *cur.next("option")?;
        let Some((key, val)) = t.text.split_once('=') else {
            return Err(err(line, t.col, format!("expected KEY=value, got '{}'", t.text)));
        };
        let vt = Token {
            text: val,
            col: t.col + key.len() + 1,
        };
        let v = parse_value(&vt, line)?;
        let key_up = key.to_ascii_uppercase();
        let mut matched = false;
        for (name, slot) in slots.iter_mut() {
            if key_up == *name {
                **slot = v;
                matched = true;
                break;
            }
        }
        if !matched {
            return Err(err(line, t.col, format!("unknown option '{key}'")));
        }
    }
    Ok(())
}

/// Parse netlist text into a [`Circuit`] with deterministic node ordering
/// (first appearance; node `0` is ground).
pub fn parse_netlist(text: &str) -> Result<Circuit> {
    let mut b = CircuitBuilder::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        let toks = tokenize(line);
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line: line_no,
            line_len: line.len(),
        };
        let head = *cur.next("device card")?;
        let name = head.text.to_string();
        let kind = name
            .chars()
            .next()
            .unwrap()
            .to_ascii_uppercase();
        match kind {
            'R' | 'C' | 'L' => {
                let np = cur.next("node")?.text.to_string();
                let nm = cur.next("node")?.text.to_string();
                let value = cur.value("value")?;
                cur.expect_end()?;
                let (np, nm) = (b.node(&np), b.node(&nm));
                match kind {
                    'R' => b.resistor(&name, np, nm, value),
                    'C' => b.capacitor(&name, np, nm, value),
                    _ => b.inductor(&name, np, nm, value),
                };
            }
            'D' => {
                let np = cur.next("node")?.text.to_string();
                let nm = cur.next("node")?.text.to_string();
                let mut i_sat = DIODE_IS_DEFAULT;
                let mut v_thermal = DIODE_VT_DEFAULT;
                parse_options(&mut cur, &mut [("IS", &mut i_sat), ("VT", &mut v_thermal)])?;
                let (np, nm) = (b.node(&np), b.node(&nm));
                b.diode(&name, np, nm, i_sat, v_thermal);
            }
            'M' => {
                let nd = cur.next("drain node")?.text.to_string();
                let ng = cur.next("gate node")?.text.to_string();
                let ns = cur.next("source node")?.text.to_string();
                let mut k = MOS_K_DEFAULT;
                let mut vt0 = MOS_VT0_DEFAULT;
                parse_options(&mut cur, &mut [("K", &mut k), ("VT0", &mut vt0)])?;
                let (nd, ng, ns) = (b.node(&nd), b.node(&ng), b.node(&ns));
                b.mosfet(&name, nd, ng, ns, k, vt0);
            }
            'V' | 'I' => {
                let np = cur.next("node")?.text.to_string();
                let nm = cur.next("node")?.text.to_string();
                let wave = parse_wave(&mut cur)?;
                cur.expect_end()?;
                let (np, nm) = (b.node(&np), b.node(&nm));
                if kind == 'V' {
                    b.vsource(&name, np, nm, wave);
                } else {
                    b.isource(&name, np, nm, wave);
                }
            }
            other => {
                return Err(err(
                    line_no,
                    head.col,
                    format!("unknown device card '{other}'"),
                ));
            }
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixer_front_end_counts() {
        let text = "V1 in 0 SIN(0 1 1e6)\nR1 in out 1k\nC1 out 0 1n";
        let c = parse_netlist(text).unwrap();
        assert_eq!(c.dim(), 3); // two node voltages + one branch current
        assert_eq!(c.devices().len(), 3);
        assert_eq!(c.node_index("in"), Some(0));
        assert_eq!(c.node_index("out"), Some(1));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse_netlist(""), Err(Error::EmptyCircuit)));
        assert!(matches!(
            parse_netlist("* only a comment\n\n"),
            Err(Error::EmptyCircuit)
        ));
    }

    #[test]
    fn sourceless_circuit_is_valid() {
        let c = parse_netlist("R1 a b 1k").unwrap();
        let mut s = nalgebra::DVector::zeros(c.dim());
        c.source_univariate_into(0.3, &mut s);
        assert_eq!(s.amax(), 0.0);
    }

    #[test]
    fn engineering_suffixes() {
        let c = parse_netlist("R1 a 0 1.5meg\nR2 a 0 2k\nC1 a 0 10n\nC2 a 0 3p\nL1 a 0 2u")
            .unwrap();
        match &c.devices()[0] {
            super::super::Device::Resistor { value, .. } => assert_eq!(*value, 1.5e6),
            _ => unreachable!(),
        }
        match &c.devices()[3] {
            super::super::Device::Capacitor { value, .. } => assert_eq!(*value, 3e-12),
            _ => unreachable!(),
        }
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse_netlist("R1 a 0 1k\nQ1 a b c").unwrap_err();
        match e {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 2);
                assert_eq!(col, 1);
            }
            other => panic!("unexpected error {other}"),
        }
        let e = parse_netlist("R1 a 0 zz").unwrap_err();
        match e {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 8);
            }
            other => panic!("unexpected error {other}"),
        }
        // arity mismatch
        assert!(parse_netlist("R1 a 0").is_err());
        // bad option key
        assert!(parse_netlist("D1 a 0 XYZ=3").is_err());
    }

    #[test]
    fn source_cards_round_trip() {
        let text = "\
V1 in 0 SIN(0 1 100k fast)
V2 lo 0 PULSE(-5 5 100k 0.02)
V3 fm 0 FMSIN(0 1 25k 100 10)
I1 0 out SIN(0 1m 60 slow)
V4 dc 0 DC 3.3
R1 in out 1k
R2 lo out 1k
R3 fm out 1k
R4 dc out 1k
";
        let c = parse_netlist(text).unwrap();
        let again = parse_netlist(&c.unparse()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn pulse_optional_fields() {
        let c = parse_netlist("V1 a 0 PULSE(-1 1 10k)\nR1 a 0 1k").unwrap();
        match c.devices()[0].wave().unwrap() {
            Waveform::Pulse {
                rise_frac, role, ..
            } => {
                assert_eq!(*rise_frac, PULSE_RISE_DEFAULT);
                assert_eq!(*role, SourceRole::Fast);
            }
            _ => unreachable!(),
        }
        let c = parse_netlist("V1 a 0 PULSE(-1 1 10k slow)\nR1 a 0 1k").unwrap();
        match c.devices()[0].wave().unwrap() {
            Waveform::Pulse { role, .. } => assert_eq!(*role, SourceRole::Slow),
            _ => unreachable!(),
        }
    }
}
