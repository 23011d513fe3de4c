//! Line-oriented netlist parser with positioned errors.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::engine::{MosfetModel, Polarity};
use crate::units::UT_300K;

use super::types::{AnalysisDirective, Element, ElementKind, FtjCard, Netlist, Stimulus};

/// Parse failure with a 1-based source position.
#[derive(Debug, Error, PartialEq)]
#[error("line {line}, col {col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Parses a numeric field with classic unit suffixes
/// (f, p, n, u, m, k, meg, g; case-insensitive). Trailing unit letters
/// after a recognized suffix are ignored, SPICE-style ("10us" = 10 µ).
/// The suffix is folded into the decimal exponent before the single
/// float conversion, so "10u" and "1e-5" yield bit-identical values.
pub fn parse_value(text: &str) -> Option<f64> {
    if let Ok(v) = text.parse::<f64>() {
        return v.is_finite().then_some(v);
    }
    let split = text.rfind(|c: char| !c.is_ascii_alphabetic())? + 1;
    let (num, suffix) = text.split_at(split);
    // Reject anything whose numeric part is not itself a number.
    let probe: f64 = num.parse().ok()?;
    if !probe.is_finite() {
        return None;
    }
    let suffix = suffix.to_ascii_lowercase();
    let exp_shift: i32 = if suffix.starts_with("meg") {
        6
    } else {
        match suffix.chars().next() {
            Some('f') => -15,
            Some('p') => -12,
            Some('n') => -9,
            Some('u') => -6,
            Some('m') => -3,
            Some('k') => 3,
            Some('g') => 9,
            _ => 0,
        }
    };
    if exp_shift == 0 {
        return Some(probe);
    }
    let (mantissa, num_exp) = match num.find(['e', 'E']) {
        Some(pos) => {
            let (m, e) = num.split_at(pos);
            (m, e[1..].parse::<i32>().ok()?)
        }
        None => (num, 0),
    };
    format!("{mantissa}e{}", num_exp + exp_shift).parse().ok()
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    line: usize,
    col: usize,
}

/// A logical line: tokens of one card after continuation merging.
struct Card {
    tokens: Vec<Token>,
}

/// Splits one physical line into tokens; `(`, `)`, and `,` separate tokens
/// and are dropped, `=` is its own token.
fn tokenize_line(text: &str, line_no: usize, tokens: &mut Vec<Token>) {
    let mut current = String::new();
    let mut start_col = 0usize;
    for (idx, ch) in text.char_indices() {
        let col = idx + 1;
        if ch.is_whitespace() || ch == '(' || ch == ')' || ch == ',' || ch == '=' {
            if !current.is_empty() {
                tokens.push(Token {
                    text: std::mem::take(&mut current),
                    line: line_no,
                    col: start_col,
                });
            }
            if ch == '=' {
                tokens.push(Token {
                    text: "=".to_string(),
                    line: line_no,
                    col,
                });
            }
        } else {
            if current.is_empty() {
                start_col = col;
            }
            current.push(ch);
        }
    }
    if !current.is_empty() {
        tokens.push(Token {
            text: current,
            line: line_no,
            col: start_col,
        });
    }
}

/// Parses netlist text into a validated [`Netlist`]. The first line is the
/// title; element type comes from the first letter of each card.
pub fn parse_netlist(text: &str) -> Result<Netlist, ParseError> {
    let mut lines = text.lines().enumerate();
    let title = lines
        .next()
        .map(|(_, l)| l.trim().to_string())
        .unwrap_or_default();

    let mut cards: Vec<Card> = Vec::new();
    let mut ended = false;
    for (idx, raw) in lines {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        if ended {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('+') {
            let col_offset = raw.len() - trimmed.len() + 1;
            match cards.last_mut() {
                Some(card) => {
                    let mut extra = Vec::new();
                    tokenize_line(rest, line_no, &mut extra);
                    for t in &mut extra {
                        t.col += col_offset;
                    }
                    card.tokens.extend(extra);
                }
                None => {
                    return Err(ParseError::new(line_no, 1, "continuation with no previous card"));
                }
            }
            continue;
        }
        let mut tokens = Vec::new();
        tokenize_line(raw, line_no, &mut tokens);
        if tokens.is_empty() {
            continue;
        }
        if tokens[0].text.eq_ignore_ascii_case(".end") {
            ended = true;
            continue;
        }
        cards.push(Card { tokens });
    }

    let mut parser = Parser {
        netlist: Netlist::new(title),
        names: HashMap::new(),
        model_refs: Vec::new(),
    };
    for card in &cards {
        parser.parse_card(card)?;
    }
    parser.resolve_models()?;
    Ok(parser.netlist)
}

struct Parser {
    netlist: Netlist,
    /// Canonical element name → defining line, for duplicate reporting.
    names: HashMap<String, usize>,
    /// (model name, referencing token) to check after .model cards parse.
    model_refs: Vec<(String, usize, usize)>,
}

impl Parser {
    fn parse_card(&mut self, card: &Card) -> Result<(), ParseError> {
        let head = &card.tokens[0];
        if head.text.starts_with('.') {
            return self.parse_directive(card);
        }
        let kind_char = head
            .text
            .chars()
            .next()
            .expect("nonempty token")
            .to_ascii_lowercase();
        let name = head.text.to_ascii_lowercase();
        if let Some(prev) = self.names.get(&name) {
            return Err(ParseError::new(
                head.line,
                head.col,
                format!("duplicate element name `{name}` (first defined on line {prev})"),
            ));
        }
        let element = match kind_char {
            'v' => self.parse_vsource(card)?,
            'r' => self.parse_two_terminal(card, "resistance")?,
            'c' => self.parse_capacitor(card)?,
            'm' => self.parse_mosfet(card)?,
            'f' => self.parse_ftj(card)?,
            other => {
                return Err(ParseError::new(
                    head.line,
                    head.col,
                    format!("unknown element type `{other}` (expected V, R, C, M, or F)"),
                ));
            }
        };
        self.names.insert(name, head.line);
        self.netlist.elements.push(element);
        Ok(())
    }

    fn token<'c>(&self, card: &'c Card, idx: usize, what: &str) -> Result<&'c Token, ParseError> {
        card.tokens.get(idx).ok_or_else(|| {
            let last = card.tokens.last().expect("nonempty card");
            ParseError::new(
                last.line,
                last.col + last.text.len(),
                format!("missing {what}"),
            )
        })
    }

    fn number(&self, card: &Card, idx: usize, what: &str) -> Result<f64, ParseError> {
        let tok = self.token(card, idx, what)?;
        parse_value(&tok.text).ok_or_else(|| {
            ParseError::new(tok.line, tok.col, format!("invalid {what} `{}`", tok.text))
        })
    }

    fn nodes(&self, card: &Card, count: usize) -> Result<Vec<String>, ParseError> {
        (1..=count)
            .map(|i| {
                self.token(card, i, "node name")
                    .map(|t| t.text.to_ascii_lowercase())
            })
            .collect()
    }

    fn parse_two_terminal(&mut self, card: &Card, what: &str) -> Result<Element, ParseError> {
        let nodes = self.nodes(card, 2)?;
        let value = self.number(card, 3, what)?;
        self.expect_end(card, 4)?;
        if !value.is_finite() {
            let tok = &card.tokens[3];
            return Err(ParseError::new(tok.line, tok.col, format!("non-finite {what}")));
        }
        Ok(Element {
            name: card.tokens[0].text.to_ascii_lowercase(),
            nodes,
            kind: ElementKind::Resistor(value),
        })
    }

    fn parse_capacitor(&mut self, card: &Card) -> Result<Element, ParseError> {
        let nodes = self.nodes(card, 2)?;
        let farads = self.number(card, 3, "capacitance")?;
        let mut ic = None;
        let mut idx = 4;
        while idx < card.tokens.len() {
            let key = &card.tokens[idx];
            match key.text.to_ascii_lowercase().as_str() {
                "ic" => {
                    self.expect_eq(card, idx + 1)?;
                    ic = Some(self.number(card, idx + 2, "initial voltage")?);
                    idx += 3;
                }
                other => {
                    return Err(ParseError::new(
                        key.line,
                        key.col,
                        format!("unknown capacitor field `{other}`"),
                    ));
                }
            }
        }
        Ok(Element {
            name: card.tokens[0].text.to_ascii_lowercase(),
            nodes,
            kind: ElementKind::Capacitor { farads, ic },
        })
    }

    fn parse_mosfet(&mut self, card: &Card) -> Result<Element, ParseError> {
        let nodes = self.nodes(card, 4)?;
        let model_tok = self.token(card, 5, "model name")?;
        let model = model_tok.text.to_ascii_lowercase();
        self.model_refs
            .push((model.clone(), model_tok.line, model_tok.col));
        let mut w = 1.0;
        let mut l = 1.0;
        let mut dvt = 0.0;
        let mut idx = 6;
        while idx < card.tokens.len() {
            let key = &card.tokens[idx];
            let keyname = key.text.to_ascii_lowercase();
            self.expect_eq(card, idx + 1)?;
            let value = self.number(card, idx + 2, &format!("{keyname} value"))?;
            match keyname.as_str() {
                "w" => w = value,
                "l" => l = value,
                "dvt" => dvt = value,
                other => {
                    return Err(ParseError::new(
                        key.line,
                        key.col,
                        format!("unknown MOSFET field `{other}`"),
                    ));
                }
            }
            idx += 3;
        }
        if !(w > 0.0) || !(l > 0.0) {
            let tok = &card.tokens[0];
            return Err(ParseError::new(tok.line, tok.col, "W and L must be > 0"));
        }
        Ok(Element {
            name: card.tokens[0].text.to_ascii_lowercase(),
            nodes,
            kind: ElementKind::Mosfet { model, w, l, dvt },
        })
    }

    fn parse_ftj(&mut self, card: &Card) -> Result<Element, ParseError> {
        let nodes = self.nodes(card, 2)?;
        let mut ftj: Option<FtjCard> = None;
        let mut fields: Vec<(String, f64, usize, usize)> = Vec::new();
        let mut idx = 3;
        while idx < card.tokens.len() {
            let key = &card.tokens[idx];
            let keyname = key.text.to_ascii_lowercase();
            self.expect_eq(card, idx + 1)?;
            if keyname == "variant" {
                let vtok = self.token(card, idx + 2, "variant name")?;
                let variant = vtok.text.parse().map_err(|_| {
                    ParseError::new(
                        vtok.line,
                        vtok.col,
                        format!("unknown device variant `{}`", vtok.text),
                    )
                })?;
                ftj = Some(FtjCard::variant(variant));
            } else {
                let value = self.number(card, idx + 2, &format!("{keyname} value"))?;
                fields.push((keyname, value, key.line, key.col));
            }
            idx += 3;
        }
        let head = &card.tokens[0];
        let mut ftj = ftj.ok_or_else(|| {
            ParseError::new(head.line, head.col, "FTJ card requires VARIANT=A|B|C")
        })?;
        for (key, value, line, col) in fields {
            match key.as_str() {
                "p0" => {
                    if !(-1.0..=1.0).contains(&value) {
                        return Err(ParseError::new(line, col, "P0 must be in [-1, 1]"));
                    }
                    ftj.p0 = value;
                }
                "area" => ftj.area = Some(value),
                "scale" => ftj.scale = value,
                "n_domains" => {
                    if value < 1.0 || value.fract() != 0.0 {
                        return Err(ParseError::new(line, col, "N_DOMAINS must be an integer >= 1"));
                    }
                    ftj.n_domains = Some(value as usize);
                }
                "switching" => ftj.switching = value != 0.0,
                "tunneling" => ftj.tunneling = value != 0.0,
                other => {
                    return Err(ParseError::new(
                        line,
                        col,
                        format!("unknown FTJ field `{other}`"),
                    ));
                }
            }
        }
        Ok(Element {
            name: head.text.to_ascii_lowercase(),
            nodes,
            kind: ElementKind::Ftj(ftj),
        })
    }

    fn parse_vsource(&mut self, card: &Card) -> Result<Element, ParseError> {
        let nodes = self.nodes(card, 2)?;
        let spec = self.token(card, 3, "source value or waveform")?;
        let upper = spec.text.to_ascii_uppercase();
        let stimulus = match upper.as_str() {
            "DC" => Stimulus::Dc(self.number(card, 4, "DC value")?),
            "PWL" => {
                let mut points = Vec::new();
                let mut idx = 4;
                while idx < card.tokens.len() {
                    let t = self.number(card, idx, "PWL time")?;
                    let v = self.number(card, idx + 1, "PWL value")?;
                    if let Some(&(t_prev, _)) = points.last() {
                        if t <= t_prev {
                            let tok = &card.tokens[idx];
                            return Err(ParseError::new(
                                tok.line,
                                tok.col,
                                "PWL times must be strictly increasing",
                            ));
                        }
                    }
                    points.push((t, v));
                    idx += 2;
                }
                if points.is_empty() {
                    return Err(ParseError::new(spec.line, spec.col, "PWL needs at least one point"));
                }
                Stimulus::Pwl(points)
            }
            "PULSE" => {
                let v0 = self.number(card, 4, "PULSE v0")?;
                let v1 = self.number(card, 5, "PULSE v1")?;
                let delay = self.number(card, 6, "PULSE delay")?;
                let rise = self.number(card, 7, "PULSE rise")?;
                let width = self.number(card, 8, "PULSE width")?;
                let fall = self.number(card, 9, "PULSE fall")?;
                let period = self.number(card, 10, "PULSE period")?;
                self.expect_end(card, 11)?;
                if rise < 0.0 || width < 0.0 || fall < 0.0 || delay < 0.0 || period < 0.0 {
                    return Err(ParseError::new(
                        spec.line,
                        spec.col,
                        "PULSE times must be >= 0",
                    ));
                }
                Stimulus::Pulse {
                    v0,
                    v1,
                    delay,
                    rise,
                    width,
                    fall,
                    period,
                }
            }
            "TRIANGLE" => {
                let amplitude = self.number(card, 4, "TRIANGLE amplitude")?;
                let frequency = self.number(card, 5, "TRIANGLE frequency")?;
                let cycles = self.number(card, 6, "TRIANGLE cycles")?;
                if !(frequency > 0.0) {
                    return Err(ParseError::new(
                        spec.line,
                        spec.col,
                        "TRIANGLE frequency must be > 0",
                    ));
                }
                if cycles < 1.0 || cycles.fract() != 0.0 {
                    return Err(ParseError::new(
                        spec.line,
                        spec.col,
                        "TRIANGLE cycles must be an integer >= 1",
                    ));
                }
                let mut bipolar = false;
                if let Some(tok) = card.tokens.get(7) {
                    match tok.text.to_ascii_uppercase().as_str() {
                        "BIPOLAR" => bipolar = true,
                        "UNIPOLAR" => bipolar = false,
                        other => {
                            return Err(ParseError::new(
                                tok.line,
                                tok.col,
                                format!("unknown TRIANGLE flag `{other}`"),
                            ));
                        }
                    }
                    self.expect_end(card, 8)?;
                }
                Stimulus::Triangle {
                    amplitude,
                    frequency,
                    cycles: cycles as u32,
                    bipolar,
                }
            }
            _ => {
                // Bare number means DC.
                let v = parse_value(&spec.text).ok_or_else(|| {
                    ParseError::new(
                        spec.line,
                        spec.col,
                        format!("invalid source specification `{}`", spec.text),
                    )
                })?;
                self.expect_end(card, 4)?;
                Stimulus::Dc(v)
            }
        };
        Ok(Element {
            name: card.tokens[0].text.to_ascii_lowercase(),
            nodes,
            kind: ElementKind::Vsource(stimulus),
        })
    }

    fn parse_directive(&mut self, card: &Card) -> Result<(), ParseError> {
        let head = &card.tokens[0];
        match head.text.to_ascii_lowercase().as_str() {
            ".model" => {
                let name = self.token(card, 1, "model name")?.text.to_ascii_lowercase();
                let kind_tok = self.token(card, 2, "model type (nmos|pmos)")?;
                let polarity = match kind_tok.text.to_ascii_lowercase().as_str() {
                    "nmos" => Polarity::N,
                    "pmos" => Polarity::P,
                    other => {
                        return Err(ParseError::new(
                            kind_tok.line,
                            kind_tok.col,
                            format!("unknown model type `{other}`"),
                        ));
                    }
                };
                let mut model = MosfetModel {
                    polarity,
                    v_t: 0.5,
                    beta: 1e-4,
                    n_slope: 1.3,
                    u_t: UT_300K,
                };
                let mut idx = 3;
                while idx < card.tokens.len() {
                    let key = &card.tokens[idx];
                    let keyname = key.text.to_ascii_lowercase();
                    self.expect_eq(card, idx + 1)?;
                    let value = self.number(card, idx + 2, &format!("{keyname} value"))?;
                    match keyname.as_str() {
                        "vt" => model.v_t = value,
                        "beta" => model.beta = value,
                        "n" => model.n_slope = value,
                        "ut" => model.u_t = value,
                        other => {
                            return Err(ParseError::new(
                                key.line,
                                key.col,
                                format!("unknown model parameter `{other}`"),
                            ));
                        }
                    }
                    idx += 3;
                }
                if self.netlist.models.insert(name.clone(), model).is_some() {
                    return Err(ParseError::new(
                        head.line,
                        head.col,
                        format!("duplicate model `{name}`"),
                    ));
                }
                Ok(())
            }
            ".tran" => {
                let tstep = self.number(card, 1, "tran tstep")?;
                let tstop = self.number(card, 2, "tran tstop")?;
                self.expect_end(card, 3)?;
                if !(tstep > 0.0) || !(tstop > 0.0) {
                    return Err(ParseError::new(head.line, head.col, "tran times must be > 0"));
                }
                self.netlist
                    .analyses
                    .push(AnalysisDirective::Tran { tstep, tstop });
                Ok(())
            }
            ".dc" => {
                let source = self.token(card, 1, "swept source")?.text.to_ascii_lowercase();
                let start = self.number(card, 2, "dc start")?;
                let stop = self.number(card, 3, "dc stop")?;
                let step = self.number(card, 4, "dc step")?;
                self.expect_end(card, 5)?;
                if !(step > 0.0) {
                    return Err(ParseError::new(head.line, head.col, "dc step must be > 0"));
                }
                self.netlist.analyses.push(AnalysisDirective::DcSweep {
                    source,
                    start,
                    stop,
                    step,
                });
                Ok(())
            }
            other => Err(ParseError::new(
                head.line,
                head.col,
                format!("unknown directive `{other}`"),
            )),
        }
    }

    fn expect_eq(&self, card: &Card, idx: usize) -> Result<(), ParseError> {
        let tok = self.token(card, idx, "`=`")?;
        if tok.text == "=" {
            Ok(())
        } else {
            Err(ParseError::new(tok.line, tok.col, "expected `=`"))
        }
    }

    fn expect_end(&self, card: &Card, idx: usize) -> Result<(), ParseError> {
        match card.tokens.get(idx) {
            None => Ok(()),
            Some(tok) => Err(ParseError::new(
                tok.line,
                tok.col,
                format!("unexpected trailing token `{}`", tok.text),
            )),
        }
    }

    fn resolve_models(&mut self) -> Result<(), ParseError> {
        let models: &BTreeMap<String, MosfetModel> = &self.netlist.models;
        for (name, line, col) in &self.model_refs {
            if !models.contains_key(name) {
                return Err(ParseError::new(
                    *line,
                    *col,
                    format!("unresolved model `{name}`"),
                ));
            }
        }
        Ok(())
    }
}
