//! Line-oriented text format for Hamiltonians.
//!
//! ```text
//! spin 4
//! -1 Z@0 Z@1
//! 0.5 X@2
//! 2
//! ```
//!
//! ```text
//! fermion 4 sector=2
//! 4 +0 +1 -1 -0
//! -1,0.5 +0 -2
//! ```
//!
//! One term per line after the header: the coefficient, then the factors.
//! Spin factors are `axis@qubit`; fermionic operators are `+m` (creation)
//! and `-m` (annihilation). Complex coefficients print as `re,im` with the
//! imaginary part omitted when zero. Floats use the shortest representation
//! that round-trips, so serialize-parse-serialize is byte-identical.

use super::{
    AlgebraError, FermionHamiltonian, FermionOp, FermionTerm, PauliAxis, PauliString,
    SpinHamiltonian,
};
use num_complex::Complex64;
use std::fmt::Write as _;

impl SpinHamiltonian {
    pub fn to_text(&self) -> String {
        let mut out = format!("spin {}\n", self.nqubits());
        for term in self.terms() {
            write!(out, "{}", term.coefficient()).unwrap();
            for &(q, axis) in term.factors() {
                write!(out, " {}@{}", axis.label(), q).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, AlgebraError> {
        let mut lines = numbered_lines(text);
        let (lineno, header) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
        let nqubits = parse_header(lineno, header, "spin")?;

        let mut terms = Vec::new();
        for (lineno, line) in lines {
            let mut tokens = line.split_whitespace();
            let coeff_tok = tokens
                .next()
                .ok_or_else(|| parse_err(lineno, "missing coefficient"))?;
            let coefficient: f64 = coeff_tok
                .parse()
                .map_err(|_| parse_err(lineno, &format!("bad coefficient `{coeff_tok}`")))?;
            let mut factors = Vec::new();
            for tok in tokens {
                let (axis, qubit) = tok
                    .split_once('@')
                    .ok_or_else(|| parse_err(lineno, &format!("bad factor `{tok}`")))?;
                let axis = axis
                    .chars()
                    .next()
                    .and_then(PauliAxis::from_label)
                    .filter(|_| axis.len() == 1)
                    .ok_or_else(|| parse_err(lineno, &format!("bad axis `{axis}`")))?;
                let qubit: usize = qubit
                    .parse()
                    .map_err(|_| parse_err(lineno, &format!("bad qubit `{qubit}`")))?;
                factors.push((qubit, axis));
            }
            terms.push(PauliString::new(factors, coefficient));
        }
        SpinHamiltonian::new(nqubits, terms)
    }
}

impl FermionHamiltonian {
    pub fn to_text(&self) -> String {
        let mut out = format!("fermion {}", self.nmodes());
        if let Some(n) = self.sector() {
            write!(out, " sector={n}").unwrap();
        }
        out.push('\n');
        for term in self.terms() {
            let c = term.coefficient();
            if c.im == 0.0 {
                write!(out, "{}", c.re).unwrap();
            } else {
                write!(out, "{},{}", c.re, c.im).unwrap();
            }
            for op in term.operators() {
                write!(out, " {}{}", if op.dagger { '+' } else { '-' }, op.mode).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, AlgebraError> {
        let mut lines = numbered_lines(text);
        let (lineno, header) = lines.next().ok_or_else(|| parse_err(0, "empty input"))?;
        let mut parts = header.split_whitespace();
        match parts.next() {
            Some("fermion") => {}
            other => {
                return Err(parse_err(
                    lineno,
                    &format!("expected `fermion`, got {other:?}"),
                ))
            }
        }
        let nmodes: usize = parts
            .next()
            .ok_or_else(|| parse_err(lineno, "missing mode count"))?
            .parse()
            .map_err(|_| parse_err(lineno, "bad mode count"))?;
        let sector = match parts.next() {
            None => None,
            Some(tok) => {
                let n = tok
                    .strip_prefix("sector=")
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(lineno, &format!("bad sector `{tok}`")))?;
                Some(n)
            }
        };

        let mut terms = Vec::new();
        for (lineno, line) in lines {
            let mut tokens = line.split_whitespace();
            let coeff_tok = tokens
                .next()
                .ok_or_else(|| parse_err(lineno, "missing coefficient"))?;
            let coefficient = parse_complex(lineno, coeff_tok)?;
            let mut operators = Vec::new();
            for tok in tokens {
                let (dagger, mode) = match tok.split_at(1) {
                    ("+", m) => (true, m),
                    ("-", m) => (false, m),
                    _ => return Err(parse_err(lineno, &format!("bad operator `{tok}`"))),
                };
                let mode: usize = mode
                    .parse()
                    .map_err(|_| parse_err(lineno, &format!("bad mode `{mode}`")))?;
                operators.push(FermionOp { mode, dagger });
            }
            terms.push(FermionTerm::new(operators, coefficient));
        }
        FermionHamiltonian::new(nmodes, terms, sector)
    }
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_header(lineno: usize, header: &str, tag: &str) -> Result<usize, AlgebraError> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(parse_err(lineno, &format!("expected `{tag}` header")));
    }
    parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(lineno, "bad size in header"))
}

fn parse_complex(lineno: usize, tok: &str) -> Result<Complex64, AlgebraError> {
    let (re, im) = match tok.split_once(',') {
        Some((re, im)) => (re, Some(im)),
        None => (tok, None),
    };
    let re: f64 = re
        .parse()
        .map_err(|_| parse_err(lineno, &format!("bad coefficient `{tok}`")))?;
    let im: f64 = match im {
        Some(s) => s
            .parse()
            .map_err(|_| parse_err(lineno, &format!("bad coefficient `{tok}`")))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

fn parse_err(line: usize, message: &str) -> AlgebraError {
    AlgebraError::Parse {
        line,
        message: message.to_string(),
    }
}
