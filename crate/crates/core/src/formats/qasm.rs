//! A small OpenQASM 2.0 subset: one `qreg`, any number of `creg`s, the
//! standard one-qubit gates, `cx`, `swap`, `measure` and `barrier`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, ClassicalRegister, Clbit, Gate, LogicalQubit};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub column: usize,
    pub kind: QasmErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QasmErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("unsupported statement `{0}`")]
    Unsupported(String),
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("index {index} out of range for register `{register}` of size {size}")]
    IndexOutOfRange {
        register: String,
        index: usize,
        size: usize,
    },
    #[error("only one quantum register is supported")]
    MultipleQregs,
    #[error("no quantum register declared")]
    NoQreg,
    #[error("`{gate}` takes {expected} parameter(s), got {found}")]
    ParamCount {
        gate: String,
        expected: usize,
        found: usize,
    },
    #[error("`{gate}` takes {expected} qubit argument(s), got {found}")]
    ArgCount {
        gate: String,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Keep `swap` statements as SWAP gates instead of expanding them into
    /// three CNOTs. Needed to read back routed output in swap form.
    pub keep_swaps: bool,
}

/// How inserted SWAPs are written.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EmitForm {
    Swap,
    #[default]
    Decomposed,
}

impl FromStr for EmitForm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "swap" => Ok(EmitForm::Swap),
            "decomposed" => Ok(EmitForm::Decomposed),
            other => Err(format!("unknown output form `{other}` (expected swap or decomposed)")),
        }
    }
}

impl fmt::Display for EmitForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmitForm::Swap => "swap",
            EmitForm::Decomposed => "decomposed",
        })
    }
}

fn single_qubit_arity(name: &str) -> Option<usize> {
    Some(match name {
        "h" | "x" | "y" | "z" | "s" | "sdg" | "t" | "tdg" | "id" => 0,
        "rx" | "ry" | "rz" | "u1" => 1,
        "u2" => 2,
        "u3" | "U" => 3,
        _ => return None,
    })
}

/// Parse with `swap` expanded into three CNOTs.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    parse_qasm_with(text, ParseOptions::default())
}

pub fn parse_qasm_with(text: &str, options: ParseOptions) -> Result<Circuit, QasmError> {
    Parser::new(text, options).program()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
    options: ParseOptions,
    qreg: Option<(String, usize)>,
    cregs: Vec<ClassicalRegister>,
    gates: Vec<Gate>,
}

enum Arg {
    Bit(usize),
    Register(usize),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, options: ParseOptions) -> Self {
        Parser {
            src,
            pos: 0,
            line: 1,
            column: 1,
            options,
            qreg: None,
            cregs: Vec::new(),
            gates: Vec::new(),
        }
    }

    fn error_at(&self, (line, column): (usize, usize), kind: QasmErrorKind) -> QasmError {
        QasmError { line, column, kind }
    }

    fn error(&self, kind: QasmErrorKind) -> QasmError {
        self.error_at(self.here(), kind)
    }

    fn syntax(&self, message: impl Into<String>) -> QasmError {
        self.error(QasmErrorKind::Syntax(message.into()))
    }

    fn here(&self) -> (usize, usize) {
        (self.line, self.column)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('/') if self.src[self.pos..].starts_with("//") => {
                    while self.peek().is_some_and(|c| c != '\n') {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_trivia();
        self.pos == self.src.len()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_trivia();
        if self.src[self.pos..].starts_with(token) {
            for _ in token.chars() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), QasmError> {
        if self.eat(token) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |c| format!("`{c}`"));
            Err(self.syntax(format!("expected `{token}`, found {found}")))
        }
    }

    fn ident(&mut self) -> Result<String, QasmError> {
        self.skip_trivia();
        let start = self.pos;
        while let Some(c) = self.peek() {
            let ok = if self.pos == start {
                c.is_ascii_alphabetic() || c == '_'
            } else {
                c.is_ascii_alphanumeric() || c == '_'
            };
            if !ok {
                break;
            }
            self.bump();
        }
        if self.pos == start {
            return Err(self.syntax("expected an identifier"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn integer(&mut self) -> Result<usize, QasmError> {
        self.skip_trivia();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.syntax("expected a non-negative integer"))
    }

    /// Raw text of a parenthesised, comma-separated parameter list.
    fn params(&mut self) -> Result<Vec<String>, QasmError> {
        if !self.eat("(") {
            return Ok(Vec::new());
        }
        let mut params = Vec::new();
        let mut depth = 0usize;
        let mut start = self.pos;
        loop {
            match self.peek() {
                None | Some(';') => return Err(self.syntax("unterminated parameter list")),
                Some('(') => depth += 1,
                Some(')') if depth == 0 => {
                    params.push(self.src[start..self.pos].trim().to_string());
                    self.bump();
                    break;
                }
                Some(')') => depth -= 1,
                Some(',') if depth == 0 => {
                    params.push(self.src[start..self.pos].trim().to_string());
                    self.bump();
                    start = self.pos;
                    continue;
                }
                _ => {}
            }
            self.bump();
        }
        if params.iter().any(|p| p.is_empty()) {
            return Err(self.syntax("empty parameter"));
        }
        Ok(params)
    }

    fn program(mut self) -> Result<Circuit, QasmError> {
        if !self.eat("OPENQASM") {
            return Err(self.syntax("expected `OPENQASM 2.0;` header"));
        }
        self.skip_trivia();
        let at = self.here();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.bump();
        }
        if &self.src[start..self.pos] != "2.0" {
            return Err(self.error_at(at, QasmErrorKind::Syntax("only OpenQASM 2.0 is supported".into())));
        }
        self.expect(";")?;

        while !self.at_end() {
            self.statement()?;
        }
        let Some((_, size)) = self.qreg else {
            return Err(self.error(QasmErrorKind::NoQreg));
        };
        Circuit::with_cregs(size, self.cregs, self.gates).map_err(|e| QasmError {
            line: 0,
            column: 0,
            kind: e.into(),
        })
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let at = self.here();
        let word = self.ident()?;
        match word.as_str() {
            "include" => {
                self.skip_trivia();
                if self.bump() != Some('"') {
                    return Err(self.syntax("expected a quoted file name"));
                }
                while self.peek().is_some_and(|c| c != '"' && c != '\n') {
                    self.bump();
                }
                if self.bump() != Some('"') {
                    return Err(self.syntax("unterminated string"));
                }
            }
            "qreg" => {
                let (name, size) = self.declaration()?;
                if self.qreg.is_some() {
                    return Err(self.error_at(at, QasmErrorKind::MultipleQregs));
                }
                self.qreg = Some((name, size));
            }
            "creg" => {
                let (name, size) = self.declaration()?;
                if self.cregs.iter().any(|r| r.name == name) {
                    return Err(self.error_at(at, QasmErrorKind::Syntax(format!("register `{name}` declared twice"))));
                }
                self.cregs.push(ClassicalRegister { name, size });
            }
            "barrier" => {
                while self.peek().is_some_and(|c| c != ';') {
                    self.bump();
                }
            }
            "measure" => self.measure()?,
            "gate" | "opaque" | "if" | "reset" => {
                return Err(self.error_at(at, QasmErrorKind::Unsupported(word)));
            }
            _ => self.application(at, word)?,
        }
        self.expect(";")
    }

    fn declaration(&mut self) -> Result<(String, usize), QasmError> {
        let name = self.ident()?;
        self.expect("[")?;
        let size = self.integer()?;
        if size == 0 {
            return Err(self.syntax("register size must be positive"));
        }
        self.expect("]")?;
        Ok((name, size))
    }

    fn qubit_arg(&mut self) -> Result<Arg, QasmError> {
        let at = self.here();
        let name = self.ident()?;
        let Some((qname, size)) = self.qreg.clone() else {
            return Err(self.error_at(at, QasmErrorKind::NoQreg));
        };
        if name != qname {
            return Err(self.error_at(at, QasmErrorKind::UnknownRegister(name)));
        }
        if !self.eat("[") {
            return Ok(Arg::Register(size));
        }
        let at = self.here();
        let index = self.integer()?;
        self.expect("]")?;
        if index >= size {
            return Err(self.error_at(
                at,
                QasmErrorKind::IndexOutOfRange {
                    register: name,
                    index,
                    size,
                },
            ));
        }
        Ok(Arg::Bit(index))
    }

    fn application(&mut self, at: (usize, usize), name: String) -> Result<(), QasmError> {
        let params = self.params()?;
        let mut args = vec![self.qubit_arg()?];
        while self.eat(",") {
            args.push(self.qubit_arg()?);
        }

        let two_qubit = matches!(name.as_str(), "cx" | "CX" | "swap");
        let expected_params = if two_qubit {
            0
        } else {
            single_qubit_arity(&name).ok_or_else(|| self.error_at(at, QasmErrorKind::UnknownGate(name.clone())))?
        };
        if params.len() != expected_params {
            return Err(self.error_at(
                at,
                QasmErrorKind::ParamCount {
                    gate: name,
                    expected: expected_params,
                    found: params.len(),
                },
            ));
        }
        let expected_args = if two_qubit { 2 } else { 1 };
        if args.len() != expected_args {
            return Err(self.error_at(
                at,
                QasmErrorKind::ArgCount {
                    gate: name,
                    expected: expected_args,
                    found: args.len(),
                },
            ));
        }

        if !two_qubit {
            let params: Vec<&str> = params.iter().map(String::as_str).collect();
            match args[0] {
                Arg::Bit(q) => self.gates.push(Gate::single_with_params(&name, &params, q)),
                Arg::Register(size) => {
                    for q in 0..size {
                        self.gates.push(Gate::single_with_params(&name, &params, q));
                    }
                }
            }
            return Ok(());
        }

        let (Arg::Bit(a), Arg::Bit(b)) = (&args[0], &args[1]) else {
            return Err(self.error_at(
                at,
                QasmErrorKind::Syntax(format!("`{name}` needs indexed qubit arguments")),
            ));
        };
        let (a, b) = (*a, *b);
        if a == b {
            return Err(self.error_at(
                at,
                QasmErrorKind::Circuit(CircuitError::RepeatedOperand {
                    gate: self.gates.len(),
                    qubit: a,
                }),
            ));
        }
        if name == "swap" {
            if self.options.keep_swaps {
                self.gates.push(Gate::swap(a, b));
            } else {
                self.gates
                    .extend(crate::circuit::swap_as_cx(LogicalQubit(a), LogicalQubit(b)));
            }
        } else {
            self.gates.push(Gate::cx(a, b));
        }
        Ok(())
    }

    fn measure(&mut self) -> Result<(), QasmError> {
        let qubit = self.qubit_arg()?;
        self.expect("->")?;
        let at = self.here();
        let name = self.ident()?;
        let Some(register) = self.cregs.iter().position(|r| r.name == name) else {
            return Err(self.error_at(at, QasmErrorKind::UnknownRegister(name)));
        };
        let size = self.cregs[register].size;
        let bit = if self.eat("[") {
            let at = self.here();
            let index = self.integer()?;
            self.expect("]")?;
            if index >= size {
                return Err(self.error_at(
                    at,
                    QasmErrorKind::IndexOutOfRange {
                        register: name,
                        index,
                        size,
                    },
                ));
            }
            Some(index)
        } else {
            None
        };
        match (qubit, bit) {
            (Arg::Bit(q), Some(c)) => self.gates.push(Gate::measure(q, register, c)),
            (Arg::Register(qsize), None) if qsize == size => {
                for q in 0..qsize {
                    self.gates.push(Gate::measure(q, register, q));
                }
            }
            _ => {
                return Err(self.error_at(
                    at,
                    QasmErrorKind::Syntax("measure needs matching qubit and bit arguments".into()),
                ))
            }
        }
        Ok(())
    }
}

/// Serialise `circuit`. In decomposed form every SWAP becomes three CNOTs.
pub fn write_qasm(circuit: &Circuit, form: EmitForm) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", circuit.num_qubits()).unwrap();
    for reg in circuit.cregs() {
        writeln!(out, "creg {}[{}];", reg.name, reg.size).unwrap();
    }
    for gate in circuit.gates() {
        match gate {
            Gate::Cx { control, target } => {
                writeln!(out, "cx q[{}],q[{}];", control.index(), target.index()).unwrap()
            }
            Gate::Swap { a, b } => match form {
                EmitForm::Swap => writeln!(out, "swap q[{}],q[{}];", a.index(), b.index()).unwrap(),
                EmitForm::Decomposed => {
                    for cx in crate::circuit::swap_as_cx(*a, *b) {
                        let (c, t) = cx.pair().unwrap();
                        writeln!(out, "cx q[{}],q[{}];", c.index(), t.index()).unwrap();
                    }
                }
            },
            Gate::Single { name, params, qubit } => {
                if params.is_empty() {
                    writeln!(out, "{name} q[{}];", qubit.index()).unwrap();
                } else {
                    writeln!(out, "{name}({}) q[{}];", params.join(","), qubit.index()).unwrap();
                }
            }
            Gate::Measure { qubit, clbit } => {
                let Clbit { register, index } = *clbit;
                let name = &circuit.cregs()[register].name;
                writeln!(out, "measure q[{}] -> {name}[{index}];", qubit.index()).unwrap();
            }
        }
    }
    out
}
