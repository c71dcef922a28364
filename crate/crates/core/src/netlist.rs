// SPDX-License-Identifier: Apache-2.0

//! ISCAS-85 `.bench` ingestion and a reference Boolean evaluator.
//!
//! The accepted dialect is the one found in circulating benchmark files:
//!
//! ```text
//! # comment
//! INPUT(G1)
//! OUTPUT(G22)
//! G10 = NAND(G1, G3)
//! ```
//!
//! Function names are case-insensitive and `BUFF` is accepted as `BUF`.
//! Sequential elements (`DFF`) are rejected.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Upper bound on gate arity accepted by the parser.
pub const MAX_ARITY: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown gate function `{name}`")]
    UnknownFunction { line: usize, name: String },
    #[error("undefined signal `{name}` (referenced on line {line})")]
    UndefinedSignal { name: String, line: usize },
    #[error("line {line}: duplicate definition of `{name}`")]
    DuplicateDefinition { name: String, line: usize },
    #[error("combinational cycle through `{signal}`")]
    Cycle { signal: String },
    #[error("line {line}: {func} gate `{gate}` has {count} fanins")]
    Arity {
        gate: String,
        func: GateFn,
        count: usize,
        line: usize,
    },
    #[error("input vector has {got} bits, netlist has {expected} inputs")]
    WidthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateFn {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
}

impl GateFn {
    pub const ALL: [GateFn; 8] = [
        GateFn::And,
        GateFn::Nand,
        GateFn::Or,
        GateFn::Nor,
        GateFn::Xor,
        GateFn::Xnor,
        GateFn::Not,
        GateFn::Buf,
    ];

    pub fn is_unary(self) -> bool {
        matches!(self, GateFn::Not | GateFn::Buf)
    }

    /// Function with the output inversion removed (NAND -> AND, ...).
    pub fn base(self) -> (GateFn, bool) {
        match self {
            GateFn::Nand => (GateFn::And, true),
            GateFn::Nor => (GateFn::Or, true),
            GateFn::Xnor => (GateFn::Xor, true),
            GateFn::Not => (GateFn::Buf, true),
            f => (f, false),
        }
    }

    /// Evaluates the function; multi-input XOR/XNOR use parity semantics.
    pub fn eval(self, inputs: impl IntoIterator<Item = bool>) -> bool {
        let (base, invert) = self.base();
        let mut it = inputs.into_iter();
        let v = match base {
            GateFn::And => it.all(|b| b),
            GateFn::Or => it.any(|b| b),
            GateFn::Xor => it.fold(false, |acc, b| acc ^ b),
            GateFn::Buf => it.next().unwrap_or(false),
            _ => unreachable!(),
        };
        v ^ invert
    }

    pub fn name(self) -> &'static str {
        match self {
            GateFn::And => "AND",
            GateFn::Nand => "NAND",
            GateFn::Or => "OR",
            GateFn::Nor => "NOR",
            GateFn::Xor => "XOR",
            GateFn::Xnor => "XNOR",
            GateFn::Not => "NOT",
            GateFn::Buf => "BUF",
        }
    }
}

impl fmt::Display for GateFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateFn {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "AND" => GateFn::And,
            "NAND" => GateFn::Nand,
            "OR" => GateFn::Or,
            "NOR" => GateFn::Nor,
            "XOR" => GateFn::Xor,
            "XNOR" => GateFn::Xnor,
            "NOT" | "INV" => GateFn::Not,
            "BUF" | "BUFF" => GateFn::Buf,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub func: GateFn,
    pub fanins: Vec<String>,
}

/// Reference to a driver: a primary input or a gate, by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Signal {
    Input(usize),
    Gate(usize),
}

/// A validated combinational netlist. Construct with [`parse_bench`] or
/// [`Netlist::new`]; both enforce the DAG and driver invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    name: String,
    inputs: Vec<String>,
    outputs: Vec<String>,
    gates: Vec<Gate>,
    index: HashMap<String, Signal>,
    fanin_refs: Vec<Vec<Signal>>,
    topo: Vec<usize>,
}

impl Netlist {
    /// Builds and validates a netlist from its parts. Line numbers in errors
    /// are 0 for programmatic construction.
    pub fn new(
        name: impl Into<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        gates: Vec<Gate>,
    ) -> Result<Self, NetlistError> {
        let lines = Lines {
            inputs: vec![0; inputs.len()],
            outputs: vec![0; outputs.len()],
            gates: vec![0; gates.len()],
        };
        Self::build(name.into(), inputs, outputs, gates, &lines)
    }

    fn build(
        name: String,
        inputs: Vec<String>,
        outputs: Vec<String>,
        gates: Vec<Gate>,
        lines: &Lines,
    ) -> Result<Self, NetlistError> {
        let mut index = HashMap::with_capacity(inputs.len() + gates.len());
        for (i, n) in inputs.iter().enumerate() {
            if index.insert(n.clone(), Signal::Input(i)).is_some() {
                return Err(NetlistError::DuplicateDefinition {
                    name: n.clone(),
                    line: lines.inputs[i],
                });
            }
        }
        for (i, g) in gates.iter().enumerate() {
            let count = g.fanins.len();
            let bad = count == 0 || count > MAX_ARITY || (g.func.is_unary() && count != 1);
            if bad {
                return Err(NetlistError::Arity {
                    gate: g.id.clone(),
                    func: g.func,
                    count,
                    line: lines.gates[i],
                });
            }
            if index.insert(g.id.clone(), Signal::Gate(i)).is_some() {
                return Err(NetlistError::DuplicateDefinition {
                    name: g.id.clone(),
                    line: lines.gates[i],
                });
            }
        }
        let mut fanin_refs = Vec::with_capacity(gates.len());
        for (i, g) in gates.iter().enumerate() {
            let refs = g
                .fanins
                .iter()
                .map(|f| {
                    index
                        .get(f)
                        .copied()
                        .ok_or_else(|| NetlistError::UndefinedSignal {
                            name: f.clone(),
                            line: lines.gates[i],
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            fanin_refs.push(refs);
        }
        let mut seen = HashSet::new();
        for (i, o) in outputs.iter().enumerate() {
            if !index.contains_key(o) {
                return Err(NetlistError::UndefinedSignal {
                    name: o.clone(),
                    line: lines.outputs[i],
                });
            }
            if !seen.insert(o) {
                return Err(NetlistError::DuplicateDefinition {
                    name: o.clone(),
                    line: lines.outputs[i],
                });
            }
        }
        let topo = topo_sort(&gates, &fanin_refs)?;
        Ok(Netlist {
            name,
            inputs,
            outputs,
            gates,
            index,
            fanin_refs,
            topo,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn signal(&self, name: &str) -> Option<Signal> {
        self.index.get(name).copied()
    }

    pub fn fanin_signals(&self, gate: usize) -> &[Signal] {
        &self.fanin_refs[gate]
    }

    /// Gate indices in dependency order, ties broken by declaration order.
    pub fn topo_indices(&self) -> &[usize] {
        &self.topo
    }

    /// Gates in dependency order, ties broken by declaration order.
    pub fn topo_order(&self) -> Vec<&Gate> {
        self.topo.iter().map(|&i| &self.gates[i]).collect()
    }

    /// Evaluates every gate for one input vector; returns gate values
    /// indexed by gate position.
    pub fn eval_gates(&self, input: &[bool]) -> Result<Vec<bool>, NetlistError> {
        if input.len() != self.inputs.len() {
            return Err(NetlistError::WidthMismatch {
                expected: self.inputs.len(),
                got: input.len(),
            });
        }
        let mut values = vec![false; self.gates.len()];
        for &g in &self.topo {
            let v = self.gates[g].func.eval(self.fanin_refs[g].iter().map(|s| match *s {
                Signal::Input(i) => input[i],
                Signal::Gate(j) => values[j],
            }));
            values[g] = v;
        }
        Ok(values)
    }

    /// Output vector in declared output order.
    pub fn eval(&self, input: &[bool]) -> Result<Vec<bool>, NetlistError> {
        let values = self.eval_gates(input)?;
        Ok(self
            .outputs
            .iter()
            .map(|o| match self.index[o] {
                Signal::Input(i) => input[i],
                Signal::Gate(j) => values[j],
            })
            .collect())
    }

    /// Normalized bench text: header comment, inputs, outputs, then gates in
    /// declaration order with canonical spelling and spacing.
    pub fn to_bench(&self) -> String {
        let mut s = format!("# {}\n", self.name);
        for i in &self.inputs {
            s.push_str(&format!("INPUT({i})\n"));
        }
        for o in &self.outputs {
            s.push_str(&format!("OUTPUT({o})\n"));
        }
        for g in &self.gates {
            s.push_str(&format!("{} = {}({})\n", g.id, g.func, g.fanins.join(", ")));
        }
        s
    }
}

/// Free-function form of [`Netlist::topo_order`].
pub fn topo_order(netlist: &Netlist) -> Vec<&Gate> {
    netlist.topo_order()
}

/// Free-function form of [`Netlist::eval`].
pub fn eval_netlist(netlist: &Netlist, input: &[bool]) -> Result<Vec<bool>, NetlistError> {
    netlist.eval(input)
}

struct Lines {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    gates: Vec<usize>,
}

// Kahn's algorithm; the ready set is a min-heap on declaration index so
// ties resolve deterministically.
fn topo_sort(gates: &[Gate], fanins: &[Vec<Signal>]) -> Result<Vec<usize>, NetlistError> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    let n = gates.len();
    let mut pending = vec![0usize; n];
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (g, refs) in fanins.iter().enumerate() {
        for s in refs {
            if let Signal::Gate(p) = *s {
                pending[g] += 1;
                users[p].push(g);
            }
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&g| pending[g] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(g)) = ready.pop() {
        order.push(g);
        for &u in &users[g] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.push(Reverse(u));
            }
        }
    }
    if order.len() != n {
        let stuck = (0..n).find(|&g| pending[g] > 0).unwrap();
        return Err(NetlistError::Cycle {
            signal: gates[stuck].id.clone(),
        });
    }
    Ok(order)
}

/// Parses bench text. The netlist name is taken from the first comment line
/// if present, otherwise `"netlist"`.
pub fn parse_bench(text: &str) -> Result<Netlist, NetlistError> {
    parse_bench_named(text, None)
}

/// Parses bench text, overriding the netlist name (typically the file stem).
pub fn parse_bench_named(text: &str, name: Option<&str>) -> Result<Netlist, NetlistError> {
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut gates = Vec::new();
    let mut lines = Lines {
        inputs: Vec::new(),
        outputs: Vec::new(),
        gates: Vec::new(),
    };
    let mut header = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(raw[p + 1..].trim())),
            None => (raw, None),
        };
        if header.is_none() {
            if let Some(c) = comment.filter(|c| !c.is_empty()) {
                header = c.split_whitespace().next().map(str::to_owned);
            }
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let syntax = |msg: &str| NetlistError::Syntax {
            line,
            msg: msg.to_owned(),
        };

        if let Some((lhs, rhs)) = body.split_once('=') {
            let id = lhs.trim();
            if !is_ident(id) {
                return Err(syntax("expected signal name before `=`"));
            }
            let (func, args) = call(rhs.trim()).ok_or_else(|| syntax("expected FUNC(args)"))?;
            let func = func
                .parse::<GateFn>()
                .map_err(|_| NetlistError::UnknownFunction {
                    line,
                    name: func.to_owned(),
                })?;
            let fanins = split_args(args).ok_or_else(|| syntax("malformed argument list"))?;
            gates.push(Gate {
                id: id.to_owned(),
                func,
                fanins,
            });
            lines.gates.push(line);
        } else {
            let (kw, args) = call(body).ok_or_else(|| syntax("expected INPUT(..), OUTPUT(..) or assignment"))?;
            let args = split_args(args).ok_or_else(|| syntax("malformed argument list"))?;
            if args.len() != 1 {
                return Err(syntax("declaration takes exactly one signal"));
            }
            let sig = args.into_iter().next().unwrap();
            match kw.to_ascii_uppercase().as_str() {
                "INPUT" => {
                    inputs.push(sig);
                    lines.inputs.push(line);
                }
                "OUTPUT" => {
                    outputs.push(sig);
                    lines.outputs.push(line);
                }
                _ => return Err(syntax("unknown declaration")),
            }
        }
    }

    let name = name
        .map(str::to_owned)
        .or(header)
        .unwrap_or_else(|| "netlist".to_owned());
    Netlist::build(name, inputs, outputs, gates, &lines)
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '[' | ']' | '$'))
}

fn call(s: &str) -> Option<(&str, &str)> {
    let open = s.find('(')?;
    let inner = s[open + 1..].strip_suffix(')')?;
    let head = s[..open].trim();
    is_ident(head).then_some((head, inner))
}

fn split_args(s: &str) -> Option<Vec<String>> {
    s.split(',')
        .map(|a| {
            let a = a.trim();
            is_ident(a).then(|| a.to_owned())
        })
        .collect()
}
