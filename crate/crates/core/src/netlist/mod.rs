// SPDX-License-Identifier: Apache-2.0

//! Combinational gate netlists: a line-oriented text format, structural
//! validation, lowering to the {NOT, AND} basis, and evaluation over either
//! signal backend.
//!
//! ```text
//! # half adder
//! input a
//! input b
//! output sum
//! output carry
//! xor sum a b
//! and carry a b
//! ```

mod eval;
mod lower;
mod parse;
mod random;

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::gate::GateKind;

pub use eval::{evaluate, evaluate_with, parse_assignment, truth_table, Assignment, Evaluation, TruthRow, TruthTable, MAX_TRUTH_TABLE_INPUTS};
pub use lower::{lower_circuit, TEMP_PREFIX};
pub use parse::parse_netlist;
pub use random::random_circuit;
pub(crate) use eval::evaluate_signals;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: unknown gate kind `{kind}`")]
    UnknownGate { line: usize, kind: String },
    #[error("line {line}: `{kind}` gate driving `{wire}` takes {expected} input(s), found {found}")]
    Arity {
        line: usize,
        wire: String,
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: wire `{wire}` is already driven (line {first_line})")]
    MultiplyDriven {
        wire: String,
        line: usize,
        first_line: usize,
    },
    #[error("line {line}: output `{wire}` is never driven")]
    UndrivenOutput { wire: String, line: usize },
    #[error("line {line}: gate input `{wire}` is neither a declared input nor a gate output")]
    UndrivenWire { wire: String, line: usize },
    #[error("line {line}: combinational cycle through wire `{wire}`")]
    Cycle { wire: String, line: usize },
    #[error("line {line}: duplicate declaration of `{wire}` (first on line {first_line})")]
    DuplicateDeclaration {
        wire: String,
        line: usize,
        first_line: usize,
    },
    #[error("assignment: {0}")]
    Assignment(String),
    #[error("circuit has {found} inputs; truth tables are limited to {limit}")]
    TooManyInputs { found: usize, limit: usize },
}

/// One gate instance. `line` is the source line, or 0 for synthesized gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub output: String,
    pub inputs: Vec<String>,
    pub line: usize,
}

/// Declared port with the line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Port {
    pub name: String,
    pub line: usize,
}

/// A validated combinational circuit.
///
/// Gates keep their source order; `order` holds a topological schedule as
/// indices into `gates`.
#[derive(Debug, Clone)]
pub struct Circuit {
    inputs: Vec<String>,
    outputs: Vec<String>,
    gates: Vec<Gate>,
    order: Vec<usize>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        let strip = |gates: &[Gate]| {
            gates
                .iter()
                .map(|g| (g.kind, g.output.clone(), g.inputs.clone()))
                .collect::<Vec<_>>()
        };
        self.inputs == other.inputs
            && self.outputs == other.outputs
            && strip(&self.gates) == strip(&other.gates)
    }
}

impl Eq for Circuit {}

impl Circuit {
    /// Validate and build a circuit from ports and gates.
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, gates: Vec<Gate>) -> Result<Self, NetlistError> {
        let inputs = inputs.into_iter().map(|name| Port { name, line: 0 }).collect();
        let outputs = outputs.into_iter().map(|name| Port { name, line: 0 }).collect();
        Self::from_parts(inputs, outputs, gates)
    }

    pub(crate) fn from_parts(inputs: Vec<Port>, outputs: Vec<Port>, gates: Vec<Gate>) -> Result<Self, NetlistError> {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for port in &inputs {
            if let Some(&first_line) = seen.get(port.name.as_str()) {
                return Err(NetlistError::DuplicateDeclaration {
                    wire: port.name.clone(),
                    line: port.line,
                    first_line,
                });
            }
            seen.insert(&port.name, port.line);
        }
        let mut seen_out: HashMap<&str, usize> = HashMap::new();
        for port in &outputs {
            if let Some(&first_line) = seen_out.get(port.name.as_str()) {
                return Err(NetlistError::DuplicateDeclaration {
                    wire: port.name.clone(),
                    line: port.line,
                    first_line,
                });
            }
            seen_out.insert(&port.name, port.line);
        }

        // Each wire has exactly one driver: a declared input or one gate.
        let mut driver: HashMap<&str, Option<usize>> =
            inputs.iter().map(|p| (p.name.as_str(), None)).collect();
        let input_lines: HashMap<&str, usize> = inputs.iter().map(|p| (p.name.as_str(), p.line)).collect();
        for (i, gate) in gates.iter().enumerate() {
            if gate.inputs.len() != gate.kind.arity() {
                return Err(NetlistError::Arity {
                    line: gate.line,
                    wire: gate.output.clone(),
                    kind: gate.kind,
                    expected: gate.kind.arity(),
                    found: gate.inputs.len(),
                });
            }
            if let Some(prev) = driver.get(gate.output.as_str()) {
                let first_line = match prev {
                    Some(g) => gates[*g].line,
                    None => input_lines[gate.output.as_str()],
                };
                return Err(NetlistError::MultiplyDriven {
                    wire: gate.output.clone(),
                    line: gate.line,
                    first_line,
                });
            }
            driver.insert(&gate.output, Some(i));
        }
        for gate in &gates {
            for wire in &gate.inputs {
                if !driver.contains_key(wire.as_str()) {
                    return Err(NetlistError::UndrivenWire {
                        wire: wire.clone(),
                        line: gate.line,
                    });
                }
            }
        }
        for port in &outputs {
            if !driver.contains_key(port.name.as_str()) {
                return Err(NetlistError::UndrivenOutput {
                    wire: port.name.clone(),
                    line: port.line,
                });
            }
        }

        let order = topological_order(&gates, &driver)?;
        Ok(Circuit {
            inputs: inputs.into_iter().map(|p| p.name).collect(),
            outputs: outputs.into_iter().map(|p| p.name).collect(),
            gates,
            order,
        })
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

    /// Gates in an order where every gate follows its drivers.
    pub fn scheduled(&self) -> impl Iterator<Item = &Gate> {
        self.order.iter().map(|&i| &self.gates[i])
    }

    pub fn is_lowered(&self) -> bool {
        self.gates.iter().all(|g| g.kind.is_primitive())
    }

    /// Every wire name: inputs first, then gate outputs in schedule order.
    pub fn wires(&self) -> Vec<&str> {
        self.inputs
            .iter()
            .map(String::as_str)
            .chain(self.scheduled().map(|g| g.output.as_str()))
            .collect()
    }
}

/// Kahn's algorithm over gate indices; on failure reports a wire on a cycle.
fn topological_order(gates: &[Gate], driver: &HashMap<&str, Option<usize>>) -> Result<Vec<usize>, NetlistError> {
    let mut pending: Vec<usize> = vec![0; gates.len()];
    let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    for (i, gate) in gates.iter().enumerate() {
        for wire in &gate.inputs {
            if let Some(Some(src)) = driver.get(wire.as_str()) {
                pending[i] += 1;
                fanout[*src].push(i);
            }
        }
    }
    let mut ready: Vec<usize> = (0..gates.len()).rev().filter(|&i| pending[i] == 0).collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(i) = ready.pop() {
        order.push(i);
        for &j in fanout[i].iter().rev() {
            pending[j] -= 1;
            if pending[j] == 0 {
                ready.push(j);
            }
        }
    }
    if order.len() == gates.len() {
        return Ok(order);
    }
    let scheduled: HashSet<usize> = order.into_iter().collect();
    let stuck = (0..gates.len())
        .find(|i| !scheduled.contains(i))
        .expect("some gate is unscheduled");
    // Walk back through unscheduled drivers until a gate repeats: that gate
    // sits on a cycle rather than merely downstream of one.
    let mut visited = HashSet::new();
    let mut cur = stuck;
    while visited.insert(cur) {
        cur = gates[cur]
            .inputs
            .iter()
            .filter_map(|w| driver.get(w.as_str()).copied().flatten())
            .find(|src| !scheduled.contains(src))
            .expect("unscheduled gate has an unscheduled driver");
    }
    Err(NetlistError::Cycle {
        wire: gates[cur].output.clone(),
        line: gates[cur].line,
    })
}

/// Renders the circuit in the netlist text format; the output reparses to an
/// equal circuit.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for wire in &self.inputs {
            writeln!(f, "input {wire}")?;
        }
        for wire in &self.outputs {
            writeln!(f, "output {wire}")?;
        }
        for gate in &self.gates {
            write!(f, "{} {}", gate.kind, gate.output)?;
            for wire in &gate.inputs {
                write!(f, " {wire}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gate(kind: GateKind, out: &str, ins: &[&str]) -> Gate {
        Gate {
            kind,
            output: out.into(),
            inputs: ins.iter().map(|s| s.to_string()).collect(),
            line: 0,
        }
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn schedule_respects_dependencies() {
        let c = Circuit::new(
            names(&["a", "b"]),
            names(&["y"]),
            vec![
                gate(GateKind::And, "y", &["t", "b"]),
                gate(GateKind::Not, "t", &["a"]),
            ],
        )
        .unwrap();
        let order: Vec<&str> = c.scheduled().map(|g| g.output.as_str()).collect();
        assert_eq!(order, vec!["t", "y"]);
        assert_eq!(c.wires(), vec!["a", "b", "t", "y"]);
    }

    #[test]
    fn cycle_is_reported_on_the_loop() {
        let err = Circuit::new(
            names(&["a"]),
            names(&["z"]),
            vec![
                gate(GateKind::Not, "z", &["p"]),
                gate(GateKind::And, "p", &["a", "q"]),
                gate(GateKind::Not, "q", &["p"]),
            ],
        )
        .unwrap_err();
        match err {
            NetlistError::Cycle { wire, .. } => assert!(wire == "p" || wire == "q", "{wire}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn input_driven_by_gate_is_rejected() {
        let err = Circuit::new(names(&["a"]), names(&["a"]), vec![gate(GateKind::Not, "a", &["a"])]).unwrap_err();
        assert!(matches!(err, NetlistError::MultiplyDriven { .. }));
    }

    #[test]
    fn output_may_be_an_input() {
        let c = Circuit::new(names(&["a"]), names(&["a"]), vec![]).unwrap();
        assert!(c.is_lowered());
    }
}
