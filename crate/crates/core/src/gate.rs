// SPDX-License-Identifier: Apache-2.0

//! Gate kinds, their fixed {NOT, AND} recipes, and the backend-neutral gate
//! algebra used by circuit evaluation.
//!
//! Every derived gate is defined by a straight-line recipe over the two
//! primitive gates. Signal-level derived gates interpret the recipe directly
//! and netlist lowering expands it into fresh wires, so gate counts and
//! traces agree between the two.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::signal::{LogicClass, LogicSignal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Not,
    And,
    Or,
    Nand,
    Nor,
    Xor,
    Xnor,
}

impl GateKind {
    pub const ALL: [GateKind; 7] = [
        GateKind::Not,
        GateKind::And,
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
    ];

    /// The two-input kinds built on top of the primitives.
    pub const DERIVED: [GateKind; 5] = [
        GateKind::Or,
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Not => 1,
            _ => 2,
        }
    }

    pub fn is_primitive(self) -> bool {
        matches!(self, GateKind::Not | GateKind::And)
    }

    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::Not => "not",
            GateKind::And => "and",
            GateKind::Or => "or",
            GateKind::Nand => "nand",
            GateKind::Nor => "nor",
            GateKind::Xor => "xor",
            GateKind::Xnor => "xnor",
        }
    }

    /// Boolean semantics; `inputs` must have `arity()` entries.
    pub fn eval_bool(self, inputs: &[bool]) -> bool {
        match self {
            GateKind::Not => !inputs[0],
            GateKind::And => inputs[0] && inputs[1],
            GateKind::Or => inputs[0] || inputs[1],
            GateKind::Nand => !(inputs[0] && inputs[1]),
            GateKind::Nor => !(inputs[0] || inputs[1]),
            GateKind::Xor => inputs[0] != inputs[1],
            GateKind::Xnor => inputs[0] == inputs[1],
        }
    }

    /// The {NOT, AND} recipe for this kind. The result is the last step.
    pub fn recipe(self) -> &'static [Step] {
        use Operand::{Temp, A, B};
        use Step::{And, Not};
        match self {
            GateKind::Not => &[Not(A)],
            GateKind::And => &[And(A, B)],
            // NOT(AND(NOT a, NOT b))
            GateKind::Or => &[Not(A), Not(B), And(Temp(0), Temp(1)), Not(Temp(2))],
            GateKind::Nand => &[And(A, B), Not(Temp(0))],
            GateKind::Nor => &[Not(A), Not(B), And(Temp(0), Temp(1))],
            // OR(AND(a, NOT b), AND(NOT a, b)) with the OR expanded as above
            GateKind::Xor => &[
                Not(B),
                And(A, Temp(0)),
                Not(A),
                And(Temp(2), B),
                Not(Temp(1)),
                Not(Temp(3)),
                And(Temp(4), Temp(5)),
                Not(Temp(6)),
            ],
            GateKind::Xnor => &[
                Not(B),
                And(A, Temp(0)),
                Not(A),
                And(Temp(2), B),
                Not(Temp(1)),
                Not(Temp(3)),
                And(Temp(4), Temp(5)),
                Not(Temp(6)),
                Not(Temp(7)),
            ],
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown gate kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    A,
    B,
    /// Output of an earlier step of the same recipe.
    Temp(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Not(Operand),
    And(Operand, Operand),
}

/// A binary squeezed-logic gate set over one shared reference `H`.
pub trait GateAlgebra: Sync {
    type Signal: LogicSignal;

    /// The shared reference carrying logic H.
    fn reference(&self) -> &Self::Signal;

    /// The squeezed L value for this horizon.
    fn low(&self) -> Self::Signal;

    fn not(&self, x: &Self::Signal) -> Result<Self::Signal>;

    fn and(&self, x1: &Self::Signal, x2: &Self::Signal) -> Result<Self::Signal>;

    fn horizon(&self) -> usize {
        self.reference().horizon()
    }

    fn encode(&self, bit: bool) -> Self::Signal {
        if bit {
            self.reference().clone()
        } else {
            self.low()
        }
    }

    fn classify(&self, x: &Self::Signal) -> Result<LogicClass> {
        crate::signal::classify(x, self.reference())
    }

    /// Evaluate any gate kind by running its recipe.
    fn gate(&self, kind: GateKind, inputs: &[&Self::Signal]) -> Result<Self::Signal> {
        if inputs.len() != kind.arity() {
            return Err(Error::InvalidArgument(format!(
                "{kind} takes {} inputs, got {}",
                kind.arity(),
                inputs.len()
            )));
        }
        let a = inputs[0];
        let b = inputs.get(1).copied();
        let mut temps: Vec<Self::Signal> = Vec::with_capacity(kind.recipe().len());
        for step in kind.recipe() {
            let fetch = |op: Operand| -> &Self::Signal {
                match op {
                    Operand::A => a,
                    Operand::B => b.expect("binary recipe on unary gate"),
                    Operand::Temp(i) => &temps[i],
                }
            };
            let out = match *step {
                Step::Not(x) => self.not(fetch(x))?,
                Step::And(x, y) => self.and(fetch(x), fetch(y))?,
            };
            temps.push(out);
        }
        Ok(temps.pop().expect("recipes are non-empty"))
    }
}
