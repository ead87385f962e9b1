// SPDX-License-Identifier: Apache-2.0

use super::{Circuit, Gate};
use crate::gate::{Operand, Step};
use crate::gate::GateKind;

/// Prefix of wires introduced by lowering, followed by a decimal counter.
pub const TEMP_PREFIX: &str = "__t";

/// Rewrite every gate into {NOT, AND} using the fixed recipes from
/// [`GateKind::recipe`]. Primitive gates are copied unchanged, so lowering
/// a lowered circuit is the identity.
pub fn lower_circuit(c: &Circuit) -> Circuit {
    if c.is_lowered() {
        return c.clone();
    }
    // Start the counter past any temp names already in use.
    let mut counter = c
        .wires()
        .iter()
        .filter_map(|w| w.strip_prefix(TEMP_PREFIX)?.parse::<u64>().ok())
        .max()
        .map_or(0, |n| n + 1);
    let mut fresh = || {
        let name = format!("{TEMP_PREFIX}{counter}");
        counter += 1;
        name
    };

    let mut gates = Vec::new();
    for gate in c.gates() {
        if gate.kind.is_primitive() {
            gates.push(gate.clone());
            continue;
        }
        let recipe = gate.kind.recipe();
        let mut temps: Vec<String> = Vec::with_capacity(recipe.len());
        for (i, step) in recipe.iter().enumerate() {
            let wire = |op: Operand, temps: &[String]| match op {
                Operand::A => gate.inputs[0].clone(),
                Operand::B => gate.inputs[1].clone(),
                Operand::Temp(t) => temps[t].clone(),
            };
            let (kind, inputs) = match *step {
                Step::Not(x) => (GateKind::Not, vec![wire(x, &temps)]),
                Step::And(x, y) => (GateKind::And, vec![wire(x, &temps), wire(y, &temps)]),
            };
            let output = if i + 1 == recipe.len() {
                gate.output.clone()
            } else {
                fresh()
            };
            temps.push(output.clone());
            gates.push(Gate {
                kind,
                output,
                inputs,
                line: gate.line,
            });
        }
    }
    Circuit::new(c.inputs().to_vec(), c.outputs().to_vec(), gates)
        .expect("lowering preserves validity")
}
