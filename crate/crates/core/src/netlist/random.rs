// SPDX-License-Identifier: Apache-2.0

use rand::{Rng, RngExt};

use super::{Circuit, Gate};
use crate::gate::GateKind;

/// Random valid circuit with `1..=max_inputs` inputs and `1..=max_gates`
/// gates of any kind. Gate inputs are drawn from earlier wires, so the result
/// is acyclic by construction; the last gate is always an output and each
/// other gate is an output with probability 1/4.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, max_inputs: usize, max_gates: usize) -> Circuit {
    assert!(max_inputs >= 1 && max_gates >= 1);
    let n_inputs = rng.random_range(1..=max_inputs);
    let n_gates = rng.random_range(1..=max_gates);
    let inputs: Vec<String> = (0..n_inputs).map(|i| format!("i{i}")).collect();
    let mut wires = inputs.clone();
    let mut gates = Vec::with_capacity(n_gates);
    let mut outputs = Vec::new();
    for g in 0..n_gates {
        let kind = GateKind::ALL[rng.random_range(0..GateKind::ALL.len())];
        let output = format!("g{g}");
        let ins = (0..kind.arity())
            .map(|_| wires[rng.random_range(0..wires.len())].clone())
            .collect();
        if g + 1 == n_gates || rng.random_bool(0.25) {
            outputs.push(output.clone());
        }
        gates.push(Gate {
            kind,
            output: output.clone(),
            inputs: ins,
            line: 0,
        });
        wires.push(output);
    }
    Circuit::new(inputs, outputs, gates).expect("generated circuits are valid")
}
