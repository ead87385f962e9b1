// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::{Circuit, NetlistError};
use crate::error::{Error, Result};
use crate::gate::GateAlgebra;
use crate::reference::{References, ReferenceSystem};
use crate::rtw::RtwAlgebra;
use crate::signal::LogicClass;
use crate::spike::SpikeAlgebra;

pub const MAX_TRUTH_TABLE_INPUTS: usize = 20;

/// Boolean value for every circuit input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment(BTreeMap<String, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, wire: impl Into<String>, bit: bool) -> &mut Self {
        self.0.insert(wire.into(), bit);
        self
    }

    pub fn get(&self, wire: &str) -> Option<bool> {
        self.0.get(wire).copied()
    }

    /// Assign `bits[i]` to `c.inputs()[i]`.
    pub fn from_bits(c: &Circuit, bits: &[bool]) -> Self {
        Assignment(c.inputs().iter().cloned().zip(bits.iter().copied()).collect())
    }

    /// Every input of `c` is assigned and nothing else is.
    pub fn check(&self, c: &Circuit) -> Result<(), NetlistError> {
        for wire in c.inputs() {
            if !self.0.contains_key(wire) {
                return Err(NetlistError::Assignment(format!("input `{wire}` is unassigned")));
            }
        }
        if let Some(extra) = self.0.keys().find(|k| !c.inputs().contains(k)) {
            return Err(NetlistError::Assignment(format!("`{extra}` is not a circuit input")));
        }
        Ok(())
    }

    pub fn bits(&self, c: &Circuit) -> Vec<bool> {
        c.inputs().iter().map(|w| self.0[w]).collect()
    }
}

/// Parse `a=1,b=0` (commas or whitespace between pairs).
pub fn parse_assignment(text: &str) -> Result<Assignment, NetlistError> {
    let mut out = Assignment::new();
    for pair in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
        let (wire, value) = pair
            .split_once('=')
            .ok_or_else(|| NetlistError::Assignment(format!("expected wire=0|1, got `{pair}`")))?;
        let bit = match value {
            "0" => false,
            "1" => true,
            _ => return Err(NetlistError::Assignment(format!("`{wire}` must be 0 or 1, got `{value}`"))),
        };
        if out.0.insert(wire.to_string(), bit).is_some() {
            return Err(NetlistError::Assignment(format!("`{wire}` assigned twice")));
        }
    }
    Ok(out)
}

/// Full result of one evaluation: every wire's signal in schedule order, and
/// the classified outputs in declaration order.
#[derive(Debug, Clone)]
pub struct Evaluation<S> {
    pub wires: Vec<(String, S)>,
    pub outputs: Vec<(String, LogicClass)>,
}

impl<S> Evaluation<S> {
    pub fn signal(&self, wire: &str) -> Option<&S> {
        self.wires.iter().find(|(w, _)| w == wire).map(|(_, s)| s)
    }

    pub fn all_valid(&self) -> bool {
        self.outputs.iter().all(|(_, c)| c.is_valid())
    }
}

/// Evaluate `c` with inputs encoded as H (1) or L (0), gates run in
/// topological order. Unlowered kinds run through their recipes.
pub fn evaluate_with<A: GateAlgebra>(c: &Circuit, a: &Assignment, alg: &A) -> Result<Evaluation<A::Signal>> {
    a.check(c)?;
    let inputs: Vec<A::Signal> = c.inputs().iter().map(|w| alg.encode(a.0[w])).collect();
    evaluate_signals(c, &inputs, alg)
}

/// Evaluate `c` with explicit input signals (one per input, in order).
pub(crate) fn evaluate_signals<A: GateAlgebra>(
    c: &Circuit,
    inputs: &[A::Signal],
    alg: &A,
) -> Result<Evaluation<A::Signal>> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut wires: Vec<(String, A::Signal)> = Vec::with_capacity(c.inputs().len() + c.gates().len());
    for (wire, signal) in c.inputs().iter().zip(inputs) {
        index.insert(wire, wires.len());
        wires.push((wire.clone(), signal.clone()));
    }
    for gate in c.scheduled() {
        let args: Vec<&A::Signal> = gate.inputs.iter().map(|w| &wires[index[w.as_str()]].1).collect();
        let out = alg.gate(gate.kind, &args)?;
        index.insert(&gate.output, wires.len());
        wires.push((gate.output.clone(), out));
    }
    let outputs = c
        .outputs()
        .iter()
        .map(|w| Ok((w.clone(), alg.classify(&wires[index[w.as_str()]].1)?)))
        .collect::<Result<_>>()?;
    Ok(Evaluation { wires, outputs })
}

/// Evaluate over the shared reference `H_1` (index 0) of `sys`.
pub fn evaluate(c: &Circuit, a: &Assignment, sys: &ReferenceSystem) -> Result<Vec<(String, LogicClass)>> {
    match sys.references() {
        References::Rtw(refs) => Ok(evaluate_with(c, a, &RtwAlgebra::new(refs[0].clone()))?.outputs),
        References::Spike(refs) => {
            if refs[0].is_empty() {
                return Err(Error::DegenerateReference);
            }
            Ok(evaluate_with(c, a, &SpikeAlgebra::new(refs[0].clone()))?.outputs)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthRow {
    pub inputs: Vec<bool>,
    pub outputs: Vec<LogicClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub rows: Vec<TruthRow>,
}

impl TruthTable {
    /// Row `r` assigns bit `k - 1 - j` of `r` to input `j`, so the first
    /// input is the most significant.
    pub fn row_bits(k: usize, r: usize) -> Vec<bool> {
        (0..k).map(|j| (r >> (k - 1 - j)) & 1 == 1).collect()
    }
}

/// Evaluate every assignment, rows in binary counting order.
pub fn truth_table(c: &Circuit, sys: &ReferenceSystem) -> Result<TruthTable> {
    let k = c.inputs().len();
    if k > MAX_TRUTH_TABLE_INPUTS {
        return Err(NetlistError::TooManyInputs {
            found: k,
            limit: MAX_TRUTH_TABLE_INPUTS,
        }
        .into());
    }
    let rows = (0..1usize << k)
        .into_par_iter()
        .map(|r| {
            let bits = TruthTable::row_bits(k, r);
            let outputs = evaluate(c, &Assignment::from_bits(c, &bits), sys)?
                .into_iter()
                .map(|(_, class)| class)
                .collect();
            Ok(TruthRow { inputs: bits, outputs })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruthTable {
        input_names: c.inputs().to_vec(),
        output_names: c.outputs().to_vec(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::{lower_circuit, parse_netlist};
    use LogicClass::{ValueH as H, ValueL as L};

    const HALF_ADDER: &str = "input a\ninput b\noutput sum\noutput carry\nxor sum a b\nand carry a b\n";

    #[test]
    fn half_adder_one_one() {
        let c = parse_netlist(HALF_ADDER).unwrap();
        let a = parse_assignment("a=1,b=1").unwrap();
        for sys in [
            ReferenceSystem::rtw(1, 1, 256).unwrap(),
            ReferenceSystem::spike(1, 1, 256, 0.2).unwrap(),
        ] {
            let out = evaluate(&c, &a, &sys).unwrap();
            assert_eq!(out, vec![("sum".to_string(), L), ("carry".to_string(), H)]);
        }
    }

    #[test]
    fn half_adder_table() {
        let c = parse_netlist(HALF_ADDER).unwrap();
        let sys = ReferenceSystem::rtw(2, 1, 128).unwrap();
        let table = truth_table(&c, &sys).unwrap();
        let got: Vec<Vec<LogicClass>> = table.rows.iter().map(|r| r.outputs.clone()).collect();
        assert_eq!(got, vec![vec![L, L], vec![H, L], vec![H, L], vec![L, H]]);
        assert_eq!(table.rows[1].inputs, vec![false, true]);
        assert_eq!(truth_table(&lower_circuit(&c), &sys).unwrap(), table);
    }

    #[test]
    fn or_agrees_across_backends() {
        let c = parse_netlist("input a\ninput b\noutput y\nor y a b\n").unwrap();
        let a = parse_assignment("a=0 b=1").unwrap();
        let r = evaluate(&c, &a, &ReferenceSystem::rtw(3, 1, 64).unwrap()).unwrap();
        let s = evaluate(&c, &a, &ReferenceSystem::spike(3, 1, 64, 0.3).unwrap()).unwrap();
        assert_eq!(r, s);
        assert_eq!(r[0].1, H);
    }

    #[test]
    fn trace_is_deterministic() {
        let c = parse_netlist(HALF_ADDER).unwrap();
        let a = parse_assignment("a=1,b=0").unwrap();
        let sys = ReferenceSystem::rtw(9, 1, 64).unwrap();
        let alg = RtwAlgebra::new(sys.rtw_refs().unwrap()[0].clone());
        let e1 = evaluate_with(&c, &a, &alg).unwrap();
        let e2 = evaluate_with(&c, &a, &alg).unwrap();
        assert_eq!(e1.wires, e2.wires);
        assert_eq!(e1.signal("sum"), Some(alg.reference()));
    }

    #[test]
    fn assignment_errors() {
        let c = parse_netlist(HALF_ADDER).unwrap();
        let sys = ReferenceSystem::rtw(1, 1, 16).unwrap();
        assert!(evaluate(&c, &parse_assignment("a=1").unwrap(), &sys).is_err());
        assert!(evaluate(&c, &parse_assignment("a=1,b=0,c=1").unwrap(), &sys).is_err());
        assert!(parse_assignment("a=2").is_err());
        assert!(parse_assignment("a").is_err());
        assert!(parse_assignment("a=1,a=0").is_err());
    }

    #[test]
    fn degenerate_spike_reference() {
        let c = parse_netlist("input a\noutput a\n").unwrap();
        let sys = ReferenceSystem::spike(1, 1, 16, 0.0).unwrap();
        assert!(matches!(
            evaluate(&c, &parse_assignment("a=1").unwrap(), &sys),
            Err(Error::DegenerateReference)
        ));
    }

    #[test]
    fn too_many_inputs() {
        let mut text = String::new();
        for i in 0..21 {
            text.push_str(&format!("input i{i}\n"));
        }
        let c = parse_netlist(&text).unwrap();
        let sys = ReferenceSystem::rtw(1, 1, 4).unwrap();
        assert!(matches!(
            truth_table(&c, &sys),
            Err(Error::Netlist(NetlistError::TooManyInputs { found: 21, .. }))
        ));
    }
}
