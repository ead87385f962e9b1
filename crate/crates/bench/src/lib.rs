// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the benchmarks in `benches/`.

use nbl_core::netlist::{parse_netlist, Circuit};

/// Four-bit ripple-carry adder built from half adders and ORs.
pub fn ripple_adder() -> Circuit {
    let mut text = String::new();
    for i in 0..4 {
        text += &format!("input a{i}\ninput b{i}\noutput s{i}\n");
    }
    text += "output c3\n";
    text += "xor s0 a0 b0\nand c0 a0 b0\n";
    for i in 1..4 {
        let p = i - 1;
        text += &format!(
            "xor p{i} a{i} b{i}\nand g{i} a{i} b{i}\nxor s{i} p{i} c{p}\nand k{i} p{i} c{p}\nor c{i} g{i} k{i}\n"
        );
    }
    parse_netlist(&text).expect("fixture netlist is valid")
}
