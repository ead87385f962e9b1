// SPDX-License-Identifier: Apache-2.0

use super::{Circuit, Gate, NetlistError, Port};
use crate::gate::GateKind;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Whitespace-separated tokens with 1-based columns, comments stripped.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in code.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &code[s..i],
                    column: code[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &code[s..],
            column: code[..s].chars().count() + 1,
        });
    }
    tokens
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn identifier(tok: &Token<'_>, line: usize) -> Result<String, NetlistError> {
    if is_identifier(tok.text) {
        Ok(tok.text.to_string())
    } else {
        Err(NetlistError::Syntax {
            line,
            column: tok.column,
            message: format!("`{}` is not a valid identifier", tok.text),
        })
    }
}

/// Parse and validate netlist text.
///
/// Wires may be used before the line that drives them; structural checks run
/// after the whole text has been read.
pub fn parse_netlist(text: &str) -> Result<Circuit, NetlistError> {
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut gates = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw);
        let Some((head, args)) = tokens.split_first() else {
            continue;
        };
        match head.text {
            "input" | "output" => {
                if args.len() != 1 {
                    let column = args.get(1).map_or(head.column + head.text.len(), |t| t.column);
                    return Err(NetlistError::Syntax {
                        line,
                        column,
                        message: format!("`{}` takes exactly one wire name", head.text),
                    });
                }
                let port = Port {
                    name: identifier(&args[0], line)?,
                    line,
                };
                if head.text == "input" {
                    inputs.push(port);
                } else {
                    outputs.push(port);
                }
            }
            word => {
                let kind = word.parse::<GateKind>().map_err(|_| {
                    if is_identifier(word) {
                        NetlistError::UnknownGate {
                            line,
                            kind: word.to_string(),
                        }
                    } else {
                        NetlistError::Syntax {
                            line,
                            column: head.column,
                            message: format!("unexpected `{word}`"),
                        }
                    }
                })?;
                let Some((out, ins)) = args.split_first() else {
                    return Err(NetlistError::Syntax {
                        line,
                        column: head.column + head.text.len(),
                        message: format!("`{word}` needs an output wire"),
                    });
                };
                let output = identifier(out, line)?;
                if ins.len() != kind.arity() {
                    return Err(NetlistError::Arity {
                        line,
                        wire: output,
                        kind,
                        expected: kind.arity(),
                        found: ins.len(),
                    });
                }
                gates.push(Gate {
                    kind,
                    output,
                    inputs: ins.iter().map(|t| identifier(t, line)).collect::<Result<_, _>>()?,
                    line,
                });
            }
        }
    }
    Circuit::from_parts(inputs, outputs, gates)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF_ADDER: &str = "\
# half adder
input a
input b
output sum   # a xor b
output carry

xor sum a b
and carry a b
";

    #[test]
    fn half_adder() {
        let c = parse_netlist(HALF_ADDER).unwrap();
        assert_eq!(c.inputs(), &["a", "b"]);
        assert_eq!(c.outputs(), &["sum", "carry"]);
        assert_eq!(c.gates().len(), 2);
        assert_eq!(c.gates()[0].kind, GateKind::Xor);
        assert_eq!(c.gates()[0].line, 7);
    }

    #[test]
    fn forward_references() {
        let c = parse_netlist("output y\nnot y t\nnot t a\ninput a\n").unwrap();
        assert_eq!(c.gates().len(), 2);
    }

    #[test]
    fn arity_error() {
        let err = parse_netlist("input a\noutput y\nand y a\n").unwrap_err();
        assert_eq!(
            err,
            NetlistError::Arity {
                line: 3,
                wire: "y".into(),
                kind: GateKind::And,
                expected: 2,
                found: 1
            }
        );
        assert!(matches!(
            parse_netlist("input a\noutput y\nnot y a a\n").unwrap_err(),
            NetlistError::Arity { found: 2, .. }
        ));
    }

    #[test]
    fn multiply_driven() {
        let err = parse_netlist("input a\ninput b\noutput y\nand y a b\nor y a b\n").unwrap_err();
        assert_eq!(
            err,
            NetlistError::MultiplyDriven {
                wire: "y".into(),
                line: 5,
                first_line: 4
            }
        );
    }

    #[test]
    fn undriven_output_and_wire() {
        assert_eq!(
            parse_netlist("input a\noutput y\noutput z\nnot y a\n").unwrap_err(),
            NetlistError::UndrivenOutput {
                wire: "z".into(),
                line: 3
            }
        );
        assert_eq!(
            parse_netlist("input a\noutput y\nand y a ghost\n").unwrap_err(),
            NetlistError::UndrivenWire {
                wire: "ghost".into(),
                line: 3
            }
        );
    }

    #[test]
    fn cycle() {
        let err = parse_netlist("input a\noutput y\nand y a z\nnot z y\n").unwrap_err();
        assert!(matches!(err, NetlistError::Cycle { .. }), "{err:?}");
    }

    #[test]
    fn duplicate_declarations() {
        assert_eq!(
            parse_netlist("input a\ninput a\n").unwrap_err(),
            NetlistError::DuplicateDeclaration {
                wire: "a".into(),
                line: 2,
                first_line: 1
            }
        );
        assert!(matches!(
            parse_netlist("input a\noutput a\noutput a\n").unwrap_err(),
            NetlistError::DuplicateDeclaration { line: 3, .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse_netlist("input a\n  and y a 9b\n").unwrap_err(),
            NetlistError::Syntax {
                line: 2,
                column: 11,
                message: "`9b` is not a valid identifier".into()
            }
        );
        assert!(matches!(
            parse_netlist("input a b\n").unwrap_err(),
            NetlistError::Syntax { line: 1, column: 9, .. }
        ));
        assert!(matches!(
            parse_netlist("output\n").unwrap_err(),
            NetlistError::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            parse_netlist("and\n").unwrap_err(),
            NetlistError::Syntax { line: 1, .. }
        ));
        assert!(matches!(
            parse_netlist("= y a\n").unwrap_err(),
            NetlistError::Syntax { line: 1, column: 1, .. }
        ));
    }

    #[test]
    fn unknown_gate_and_case_sensitivity() {
        assert_eq!(
            parse_netlist("input a\nbuf y a\n").unwrap_err(),
            NetlistError::UnknownGate {
                line: 2,
                kind: "buf".into()
            }
        );
        assert!(matches!(
            parse_netlist("INPUT a\n").unwrap_err(),
            NetlistError::UnknownGate { .. }
        ));
        let c = parse_netlist("input A\ninput a\noutput y\nand y A a\n").unwrap();
        assert_eq!(c.inputs().len(), 2);
    }

    #[test]
    fn display_reparses() {
        let c = parse_netlist(HALF_ADDER).unwrap();
        assert_eq!(parse_netlist(&c.to_string()).unwrap(), c);
    }
}
