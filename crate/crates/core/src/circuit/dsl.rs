//! Line-oriented circuit text format and its JSON mirror.
//!
//! ```text
//! circuit fig3
//! inputs x1 x2
//! g1 = mul x2 -1
//! g2 = add x1 x2
//! g3 = add x1 g1
//! g4 = mul g2 g3
//! output g4
//! ```
//!
//! An operand is an input name, an earlier gate label, or a rational literal.
//! `#` starts a comment.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitBuilder, CircuitError, Gate, GateId, Op, Wire};
use crate::field::Field;
use crate::poly::Var;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub op: Op,
    pub args: [String; 2],
}

/// JSON mirror of the text format. Gates are labelled `g1..gs` by position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub name: String,
    pub inputs: Vec<String>,
    pub gates: Vec<GateJson>,
    pub output: String,
}

struct GateLine {
    line: usize,
    label: String,
    op: Op,
    args: Vec<String>,
}

fn syntax(line: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Syntax { line, msg: msg.into() }
}

pub fn parse_circuit(text: &str, field: Field) -> Result<Circuit, CircuitError> {
    let mut name = None;
    let mut inputs: Option<Vec<Var>> = None;
    let mut gate_lines: Vec<GateLine> = Vec::new();
    let mut output: Option<(usize, String)> = None;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if output.is_some() {
            return Err(syntax(line, "content after the output line"));
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        match words[0] {
            "circuit" => {
                if words.len() != 2 || name.is_some() {
                    return Err(syntax(line, "expected `circuit <name>` once"));
                }
                name = Some(words[1].to_string());
            }
            "inputs" => {
                if inputs.is_some() {
                    return Err(syntax(line, "duplicate inputs line"));
                }
                let vars = words[1..]
                    .iter()
                    .map(|w| w.parse::<Var>().map_err(|_| syntax(line, format!("bad input name {w:?}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                inputs = Some(vars);
            }
            "output" => {
                if words.len() != 2 {
                    return Err(syntax(line, "expected `output <ref>`"));
                }
                output = Some((line, words[1].to_string()));
            }
            label => {
                if words.len() < 3 || words[1] != "=" {
                    return Err(syntax(line, "expected `<label> = add|mul <ref> <ref>`"));
                }
                let op = match words[2] {
                    "add" => Op::Add,
                    "mul" => Op::Mul,
                    other => return Err(syntax(line, format!("unknown operation {other:?}"))),
                };
                let args: Vec<String> = words[3..].iter().map(|s| s.to_string()).collect();
                if args.len() != 2 {
                    return Err(CircuitError::FanIn { line, got: args.len() });
                }
                gate_lines.push(GateLine { line, label: label.to_string(), op, args });
            }
        }
    }

    let inputs = inputs.ok_or_else(|| syntax(0, "missing inputs line"))?;
    let (out_line, out_ref) = output.ok_or(CircuitError::MissingOutput)?;
    let name = name.unwrap_or_else(|| "circuit".to_string());

    let input_pos: HashMap<String, usize> = inputs.iter().enumerate().map(|(i, v)| (v.to_string(), i)).collect();
    if input_pos.len() != inputs.len() {
        return Err(syntax(0, "duplicate input name"));
    }
    let mut label_pos: HashMap<&str, usize> = HashMap::new();
    for (i, g) in gate_lines.iter().enumerate() {
        if input_pos.contains_key(&g.label) || label_pos.insert(&g.label, i).is_some() {
            return Err(CircuitError::DuplicateDefinition { line: g.line, name: g.label.clone() });
        }
        let ok = g.label.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && g.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(syntax(g.line, format!("bad gate label {:?}", g.label)));
        }
    }

    // undefined references and cycles are checked over the whole text first
    for g in &gate_lines {
        for a in &g.args {
            if !label_pos.contains_key(a.as_str()) && !input_pos.contains_key(a) && field.parse_element(a).is_err() {
                return Err(CircuitError::UndefinedReference { line: g.line, name: a.clone() });
            }
        }
    }
    if let Some(lbl) = find_cycle(&gate_lines, &label_pos) {
        return Err(CircuitError::Cycle(lbl));
    }

    let mut b = CircuitBuilder::new(name, field, inputs);
    let mut wires: Vec<Wire> = Vec::with_capacity(gate_lines.len());
    let resolve = |a: &str, here: usize, line: usize, wires: &[Wire]| -> Result<Wire, CircuitError> {
        if let Some(&j) = label_pos.get(a) {
            if j >= here {
                return Err(CircuitError::ForwardReference { line, name: a.to_string() });
            }
            return Ok(wires[j].clone());
        }
        if let Some(&i) = input_pos.get(a) {
            return Ok(Wire::Gate(i));
        }
        Ok(Wire::Const(field.parse_element(a).map_err(|e| syntax(line, e.to_string()))?))
    };
    for (i, g) in gate_lines.iter().enumerate() {
        let l = resolve(&g.args[0], i, g.line, &wires)?;
        let r = resolve(&g.args[1], i, g.line, &wires)?;
        let w = b.gate(g.op, l, r);
        wires.push(w);
    }
    let out = resolve(&out_ref, gate_lines.len(), out_line, &wires).map_err(|e| match e {
        CircuitError::Syntax { .. } => CircuitError::UndefinedReference { line: out_line, name: out_ref.clone() },
        e => e,
    })?;
    if !gate_lines.is_empty() && out != *wires.last().unwrap() {
        return Err(CircuitError::OutputNotLast(out_ref));
    }
    b.finish(out)
}

fn find_cycle(gates: &[GateLine], label_pos: &HashMap<&str, usize>) -> Option<String> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; gates.len()];
    fn visit(i: usize, gates: &[GateLine], pos: &HashMap<&str, usize>, state: &mut [u8]) -> Option<usize> {
        state[i] = 1;
        for a in &gates[i].args {
            if let Some(&j) = pos.get(a.as_str()) {
                match state[j] {
                    1 => return Some(j),
                    0 => {
                        if let Some(c) = visit(j, gates, pos, state) {
                            return Some(c);
                        }
                    }
                    _ => {}
                }
            }
        }
        state[i] = 2;
        None
    }
    for i in 0..gates.len() {
        if state[i] == 0 {
            if let Some(j) = visit(i, gates, label_pos, &mut state) {
                return Some(gates[j].label.clone());
            }
        }
    }
    None
}

fn labels(c: &Circuit) -> HashMap<GateId, String> {
    let mut out = HashMap::new();
    for (k, id) in c.internal_order().into_iter().enumerate() {
        out.insert(id, format!("g{}", k + 1));
    }
    for (i, v) in c.inputs().iter().enumerate() {
        out.insert(i, v.to_string());
    }
    out
}

fn operand(c: &Circuit, names: &HashMap<GateId, String>, id: GateId) -> String {
    match c.gate(id) {
        Gate::Const(v) => v.to_string(),
        _ => names[&id].clone(),
    }
}

/// Canonical text: gates renamed `g1..gs`, constants inlined as literals.
pub(super) fn write_dsl(c: &Circuit) -> String {
    let names = labels(c);
    let mut out = format!("circuit {}\ninputs", c.name());
    for v in c.inputs() {
        out.push(' ');
        out.push_str(&v.to_string());
    }
    out.push('\n');
    for id in c.internal_order() {
        let (a, b) = c.gate(id).children().unwrap();
        let op = if matches!(c.gate(id), Gate::Add(..)) { "add" } else { "mul" };
        out.push_str(&format!("{} = {} {} {}\n", names[&id], op, operand(c, &names, a), operand(c, &names, b)));
    }
    out.push_str(&format!("output {}\n", operand(c, &names, c.output())));
    out
}

pub(super) fn to_json(c: &Circuit) -> CircuitJson {
    let names = labels(c);
    let gates = c
        .internal_order()
        .into_iter()
        .map(|id| {
            let (a, b) = c.gate(id).children().unwrap();
            let op = if matches!(c.gate(id), Gate::Add(..)) { Op::Add } else { Op::Mul };
            GateJson { op, args: [operand(c, &names, a), operand(c, &names, b)] }
        })
        .collect();
    CircuitJson {
        name: c.name().to_string(),
        inputs: c.inputs().iter().map(|v| v.to_string()).collect(),
        gates,
        output: operand(c, &names, c.output()),
    }
}

pub(super) fn from_json(j: &CircuitJson, field: Field) -> Result<Circuit, CircuitError> {
    let mut text = format!("circuit {}\ninputs {}\n", j.name, j.inputs.join(" "));
    for (k, g) in j.gates.iter().enumerate() {
        let label = format!("g{}", k + 1);
        let op = match g.op {
            Op::Add => "add",
            Op::Mul => "mul",
        };
        text.push_str(&format!("{label} = {op} {} {}\n", g.args[0], g.args[1]));
    }
    text.push_str(&format!("output {}\n", j.output));
    parse_circuit(&text, field)
}
