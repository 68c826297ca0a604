//! The line-oriented model file format.
//!
//! ```text
//! # comments start with '#'
//! signature
//!   op neg 1
//!   rel P 1
//! carrier: 0 1
//! op neg: 0 -> 1
//! op neg: 1 -> 0
//! rel P: 1
//! flag with_equality on
//! ```

use std::fs;
use std::path::Path;

use kbgeo_core::algebra::{Model, ModelBuilder, Signature};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> ModelFileError {
    ModelFileError::Parse { line, msg: msg.into() }
}

enum Row<'a> {
    Op(usize, &'a str, Vec<&'a str>, &'a str),
    Rel(usize, &'a str, Vec<&'a str>),
}

fn split_list(text: &str) -> Vec<&str> {
    if text.trim().is_empty() {
        Vec::new()
    } else {
        text.split(',').map(str::trim).collect()
    }
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<Model, ModelFileError> {
    let mut ops: Vec<(String, usize)> = Vec::new();
    let mut rels: Vec<(String, usize)> = Vec::new();
    let mut carrier: Option<Vec<String>> = None;
    let mut with_equality = true;
    let mut rows: Vec<Row> = Vec::new();
    let mut in_signature = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "signature" {
            in_signature = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix("carrier:") {
            in_signature = false;
            if carrier.is_some() {
                return Err(parse_err(line_no, "carrier given twice"));
            }
            let elems: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
            if elems.is_empty() {
                return Err(parse_err(line_no, "empty carrier"));
            }
            carrier = Some(elems);
            continue;
        }
        if let Some(rest) = line.strip_prefix("flag ") {
            in_signature = false;
            match rest.split_whitespace().collect::<Vec<_>>().as_slice() {
                ["with_equality", "on"] => with_equality = true,
                ["with_equality", "off"] => with_equality = false,
                _ => return Err(parse_err(line_no, format!("unknown flag `{rest}`"))),
            }
            continue;
        }
        let (kind, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(line_no, format!("unrecognized line `{line}`")))?;
        if kind != "op" && kind != "rel" {
            return Err(parse_err(line_no, format!("unrecognized line `{line}`")));
        }
        match rest.split_once(':') {
            None if in_signature => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, arity] = parts.as_slice() else {
                    return Err(parse_err(line_no, format!("expected `{kind} NAME ARITY`")));
                };
                let arity: usize = arity
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad arity `{arity}`")))?;
                let list = if kind == "op" { &mut ops } else { &mut rels };
                list.push((name.to_string(), arity));
            }
            None => {
                return Err(parse_err(
                    line_no,
                    format!("`{kind} NAME ARITY` outside the signature section"),
                ))
            }
            Some((name, body)) => {
                in_signature = false;
                let name = name.trim();
                if kind == "op" {
                    let (inputs, output) = body
                        .split_once("->")
                        .ok_or_else(|| parse_err(line_no, "expected `op NAME: in1,...,ik -> out`"))?;
                    rows.push(Row::Op(line_no, name, split_list(inputs), output.trim()));
                } else {
                    rows.push(Row::Rel(line_no, name, split_list(body)));
                }
            }
        }
    }

    let sig = Signature::new(ops, rels, with_equality).map_err(|e| ModelFileError::Invalid(e.to_string()))?;
    let carrier = carrier.ok_or_else(|| ModelFileError::Invalid("missing `carrier:` line".into()))?;
    let mut builder = ModelBuilder::new(sig, carrier);
    for row in rows {
        let (line, res) = match row {
            Row::Op(line, name, inputs, out) => (line, builder.op_row(name, &inputs, out).map(|_| ())),
            Row::Rel(line, name, tuple) => (line, builder.rel_row(name, &tuple).map(|_| ())),
        };
        res.map_err(|e| parse_err(line, e.to_string()))?;
    }
    builder.build().map_err(|e| ModelFileError::Invalid(e.to_string()))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model, ModelFileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ModelFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&text)
}

/// Prints a model in the file format; `parse_model` reads it back to an equal model.
pub fn print_model(m: &Model) -> String {
    let sig = m.signature();
    let mut out = String::from("signature\n");
    for op in sig.ops() {
        out += &format!("  op {} {}\n", op.name, op.arity);
    }
    for rel in sig.rels() {
        out += &format!("  rel {} {}\n", rel.name, rel.arity);
    }
    out += &format!("carrier: {}\n", m.carrier().join(" "));
    let n = m.size();
    for (i, op) in sig.ops().iter().enumerate() {
        for t in 0..n.pow(op.arity as u32) {
            let args = digits(t, op.arity, n);
            let labels: Vec<&str> = args.iter().map(|&a| m.label(a)).collect();
            let inputs = if labels.is_empty() {
                String::new()
            } else {
                format!("{} ", labels.join(","))
            };
            out += &format!("op {}: {inputs}-> {}\n", op.name, m.label(m.apply_op(i, &args)));
        }
    }
    for (i, rel) in sig.rels().iter().enumerate() {
        for args in m.rel_tuples(i) {
            let labels: Vec<&str> = args.iter().map(|&a| m.label(a)).collect();
            out += &format!("rel {}: {}\n", rel.name, labels.join(","));
        }
    }
    out += &format!(
        "flag with_equality {}\n",
        if sig.with_equality() { "on" } else { "off" }
    );
    out
}

fn digits(mut t: usize, arity: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = t % base;
        t /= base;
    }
    out
}
