use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;
use tron_core::{Graph, GraphJson};

use crate::OutputArgs;

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Reads a graph file. Reduction output (an object with a `graph` field) is
/// accepted too, so `reduce` output can be piped straight into `solve`.
pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = read_text(path)?;
    let mut v: Value =
        serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
    if let Some(inner) = v.get_mut("graph") {
        v = inner.take();
    }
    let json: GraphJson =
        serde_json::from_value(v).with_context(|| format!("{} is not a graph", path.display()))?;
    Graph::from_json(&json).with_context(|| format!("invalid graph in {}", path.display()))
}

pub fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut so = std::io::stdout().lock();
            let res = so.write_all(text.as_bytes()).and_then(|()| {
                if text.ends_with('\n') {
                    Ok(())
                } else {
                    so.write_all(b"\n")
                }
            });
            match res {
                // a closed downstream pipe (`| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => Ok(r?),
            }
        }
    }
}

pub fn emit_json(out: &OutputArgs, v: &Value) -> Result<()> {
    emit(out, &serde_json::to_string_pretty(v)?)
}

pub fn emit_graph(out: &OutputArgs, g: &Graph) -> Result<()> {
    if out.dot {
        emit(out, &g.to_dot())
    } else {
        emit_json(out, &serde_json::to_value(g.to_json())?)
    }
}
