//! Line-oriented instance files.
//!
//! ```text
//! incflow v1
//! nodes <n> source <s> sink <t> horizon <T>
//! arc <id> <tail> <head> <cap> <E|P>
//! ```
//!
//! One arc per line in id order, LF line endings.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::netcore::{check_horizon, Arc, ArcId, ArcKind, Instance, Network};

pub const HEADER: &str = "incflow v1";

pub fn instance_to_string(inst: &Instance) -> String {
    let net = &inst.network;
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "nodes {} source {} sink {} horizon {}", net.node_count(), net.source(), net.sink(), inst.horizon)
        .unwrap();
    for a in net.arcs() {
        let kind = if a.is_potential() { 'P' } else { 'E' };
        writeln!(out, "arc {} {} {} {} {}", a.id, a.tail, a.head, a.capacity, kind).unwrap();
    }
    out
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, instance_to_string(inst))?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn field<T: std::str::FromStr>(line: usize, name: &str, raw: Option<&str>) -> Result<T> {
    let raw = raw.ok_or_else(|| err(line, format!("missing {name}")))?;
    raw.parse().map_err(|_| err(line, format!("{name}: cannot parse `{raw}`")))
}

fn keyword(line: usize, expected: &str, raw: Option<&str>) -> Result<()> {
    match raw {
        Some(w) if w == expected => Ok(()),
        Some(w) => Err(err(line, format!("expected `{expected}`, found `{w}`"))),
        None => Err(err(line, format!("expected `{expected}`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((no, other)) => return Err(err(no, format!("expected header `{HEADER}`, found `{other}`"))),
        None => return Err(err(1, "empty file")),
    }
    let (no, dims) = lines.next().ok_or_else(|| err(2, "missing `nodes` line"))?;
    let mut w = dims.split_whitespace();
    keyword(no, "nodes", w.next())?;
    let n: usize = field(no, "node count", w.next())?;
    keyword(no, "source", w.next())?;
    let s: usize = field(no, "source", w.next())?;
    keyword(no, "sink", w.next())?;
    let t: usize = field(no, "sink", w.next())?;
    keyword(no, "horizon", w.next())?;
    let horizon: u64 = field(no, "horizon", w.next())?;
    if let Some(extra) = w.next() {
        return Err(err(no, format!("unexpected `{extra}`")));
    }
    if n == 0 {
        return Err(err(no, "node count must be positive"));
    }
    if s >= n || t >= n {
        return Err(err(no, "source or sink out of range"));
    }
    if s == t {
        return Err(err(no, "source equals sink"));
    }
    let dims_line = no;
    let mut net = Network::new(n, s, t);
    for (no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut w = line.split_whitespace();
        keyword(no, "arc", w.next())?;
        let id: usize = field(no, "arc id", w.next())?;
        let tail: usize = field(no, "tail", w.next())?;
        let head: usize = field(no, "head", w.next())?;
        let capacity: u64 = field(no, "capacity", w.next())?;
        let kind = match w.next() {
            Some("E") => ArcKind::Existing,
            Some("P") => ArcKind::Potential,
            Some(k) => return Err(err(no, format!("kind must be E or P, found `{k}`"))),
            None => return Err(err(no, "missing kind")),
        };
        if let Some(extra) = w.next() {
            return Err(err(no, format!("unexpected `{extra}`")));
        }
        if id != net.arc_count() {
            return Err(err(no, format!("arc id {id} out of sequence (expected {})", net.arc_count())));
        }
        if tail >= n || head >= n {
            return Err(err(no, "endpoint out of range"));
        }
        if tail == head {
            return Err(err(no, "self-loop"));
        }
        if capacity < 1 {
            return Err(err(no, "capacity < 1"));
        }
        net.push_arc(Arc { id: ArcId(id), tail, head, capacity, kind });
    }
    check_horizon(&net, horizon).map_err(|e| err(dims_line, e.to_string()))?;
    Instance::new(net, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIAMOND: &str = "incflow v1\nnodes 3 source 0 sink 2 horizon 2\narc 0 0 1 1 E\narc 1 1 2 1 P\n";

    #[test]
    fn round_trip() {
        let inst = parse_instance(DIAMOND).unwrap();
        assert_eq!(inst.network.arc_count(), 2);
        assert_eq!(instance_to_string(&inst), DIAMOND);
    }

    #[test]
    fn zero_capacity_names_line_and_invariant() {
        let bad = DIAMOND.replace("arc 1 1 2 1 P", "arc 1 1 2 0 P");
        match parse_instance(&bad) {
            Err(Error::Parse { line: 4, message }) => assert!(message.contains("capacity < 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("incflow v2\n", 1),
            ("incflow v1\nnodes 3 source 0 sink 2\n", 2),
            ("incflow v1\nnodes 3 source 0 sink 2 horizon 2\narc 0 0 1 x E\n", 3),
            ("incflow v1\nnodes 3 source 0 sink 2 horizon 2\narc 1 0 1 1 E\n", 3),
            ("incflow v1\nnodes 3 source 0 sink 2 horizon 2\narc 0 0 0 1 E\n", 3),
            ("incflow v1\nnodes 3 source 0 sink 2 horizon 2\narc 0 0 1 1 Q\n", 3),
            ("incflow v1\nnodes 3 source 0 sink 2 horizon 1\narc 0 0 1 1 P\n", 2),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
