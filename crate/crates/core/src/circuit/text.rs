//! Line-based circuit text format.

use std::collections::{BTreeMap, BinaryHeap};
use std::cmp::Reverse;

use super::{Circuit, Gate, GateKey, Group, Point, Wire};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q};

fn point_token(p: &Point) -> String {
    match p {
        Point::L(i) => format!("L{i}"),
        Point::R(j) => format!("R{j}"),
    }
}

pub fn serialize(c: &Circuit) -> String {
    let mut s = format!("c circuit n={} m={} group={} out={}\n", c.n, c.m, c.group.tag(), c.output);
    let wires = |w: &[Wire]| w.iter().map(|(x, d)| format!(" {x}*{d}")).collect::<String>();
    for (i, g) in c.gates.iter().enumerate() {
        match g {
            Gate::Input(r, k) => s.push_str(&format!("g {i} IN {r} {k}\n")),
            Gate::Const(q) => s.push_str(&format!("g {i} CONST {}\n", fmt_q(q))),
            Gate::Aux(a) => s.push_str(&format!("g {i} AUX {a}\n")),
            Gate::Add(w) => s.push_str(&format!("g {i} ADD{}\n", wires(w))),
            Gate::Mul(w) => s.push_str(&format!("g {i} MUL{}\n", wires(w))),
        }
    }
    for (i, ks) in c.keys.iter().enumerate() {
        for k in ks {
            s.push_str(&format!("k {i} {}", k.tag));
            for p in &k.support {
                s.push(' ');
                s.push_str(&point_token(p));
            }
            s.push('\n');
        }
    }
    s
}

pub fn deserialize(text: &str) -> Result<Circuit> {
    let mut header: Option<(usize, usize, Group, usize)> = None;
    let mut gates: BTreeMap<usize, Gate> = BTreeMap::new();
    let mut keys: Vec<(usize, GateKey, usize)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let err = |msg: String| Error::parse(line_no, msg);
        let num = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(line_no, format!("bad number `{t}`")));
        match toks[0] {
            "c" => {
                if toks.get(1) != Some(&"circuit") {
                    continue;
                }
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let mut n = None;
                let mut m = None;
                let mut group = None;
                let mut out = None;
                for t in &toks[2..] {
                    let (k, v) = t.split_once('=').ok_or_else(|| err(format!("bad header field `{t}`")))?;
                    match k {
                        "n" => n = Some(num(v)?),
                        "m" => m = Some(num(v)?),
                        "out" => out = Some(num(v)?),
                        "group" => {
                            group = Some(match v {
                                "symnm" => Group::SymNM,
                                "symn" => Group::SymN,
                                _ => return Err(err(format!("unknown group `{v}`"))),
                            })
                        }
                        _ => return Err(err(format!("unknown header field `{k}`"))),
                    }
                }
                match (n, m, group, out) {
                    (Some(n), Some(m), Some(g), Some(o)) => header = Some((n, m, g, o)),
                    _ => return Err(err("header needs n, m, group and out".into())),
                }
            }
            "g" => {
                if toks.len() < 3 {
                    return Err(err("short gate line".into()));
                }
                let id = num(toks[1])?;
                let wires = |ts: &[&str]| -> Result<Vec<Wire>> {
                    ts.iter()
                        .map(|t| {
                            let (x, d) = t.split_once('*').ok_or_else(|| Error::parse(line_no, format!("bad wire `{t}`")))?;
                            let d: u32 = d.parse().map_err(|_| Error::parse(line_no, format!("bad multiplicity `{d}`")))?;
                            if d == 0 {
                                return Err(Error::parse(line_no, "zero multiplicity"));
                            }
                            Ok((num(x)?, d))
                        })
                        .collect()
                };
                let gate = match toks[2] {
                    "IN" if toks.len() == 5 => Gate::Input(num(toks[3])? as u32, num(toks[4])? as u32),
                    "CONST" if toks.len() == 4 => Gate::Const(parse_q(toks[3]).map_err(|_| err(format!("bad rational `{}`", toks[3])))?),
                    "AUX" if toks.len() == 4 => Gate::Aux(num(toks[3])? as u32),
                    "ADD" => Gate::Add(wires(&toks[3..])?),
                    "MUL" => Gate::Mul(wires(&toks[3..])?),
                    other => return Err(err(format!("malformed gate of kind `{other}`"))),
                };
                if gates.insert(id, gate).is_some() {
                    return Err(err(format!("duplicate gate id {id}")));
                }
            }
            "k" => {
                if toks.len() < 3 {
                    return Err(err("short key line".into()));
                }
                let id = num(toks[1])?;
                let mut support = Vec::new();
                for t in &toks[3..] {
                    let (side, rest) = t.split_at(1);
                    let v = num(rest)? as u32;
                    support.push(match side {
                        "L" => Point::L(v),
                        "R" => Point::R(v),
                        _ => return Err(err(format!("bad support point `{t}`"))),
                    });
                }
                keys.push((id, GateKey::new(toks[2], support), line_no));
            }
            other => return Err(err(format!("unknown line kind `{other}`"))),
        }
    }
    let (n, m, group, out) = header.ok_or_else(|| Error::parse(0, "missing `c circuit` header"))?;
    for (&id, g) in &gates {
        for &(x, _) in g.children() {
            if !gates.contains_key(&x) {
                return Err(Error::parse(0, format!("gate {id} references missing gate {x}")));
            }
        }
    }
    if !gates.contains_key(&out) {
        return Err(Error::parse(0, format!("output gate {out} does not exist")));
    }
    // Kahn's algorithm preferring small ids, so topologically ordered files keep their numbering.
    let ids: Vec<usize> = gates.keys().copied().collect();
    let pos: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut indeg = vec![0usize; ids.len()];
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); ids.len()];
    for (i, id) in ids.iter().enumerate() {
        let mut ch: Vec<usize> = gates[id].children().iter().map(|&(x, _)| pos[&x]).collect();
        ch.sort_unstable();
        ch.dedup();
        indeg[i] = ch.len();
        for c in ch {
            parents[c].push(i);
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..ids.len()).filter(|&i| indeg[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(ids.len());
    while let Some(Reverse(i)) = heap.pop() {
        order.push(i);
        for &p in &parents[i] {
            indeg[p] -= 1;
            if indeg[p] == 0 {
                heap.push(Reverse(p));
            }
        }
    }
    if order.len() != ids.len() {
        return Err(Error::parse(0, "cycle detected among gates"));
    }
    let mut new_of = vec![0usize; ids.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    let mut out_gates = Vec::with_capacity(ids.len());
    for &old in &order {
        let g = match &gates[&ids[old]] {
            Gate::Add(w) => Gate::Add(w.iter().map(|&(x, d)| (new_of[pos[&x]], d)).collect()),
            Gate::Mul(w) => Gate::Mul(w.iter().map(|&(x, d)| (new_of[pos[&x]], d)).collect()),
            g => g.clone(),
        };
        out_gates.push(g);
    }
    let mut out_keys = vec![Vec::new(); ids.len()];
    for (id, k, line) in keys {
        let p = pos.get(&id).ok_or_else(|| Error::parse(line, format!("key for missing gate {id}")))?;
        out_keys[new_of[*p]].push(k);
    }
    for ks in &mut out_keys {
        ks.sort();
    }
    let c = Circuit { n, m, group, gates: out_gates, keys: out_keys, output: new_of[pos[&out]] };
    c.validate().map_err(|e| Error::parse(0, e.to_string()))?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;
    use crate::rational::qf;

    #[test]
    fn roundtrip() {
        let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
        let x = b.input(0, 0);
        let y = b.input(1, 0);
        let c = b.constant(qf(-3, 7));
        let s = b.add([(x, 2), (y, 1), (c, 1)]);
        b.key(s, GateKey::new("demo", vec![Point::L(0), Point::R(0)]));
        let p = b.mul([(s, 3)]);
        let circ = b.finish(p);
        let text = serialize(&circ);
        assert_eq!(deserialize(&text).unwrap(), circ);
    }

    #[test]
    fn rejects_bad_files() {
        let dangling = "c circuit n=1 m=1 group=symnm out=1\ng 0 IN 0 0\ng 1 ADD 0*1 99*1\n";
        assert!(deserialize(dangling).is_err());
        let cyc = "c circuit n=1 m=1 group=symnm out=2\ng 0 IN 0 0\ng 1 ADD 0*1 2*1\ng 2 MUL 1*1\n";
        assert!(matches!(deserialize(cyc), Err(Error::Parse { .. })));
        let two_outputs = "c circuit n=1 m=2 group=symnm out=0\ng 0 IN 0 0\ng 1 IN 0 1\n";
        assert!(deserialize(two_outputs).is_err());
        let garbage = "c circuit n=1 m=1 group=symnm out=0\ng 0 FOO\n";
        assert!(deserialize(garbage).is_err());
        let dup_var = "c circuit n=1 m=1 group=symnm out=2\ng 0 IN 0 0\ng 1 IN 0 0\ng 2 ADD 0*1 1*1\n";
        assert!(deserialize(dup_var).is_err());
    }

    #[test]
    fn reorders_forward_references() {
        let text = "c circuit n=1 m=1 group=symnm out=0\ng 0 MUL 1*2\ng 1 IN 0 0\n";
        let c = deserialize(text).unwrap();
        assert_eq!(c.gates()[0], Gate::Input(0, 0));
        assert_eq!(c.output(), 1);
    }
}
