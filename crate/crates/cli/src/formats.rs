//! JSON file schemas for patterns, hosts and graphs, plus report plumbing.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use symcirc::cfi::SimpleGraph;
use symcirc::rational::{fmt_q, parse_q};
use symcirc::{BipartitePattern, LabelledPattern, Side, WeightedHost, Q};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Text(String),
}

impl Cell {
    fn value(&self) -> Result<Q, CliError> {
        match self {
            Cell::Int(v) => Ok(Q::from_integer((*v).into())),
            Cell::Text(s) => parse_q(s).map_err(|e| CliError::Parse(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Labels {
    #[serde(default)]
    pub left: Vec<usize>,
    #[serde(default)]
    pub right: Vec<usize>,
}

/// `{"left": n, "right": m, "edges": [[a, b, mult], ...], "labels": {...}}`,
/// with `b` indexing the right side from 0 and `mult` defaulting to 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub left: usize,
    pub right: usize,
    pub edges: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Labels>,
}

impl PatternFile {
    pub fn labelled(&self) -> Result<LabelledPattern, CliError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let mult = match e.len() {
                2 => 1,
                3 => u32::try_from(e[2]).map_err(|_| CliError::Parse(format!("multiplicity {} too large", e[2])))?,
                _ => return Err(CliError::Parse(format!("edge {e:?} must be [a, b] or [a, b, mult]"))),
            };
            edges.push((e[0] as usize, e[1] as usize, mult));
        }
        let base = BipartitePattern::new(self.left, self.right, &edges).map_err(|e| CliError::Parse(e.to_string()))?;
        let labels = self.labels.clone().unwrap_or_default();
        LabelledPattern::new(base, labels.left, labels.right).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn pattern(&self) -> Result<BipartitePattern, CliError> {
        Ok(self.labelled()?.base)
    }
}

/// Dense `{"n", "m", "entries": [[..]]}` or sparse `{"n", "m", "triples": [[i, j, v]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HostFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<Cell>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<(usize, usize, Cell)>>,
}

impl HostFile {
    pub fn from_host(h: &WeightedHost) -> Self {
        let rows = (0..h.rows()).map(|i| (0..h.cols()).map(|j| Cell::Text(fmt_q(h.get(i, j)))).collect()).collect();
        HostFile { n: Some(h.rows()), m: Some(h.cols()), entries: Some(rows), triples: None }
    }

    pub fn host(&self) -> Result<WeightedHost, CliError> {
        let mismatch = |s: String| CliError::Parse(format!("host: {s}"));
        match (&self.entries, &self.triples) {
            (Some(rows), None) => {
                let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(Cell::value).collect()).collect::<Result<_, _>>()?;
                let h = WeightedHost::from_rows(rows).map_err(|e| mismatch(e.to_string()))?;
                if self.n.is_some_and(|n| n != h.rows()) || self.m.is_some_and(|m| m != h.cols()) {
                    return Err(mismatch(format!("declared {:?}x{:?} but entries are {}x{}", self.n, self.m, h.rows(), h.cols())));
                }
                Ok(h)
            }
            (None, Some(triples)) => {
                let (n, m) = self.n.zip(self.m).ok_or_else(|| mismatch("sparse hosts need n and m".into()))?;
                let mut h = WeightedHost::new(n, m, vec![Q::from_integer(0.into()); n * m]).map_err(|e| mismatch(e.to_string()))?;
                for (i, j, v) in triples {
                    if *i >= n || *j >= m {
                        return Err(mismatch(format!("triple ({i},{j}) outside {n}x{m}")));
                    }
                    h.set(*i, *j, v.value()?);
                }
                Ok(h)
            }
            _ => Err(mismatch("exactly one of `entries` and `triples` is required".into())),
        }
    }
}

/// `{"vertices": n, "edges": [[u, v], ...], "sides": ["L"|"R", ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sides: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<String>,
}

impl GraphFile {
    pub fn from_graph(g: &SimpleGraph) -> Self {
        GraphFile {
            vertices: g.vertex_count(),
            edges: g.edges().collect(),
            sides: g.sides().map(|s| s.iter().map(|x| if *x == Side::Left { "L" } else { "R" }.to_string()).collect()),
            rho: None,
            twist: None,
        }
    }

    pub fn graph(&self) -> Result<SimpleGraph, CliError> {
        let bad = |e: symcirc::Error| CliError::Parse(format!("graph: {e}"));
        let g = SimpleGraph::new(self.vertices, &self.edges).map_err(bad)?;
        match &self.sides {
            None => Ok(g),
            Some(s) => {
                let sides = s
                    .iter()
                    .map(|x| match x.as_str() {
                        "L" => Ok(Side::Left),
                        "R" => Ok(Side::Right),
                        o => Err(CliError::Parse(format!("graph: unknown side `{o}`"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                g.with_sides(sides).map_err(bad)
            }
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Graph files or host files (read as bipartite graphs).
pub fn read_any_graph(path: &Path) -> Result<SimpleGraph, CliError> {
    let v: Value = read_json(path)?;
    if v.get("vertices").is_some() {
        serde_json::from_value::<GraphFile>(v).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?.graph()
    } else {
        let h = serde_json::from_value::<HostFile>(v).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?.host()?;
        Ok(SimpleGraph::from_biadjacency(&h))
    }
}

/// Writes through a temporary file in the target directory and renames it.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn digest(path: &Path) -> Result<InputDigest, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let hash = Sha256::digest(&bytes);
    Ok(InputDigest { path: path.display().to_string(), sha256: hash.iter().map(|b| format!("{b:02x}")).collect() })
}

/// The job description carried by every report.
#[derive(Debug, Clone, Serialize)]
pub struct JobSpec {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub params: Value,
    pub output: Option<String>,
}

impl JobSpec {
    pub fn new(command: &str, seed: Option<u64>, inputs: &[&Path], params: Value, output: Option<&Path>) -> Result<Self, CliError> {
        Ok(JobSpec {
            tool: "symcirc",
            version: symcirc::VERSION,
            command: command.to_string(),
            seed,
            inputs: inputs.iter().map(|p| digest(p)).collect::<Result<_, _>>()?,
            params,
            output: output.map(|p| p.display().to_string()),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub job: JobSpec,
    pub result: T,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_round_trip() {
        let f = BipartitePattern::new(2, 2, &[(0, 0, 2), (1, 1, 1)]).unwrap();
        let file = PatternFile {
            left: 2,
            right: 2,
            edges: f.edge_list().into_iter().map(|(a, b, m)| vec![a as u64, b as u64, m as u64]).collect(),
            labels: None,
        };
        let text = serde_json::to_string(&file).unwrap();
        let back: PatternFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.pattern().unwrap(), f);
        let short: PatternFile = serde_json::from_str(r#"{"left":1,"right":2,"edges":[[0,1]],"labels":{"left":[0]}}"#).unwrap();
        assert_eq!(short.labelled().unwrap().arity(), (1, 0));
        let bad: PatternFile = serde_json::from_str(r#"{"left":1,"right":1,"edges":[[0,3]]}"#).unwrap();
        assert!(bad.pattern().is_err());
    }

    #[test]
    fn dense_and_sparse_hosts_agree() {
        let dense: HostFile = serde_json::from_str(r#"{"n":2,"m":2,"entries":[["1/2",0],[0,3]]}"#).unwrap();
        let sparse: HostFile = serde_json::from_str(r#"{"n":2,"m":2,"triples":[[0,0,"1/2"],[1,1,"3"]]}"#).unwrap();
        assert_eq!(dense.host().unwrap(), sparse.host().unwrap());
        let back: HostFile = serde_json::from_str(&serde_json::to_string(&HostFile::from_host(&dense.host().unwrap())).unwrap()).unwrap();
        assert_eq!(back.host().unwrap(), dense.host().unwrap());
        let ragged: HostFile = serde_json::from_str(r#"{"entries":[["1"],["1","2"]]}"#).unwrap();
        assert!(ragged.host().is_err());
        let outside: HostFile = serde_json::from_str(r#"{"n":1,"m":1,"triples":[[1,0,"1"]]}"#).unwrap();
        assert!(outside.host().is_err());
    }

    #[test]
    fn graph_round_trip() {
        let g = SimpleGraph::complete_bipartite(2, 3);
        let back = GraphFile::from_graph(&g).graph().unwrap();
        assert_eq!(back, g);
    }
}
