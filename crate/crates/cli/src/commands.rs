use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use symcirc::cfi::{self, SimpleGraph};
use symcirc::circuit::{deserialize, serialize};
use symcirc::immanant::{self, IntegerPartition, ImmanantCaps};
use symcirc::oracle::{brute_emb, brute_hom, brute_sub};
use symcirc::rational::fmt_q;
use symcirc::synth::{self, BicliqueKind};
use symcirc::treedec::{exact_treewidth, TreeDecomposition};
use symcirc::{Circuit, WeightedHost, Q};

use crate::formats::{read_any_graph, read_json, read_text, write_atomic, GraphFile, HostFile, JobSpec, PatternFile, Report};
use crate::{Biclique, CfiArgs, CliError, Oracle, Output, Poly, SynthKind, TreewidthArgs, VerifyArgs, WidthArgs, WlArgs};

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

fn emit_to(path: Option<&Path>, text: &str, stderr: bool) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text),
        None if stderr => {
            eprint!("{text}");
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn emit_circuit<T: Serialize>(circuit: &Circuit, result: T, job: JobSpec, output: &Output) -> Result<(), CliError> {
    emit_to(output.out.as_deref(), &serialize(circuit), false)?;
    emit_to(output.report.as_deref(), &to_json(&Report { job, result }), true)
}

fn read_pattern(path: &Path) -> Result<symcirc::BipartitePattern, CliError> {
    read_json::<PatternFile>(path)?.pattern()
}

fn read_circuit(path: &Path) -> Result<Circuit, CliError> {
    Ok(deserialize(&read_text(path)?)?)
}

fn read_td(path: &Path, vertices: usize) -> Result<TreeDecomposition, CliError> {
    let (td, declared) = TreeDecomposition::from_pace(&read_text(path)?)?;
    if declared != vertices {
        return Err(CliError::Parse(format!("{} declares {declared} vertices, the pattern has {vertices}", path.display())));
    }
    Ok(td)
}

pub fn synth(kind: SynthKind) -> Result<(), CliError> {
    match kind {
        SynthKind::Hom { pattern, td, n, m, output } => {
            let f = read_pattern(&pattern)?;
            let decomposition = td.as_deref().map(|p| read_td(p, f.vertex_count())).transpose()?;
            let rep = synth::synth_hom(&f, decomposition.as_ref(), n, m)?;
            let mut inputs = vec![pattern.as_path()];
            inputs.extend(td.as_deref());
            let job = JobSpec::new("synth hom", None, &inputs, json!({"n": n, "m": m}), output.out.as_deref())?;
            emit_circuit(&rep.circuit, &rep, job, &output)
        }
        SynthKind::SubMoebius { pattern, n, m, output } => {
            let f = read_pattern(&pattern)?;
            let rep = synth::synth_sub_moebius(&f, n, m)?;
            let job = JobSpec::new("synth sub-moebius", None, &[&pattern], json!({"n": n, "m": m}), output.out.as_deref())?;
            emit_circuit(&rep.circuit, &rep, job, &output)
        }
        SynthKind::SubCover { pattern, n, m, cap_cover, output } => {
            let f = read_pattern(&pattern)?;
            let rep = synth::synth_sub_cover(&f, n, m, cap_cover)?;
            let job = JobSpec::new("synth sub-cover", None, &[&pattern], json!({"n": n, "m": m, "cap_cover": cap_cover}), output.out.as_deref())?;
            emit_circuit(&rep.circuit, &rep, job, &output)
        }
        SynthKind::Biclique { kind, k, n, output } => {
            let kind = match kind {
                Biclique::K => BicliqueKind::K,
                Biclique::NMinusK => BicliqueKind::NMinusK,
            };
            let rep = synth::synth_biclique(kind, k, n)?;
            let job = JobSpec::new("synth biclique", None, &[], json!({"kind": kind, "k": k, "n": n}), output.out.as_deref())?;
            emit_circuit(&rep.circuit, &rep, job, &output)
        }
        SynthKind::Immanant { lambda, seed, cap_b, cap_n, output } => {
            let lambda = IntegerPartition::parse(&lambda)?;
            let rep = immanant::synth_immanant(&lambda, ImmanantCaps { max_b: cap_b, max_n: cap_n }, seed)?;
            let params = json!({"lambda": lambda.to_string(), "cap_b": cap_b, "cap_n": cap_n});
            let job = JobSpec::new("synth immanant", Some(seed), &[], params, output.out.as_deref())?;
            emit_circuit(&rep.circuit, &rep, job, &output)
        }
        SynthKind::Determinant { n, output } => {
            let c = immanant::synth_symmetric_determinant(n)?;
            let result = json!({"kind": "determinant", "n": n, "size": c.size(), "gates": c.gate_count()});
            let job = JobSpec::new("synth determinant", None, &[], json!({"n": n}), output.out.as_deref())?;
            emit_circuit(&c, result, job, &output)
        }
    }
}

pub fn eval(circuit: &Path, host: &Path) -> Result<(), CliError> {
    let c = read_circuit(circuit)?;
    let h = read_json::<HostFile>(host)?.host()?;
    if (h.rows(), h.cols()) != (c.rows(), c.cols()) {
        return Err(CliError::Parse(format!("host is {}x{} but the circuit expects {}x{}", h.rows(), h.cols(), c.rows(), c.cols())));
    }
    println!("{}", fmt_q(&c.evaluate(&h)?));
    Ok(())
}

type OracleFn = Box<dyn Fn(&WeightedHost) -> symcirc::Result<Q>>;

fn oracle_fn(a: &VerifyArgs, c: &Circuit) -> Result<OracleFn, CliError> {
    let need_pattern = || a.pattern.as_deref().ok_or_else(|| CliError::Usage(format!("--pattern is required by the {:?} oracle", a.oracle)));
    let square = || {
        if c.rows() == c.cols() {
            Ok(())
        } else {
            Err(CliError::Parse(format!("{:?} needs a square circuit, got {}x{}", a.oracle, c.rows(), c.cols())))
        }
    };
    Ok(match a.oracle {
        Oracle::Hom | Oracle::Sub | Oracle::Emb => {
            let f = read_pattern(need_pattern()?)?;
            match a.oracle {
                Oracle::Hom => Box::new(move |h| brute_hom(&f, h)),
                Oracle::Sub => Box::new(move |h| brute_sub(&f, h)),
                _ => Box::new(move |h| brute_emb(&f, h)),
            }
        }
        Oracle::Immanant => {
            square()?;
            let s = a.lambda.as_deref().ok_or_else(|| CliError::Usage("--lambda is required by the immanant oracle".into()))?;
            let lambda = IntegerPartition::parse(s)?;
            if lambda.size() != c.rows() {
                return Err(CliError::Parse(format!("partition of {} for a {}x{} circuit", lambda.size(), c.rows(), c.cols())));
            }
            Box::new(move |h| immanant::brute_force_immanant(&lambda, h))
        }
        Oracle::Determinant => {
            square()?;
            Box::new(immanant::cofactor_determinant)
        }
        Oracle::Permanent => {
            square()?;
            let lambda = IntegerPartition::new(vec![c.rows()])?;
            Box::new(move |h| immanant::brute_force_immanant(&lambda, h))
        }
    })
}

pub fn verify(a: VerifyArgs) -> Result<(), CliError> {
    if a.trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let c = read_circuit(&a.circuit)?;
    if c.aux_count() > 0 {
        return Err(CliError::Parse("circuits with auxiliary inputs cannot be verified against host oracles".into()));
    }
    let oracle = oracle_fn(&a, &c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut failure = None;
    for trial in 0..a.trials {
        let h = WeightedHost::random(&mut rng, c.rows(), c.cols(), 9, 4);
        let (got, want) = (c.evaluate(&h)?, oracle(&h)?);
        if got != want {
            failure = Some(json!({"trial": trial, "circuit": fmt_q(&got), "oracle": fmt_q(&want), "host": HostFile::from_host(&h)}));
            break;
        }
    }
    let mut inputs = vec![a.circuit.as_path()];
    inputs.extend(a.pattern.as_deref());
    let params = json!({"oracle": format!("{:?}", a.oracle).to_lowercase(), "lambda": a.lambda, "trials": a.trials});
    let job = JobSpec::new("verify", Some(a.seed), &inputs, params, None)?;
    let verdict = if failure.is_some() { "FAIL" } else { "PASS" };
    let result = json!({"verdict": verdict, "counterexample": failure});
    if let Some(p) = &a.report {
        write_atomic(p, &to_json(&Report { job, result }))?;
    }
    match failure {
        None => {
            println!("PASS ({} trials)", a.trials);
            Ok(())
        }
        Some(cx) => {
            println!("FAIL");
            println!("{}", serde_json::to_string(&cx).expect("json"));
            Err(CliError::Verify("circuit disagrees with the oracle".into()))
        }
    }
}

fn with_bipartition(g: SimpleGraph) -> Result<SimpleGraph, CliError> {
    if g.sides().is_some() {
        return Ok(g);
    }
    match g.two_colouring() {
        Some(s) => Ok(g.with_sides(s)?),
        None => Ok(g),
    }
}

fn numbers(s: &str, seps: &[char]) -> Option<Vec<usize>> {
    s.split(|c| seps.contains(&c)).map(|t| t.parse().ok()).collect()
}

fn named_base(name: &str) -> Result<SimpleGraph, CliError> {
    let lower = name.to_ascii_lowercase();
    let bad = || CliError::Usage(format!("unknown base `{name}`"));
    let g = if let Some(rest) = lower.strip_prefix("grid") {
        match numbers(rest, &['x']).as_deref() {
            Some([r, c]) if *r > 0 && *c > 0 => SimpleGraph::grid(*r, *c),
            _ => return Err(bad()),
        }
    } else if let Some(rest) = lower.strip_prefix('c') {
        SimpleGraph::cycle(rest.parse().map_err(|_| bad())?)?
    } else if let Some(rest) = lower.strip_prefix('p') {
        SimpleGraph::path(rest.parse().map_err(|_| bad())?)
    } else if let Some(rest) = lower.strip_prefix('k') {
        match numbers(rest, &[',', 'x']).as_deref() {
            Some([n]) => SimpleGraph::complete(*n),
            Some([a, b]) => SimpleGraph::complete_bipartite(*a, *b),
            _ => return Err(bad()),
        }
    } else {
        return Err(bad());
    };
    with_bipartition(g)
}

pub fn cfi(a: CfiArgs) -> Result<(), CliError> {
    let from_file = Path::new(&a.base).extension().is_some_and(|e| e == "json");
    let base = if from_file { with_bipartition(read_any_graph(Path::new(&a.base))?)? } else { named_base(&a.base)? };
    let nv = base.vertex_count();
    let twist: Vec<bool> = match &a.twist {
        None => vec![false; nv],
        Some(s) => s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CliError::Usage(format!("twist must be a 0/1 string, got `{s}`"))),
            })
            .collect::<Result<_, _>>()?,
    };
    if twist.len() != nv {
        return Err(CliError::Usage(format!("twist has {} characters for {nv} base vertices", twist.len())));
    }
    let inst = cfi::cfi(&base, &twist)?;
    let mut file = GraphFile::from_graph(&inst.graph);
    file.rho = Some(inst.rho.clone());
    file.twist = Some(twist.iter().map(|&t| if t { '1' } else { '0' }).collect());
    emit_to(a.out.as_deref(), &to_json(&file), false)?;
    if let Some(p) = &a.host_out {
        let (host, _, _) = inst.graph.biadjacency()?;
        write_atomic(p, &to_json(&HostFile::from_host(&host)))?;
    }
    Ok(())
}

pub fn wl(a: WlArgs) -> Result<(), CliError> {
    if a.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let (g, h) = (read_any_graph(&a.g)?, read_any_graph(&a.h)?);
    let v = cfi::ck_equivalent(&g, &h, a.k);
    println!("{}", if v.equivalent { "EQUIVALENT" } else { "DISTINGUISHED" });
    if let Some(p) = &a.report {
        let job = JobSpec::new("wl", None, &[&a.g, &a.h], json!({"k": a.k, "wl_dimension": a.k - 1}), None)?;
        write_atomic(p, &to_json(&Report { job, result: &v }))?;
    }
    Ok(())
}

pub fn widthlab(a: WidthArgs) -> Result<(), CliError> {
    if a.bases != "auto" {
        return Err(CliError::Usage(format!("unsupported --bases `{}`; only `auto` is available", a.bases)));
    }
    if a.pairs == 0 {
        return Err(CliError::Usage("--pairs must be positive".into()));
    }
    let pattern = match (a.poly, &a.pattern) {
        (Poly::Hom, Some(p)) => Some(read_pattern(p)?),
        (Poly::Hom, None) => return Err(CliError::Usage("--poly hom needs --pattern".into())),
        _ => None,
    };
    let pairs = cfi::generate_ck_pairs(a.k, a.pairs, a.seed)?;
    let mut circuits: HashMap<(usize, usize), Circuit> = HashMap::new();
    let mut value = |h: &WeightedHost| -> Result<Option<Q>, CliError> {
        let dims = (h.rows(), h.cols());
        Ok(match a.poly {
            Poly::Perm => Some(Q::from_integer(cfi::perfect_matching_count(&SimpleGraph::from_biadjacency(h))?)),
            Poly::Det if dims.0 != dims.1 => None,
            Poly::Det | Poly::Hom => {
                if !circuits.contains_key(&dims) {
                    let c = match &pattern {
                        Some(f) => synth::synth_hom(f, None, dims.0, dims.1)?.circuit,
                        None => immanant::synth_symmetric_determinant(dims.0)?,
                    };
                    circuits.insert(dims, c);
                }
                Some(circuits[&dims].evaluate(h)?)
            }
        })
    };
    let mut inputs = Vec::new();
    inputs.extend(a.pattern.as_deref());
    let params = json!({"poly": format!("{:?}", a.poly).to_lowercase(), "k": a.k, "bases": a.bases, "pairs": a.pairs});
    let job = JobSpec::new("widthlab", Some(a.seed), &inputs, params, a.out.as_deref())?;
    let mut lines = vec![serde_json::to_string(&json!({"job": job})).expect("json")];
    let (mut agree, mut gaps, mut skipped) = (0usize, 0usize, 0usize);
    for p in &pairs {
        let (x, y) = (value(&p.g)?, value(&p.h)?);
        let (verdict, left, right) = match (x, y) {
            (Some(x), Some(y)) => {
                let v = if x == y { "equal" } else { "gap" };
                (v, Value::from(fmt_q(&x)), Value::from(fmt_q(&y)))
            }
            _ => ("skipped", Value::Null, Value::Null),
        };
        match verdict {
            "equal" => agree += 1,
            "gap" => gaps += 1,
            _ => skipped += 1,
        }
        let line = json!({"id": p.id, "base": p.base, "k": p.k, "parities": [p.parities.0, p.parities.1], "rows": p.rows, "cols": p.cols, "verdict": verdict, "left": left, "right": right});
        lines.push(serde_json::to_string(&line).expect("json"));
    }
    lines.push(serde_json::to_string(&json!({"summary": {"pairs": pairs.len(), "equal": agree, "gaps": gaps, "skipped": skipped}})).expect("json"));
    emit_to(a.out.as_deref(), &(lines.join("\n") + "\n"), false)
}

pub fn treewidth(a: TreewidthArgs) -> Result<(), CliError> {
    let f = read_pattern(&a.pattern)?;
    let (width, td) = match &a.check {
        Some(p) => {
            let td = read_td(p, f.vertex_count())?;
            (td.validate(&f)?, td)
        }
        None => exact_treewidth(&f)?,
    };
    let text = format!("c treewidth {width}\n{}", td.to_pace(f.vertex_count()));
    emit_to(a.out.as_deref(), &text, false)?;
    if a.out.is_some() {
        println!("treewidth {width}");
    }
    Ok(())
}
