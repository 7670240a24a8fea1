//! Batch frontend: multiplicity tables, LS paths, tensor products,
//! galleries, Hecke checks, saturation scans and pipeline traces.
//!
//! Weights are given in fundamental-coweight coordinates as comma-separated
//! integers: `1,0` is `ϖ1∨`, not `α1∨`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lsmodel::coweight::parse_q;
use lsmodel::galleries::{
    enumerate_positively_folded, gallery_to_path, load_bearing_walls, ls_galleries, ls_gallery_counts, minimal_gallery,
};
use lsmodel::paths::{classify, generate_ls, hecke_chains, is_hecke, FoldReference, PLPath, Segment};
use lsmodel::repthy::{
    character_product_oracle, freudenthal_table, lr_witnesses, ls_table, pipeline_steps45, saturation_scan,
    tensor_decomposition, tensor_invariant_witness, LsCache, RepError, ScanConfig, SearchConfig,
};
use lsmodel::{alcove::Alcove, Coweight, RootSystem, VERSION};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lsmodel", version, about = "Exact Littelmann paths, galleries and saturation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Cartan type and weights, either positionally (`A2 1,0 0,1`) or by flag.
#[derive(Args, Clone, Debug)]
struct Input {
    #[arg(value_name = "TYPE_AND_WEIGHTS")]
    positional: Vec<String>,
    /// Cartan type such as A2, B3 or G2.
    #[arg(long = "type")]
    ty: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Dominant weight multiplicities of V(λ), LS count against Freudenthal.
    Character {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// All LS paths of type λ.
    Lspaths {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// V(λ) ⊗ V(μ) by the path rule, with the character-product oracle.
    Tensor {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Multiplicity of V(ν*) in V(λ) ⊗ V(μ), with witness paths.
    Lr {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// LS gallery counts for regular λ; with μ, the dimension ledgers.
    Galleries {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a path given as `direction@duration;...`.
    HeckeCheck {
        #[command(flatten)]
        input: Input,
        /// Segments such as `-1,1@1/2;1,0@1/2`.
        #[arg(long, allow_hyphen_values = true)]
        path: String,
        /// Start point (default 0).
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Scan dominant triples for the saturation statements.
    Satscan {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        nmax: i64,
        /// Worker threads; does not affect the output.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Skip the dilation pipeline on nonzero triples.
        #[arg(long)]
        skip_pipeline: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Trace the dilation and folding steps on one triple.
    Pipeline {
        #[command(flatten)]
        input: Input,
        /// Multiple with a nonzero invariant; by default the least one up to --nmax.
        #[arg(long)]
        n: Option<i64>,
        #[arg(long, default_value_t = 4)]
        nmax: i64,
        #[command(flatten)]
        common: Common,
    },
}

/// Input that fails validation (exit code 1).
#[derive(Debug)]
struct Validation(String);

impl std::fmt::Display for Validation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Validation {}

/// A checked invariant failed (exit code 2).
#[derive(Debug)]
struct Violation(String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Violation {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Validation(msg.into()))
}

fn lift(e: RepError) -> anyhow::Error {
    match e {
        RepError::Oracle(_) => anyhow!(Violation(e.to_string())),
        RepError::BadWeight(_) | RepError::Precondition(_) => invalid(e.to_string()),
        other => anyhow!(other),
    }
}

/// Parsed input plus the config echoed into every output.
struct Run {
    rs: RootSystem,
    weights: Vec<Coweight>,
    config: serde_json::Map<String, Value>,
    common: Common,
}

fn parse_weight(rs: &RootSystem, name: &str, s: &str) -> Result<Coweight> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != rs.rank() {
        return Err(invalid(format!("{name}: expected {} coordinates, got '{s}'", rs.rank())));
    }
    let mut v = Vec::new();
    for p in parts {
        let c: i64 = p
            .parse()
            .map_err(|_| invalid(format!("{name}: '{p}' is not an integer")))?;
        if c < 0 {
            return Err(invalid(format!("{name}: coordinates must be nonnegative")));
        }
        v.push(c);
    }
    Ok(Coweight::from_ints(&v))
}

fn resolve(command: &str, input: &Input, needed: usize, common: &Common) -> Result<Run> {
    let mut pos = input.positional.iter();
    let ty = match &input.ty {
        Some(t) => t.clone(),
        None => pos.next().cloned().ok_or_else(|| invalid("missing Cartan type"))?,
    };
    let rs = RootSystem::from_str_type(&ty).map_err(|e| invalid(e.to_string()))?;
    let names = ["lambda", "mu", "nu"];
    let flags = [&input.lambda, &input.mu, &input.nu];
    let mut config = serde_json::Map::new();
    config.insert("command".into(), json!(command));
    config.insert("type".into(), json!(rs.cartan_type.to_string()));
    let mut weights = Vec::new();
    for k in 0..needed {
        let raw = match flags[k] {
            Some(s) => s.clone(),
            None => pos.next().cloned().ok_or_else(|| invalid(format!("missing {}", names[k])))?,
        };
        let w = parse_weight(&rs, names[k], &raw)?;
        config.insert(names[k].into(), json!(w.to_ints().expect("integral")));
        weights.push(w);
    }
    if let Some(extra) = pos.next() {
        return Err(invalid(format!("unexpected argument '{extra}'")));
    }
    config.insert("format".into(), json!(common.format));
    Ok(Run { rs, weights, config, common: common.clone() })
}

fn header_lines(run: &Run) -> String {
    format!(
        "# config: {}\n# version: {VERSION}\n",
        serde_json::to_string(&run.config).expect("json")
    )
}

/// Writes to `--out` through a temporary file in the same directory, or to stdout.
fn emit(run: &Run, body: &str) -> Result<()> {
    match &run.common.out {
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(std::path::Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
            tmp.write_all(body.as_bytes())?;
            tmp.persist(path).map_err(|e| e.error).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn emit_json(run: &Run, result: Value) -> Result<()> {
    let doc = json!({ "config": run.config, "version": VERSION, "result": result });
    emit(run, &(serde_json::to_string_pretty(&doc)? + "\n"))
}

fn emit_csv(run: &Run, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| anyhow!(e.to_string()))?)?;
    emit(run, &(header_lines(run) + &body))
}

fn emit_either(run: &Run, result: Value, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    match run.common.format {
        Format::Json => emit_json(run, result),
        Format::Csv => emit_csv(run, header, rows),
    }
}

fn path_text(p: &PLPath) -> String {
    p.segments
        .iter()
        .map(|s| format!("{}@{}", s.direction, lsmodel::coweight::fmt_q(&s.duration)))
        .collect::<Vec<_>>()
        .join(";")
}

fn dominant(run: &Run) -> Result<()> {
    for w in &run.weights {
        if !w.is_dominant() {
            return Err(invalid(format!("{w} is not dominant")));
        }
    }
    Ok(())
}

fn cmd_character(run: Run) -> Result<()> {
    dominant(&run)?;
    let (rs, l) = (&run.rs, &run.weights[0]);
    let ls = ls_table(rs, l).map_err(lift)?;
    let fr = freudenthal_table(rs, l).map_err(lift)?;
    let mut keys: Vec<&Coweight> = ls.entries.keys().chain(fr.entries.keys()).collect();
    keys.sort_by(|a, b| b.cmp(a));
    keys.dedup();
    let agreement = ls.entries == fr.entries;
    let entries: Vec<Value> = keys
        .iter()
        .map(|w| json!({"weight": w, "ls": ls.get(w), "freudenthal": fr.get(w), "agree": ls.get(w) == fr.get(w)}))
        .collect();
    let rows = keys
        .iter()
        .map(|w| vec![w.to_string(), ls.get(w).to_string(), fr.get(w).to_string(), (ls.get(w) == fr.get(w)).to_string()])
        .collect();
    emit_either(
        &run,
        json!({"lambda": l, "dimension": lsmodel::repthy::weyl_dimension(rs, l).to_string(), "agreement": agreement, "entries": entries}),
        &["weight", "ls", "freudenthal", "agree"],
        rows,
    )?;
    if !agreement {
        bail!(Violation("LS multiplicities disagree with Freudenthal".into()));
    }
    Ok(())
}

fn cmd_lspaths(run: Run) -> Result<()> {
    dominant(&run)?;
    let paths = generate_ls(&run.rs, &run.weights[0]).map_err(|e| lift(e.into()))?;
    let rows = paths
        .iter()
        .enumerate()
        .map(|(i, p)| vec![i.to_string(), p.endpoint().to_string(), path_text(p)])
        .collect();
    emit_either(&run, json!({"count": paths.len(), "paths": paths}), &["index", "endpoint", "segments"], rows)
}

fn cmd_tensor(run: Run) -> Result<()> {
    dominant(&run)?;
    let (rs, l, m) = (&run.rs, &run.weights[0], &run.weights[1]);
    let paths = tensor_decomposition(rs, l, m, &LsCache::new()).map_err(lift)?;
    let oracle = character_product_oracle(rs, l, m).map_err(lift)?;
    let agreement = paths.entries == oracle.entries;
    let mut keys: Vec<&Coweight> = paths.entries.keys().chain(oracle.entries.keys()).collect();
    keys.sort_by(|a, b| b.cmp(a));
    keys.dedup();
    let entries: Vec<Value> = keys
        .iter()
        .map(|w| json!({"weight": w, "multiplicity": paths.get(w), "oracle": oracle.get(w)}))
        .collect();
    let rows = keys
        .iter()
        .map(|w| vec![w.to_string(), paths.get(w).to_string(), oracle.get(w).to_string()])
        .collect();
    emit_either(
        &run,
        json!({"summands": paths.entries.values().sum::<u64>(), "agreement": agreement, "entries": entries}),
        &["weight", "multiplicity", "oracle"],
        rows,
    )?;
    if !agreement {
        bail!(Violation("path rule disagrees with the character product".into()));
    }
    Ok(())
}

fn cmd_lr(run: Run) -> Result<()> {
    dominant(&run)?;
    let (rs, l, m, n) = (&run.rs, &run.weights[0], &run.weights[1], &run.weights[2]);
    let witnesses = lr_witnesses(rs, l, m, n, &LsCache::new()).map_err(lift)?;
    let star = rs.star(n).map_err(|e| invalid(e.to_string()))?;
    let oracle = character_product_oracle(rs, l, m).map_err(lift)?.get(&star);
    let count = witnesses.len() as u64;
    let in_q = rs.in_coroot_lattice(&(&(l + m) + n));
    emit_either(
        &run,
        json!({
            "count": count,
            "oracle": oracle,
            "lattice_obstruction": !in_q,
            "nu_star": star,
            "witnesses": witnesses,
        }),
        &["lambda", "mu", "nu", "count", "oracle", "lattice_obstruction"],
        vec![vec![l.to_string(), m.to_string(), n.to_string(), count.to_string(), oracle.to_string(), (!in_q).to_string()]],
    )?;
    if count != oracle {
        bail!(Violation(format!("path count {count} differs from oracle {oracle}")));
    }
    Ok(())
}

fn cmd_galleries(run: Run, with_mu: bool) -> Result<()> {
    dominant(&run)?;
    let rs = &run.rs;
    let l = &run.weights[0];
    let model = minimal_gallery(rs, l).map_err(|e| invalid(e.to_string()))?;
    let counts = ls_gallery_counts(rs, &model);
    let mut paths = std::collections::BTreeMap::new();
    for p in generate_ls(rs, l).map_err(|e| lift(e.into()))? {
        *paths.entry(p.endpoint()).or_insert(0usize) += 1;
    }
    if counts != paths {
        bail!(Violation("LS gallery counts differ from LS path counts".into()));
    }
    let total = enumerate_positively_folded(rs, &model).len();
    if !with_mu {
        let rows = counts.iter().rev().map(|(m, c)| vec![m.to_string(), c.to_string()]).collect();
        let list: Vec<Value> = counts.iter().rev().map(|(m, c)| json!({"mu": m, "count": c})).collect();
        return emit_either(
            &run,
            json!({"gallery_length": model.gallery.len(), "positively_folded": total, "counts": list}),
            &["mu", "ls_galleries"],
            rows,
        );
    }
    let mu = &run.weights[1];
    let mut ledgers = Vec::new();
    let mut rows = Vec::new();
    for (i, g) in ls_galleries(rs, &model, mu).iter().enumerate() {
        let ledger = load_bearing_walls(rs, g).map_err(|e| anyhow!(Violation(e.to_string())))?;
        for s in &ledger.steps {
            let param = serde_json::to_value(s.parameter)?.as_str().unwrap_or_default().to_string();
            rows.push(vec![
                i.to_string(),
                s.step.to_string(),
                (s.wall.root + 1).to_string(),
                s.wall.level.to_string(),
                s.case.map(|c| c.to_string()).unwrap_or_default(),
                param,
            ]);
        }
        let path = gallery_to_path(rs, &model, g).map_err(|e| anyhow!(Violation(e.to_string())))?;
        ledgers.push(json!({"gallery": g, "path": path, "ledger": ledger}));
    }
    emit_either(
        &run,
        json!({"mu": mu, "count": ledgers.len(), "galleries": ledgers}),
        &["gallery", "step", "root", "level", "case", "parameter"],
        rows,
    )
}

fn parse_rational_point(rs: &RootSystem, s: &str) -> Result<Coweight> {
    rs.parse_coweight(s).map_err(|e| invalid(e.to_string()))
}

fn cmd_hecke_check(run: Run, path: &str, base: Option<&str>) -> Result<()> {
    let rs = &run.rs;
    let base = match base {
        Some(b) => parse_rational_point(rs, b)?,
        None => Coweight::zero(rs.rank()),
    };
    let mut segments = Vec::new();
    for piece in path.split(';').filter(|p| !p.trim().is_empty()) {
        let (d, t) = piece
            .split_once('@')
            .ok_or_else(|| invalid(format!("segment '{piece}' needs direction@duration")))?;
        let duration = parse_q(t).ok_or_else(|| invalid(format!("bad duration '{t}'")))?;
        segments.push(Segment { direction: parse_rational_point(rs, d)?, duration });
    }
    let p = PLPath::new(base, segments).map_err(|e| invalid(e.to_string()))?;
    let classes = classify(rs, &p).map_err(|e| invalid(e.to_string()))?;
    let neg = Alcove::negative(rs);
    let alcove = is_hecke(rs, &p, &FoldReference::Alcove(neg)).map_err(|e| invalid(e.to_string()))?;
    let chains = hecke_chains(rs, &p, &FoldReference::NegDominant).map_err(|e| invalid(e.to_string()))?;
    let chains: Vec<Value> = chains
        .iter()
        .zip(p.breakpoints())
        .map(|(c, bp)| {
            json!({
                "time": lsmodel::coweight::fmt_q(&bp.time),
                "point": bp.point,
                "chain_roots": c.as_ref().map(|c| c.roots.iter().map(|r| r + 1).collect::<Vec<_>>()),
            })
        })
        .collect();
    emit_either(
        &run,
        json!({"path": p, "classes": classes, "hecke_alcove_negative": alcove, "breakpoints": chains}),
        &["billiard", "positively_folded", "hecke", "ls", "hecke_alcove_negative"],
        vec![vec![
            classes.billiard.to_string(),
            classes.positively_folded.to_string(),
            classes.hecke.to_string(),
            classes.ls.to_string(),
            alcove.to_string(),
        ]],
    )
}

fn cmd_satscan(mut run: Run, bound: i64, nmax: i64, jobs: usize, skip: bool) -> Result<()> {
    if bound < 1 || nmax < 1 {
        return Err(invalid("--bound and --nmax must be at least 1"));
    }
    run.config.insert("bound".into(), json!(bound));
    run.config.insert("nmax".into(), json!(nmax));
    run.config.insert("pipeline".into(), json!(!skip));
    let cfg = ScanConfig { bound, n_max: nmax, search: SearchConfig::default(), pipeline: !skip };
    let report = saturation_scan(&run.rs, &cfg, jobs).map_err(lift)?;
    let mut header = vec!["lambda".to_string(), "mu".into(), "nu".into()];
    header.extend((1..=nmax).map(|n| format!("inv_n{n}")));
    header.extend(["at_k", "at_k2", "cone", "cone_via", "theorem_ok", "k_conjecture_ok", "pipeline_ok"].map(String::from));
    let opt = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
    let rows = report
        .records
        .iter()
        .map(|r| {
            let mut row = vec![r.lambda.to_string(), r.mu.to_string(), r.nu.to_string()];
            row.extend(r.invariants.iter().map(|b| b.to_string()));
            row.extend([
                r.at_k.to_string(),
                r.at_k2.to_string(),
                opt(r.cone),
                r.cone_via.clone().unwrap_or_default(),
                r.theorem_ok.to_string(),
                r.k_conjecture_ok.to_string(),
                opt(r.pipeline_ok),
            ]);
            row
        })
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    emit_either(&run, serde_json::to_value(&report)?, &header, rows)?;
    if report.theorem_violations > 0 {
        bail!(Violation(format!("{} theorem violations", report.theorem_violations)));
    }
    Ok(())
}

fn cmd_pipeline(mut run: Run, n: Option<i64>, nmax: i64) -> Result<()> {
    dominant(&run)?;
    let rs = &run.rs;
    let (l, m, v) = (&run.weights[0], &run.weights[1], &run.weights[2]);
    let cache = LsCache::new();
    let n = match n {
        Some(n) if n >= 1 => n,
        Some(_) => return Err(invalid("--n must be at least 1")),
        None => {
            let mut found = None;
            for k in 1..=nmax {
                let q = lsmodel::coweight::qi(k);
                if tensor_invariant_witness(rs, &l.scale(q), &m.scale(q), &v.scale(q), &cache).map_err(lift)?.is_some() {
                    found = Some(k);
                    break;
                }
            }
            found.ok_or_else(|| invalid(format!("no nonzero invariant for N ≤ {nmax}")))?
        }
    };
    run.config.insert("n".into(), json!(n));
    let trace = pipeline_steps45(rs, l, m, v, n, &SearchConfig::default(), &cache).map_err(lift)?;
    let rows = trace
        .stages
        .iter()
        .flat_map(|s| s.checks.iter().map(move |c| vec![s.stage.clone(), c.name.clone(), c.ok.to_string()]))
        .collect();
    emit_either(&run, serde_json::to_value(&trace)?, &["stage", "check", "ok"], rows)?;
    if !trace.ok {
        bail!(Violation(format!("stage checks failed: {:?}", trace.failures())));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Character { input, common } => cmd_character(resolve("character", &input, 1, &common)?),
        Command::Lspaths { input, common } => cmd_lspaths(resolve("lspaths", &input, 1, &common)?),
        Command::Tensor { input, common } => cmd_tensor(resolve("tensor", &input, 2, &common)?),
        Command::Lr { input, common } => cmd_lr(resolve("lr", &input, 3, &common)?),
        Command::Galleries { input, common } => {
            let given = input.positional.len() + usize::from(input.ty.is_some()) + usize::from(input.lambda.is_some());
            let with_mu = input.mu.is_some() || given >= 3;
            cmd_galleries(resolve("galleries", &input, 1 + usize::from(with_mu), &common)?, with_mu)
        }
        Command::HeckeCheck { input, path, base, common } => {
            let mut r = resolve("hecke-check", &input, 0, &common)?;
            r.config.insert("path".into(), json!(path));
            r.config.insert("base".into(), json!(base));
            cmd_hecke_check(r, &path, base.as_deref())
        }
        Command::Satscan { input, bound, nmax, jobs, skip_pipeline, common } => {
            cmd_satscan(resolve("satscan", &input, 0, &common)?, bound, nmax, jobs, skip_pipeline)
        }
        Command::Pipeline { input, n, nmax, common } => cmd_pipeline(resolve("pipeline", &input, 3, &common)?, n, nmax),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Violation>().is_some() {
                ExitCode::from(2)
            } else if e.downcast_ref::<Validation>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
