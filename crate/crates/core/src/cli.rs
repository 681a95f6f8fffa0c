//! Command-line pipeline: compile, verify, solve, search and catalog.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::convert::{
    chain_rewrite, energy_gap_ising, ising_to_max2xor, max2xor_to_ising, max2xor_to_qubo,
    normalize_to_ranges, qubo_to_max2xor, read_qubo, unit_ranges, write_qubo, CouplingGraph,
    IsingModel, QuboModel,
};
use crate::formula::{parse_dimacs, Clause, CnfFormula};
use crate::gadgets::{
    bian_equivalence_template, compile_cnf, GadgetApplication, GadgetKind, GadgetParams, Strategy,
};
use crate::max2xor::{Assignment, Max2XorProblem};
use crate::rational::Rational;
use crate::search::{search_gadget_with, SearchMethod, SearchProblem};
use crate::verify::{
    anneal_qubo, certificate_json, certify_gadget, certify_source, GadgetCertificate, Schedule,
};

#[derive(Debug, Parser)]
#[command(
    name = "sat2xor",
    version,
    about = "SAT to Max2XOR/QUBO/Ising gadget compiler and verifier"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a DIMACS formula (or a Max2XOR JSON problem) to a model file.
    Compile(CompileArgs),
    /// Certify a named gadget or a Max2XOR JSON gadget file.
    Verify(VerifyArgs),
    /// Minimize a model file exactly or by simulated annealing.
    Solve(SolveArgs),
    /// Search for the gadget with the largest energy gap.
    Search(SearchArgs),
    /// Print every catalog gadget with its certificate.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    M2x,
    Qubo,
    Ising,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// DIMACS CNF file, Max2XOR JSON file, or `-` for stdin.
    pub input: PathBuf,
    /// Per-width gadget strategy, e.g. `1:unit,2:direct,3:tree,4+:tree-balanced`.
    #[arg(long, conflicts_with = "gadget")]
    pub strategy: Option<String>,
    /// Use one gadget kind for every width.
    #[arg(long)]
    pub gadget: Option<String>,
    #[arg(long, value_enum, default_value = "m2x")]
    pub format: Format,
    /// Coupling graph (`u v` per line); pairs are routed through chains.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Variable placement `var:qubit,…`; defaults to vertices in order.
    #[arg(long, requires = "graph")]
    pub placement: Option<String>,
    /// Weight of chain equalities; defaults to the largest constraint weight.
    #[arg(long, requires = "graph")]
    pub chain_weight: Option<Rational>,
    /// Merge constraints on equal scopes before writing. Cancelled weight
    /// leaves the model, so its minimum drops by the simplification offset.
    #[arg(long)]
    pub simplify: bool,
    /// Scale the model into the [−1, 1] bias and coupling ranges.
    #[arg(long)]
    pub normalize: bool,
    /// Model output file; stdout when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// JSON report file; `-` for stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Gadget name (`tree`, `chancellor`, `bian-eq`, …) or Max2XOR JSON file.
    pub gadget: String,
    /// Clause width.
    pub width: Option<u32>,
    /// Print the full certificate as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Anneal,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Max2XOR JSON, QUBO text or Ising JSON model.
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub aux: usize,
    /// Allow falsifying inputs to stay below `α − 1`.
    #[arg(long)]
    pub no_strict: bool,
    /// Heuristic witness alternation instead of branch-and-bound.
    #[arg(long)]
    pub heuristic: bool,
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Human-readable table instead of JSON.
    #[arg(long)]
    pub table: bool,
}

/// Streams a command writes to.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli, io: &mut Io<'_>) -> Result<i32> {
    match cli.command {
        Command::Compile(a) => cmd_compile(&a, io),
        Command::Verify(a) => cmd_verify(&a, io),
        Command::Solve(a) => cmd_solve(&a, io),
        Command::Search(a) => cmd_search(&a, io),
        Command::Catalog(a) => cmd_catalog(&a, io),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

#[derive(Clone, Debug, Serialize)]
pub struct ClauseReport {
    pub clause: Vec<i64>,
    pub gadget: String,
    pub alpha: Rational,
    pub beta: Rational,
    pub delta_e: Option<Rational>,
    pub num_aux: u32,
    pub strict: bool,
    /// Parameters stated in the literature when they differ from the
    /// certified ones.
    pub paper_claimed: Option<GadgetParams>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CompileReport {
    pub input_kind: String,
    pub format: Option<Format>,
    pub clauses: Vec<ClauseReport>,
    pub num_clauses: usize,
    pub tautologies_dropped: usize,
    pub sum_alpha_minus_one: Rational,
    pub sum_beta_minus_alpha: Rational,
    pub num_aux: u32,
    pub num_vars: u32,
    pub num_constraints: usize,
    /// Qubits in use after chain routing, if a graph was given.
    pub qubits: Option<usize>,
    pub chain_qubits: usize,
    pub weak_chains: Vec<String>,
    pub energy_gap_before: Option<Rational>,
    pub energy_gap_after: Option<Rational>,
    pub scale: Rational,
    /// Formula unsatisfiable iff `Cost(P′) ≥` this, with `P′` the raw
    /// gadget union.
    pub unsat_threshold: Option<Rational>,
    /// The same threshold for the minimum value of the emitted model.
    pub model_unsat_threshold: Option<Rational>,
}

impl CompileReport {
    pub fn table(&self) -> String {
        let mut s = String::new();
        if !self.clauses.is_empty() {
            let _ = writeln!(
                s,
                "{:<4} {:<22} {:<16} {:>6} {:>7} {:>6} {:>4}",
                "#", "clause", "gadget", "α", "β", "ΔE", "aux"
            );
            for (i, c) in self.clauses.iter().enumerate() {
                let lits: Vec<String> = c.clause.iter().map(i64::to_string).collect();
                let de = c
                    .delta_e
                    .as_ref()
                    .map_or("-".to_string(), Rational::to_string);
                let _ = writeln!(
                    s,
                    "{:<4} {:<22} {:<16} {:>6} {:>7} {:>6} {:>4}",
                    i + 1,
                    lits.join(" "),
                    c.gadget,
                    c.alpha.to_string(),
                    c.beta.to_string(),
                    de,
                    c.num_aux
                );
                if let Some(p) = &c.paper_claimed {
                    let _ = writeln!(s, "     literature: {}", p.summary());
                }
            }
        }
        let opt = |r: &Option<Rational>| r.as_ref().map_or("-".to_string(), Rational::to_string);
        let _ = writeln!(
            s,
            "clauses            {} ({} tautologies dropped)",
            self.num_clauses, self.tautologies_dropped
        );
        let _ = writeln!(s, "Σ(α−1)             {}", self.sum_alpha_minus_one);
        let _ = writeln!(s, "Σ(β−α)             {}", self.sum_beta_minus_alpha);
        let _ = writeln!(
            s,
            "variables          {} ({} auxiliary)",
            self.num_vars, self.num_aux
        );
        let _ = writeln!(s, "constraints        {}", self.num_constraints);
        if let Some(q) = self.qubits {
            let _ = writeln!(
                s,
                "qubits             {} ({} in chains)",
                q, self.chain_qubits
            );
        }
        let _ = writeln!(
            s,
            "energy gap         {} → {} (scale {})",
            opt(&self.energy_gap_before),
            opt(&self.energy_gap_after),
            self.scale
        );
        if let (Some(t), Some(m)) = (&self.unsat_threshold, &self.model_unsat_threshold) {
            let _ = writeln!(s, "unsat threshold    {t} (model value {m})");
        }
        s
    }
}

fn strategy_from(args: &CompileArgs) -> Result<Strategy> {
    if let Some(g) = &args.gadget {
        let kind: GadgetKind = g.parse()?;
        return Ok(Strategy::uniform(kind));
    }
    match &args.strategy {
        Some(s) => Ok(s.parse()?),
        None => Ok(Strategy::default()),
    }
}

fn parse_placement(text: &str) -> Result<BTreeMap<u32, u32>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (v, q) = part
            .split_once(':')
            .with_context(|| format!("placement entry `{part}` is not var:qubit"))?;
        out.insert(v.trim().parse()?, q.trim().parse()?);
    }
    Ok(out)
}

/// Builds the model and report for `compile`; the text is the model file.
pub fn compile_model(args: &CompileArgs, input: &str) -> Result<(String, CompileReport)> {
    let mut report = CompileReport {
        format: Some(args.format),
        scale: Rational::one(),
        ..Default::default()
    };
    let mut problem = if looks_like_json(input) {
        report.input_kind = "m2x".into();
        let p = Max2XorProblem::from_json_str(input)?;
        if args.simplify {
            p.simplify()
        } else {
            p
        }
    } else {
        report.input_kind = "cnf".into();
        let (formula, _) = parse_dimacs(input)?;
        let compiled = compile_cnf(&formula, &strategy_from(args)?)?;
        let (f, _) = formula.normalized();
        for (clause, app) in f.clauses.iter().zip(&compiled.applications) {
            report.clauses.push(clause_report(clause, app));
        }
        let t = &compiled.totals;
        report.num_clauses = t.num_clauses;
        report.tautologies_dropped = t.tautologies_dropped;
        report.sum_alpha_minus_one = t.sum_alpha_minus_one.clone();
        report.sum_beta_minus_alpha = t.sum_beta_minus_alpha.clone();
        report.num_aux = t.num_aux;
        report.unsat_threshold = Some(t.unsat_threshold.clone());
        let problem = if args.simplify {
            compiled.problem
        } else {
            compiled.raw
        };
        report.model_unsat_threshold = Some(&t.unsat_threshold - &problem.offset);
        problem
    };

    if let Some(path) = &args.graph {
        let graph = CouplingGraph::parse(&read_input(path)?)?;
        let placement = match &args.placement {
            Some(text) => parse_placement(text)?,
            None => {
                let vertices: Vec<u32> = graph.vertices().collect();
                if vertices.len() < problem.num_vars as usize {
                    bail!(
                        "graph has {} vertices for {} variables",
                        vertices.len(),
                        problem.num_vars
                    );
                }
                (1..=problem.num_vars).zip(vertices).collect()
            }
        };
        let chain_weight = match &args.chain_weight {
            Some(w) => w.clone(),
            None => problem
                .constraints
                .iter()
                .map(|c| c.weight.clone())
                .max()
                .unwrap_or_else(Rational::one),
        };
        let (routed, chains) = chain_rewrite(&problem, &placement, &graph, &chain_weight)?;
        report.qubits = Some(placement.len() + chains.extra_qubits.len());
        report.chain_qubits = chains.extra_qubits.len();
        report.weak_chains = chains.weak_chains;
        problem = routed;
    }

    let ising = max2xor_to_ising(&problem);
    report.energy_gap_before = energy_gap_ising(&ising).ok();
    if args.normalize && !ising.is_zero() {
        let (h, j) = unit_ranges();
        let (scaled, scale) = normalize_to_ranges(&ising, h, j)?;
        report.energy_gap_after = energy_gap_ising(&scaled).ok();
        problem = problem.scaled(&scale);
        report.model_unsat_threshold = report.model_unsat_threshold.map(|t| t * &scale);
        report.scale = scale;
    } else {
        report.energy_gap_after = report.energy_gap_before.clone();
    }
    report.num_vars = problem.num_vars;
    report.num_constraints = problem.len();

    let text = match args.format {
        Format::M2x => problem.to_json_string() + "\n",
        Format::Qubo => {
            let header = format!("sat2xor compile, scale {}", report.scale);
            write_qubo(&max2xor_to_qubo(&problem), &[header.as_str()])
        }
        Format::Ising => max2xor_to_ising(&problem).to_json_string() + "\n",
    };
    Ok((text, report))
}

fn clause_report(clause: &Clause, app: &GadgetApplication) -> ClauseReport {
    let p = &app.params;
    ClauseReport {
        clause: clause.literals.iter().map(|l| l.to_dimacs()).collect(),
        gadget: p.name.clone(),
        alpha: p.alpha.clone(),
        beta: p.beta.clone(),
        delta_e: p.delta_e.clone(),
        num_aux: p.num_aux,
        strict: p.strict,
        paper_claimed: app.paper_claimed.clone(),
    }
}

fn cmd_compile(args: &CompileArgs, io: &mut Io<'_>) -> Result<i32> {
    let input = read_input(&args.input)?;
    let (text, report) = compile_model(args, &input)?;
    match &args.output {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?
        }
        None => io.out.write_all(text.as_bytes())?,
    }
    let json = serde_json::to_string_pretty(&report)? + "\n";
    match &args.report {
        Some(p) if p.as_os_str() == "-" => io.out.write_all(json.as_bytes())?,
        Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => {}
    }
    io.err.write_all(report.table().as_bytes())?;
    Ok(0)
}

/// Outcome of `verify`.
#[derive(Clone, Debug)]
pub struct VerifyOutcome {
    pub certificate: GadgetCertificate,
    pub json: Value,
    pub warnings: Vec<String>,
    /// Certified parameters contradict the declared ones.
    pub contradiction: bool,
}

fn or_clause(width: u32) -> impl Fn(u64) -> bool {
    move |x| x & ((1u64 << width) - 1) != 0
}

pub fn verify_gadget(spec: &str, width: Option<u32>) -> Result<VerifyOutcome> {
    let path = Path::new(spec);
    if path.is_file() {
        let width = width.context("a clause width is required for gadget files")?;
        let p = Max2XorProblem::from_json_str(&read_input(path)?)?;
        if p.num_vars < width {
            bail!(
                "gadget file has {} variables, fewer than width {width}",
                p.num_vars
            );
        }
        let aux = (p.num_vars - width) as usize;
        let cert = certify_source(&p, width as usize, aux, or_clause(width))?;
        let json = json!({ "file": spec, "certified": cert, "summary": cert.summary() });
        return Ok(VerifyOutcome {
            certificate: cert,
            json,
            warnings: vec![],
            contradiction: false,
        });
    }
    if matches!(spec, "bian-eq" | "bian_eq" | "bian-equivalence") {
        let t = bian_equivalence_template();
        let cert = certify_source(&t.problem(), 3, 0, |x| ((x & 3) != 0) == (x & 4 != 0))?;
        let contradiction = !cert.matches(&t.params);
        let mut json = certificate_json(&t.on_positive_clause(), &cert);
        json["source"] = json!("x1 ∨ x2 ↔ x3");
        return Ok(VerifyOutcome {
            certificate: cert,
            json,
            warnings: vec![],
            contradiction,
        });
    }
    let kind: GadgetKind = spec.parse()?;
    let width = match (width, &kind) {
        (Some(w), _) => w,
        (None, GadgetKind::Reference(_)) => 3,
        (None, GadgetKind::Unit) => 1,
        (None, GadgetKind::Direct) => 2,
        (None, _) => bail!("gadget `{spec}` needs a clause width"),
    };
    let clause = Clause::positive(width);
    let app = kind.apply(&clause, width + 1)?;
    let cert = certify_gadget(&app, &clause)?;
    let mut warnings = Vec::new();
    if let Some(claimed) = &app.paper_claimed {
        let certified = GadgetParams {
            name: claimed.name.clone(),
            ..app.params.clone()
        };
        if claimed != &certified {
            warnings.push(format!(
                "literature states {} but certification gives {}",
                claimed.summary(),
                cert.summary()
            ));
        }
    }
    let contradiction = !cert.matches(&app.params);
    let mut json = certificate_json(&app, &cert);
    json["warnings"] = json!(warnings);
    Ok(VerifyOutcome {
        certificate: cert,
        json,
        warnings,
        contradiction,
    })
}

fn cmd_verify(args: &VerifyArgs, io: &mut Io<'_>) -> Result<i32> {
    let outcome = verify_gadget(&args.gadget, args.width)?;
    if args.json {
        writeln!(io.out, "{}", serde_json::to_string_pretty(&outcome.json)?)?;
    } else {
        let c = &outcome.certificate;
        writeln!(io.out, "{}", c.summary())?;
        writeln!(
            io.out,
            "auxiliaries {}, gap {}, strict (some falsifying input) {}",
            c.num_aux, c.gap, c.strict_some
        )?;
    }
    for w in &outcome.warnings {
        writeln!(io.err, "warning: {w}")?;
    }
    if outcome.contradiction {
        writeln!(
            io.err,
            "error: certified parameters contradict the declared ones"
        )?;
        return Ok(1);
    }
    Ok(0)
}

/// A model read from disk.
#[derive(Clone, Debug)]
pub enum Model {
    Max2Xor(Max2XorProblem),
    Qubo(QuboModel),
    Ising(IsingModel),
}

impl Model {
    pub fn parse(text: &str) -> Result<Model> {
        if looks_like_json(text) {
            let v: Value = serde_json::from_str(text)?;
            if ["h", "J", "j"].iter().any(|k| v.get(k).is_some()) {
                return Ok(Model::Ising(IsingModel::from_json_str(text)?));
            }
            return Ok(Model::Max2Xor(Max2XorProblem::from_json_str(text)?));
        }
        Ok(Model::Qubo(read_qubo(text)?))
    }

    fn format(&self) -> Format {
        match self {
            Model::Max2Xor(_) => Format::M2x,
            Model::Qubo(_) => Format::Qubo,
            Model::Ising(_) => Format::Ising,
        }
    }

    /// Minimized objective: falsified weight, QUBO value or Ising energy.
    fn value(&self, a: &Assignment) -> Result<Rational> {
        Ok(match self {
            Model::Max2Xor(p) => p.evaluate(a)?.falsified,
            Model::Qubo(q) => q.value_bits(a.to_bits()),
            Model::Ising(m) => m.energy_bits(a.to_bits()),
        })
    }

    fn num_vars(&self) -> u32 {
        match self {
            Model::Max2Xor(p) => p.num_vars,
            Model::Qubo(q) => q.num_vars,
            Model::Ising(m) => m.num_vars,
        }
    }

    fn as_max2xor(&self) -> Max2XorProblem {
        match self {
            Model::Max2Xor(p) => p.clone(),
            Model::Qubo(q) => qubo_to_max2xor(q),
            Model::Ising(m) => ising_to_max2xor(m),
        }
    }

    fn as_qubo(&self) -> QuboModel {
        match self {
            Model::Max2Xor(p) => max2xor_to_qubo(p),
            Model::Qubo(q) => q.clone(),
            Model::Ising(m) => crate::convert::ising_to_qubo(m),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub format: Format,
    pub method: String,
    pub value: Rational,
    pub assignment: String,
    pub num_optimal: Option<u64>,
    pub seed: Option<u64>,
}

pub fn solve_model(model: &Model, args: &SolveArgs) -> Result<SolveReport> {
    let n = model.num_vars() as usize;
    let (assignment, num_optimal, seed) = match args.method {
        Method::Exact => {
            let o = model.as_max2xor().exhaustive_opt()?;
            let mut w = o
                .witnesses
                .into_iter()
                .next()
                .unwrap_or_else(|| Assignment(vec![]));
            w.0.resize(n, false);
            (w, Some(o.num_optimal), None)
        }
        Method::Anneal => {
            let q = model.as_qubo();
            let schedule = Schedule {
                sweeps: args.sweeps,
                ..Schedule::default()
            };
            let mut best: Option<(Rational, Assignment)> = None;
            for r in 0..args.restarts.max(1) {
                let mut res = anneal_qubo(&q, &schedule, args.seed.wrapping_add(r as u64));
                res.best_assignment.0.resize(n, false);
                let v = model.value(&res.best_assignment)?;
                if best.as_ref().is_none_or(|(b, _)| &v < b) {
                    best = Some((v, res.best_assignment));
                }
            }
            (best.expect("one restart").1, None, Some(args.seed))
        }
    };
    Ok(SolveReport {
        format: model.format(),
        method: format!("{:?}", args.method).to_lowercase(),
        value: model.value(&assignment)?,
        assignment: assignment.to_string(),
        num_optimal,
        seed,
    })
}

fn cmd_solve(args: &SolveArgs, io: &mut Io<'_>) -> Result<i32> {
    let model = Model::parse(&read_input(&args.model)?)?;
    let report = solve_model(&model, args)?;
    writeln!(io.out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(0)
}

fn cmd_search(args: &SearchArgs, io: &mut Io<'_>) -> Result<i32> {
    let mut problem = SearchProblem::new(args.k, args.aux);
    if args.no_strict {
        problem = problem.non_strict();
    }
    let method = if args.heuristic {
        SearchMethod::Heuristic {
            starts: args.starts,
            seed: args.seed,
        }
    } else {
        SearchMethod::Exact
    };
    let res = search_gadget_with(&problem, method)?;
    writeln!(io.out, "{}", serde_json::to_string_pretty(&res.to_json())?)?;
    let tag = if res.optimal {
        "optimal"
    } else {
        "best found, optimality unknown"
    };
    writeln!(io.err, "{} ({tag})", res.certificate.summary())?;
    Ok(0)
}

/// Every catalog gadget with its declared parameters and certificate.
pub fn catalog() -> Result<Vec<Value>> {
    let mut entries: Vec<(GadgetKind, u32)> = vec![(GadgetKind::Unit, 1), (GadgetKind::Direct, 2)];
    for name in ["trevisan", "nusslein", "chancellor", "bian-tseitin"] {
        entries.push((name.parse()?, 3));
    }
    for k in 3..=6 {
        entries.push((GadgetKind::TreeComb, k));
    }
    for k in 4..=6 {
        entries.push((GadgetKind::TreeBalanced, k));
    }
    entries.push((GadgetKind::Clique, 4));
    entries.push((GadgetKind::Clique, 5));
    let mut out = Vec::new();
    for (kind, k) in entries {
        let clause = Clause::positive(k);
        let app = kind.apply(&clause, k + 1)?;
        let cert = certify_gadget(&app, &clause)?;
        let mut v = certificate_json(&app, &cert);
        v["kind"] = json!(kind.name());
        v["width"] = json!(k);
        out.push(v);
    }
    out.push(verify_gadget("bian-eq", None)?.json);
    Ok(out)
}

fn cmd_catalog(args: &CatalogArgs, io: &mut Io<'_>) -> Result<i32> {
    let entries = catalog()?;
    if args.table {
        for e in &entries {
            let claimed = e["paper_claimed"]
                .as_object()
                .map(|_| "  (literature differs)")
                .unwrap_or("");
            writeln!(
                io.out,
                "{:<18} {:>2}  {}{claimed}",
                e["kind"].as_str().or(e["name"].as_str()).unwrap_or("?"),
                e["width"].as_u64().unwrap_or(3),
                e["certified"]["summary"].as_str().unwrap_or("?")
            )?;
        }
    } else {
        writeln!(io.out, "{}", serde_json::to_string_pretty(&entries)?)?;
    }
    Ok(0)
}

/// Reads a DIMACS file; shared by examples and tests.
pub fn load_cnf(path: &Path) -> Result<CnfFormula> {
    Ok(parse_dimacs(&read_input(path)?)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compile_args(format: Format) -> CompileArgs {
        CompileArgs {
            input: PathBuf::from("-"),
            strategy: None,
            gadget: Some("tree".into()),
            format,
            graph: None,
            placement: None,
            chain_weight: None,
            simplify: false,
            normalize: false,
            output: None,
            report: None,
        }
    }

    #[test]
    fn compile_normalized_ising() {
        let mut args = compile_args(Format::Ising);
        args.normalize = true;
        let (text, report) = compile_model(&args, "p cnf 3 1\n1 2 3 0\n").unwrap();
        let m = IsingModel::from_json_str(&text).unwrap();
        assert_eq!(m.num_vars, 4);
        assert_eq!(report.scale, Rational::from(4));
        assert_eq!(report.energy_gap_before, Some(Rational::from(4)));
        assert_eq!(report.unsat_threshold, Some(Rational::from(2)));
        assert_eq!(report.model_unsat_threshold, Some(Rational::from(8)));
    }

    #[test]
    fn compile_worked_example_to_qubo() {
        let input = r#"{"num_vars": 2, "constraints": [[1, 0, 1], [1, 2, 0, 1]]}"#;
        let (text, _) = compile_model(&compile_args(Format::Qubo), input).unwrap();
        assert!(
            text.ends_with("p qubo 0 2 2 1\n0 0 2\n1 1 1\n0 1 -2\n"),
            "{text}"
        );
    }

    #[test]
    fn empty_formula() {
        let (text, report) = compile_model(&compile_args(Format::M2x), "p cnf 0 0\n").unwrap();
        assert_eq!(report.num_clauses, 0);
        assert_eq!(report.num_constraints, 0);
        assert!(Max2XorProblem::from_json_str(&text).unwrap().is_empty());
    }

    #[test]
    fn verify_outcomes() {
        let o = verify_gadget("chancellor", Some(3)).unwrap();
        assert!(!o.contradiction && o.warnings.is_empty());
        let o = verify_gadget("nusslein", None).unwrap();
        assert!(!o.contradiction);
        assert_eq!(o.warnings.len(), 1);
        let o = verify_gadget("tree", Some(5)).unwrap();
        assert_eq!(o.certificate.summary(), "(4,6)-gadget, ΔE=4");
        assert!(verify_gadget("tree", None).is_err());
        assert!(!verify_gadget("bian-eq", None).unwrap().contradiction);
    }

    #[test]
    fn solve_exact_and_anneal() {
        let args = compile_args(Format::M2x);
        let (text, report) = compile_model(&args, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let model = Model::parse(&text).unwrap();
        let mut s = SolveArgs {
            model: PathBuf::new(),
            method: Method::Exact,
            seed: 3,
            sweeps: 200,
            restarts: 2,
        };
        let exact = solve_model(&model, &s).unwrap();
        assert_eq!(exact.value, Rational::one());
        assert!(exact.value >= report.model_unsat_threshold.unwrap());
        s.method = Method::Anneal;
        let a = solve_model(&model, &s).unwrap();
        let b = solve_model(&model, &s).unwrap();
        assert_eq!(
            (a.value.clone(), a.assignment.clone()),
            (b.value, b.assignment)
        );
        assert_eq!(a.value, exact.value);
    }

    #[test]
    fn placement_parsing() {
        let p = parse_placement("1:0, 2:5,3:2").unwrap();
        assert_eq!(p.get(&2), Some(&5));
        assert!(parse_placement("1-0").is_err());
    }
}
