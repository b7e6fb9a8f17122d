use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use fdx_core::fairness::{check, FairnessVerdict};
use fdx_core::generators::graphs::{self, Graph};
use fdx_core::generators::{
    bisection_to_efx_instance, bisection_witness, clique_to_ef_instance, clique_witness, partition_to_efx_instance,
    partition_witness, random_instance, CliqueSeed, CubicGraphSeed, PartitionSeed, ValueDomain,
};
use fdx_core::model::{distinct_value_count, item_types, normalization_shifts, normalize};
use fdx_core::reductions::{
    build_network_based, build_team_based, correlated_to_plain, expand_correlated, two_valued_to_binary,
};
use fdx_core::solvers::solve;
use fdx_core::welfare::{max_nash_bruteforce, msw_po_greedy, welfare_report, WelfareReport};
use fdx_core::{Allocation, Error, Instance, Value};
use serde_json::json;

use crate::doc::{
    assignment, table, AllocationDoc, CorrelatedDoc, DocError, Document, InstanceDoc, Metadata, PairRow, Report,
    WelfareRow,
};
use crate::{Command, GenerateKind, GenerateOutput, Objective, ReduceKind, EXIT_BUDGET, EXIT_FAIR, EXIT_INPUT, EXIT_UNFAIR};

#[derive(Debug)]
pub enum CommandError {
    Io(PathBuf, std::io::Error),
    Doc(Option<PathBuf>, DocError),
    Usage(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Doc(_, DocError::Core(Error::BudgetExceeded { .. })) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CommandError::Doc(Some(p), e) => write!(f, "{}: {e}", p.display()),
            CommandError::Doc(None, e) => e.fmt(f),
            CommandError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Doc(None, DocError::Core(e))
    }
}

impl From<DocError> for CommandError {
    fn from(e: DocError) -> Self {
        CommandError::Doc(None, e)
    }
}

type Result<T> = std::result::Result<T, CommandError>;

fn read_doc(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).map_err(|e| CommandError::Io(path.to_owned(), e))?;
    Document::parse(&text).map_err(|e| CommandError::Doc(Some(path.to_owned()), e))
}

fn at<T>(path: &Path, r: std::result::Result<T, DocError>) -> Result<T> {
    r.map_err(|e| CommandError::Doc(Some(path.to_owned()), e))
}

fn read_instance(path: &Path) -> Result<Instance> {
    at(path, read_doc(path)?.into_instance().and_then(|d| d.to_instance()))
}

fn write_doc(path: &Path, doc: &Document) -> Result<()> {
    fs::write(path, doc.to_json()).map_err(|e| CommandError::Io(path.to_owned(), e))
}

/// Run one command, emit its report and return the exit code.
pub fn dispatch(command: Command, echo: Vec<String>) -> i32 {
    let mut report = Report::new(echo);
    let output = match &command {
        Command::Check { output, .. } | Command::Solve { output, .. } | Command::Welfare { output, .. } => {
            output.clone()
        }
        Command::Generate { .. } | Command::Reduce { .. } => None,
    };
    let code = match execute(command, &mut report) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("fdx: {e}");
            report.error = Some(e.to_string());
            e.exit_code()
        }
    };
    report.exit_code = code;
    let doc = Document::Report(report);
    match output {
        Some(path) => match write_doc(&path, &doc) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("fdx: {e}");
                EXIT_INPUT
            }
        },
        _ => {
            print!("{}", doc.to_json());
            code
        }
    }
}

fn execute(command: Command, report: &mut Report) -> Result<i32> {
    match command {
        Command::Check { instance, allocation, notion, .. } => {
            let inst = read_instance(&instance)?;
            let alloc = at(&allocation, read_doc(&allocation)?.into_allocation().and_then(|d| d.to_allocation(&inst)))?;
            let verdict = check(&inst, &alloc, notion)?;
            report.notion = Some(notion);
            report.verdict = Some(if verdict.pass { "pass" } else { "fail" }.into());
            fill_pairs(report, &inst, &verdict);
            Ok(if verdict.pass { EXIT_FAIR } else { EXIT_UNFAIR })
        }
        Command::Solve { instance, notion, engine, budget, witness, .. } => {
            let inst = read_instance(&instance)?;
            let r = solve(&inst, notion, engine, budget.budget)?;
            report.notion = Some(notion);
            report.engine = Some(r.engine.as_str().into());
            report.decision = Some(if r.exists() { "exists" } else { "none" }.into());
            report.stats = Some(r.stats.clone());
            report.metadata.insert("budget".into(), json!(budget.budget));
            if let Some(w) = &r.witness {
                report.witness = Some(assignment(&inst, w));
                if let Some(path) = witness {
                    write_doc(&path, &Document::Allocation(AllocationDoc::from_allocation(&inst, w)))?;
                    report.files.push(path.display().to_string());
                }
            }
            Ok(if r.exists() { EXIT_FAIR } else { EXIT_UNFAIR })
        }
        Command::Generate { kind } => generate(kind, report).map(|()| EXIT_FAIR),
        Command::Reduce { kind, input, expand, output } => reduce(kind, &input, expand, &output, report).map(|()| EXIT_FAIR),
        Command::Welfare { instance, allocation, maximize, budget, .. } => {
            let inst = read_instance(&instance)?;
            let (alloc, maximizers) = match (allocation, maximize) {
                (Some(path), _) => {
                    (at(&path, read_doc(&path)?.into_allocation().and_then(|d| d.to_allocation(&inst)))?, None)
                }
                (None, Some(Objective::Utilitarian)) => (msw_po_greedy(&inst), None),
                (None, Some(Objective::Nash)) => {
                    let opt = max_nash_bruteforce(&inst, budget.budget)?;
                    let count = opt.allocations.len();
                    (opt.allocations.into_iter().next().expect("at least one allocation"), Some(count))
                }
                (None, None) => return Err(CommandError::Usage("give an allocation or --maximize".into())),
            };
            let WelfareReport { utilities, utilitarian, nash } = welfare_report(&inst, &alloc)?;
            report.welfare = Some(WelfareRow { utilities, utilitarian, nash, maximizers });
            report.witness = Some(assignment(&inst, &alloc));
            Ok(EXIT_FAIR)
        }
    }
}

fn fill_pairs(report: &mut Report, inst: &Instance, verdict: &FairnessVerdict) {
    let row = |p: &fdx_core::fairness::PairVerdict| PairRow {
        i: p.i + 1,
        j: p.j + 1,
        gap: p.gap.clone(),
        pass: p.pass,
        removed: p.witness.iter().map(|&a| inst.items()[a].clone()).collect(),
    };
    report.pairs = verdict.pairs.iter().map(row).collect();
    report.violation = verdict.first_violation().map(row);
}

fn instance_stats(inst: &Instance) -> Metadata {
    let mut meta = Metadata::new();
    meta.insert("agents".into(), json!(inst.agents()));
    meta.insert("items".into(), json!(inst.item_count()));
    meta.insert("item_types".into(), json!(item_types(inst).len()));
    meta.insert("distinct_values".into(), json!(distinct_value_count(inst)));
    meta
}

fn zero_based(what: &str, xs: &[usize]) -> Result<Vec<usize>> {
    xs.iter()
        .map(|&x| x.checked_sub(1).ok_or_else(|| CommandError::Usage(format!("{what} are numbered from 1"))))
        .collect()
}

fn named_graph(name: &str) -> Result<Graph> {
    Ok(match name.to_ascii_lowercase().as_str() {
        "k4" => graphs::complete4(),
        "prism" => graphs::prism(),
        "k33" => graphs::complete_bipartite33(),
        "cube" => graphs::cube(),
        "wagner" => graphs::wagner(),
        _ => return Err(CommandError::Usage(format!("unknown graph `{name}` (k4, prism, k33, cube, wagner)"))),
    })
}

fn generate(kind: GenerateKind, report: &mut Report) -> Result<()> {
    let (inst, witness, mut meta, out): (Instance, Option<Allocation>, Metadata, GenerateOutput) = match kind {
        GenerateKind::Partition { values, subset, out } => {
            let seed = PartitionSeed::new(values)?;
            let inst = partition_to_efx_instance(&seed)?;
            let c = seed.constants()?;
            let mut meta = Metadata::new();
            meta.insert("generator".into(), json!("partition"));
            meta.insert("M".into(), json!(c.m));
            meta.insert("B".into(), json!(c.b));
            meta.insert("target".into(), json!(c.target));
            meta.insert("shifted".into(), json!(c.shifted));
            let witness = match subset {
                Some(s) => Some(partition_witness(&seed, &zero_based("positions", &s)?)?),
                None => None,
            };
            (inst, witness, meta, out)
        }
        GenerateKind::Bisection { graph, graph_file, random_vertices, seed, cut, side, out } => {
            let g = match (graph, graph_file, random_vertices) {
                (Some(name), _, _) => named_graph(&name)?,
                (_, Some(path), _) => at(&path, read_doc(&path)?.into_graph().and_then(|d| d.to_graph()))?,
                (_, _, Some(v)) => graphs::random_cubic(v, seed)?,
                _ => return Err(CommandError::Usage("give --graph, --graph-file or --random-vertices".into())),
            };
            let seed = CubicGraphSeed::new(&g, cut)?;
            let inst = bisection_to_efx_instance(&seed)?;
            let sizes = seed.sizes();
            let mut meta = Metadata::new();
            meta.insert("generator".into(), json!("bisection"));
            meta.insert("vertices".into(), json!(g.vertices));
            meta.insert("edges".into(), json!(g.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect::<Vec<_>>()));
            meta.insert("cut".into(), json!(cut));
            meta.insert("type_sizes".into(), json!([sizes.x, sizes.y, sizes.z]));
            let witness = side
                .map(|s| {
                    let mut mask = vec![false; g.vertices];
                    for v in zero_based("vertices", &s)? {
                        *mask.get_mut(v).ok_or_else(|| CommandError::Usage(format!("vertex {} does not exist", v + 1)))? =
                            true;
                    }
                    Ok::<_, CommandError>(bisection_witness(&seed, &mask)?)
                })
                .transpose()?;
            (inst, witness, meta, out)
        }
        GenerateKind::Clique { colors, class_size, edges, clique, out } => {
            let edges = edges
                .iter()
                .map(|&(u, v)| Ok((zero_based("vertices", &[u])?[0], zero_based("vertices", &[v])?[0])))
                .collect::<Result<Vec<_>>>()?;
            let seed = CliqueSeed { k: colors, class_size, edges };
            let inst = clique_to_ef_instance(&seed)?;
            let mut meta = Metadata::new();
            meta.insert("generator".into(), json!("clique"));
            meta.insert("colors".into(), json!(colors));
            meta.insert("class_size".into(), json!(class_size));
            let witness = match clique {
                Some(c) => Some(clique_witness(&seed, &zero_based("vertices", &c)?)?),
                None => None,
            };
            (inst, witness, meta, out)
        }
        GenerateKind::Random { agents, items, values, seed, out } => {
            let domain = values
                .iter()
                .map(|s| s.parse::<Value>().map_err(|e| CommandError::Usage(format!("value `{s}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let inst = random_instance(agents, items, &ValueDomain::Uniform(domain.clone()), seed)?;
            let mut meta = Metadata::new();
            meta.insert("generator".into(), json!("random"));
            meta.insert("seed".into(), json!(seed));
            meta.insert("values".into(), json!(domain));
            (inst, None, meta, out)
        }
    };
    meta.extend(instance_stats(&inst));
    if witness.is_none() && out.witness.is_some() {
        return Err(CommandError::Usage("--witness needs a certificate to build the allocation from".into()));
    }
    write_doc(&out.output, &Document::Instance(InstanceDoc::from_instance(&inst, meta.clone())))?;
    report.files.push(out.output.display().to_string());
    if let Some(w) = &witness {
        report.witness = Some(assignment(&inst, w));
        if let Some(path) = &out.witness {
            write_doc(path, &Document::Allocation(AllocationDoc::from_allocation(&inst, w)))?;
            report.files.push(path.display().to_string());
        }
    }
    report.metadata = meta;
    Ok(())
}

fn reduce(kind: ReduceKind, input: &Path, expand: bool, output: &Path, report: &mut Report) -> Result<()> {
    let doc = read_doc(input)?;
    let mut meta = Metadata::new();
    let inst = match kind {
        ReduceKind::Normalize => {
            let inst = at(input, doc.into_instance().and_then(|d| d.to_instance()))?;
            meta.insert("reduction".into(), json!("normalize"));
            meta.insert("shifts".into(), json!(normalization_shifts(&inst)));
            normalize(&inst)
        }
        ReduceKind::Binary => {
            let inst = at(input, doc.into_instance().and_then(|d| d.to_instance()))?;
            let image = two_valued_to_binary(&inst)?;
            meta.insert("reduction".into(), json!("binary"));
            meta.insert("levels".into(), json!(image.levels));
            image.instance
        }
        ReduceKind::Correlated => {
            let spec = match doc {
                Document::Correlated(d) => at(input, d.to_spec())?,
                Document::Team(d) => build_team_based(&at(input, d.to_spec())?)?,
                Document::Network(d) => {
                    let build = build_network_based(&at(input, d.to_spec())?)?;
                    for w in &build.warnings {
                        eprintln!("fdx: warning: {w}");
                    }
                    meta.insert("distances".into(), json!(build.distances));
                    meta.insert("warnings".into(), json!(build.warnings));
                    build.spec
                }
                other => {
                    return Err(CommandError::Doc(
                        Some(input.to_owned()),
                        DocError::Kind { expected: "correlated, team or network", found: other.kind() },
                    ))
                }
            };
            meta.insert("reduction".into(), json!(if expand { "correlated-expand" } else { "correlated" }));
            let doc = CorrelatedDoc::from_spec(&spec);
            meta.insert("tau".into(), json!(doc.tau));
            meta.insert("mu".into(), json!(doc.mu));
            if expand {
                expand_correlated(&spec)?
            } else {
                let plain = correlated_to_plain(&spec)?;
                meta.insert("utilities".into(), table(&plain.utilities, plain.item_count()));
                plain.embed()?
            }
        }
    };
    meta.extend(instance_stats(&inst));
    write_doc(output, &Document::Instance(InstanceDoc::from_instance(&inst, meta.clone())))?;
    report.files.push(output.display().to_string());
    report.metadata = meta;
    Ok(())
}
