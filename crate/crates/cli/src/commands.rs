use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context as _, Result};
use lca_core::bench::{run_bench, BenchBackend};
use lca_core::instance::{Instance, InstanceFile};
use lca_core::model::{enumerate_states, Checker};
use lca_core::solve::{export_qcir, export_qcir_prenex, export_qdimacs, falsifying_assignment};
use lca_core::translate::validity;
use lca_core::{reduce, solve_bdd, Context, Formula, SolveOptions, State, TranslateOptions};

use crate::{Backend, BenchBackendArg, Command, EngineArgs, Format};

pub fn run(command: Command) -> Result<bool> {
    match command {
        Command::Check {
            file,
            query,
            engine,
        } => check(&load(&file, query)?, &engine),
        Command::Validity {
            file,
            formula,
            engine,
        } => check_validity(&load(&file, Some(formula))?, &engine),
        Command::Export {
            file,
            format,
            output,
            query,
            strict_macros,
            prenex,
        } => export(&load(&file, query)?, format, &output, strict_macros, prenex),
        Command::Bench {
            agents,
            backend,
            node_budget,
            csv,
        } => bench(&agents, backend, node_budget, csv.as_deref()),
    }
}

/// Reads an instance, replacing its query when `query` is given.
fn load(path: &Path, query: Option<String>) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut file = InstanceFile::from_json(&text).with_context(|| path.display().to_string())?;
    if query.is_some() {
        file.query = query;
    }
    let instance = file.resolve().with_context(|| path.display().to_string())?;
    if instance.query.is_none() {
        bail!("{} has no query and none was given", path.display());
    }
    Ok(instance)
}

fn options(engine: &EngineArgs) -> (TranslateOptions, SolveOptions) {
    (
        TranslateOptions {
            strict: engine.strict_macros,
        },
        SolveOptions {
            node_budget: engine.node_budget,
        },
    )
}

fn verdict(b: bool) -> &'static str {
    if b {
        "TRUE"
    } else {
        "FALSE"
    }
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Bdd => "bdd",
        Backend::Naive => "naive",
        Backend::Both => "both",
    }
}

fn check(instance: &Instance, engine: &EngineArgs) -> Result<bool> {
    let query = instance
        .query
        .as_ref()
        .expect("loaded instances have a query");
    let ctx = instance.context.clone().with_enum_cap(engine.enum_cap);
    let (translate, solve) = options(engine);
    let start = Instant::now();
    let symbolic = || -> Result<bool> {
        let r = reduce(&ctx, &instance.state, query, &translate)?;
        log::info!("reduction: {} levels of {} variables", r.levels, r.width);
        Ok(solve_bdd(&r.instantiated(), &solve)?)
    };
    let explicit = || -> Result<bool> { Ok(Checker::new(&ctx).check(&instance.state, query)?) };
    let answer = match engine.backend {
        Backend::Bdd => symbolic()?,
        Backend::Naive => explicit()?,
        Backend::Both => {
            let (b, n) = (symbolic()?, explicit()?);
            if b != n {
                bail!(
                    "backends disagree: bdd says {}, naive says {}",
                    verdict(b),
                    verdict(n)
                );
            }
            b
        }
    };
    println!(
        "{} backend={} exponent={} elapsed={:.3}s",
        verdict(answer),
        backend_name(engine.backend),
        ctx.exponent(),
        start.elapsed().as_secs_f64()
    );
    Ok(answer)
}

/// `valuation {p, q}; B(1) = {p}`, listing only non-empty bases.
fn describe(s: &State) -> String {
    let atoms: Vec<String> = s.valuation().iter().map(|a| a.to_string()).collect();
    let mut out = format!("valuation {{{}}}", atoms.join(", "));
    for (agent, base) in s.bases().filter(|(_, b)| !b.is_empty()) {
        let members: Vec<String> = base.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!("; B({agent}) = {{{}}}", members.join(", ")));
    }
    out
}

fn symbolic_counterexample(
    ctx: &Context,
    f: &Formula,
    translate: &TranslateOptions,
    solve: &SolveOptions,
) -> Result<Option<State>> {
    let v = validity(ctx, f, translate)?;
    let cex = falsifying_assignment(&v.matrix, v.width, v.root, solve)?;
    Ok(cex.map(|bits| ctx.decode_with(|k| bits[k])))
}

fn explicit_counterexample(ctx: &Context, f: &Formula) -> Result<Option<State>> {
    let checker = Checker::new(ctx);
    for s in enumerate_states(ctx)? {
        if !checker.check(&s, f)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

fn check_validity(instance: &Instance, engine: &EngineArgs) -> Result<bool> {
    let f = instance
        .query
        .as_ref()
        .expect("loaded instances have a query");
    let ctx = instance.context.clone().with_enum_cap(engine.enum_cap);
    let (translate, solve) = options(engine);
    let start = Instant::now();
    let cex = match engine.backend {
        Backend::Bdd => symbolic_counterexample(&ctx, f, &translate, &solve)?,
        Backend::Naive => explicit_counterexample(&ctx, f)?,
        Backend::Both => {
            let symbolic = symbolic_counterexample(&ctx, f, &translate, &solve)?;
            let explicit = explicit_counterexample(&ctx, f)?;
            if symbolic.is_some() != explicit.is_some() {
                bail!(
                    "backends disagree: bdd says {}, naive says {}",
                    if symbolic.is_none() {
                        "VALID"
                    } else {
                        "INVALID"
                    },
                    if explicit.is_none() {
                        "VALID"
                    } else {
                        "INVALID"
                    }
                );
            }
            if let Some(s) = &symbolic {
                if Checker::new(&ctx).check(s, f)? {
                    bail!(
                        "the symbolic counterexample {} satisfies the formula",
                        describe(s)
                    );
                }
            }
            symbolic
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let name = backend_name(engine.backend);
    match &cex {
        None => println!(
            "VALID backend={name} exponent={} elapsed={elapsed:.3}s",
            ctx.exponent()
        ),
        Some(s) => {
            println!(
                "INVALID backend={name} exponent={} elapsed={elapsed:.3}s",
                ctx.exponent()
            );
            println!("counterexample: {}", describe(s));
        }
    }
    Ok(cex.is_none())
}

fn export(
    instance: &Instance,
    format: Format,
    output: &Path,
    strict: bool,
    prenex: bool,
) -> Result<bool> {
    let query = instance
        .query
        .as_ref()
        .expect("loaded instances have a query");
    let r = reduce(
        &instance.context,
        &instance.state,
        query,
        &TranslateOptions { strict },
    )?;
    let closed = r.closed();
    let text = match format {
        Format::Qcir if prenex => export_qcir_prenex(&closed, Some(&instance.context)),
        Format::Qcir => export_qcir(&closed, Some(&instance.context)),
        Format::Qdimacs => export_qdimacs(&closed),
    };
    fs::write(output, &text).with_context(|| format!("writing {}", output.display()))?;
    println!(
        "wrote {}: {} levels x {} variables = {} quantified variables, {} lines",
        output.display(),
        r.levels,
        r.width,
        r.levels as usize * r.width,
        text.lines().count()
    );
    Ok(true)
}

fn bench(
    ns: &[usize],
    backend: BenchBackendArg,
    node_budget: usize,
    csv: Option<&Path>,
) -> Result<bool> {
    if ns.contains(&0) {
        bail!("the number of children must be at least 1");
    }
    let backend = match backend {
        BenchBackendArg::Bdd => BenchBackend::Bdd,
        BenchBackendArg::Naive => BenchBackend::Naive,
        BenchBackendArg::Export => BenchBackend::ExportOnly,
    };
    let report = run_bench(ns, backend, &SolveOptions { node_budget });
    print!("{}", report.to_table());
    if let Some(path) = csv {
        fs::write(path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(row) = report.rows.iter().find(|r| r.result.is_err()) {
        bail!(
            "row n={} failed: {}",
            row.n,
            row.result.as_ref().unwrap_err()
        );
    }
    Ok(report.rows.iter().all(|r| r.result != Ok(Some(false))))
}
