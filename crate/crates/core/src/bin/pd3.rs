//! Command-line driver: decide, realize, differentiate, enumerate, and
//! compute the H3 tuple for graph-of-groups inputs.

use clap::{Parser, Subcommand, ValueEnum};
use pd3::dsl::{graph_to_document, parse_gog, render_gog, resolve};
use pd3::engine::decide;
use pd3::fox::{jacobian_cyclic, symbolic_jacobian, EvalMap};
use pd3::gog::{enumerate_admissible, fundamental_presentation, validate_and_reduce, OrientationData};
use pd3::report::{build_report, exit_code};
use pd3::ring::RingScalar;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pd3",
    version,
    about = "Decide, certify and realize fundamental groups of 3-dimensional duality complexes over graphs of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full decision pipeline and emit a certificate report
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Decide, and print the chain complex certificate when one exists
    Realize {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the free-calculus Jacobian of the fundamental presentation
    Fox {
        file: PathBuf,
        /// push through a cyclic quotient: "N: gen=exp, gen=exp, ..."
        /// or "w" for the orientation character (modulus 2)
        #[arg(long)]
        push: Option<String>,
    },
    /// Enumerate admissible linear trees (one JSON document per line)
    Enumerate {
        #[arg(long, default_value_t = 2)]
        max_vertices: usize,
        #[arg(long, default_value_t = 48)]
        max_order: usize,
    },
    /// Print the H3 invariant tuple of an admissible input
    H3 { file: PathBuf },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn load(file: &PathBuf) -> Result<(String, pd3::GraphOfGroups, OrientationData), String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    let doc = parse_gog(&text).map_err(|e| e.to_string())?;
    let canonical = render_gog(&doc);
    let (graph, w) = resolve(&doc).map_err(|e| e.to_string())?;
    Ok((canonical, graph, w))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, format } => {
            let (canonical, graph, w) = match load(&file) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let verdict = match decide(&graph, &w) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let report = build_report(&canonical, &verdict);
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
                Format::Text => {
                    println!("verdict: {}", report.verdict);
                    for c in &report.rule_citations {
                        println!("rule: {c}");
                    }
                    for n in &report.notes {
                        println!("note: {n}");
                    }
                    if let Some(m) = &report.catalog_manifold {
                        println!("manifold: {m}");
                    }
                    if let Some(h3) = &report.h3 {
                        println!("H3 tuple: {:?}", h3.tuple);
                    }
                }
            }
            ExitCode::from(exit_code(verdict.kind) as u8)
        }
        Command::Realize { file, format } => {
            let (canonical, graph, w) = match load(&file) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let verdict = match decide(&graph, &w) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let report = build_report(&canonical, &verdict);
            if format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else if let Some(chain) = &verdict.chain {
                println!(
                    "cells: one 0-cell, {} 1-cells, {} 2-cells, one 3-cell",
                    chain.ranks[1], chain.ranks[2]
                );
                println!("boundary 1 (images of the 1-cells):");
                for (i, x) in chain.d1.iter().enumerate() {
                    println!("  e{} -> {}", i + 1, x.render());
                }
                println!("boundary 2 (self-conjugate):");
                print!("{}", chain.d2.render());
                println!("boundary 3 (conjugate transpose of boundary 1):");
                for (i, x) in chain.d3.iter().enumerate() {
                    println!("  f{} -> {}", i + 1, x.render());
                }
                if let Some((tuple, product)) = &verdict.h3 {
                    match product {
                        Some(p) => println!("H3 = {tuple:?} (cyclic of order {p})"),
                        None => println!("H3 = {tuple:?}"),
                    }
                }
            } else {
                println!("verdict: {} (no chain certificate)", report.verdict);
                for n in &report.notes {
                    println!("note: {n}");
                }
            }
            ExitCode::from(exit_code(verdict.kind) as u8)
        }
        Command::Fox { file, push } => {
            let (_, graph, w) = match load(&file) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let rg = match validate_and_reduce(&graph, &w) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let p = match fundamental_presentation(&rg) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            println!("presentation: {}", p.render());
            match push {
                None => {
                    let sym = symbolic_jacobian(&p);
                    for (i, row) in sym.iter().enumerate() {
                        let cells: Vec<String> =
                            row.iter().map(|s| s.render(&|g| p.name_of(g))).collect();
                        println!(
                            "row {} (relator {}): [{}]",
                            i + 1,
                            p.relators[i].render(&|g| p.name_of(g)),
                            cells.join(", ")
                        );
                    }
                }
                Some(spec) => {
                    let spec = spec.trim().to_string();
                    let (n, exps) = if spec == "w" {
                        let exps: Vec<usize> =
                            p.character.iter().map(|&c| if c == -1 { 1 } else { 0 }).collect();
                        (2usize, exps)
                    } else {
                        let Some((n_str, rest)) = spec.split_once(':') else {
                            return fail("push spec must be \"N: gen=exp, ...\" or \"w\"");
                        };
                        let Ok(n) = n_str.trim().parse::<usize>() else {
                            return fail("push modulus must be an integer");
                        };
                        let mut exps = vec![0usize; p.gen_count()];
                        for part in rest.split(',') {
                            let part = part.trim();
                            if part.is_empty() {
                                continue;
                            }
                            let Some((gname, e)) = part.split_once('=') else {
                                return fail(format!("bad assignment `{part}`"));
                            };
                            let Some(gi) =
                                (0..p.gen_count()).find(|&i| p.name_of(i as u32) == gname.trim())
                            else {
                                return fail(format!("unknown generator `{}`", gname.trim()));
                            };
                            let Ok(ev) = e.trim().parse::<usize>() else {
                                return fail(format!("bad exponent in `{part}`"));
                            };
                            exps[gi] = ev % n;
                        }
                        (n, exps)
                    };
                    let target = EvalMap::Cyclic { n, exps };
                    let jac = match jacobian_cyclic(&p, &target) {
                        Ok(j) => j,
                        Err(e) => return fail(e),
                    };
                    println!("pushed to Z[Z/{n}]:");
                    print!("{}", jac.render());
                }
            }
            ExitCode::SUCCESS
        }
        Command::Enumerate { max_vertices, max_order } => {
            let graphs = match enumerate_admissible(max_vertices, max_order) {
                Ok(g) => g,
                Err(e) => return fail(e),
            };
            for g in &graphs {
                let w = OrientationData::trivial(g);
                let Some(doc) = graph_to_document(g, &w) else { continue };
                let tags: Vec<String> = g
                    .vertices
                    .iter()
                    .map(|v| v.group.catalog_tag.clone().map(|t| t.to_string()).unwrap_or_default())
                    .collect();
                let record = serde_json::json!({
                    "schema": pd3::report::SCHEMA_VERSION,
                    "vertices": tags,
                    "edges": g.edges.iter().map(|e| e.group.order()).collect::<Vec<_>>(),
                    "document": render_gog(&doc),
                });
                println!("{record}");
            }
            ExitCode::SUCCESS
        }
        Command::H3 { file } => {
            let (_, graph, w) = match load(&file) {
                Ok(x) => x,
                Err(e) => return fail(e),
            };
            let verdict = match decide(&graph, &w) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            match &verdict.h3 {
                Some((tuple, product)) => {
                    let record = serde_json::json!({
                        "tuple": tuple,
                        "cyclic_product": product,
                    });
                    println!("{record}");
                    ExitCode::SUCCESS
                }
                None => fail("input is not in the amalgam realization family"),
            }
        }
    }
}
