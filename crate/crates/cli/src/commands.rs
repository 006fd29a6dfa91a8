//! Command dispatch. Exit codes: 0 pass, 1 operational error or failed
//! verification, 2 a result contradicting the classification (a surviving
//! parameter set, or a construction that misses the expected designs).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use psu_designs::catalog::{self, CatalogEntry};
use psu_designs::design::{self, DesignCertificate, IncidenceStructure};
use psu_designs::elimination;
use psu_designs::permgroup::PermGroup;
use psu_designs::{sieve, Params};
use serde::Serialize;
use serde_json::{json, Value};

use crate::construct::{self, ConstructionReport, Selection};
use crate::eliminate::{self, EliminationReport};
use crate::setup;

pub const SCHEMA: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CONTRADICTION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "psu-designs",
    version,
    about = "Flag-transitive symmetric designs with unitary socle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for subgroup searches.
    #[arg(long, global = true, default_value_t = setup::DEFAULT_SEED)]
    pub seed: u64,
    /// Data directory (overrides the environment variable).
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the catalog representations and check their group orders.
    Catalog {
        /// Rebuild the generator files from the Hermitian geometry.
        #[arg(long)]
        regenerate: bool,
    },
    /// Run the parameter sieve on the catalog stabilizers, or the brute-force
    /// oracle on one family of PSU_5(q).
    Sieve {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=11))]
        family: Option<u8>,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
        qmax: u64,
    },
    /// Eliminate every family of maximal subgroups of PSU_5(q), q <= qmax.
    Eliminate {
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
        qmax: u64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=11))]
        family: Option<u8>,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct the designs and write them with certificates.
    Construct {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        v: Option<usize>,
        #[arg(long, default_value = "designs")]
        out: PathBuf,
    },
    /// Verify a design file against a generator file.
    Verify {
        #[arg(long)]
        design: PathBuf,
        #[arg(long)]
        generators: PathBuf,
    },
    /// Sieve, elimination and construction summaries in one report.
    Report {
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
        qmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Runs a command, writing its report to `out`, and returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn data_dir(cli: &Cli) -> PathBuf {
    cli.data.clone().unwrap_or_else(setup::data_dir)
}

fn envelope(command: &str, body: impl Serialize) -> Result<String> {
    let mut v = serde_json::to_value(body)?;
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(command));
    }
    // serde_json's default map is ordered, so keys come out sorted
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

fn emit(out: &mut dyn Write, text: &str, file: Option<&Path>) -> Result<()> {
    out.write_all(text.as_bytes())?;
    if let Some(f) = file {
        std::fs::write(f, text).with_context(|| f.display().to_string())?;
    }
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Catalog { regenerate } => cmd_catalog(cli, *regenerate, out),
        Command::Sieve { family, qmax } => cmd_sieve(cli, *family, *qmax, out),
        Command::Eliminate {
            qmax,
            family,
            out: file,
        } => cmd_eliminate(cli, *qmax, *family, file.as_deref(), out),
        Command::Construct { group, v, out: dir } => cmd_construct(
            cli,
            Selection {
                group: group.clone(),
                v: *v,
            },
            dir,
            out,
        ),
        Command::Verify { design, generators } => cmd_verify(cli, design, generators, out),
        Command::Report { qmax, out: file } => cmd_report(cli, *qmax, file.as_deref(), out),
    }
}

#[derive(Debug, Serialize)]
struct CatalogLine {
    group: String,
    degree: usize,
    file: String,
    order: u64,
    extension_order: u64,
    point_stabilizer_order: u64,
    transitive: bool,
    primitive: bool,
}

fn cmd_catalog(cli: &Cli, regenerate: bool, out: &mut dyn Write) -> Result<i32> {
    let dir = data_dir(cli);
    let generated = if regenerate {
        let g = setup::generate(cli.seed)?;
        setup::write_data(&dir, &g)?;
        g
    } else {
        setup::load_or_generate(&dir, cli.seed)?
    };
    let mut lines = Vec::new();
    for g in &generated {
        lines.push(CatalogLine {
            group: g.entry.group_name.clone(),
            degree: g.entry.degree,
            file: g.entry.generator_file.display().to_string(),
            order: g.group.order()? as u64,
            extension_order: g.extended.order()? as u64,
            point_stabilizer_order: g.group.stabilizer(0)?.order()? as u64,
            transitive: g.group.is_transitive(),
            primitive: g.group.is_primitive()?,
        });
    }
    let ok = lines
        .iter()
        .zip(&generated)
        .all(|(l, g)| l.order == g.entry.expected_order);
    if cli.json {
        emit(
            out,
            &envelope(
                "catalog",
                json!({ "data_dir": dir.display().to_string(), "entries": lines }),
            )?,
            None,
        )?;
    } else {
        let mut s = format!("data: {}\n", dir.display());
        for l in &lines {
            let _ = writeln!(
                s,
                "{} degree {} {} order {} (with outer: {}) point stabilizer {} primitive {}",
                l.group,
                l.degree,
                l.file,
                l.order,
                l.extension_order,
                l.point_stabilizer_order,
                l.primitive
            );
        }
        emit(out, &s, None)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_ERROR })
}

#[derive(Debug, Serialize)]
pub struct CatalogSieveRow {
    pub group: String,
    pub stabilizer: String,
    pub stabilizer_order: u64,
    pub v: u64,
    pub k_bound: u64,
    pub survivors: Vec<Params>,
}

/// The generic sieve on each catalog stabilizer, `v = |X|/|H|` and
/// `k | |Out|·|H|`. One row per distinct (group, stabilizer).
pub fn catalog_sieve() -> Vec<CatalogSieveRow> {
    let mut rows: Vec<CatalogSieveRow> = Vec::new();
    let entries: Vec<CatalogEntry> = catalog::builtin_catalog();
    for e in &entries {
        for (s, bound) in catalog::entry_sieve_inputs(e) {
            if rows
                .iter()
                .any(|r| r.group == e.group_name && r.stabilizer == s.name)
            {
                continue;
            }
            let survivors =
                sieve::k_candidates(&BigUint::from(s.expected_v), &BigUint::from(bound));
            rows.push(CatalogSieveRow {
                group: e.group_name.clone(),
                stabilizer: s.name.clone(),
                stabilizer_order: s.order,
                v: s.expected_v,
                k_bound: bound,
                survivors,
            });
        }
    }
    rows
}

/// Union of the catalog sieve survivors as `(v, k, λ)`.
pub fn catalog_sieve_params(rows: &[CatalogSieveRow]) -> BTreeSet<(u64, u64, u64)> {
    let t = |x: &BigUint| u64::try_from(x).expect("small");
    rows.iter()
        .flat_map(|r| r.survivors.iter().map(|p| (t(&p.v), t(&p.k), t(&p.lambda))))
        .collect()
}

fn fmt_params(ps: &[Params]) -> String {
    let v: Vec<String> = ps
        .iter()
        .map(|p| format!("({},{},{})", p.v, p.k, p.lambda))
        .collect();
    format!("[{}]", v.join(", "))
}

fn cmd_sieve(cli: &Cli, family: Option<u8>, qmax: u64, out: &mut dyn Write) -> Result<i32> {
    match family {
        None => {
            let rows = catalog_sieve();
            let params = catalog_sieve_params(&rows);
            if cli.json {
                emit(
                    out,
                    &envelope("sieve", json!({ "rows": rows, "parameters": params }))?,
                    None,
                )?;
            } else {
                let mut s = String::new();
                for r in &rows {
                    let _ = writeln!(
                        s,
                        "{} H={} |H|={} v={} k | {}: {}",
                        r.group,
                        r.stabilizer,
                        r.stabilizer_order,
                        r.v,
                        r.k_bound,
                        fmt_params(&r.survivors)
                    );
                }
                let p: Vec<String> = params
                    .iter()
                    .map(|(v, k, l)| format!("({v},{k},{l})"))
                    .collect();
                let _ = writeln!(s, "parameters: {}", p.join(" "));
                emit(out, &s, None)?;
            }
            Ok(EXIT_OK)
        }
        Some(line) => {
            let mut reports = Vec::new();
            for q in catalog::prime_powers_up_to(qmax) {
                for ctx in catalog::families(q)? {
                    if ctx.valid && ctx.family_line == line {
                        reports.push(elimination::oracle_eliminate(&ctx)?);
                    }
                }
            }
            let any = reports.iter().any(|r| !r.survivors.is_empty());
            if cli.json {
                emit(
                    out,
                    &envelope(
                        "sieve",
                        json!({ "family": line, "qmax": qmax, "cells": reports }),
                    )?,
                    None,
                )?;
            } else {
                let mut s = String::new();
                for r in &reports {
                    let _ = writeln!(s, "{}: survivors {}", r.context, fmt_params(&r.survivors));
                }
                if reports.is_empty() {
                    let _ = writeln!(s, "family {line}: no valid q <= {qmax}");
                }
                emit(out, &s, None)?;
            }
            Ok(if any { EXIT_CONTRADICTION } else { EXIT_OK })
        }
    }
}

fn elimination_exit(r: &EliminationReport) -> i32 {
    if !r.all_empty() {
        EXIT_CONTRADICTION
    } else if !r.all_agree() {
        EXIT_ERROR
    } else {
        EXIT_OK
    }
}

fn cmd_eliminate(
    cli: &Cli,
    qmax: u64,
    family: Option<u8>,
    file: Option<&Path>,
    out: &mut dyn Write,
) -> Result<i32> {
    let r = eliminate::run(qmax, family)?;
    let text = if cli.json {
        let all_empty = r.all_empty();
        let all_agree = r.all_agree();
        let mut v = serde_json::to_value(&r)?;
        v["all_empty"] = json!(all_empty);
        v["all_agree"] = json!(all_agree);
        envelope("eliminate", v)?
    } else {
        r.to_text()
    };
    emit(out, &text, file)?;
    Ok(elimination_exit(&r))
}

fn construction_text(r: &ConstructionReport) -> String {
    let mut s = String::new();
    for d in &r.designs {
        let _ = writeln!(s, "{} class {}", d.id, d.class);
        let _ = writeln!(
            s,
            "  {} H={} base block from {}",
            d.group, d.stabilizer, d.helper
        );
        let _ = writeln!(s, "  under X:   {}", d.certificate);
        let _ = writeln!(s, "  under X:2: {}", d.extension_certificate);
    }
    for c in &r.comparisons {
        let _ = writeln!(
            s,
            "{} vs {}: {}",
            c.a,
            c.b,
            if c.isomorphic {
                "isomorphic".to_string()
            } else {
                format!("not isomorphic ({})", c.reason.as_deref().unwrap_or(""))
            }
        );
    }
    if let Some(c) = &r.pg3_complement {
        let _ = writeln!(
            s,
            "{} vs complement of PG(3,3): isomorphic {}",
            c.a, c.isomorphic
        );
        if let Some(w) = &c.witness {
            let w: Vec<String> = w.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "  witness: {}", w.join(" "));
        }
    }
    for l in &r.lines {
        let g = if l.line.extended {
            format!("{}:2", l.line.group)
        } else {
            l.line.group.to_string()
        };
        let (v, k, lam) = l.line.params;
        let _ = writeln!(
            s,
            "line {:>2} ({v},{k},{lam}) G={g} H={}: {}",
            l.line.line,
            l.line.stabilizer,
            match &l.realized_by {
                Some(id) => format!("realized by {id}"),
                None if l.candidates.is_empty() => "no design found".into(),
                None => format!("not flag-transitive under G ({})", l.candidates.join(", ")),
            }
        );
    }
    for (g, o) in &r.group_orders {
        let _ = writeln!(s, "|{g}| = {o}");
    }
    let _ = writeln!(
        s,
        "isomorphism classes: {} (expected {})",
        r.classes.len(),
        construct::EXPECTED_CLASSES
    );
    let _ = writeln!(s, "lambda set: {:?}", r.lambda_set);
    s
}

fn construction_exit(r: &ConstructionReport, full: bool) -> i32 {
    let ok = if full {
        r.success()
    } else {
        r.all_certified() || r.designs.is_empty()
    };
    if ok {
        EXIT_OK
    } else {
        EXIT_CONTRADICTION
    }
}

/// Writes each design and its certificates.
pub fn write_designs(r: &ConstructionReport, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for d in &r.designs {
        let path = dir.join(d.file_name());
        std::fs::write(&path, d.design.to_text(&d.certificate.params))
            .with_context(|| path.display().to_string())?;
        let cert = serde_json::to_string_pretty(&serde_json::to_value(d)?)? + "\n";
        std::fs::write(dir.join(format!("{}.cert.json", d.id)), cert)?;
    }
    Ok(())
}

fn cmd_construct(cli: &Cli, sel: Selection, dir: &Path, out: &mut dyn Write) -> Result<i32> {
    let full = sel.group.is_none() && sel.v.is_none();
    let generated = setup::load_or_generate(&data_dir(cli), cli.seed)?;
    let r = construct::construct(&generated, &sel, cli.seed)?;
    write_designs(&r, dir)?;
    let text = if cli.json {
        let mut v = serde_json::to_value(&r)?;
        v["success"] = json!(r.success());
        envelope("construct", v)?
    } else {
        construction_text(&r)
    };
    emit(out, &text, None)?;
    std::fs::write(dir.join("construction.json"), envelope("construct", &r)?)?;
    Ok(construction_exit(&r, full))
}

#[derive(Debug, Serialize)]
struct VerifyResult {
    design: String,
    generators: String,
    symmetric: Option<String>,
    violation: Option<String>,
    certificate: Option<DesignCertificate>,
    pass: bool,
}

fn cmd_verify(cli: &Cli, design_path: &Path, gens_path: &Path, out: &mut dyn Write) -> Result<i32> {
    let text =
        std::fs::read_to_string(design_path).with_context(|| design_path.display().to_string())?;
    let (d, header) = IncidenceStructure::from_text(&text)
        .with_context(|| format!("{}", design_path.display()))?;
    let gtext =
        std::fs::read_to_string(gens_path).with_context(|| gens_path.display().to_string())?;
    let g = PermGroup::from_text(&gtext).with_context(|| format!("{}", gens_path.display()))?;
    if g.degree() != d.v() {
        anyhow::bail!(
            "format error: {} has degree {} but the design has v = {}",
            gens_path.display(),
            g.degree(),
            d.v()
        );
    }
    let mut res = VerifyResult {
        design: design_path.display().to_string(),
        generators: gens_path.display().to_string(),
        symmetric: None,
        violation: None,
        certificate: None,
        pass: false,
    };
    match d.verify_symmetric() {
        Err(v) => res.violation = Some(v.to_string()),
        Ok(p) if p != header => {
            res.violation = Some(format!(
                "header says ({},{},{}) but the blocks give ({},{},{})",
                header.v, header.k, header.lambda, p.v, p.k, p.lambda
            ))
        }
        Ok(p) => {
            res.symmetric = Some(format!("({},{},{})", p.v, p.k, p.lambda));
            match DesignCertificate::issue(&d, &g) {
                Ok(c) => {
                    res.pass = c.passes();
                    res.certificate = Some(c);
                }
                Err(design::DesignError::NotAutomorphism { generator, block }) => {
                    res.violation = Some(format!(
                        "generator {generator} does not preserve the blocks: {block:?}"
                    ))
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    if cli.json {
        emit(out, &envelope("verify", &res)?, None)?;
    } else {
        let mut s = String::new();
        if let Some(p) = &res.symmetric {
            let _ = writeln!(s, "symmetric design {p}");
        }
        if let Some(v) = &res.violation {
            let _ = writeln!(s, "FAIL: {v}");
        }
        if let Some(c) = &res.certificate {
            let _ = writeln!(s, "{c}");
        }
        let _ = writeln!(s, "{}", if res.pass { "pass" } else { "fail" });
        emit(out, &s, None)?;
    }
    Ok(if res.pass { EXIT_OK } else { EXIT_ERROR })
}

fn cmd_report(cli: &Cli, qmax: u64, file: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let elim = eliminate::run(qmax, None)?;
    let rows = catalog_sieve();
    let params = catalog_sieve_params(&rows);
    let generated = setup::load_or_generate(&data_dir(cli), cli.seed)?;
    let cons = construct::construct(&generated, &Selection::default(), cli.seed)?;
    let text = if cli.json {
        envelope(
            "report",
            json!({
                "elimination": { "qmax": qmax, "cells": elim.cells().count(), "all_empty": elim.all_empty(), "all_agree": elim.all_agree() },
                "sieve": { "rows": rows, "parameters": params },
                "construction": {
                    "designs": cons.designs,
                    "classes": cons.classes,
                    "lines": cons.lines,
                    "lambda_set": cons.lambda_set,
                    "success": cons.success(),
                },
            }),
        )?
    } else {
        let mut s = format!(
            "elimination q <= {qmax}: {} cells, all empty {}, lemma/oracle agree {}\n",
            elim.cells().count(),
            elim.all_empty(),
            elim.all_agree()
        );
        let p: Vec<String> = params
            .iter()
            .map(|(v, k, l)| format!("({v},{k},{l})"))
            .collect();
        let _ = writeln!(s, "catalog sieve parameters: {}", p.join(" "));
        s.push_str(&construction_text(&cons));
        s
    };
    emit(out, &text, file)?;
    let e = elimination_exit(&elim);
    Ok(if e != EXIT_OK {
        e
    } else {
        construction_exit(&cons, true)
    })
}
