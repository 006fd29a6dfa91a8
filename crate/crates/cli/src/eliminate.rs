//! The elimination sweep over every family and prime power `q <= qmax`.

use std::fmt::Write as _;

use anyhow::{anyhow, Result};
use psu_designs::catalog::{self, FamilyContext};
use psu_designs::elimination::{self, EliminationTrace};
use psu_designs::Params;
use rayon::prelude::*;
use serde::Serialize;

/// Lemma handling a family line; lines 9-11 share one.
pub fn lemma_for_line(line: u8) -> u8 {
    line.min(9)
}

#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub trace: EliminationTrace,
    pub oracle_survivors: Vec<Params>,
    pub agree: bool,
    pub tits_prunes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub lemma_id: u8,
    pub cells: Vec<CellReport>,
    /// Recomputed sporadic-table rows (small-stabilizer section only).
    pub table_rows: Vec<EliminationTrace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationReport {
    pub qmax: u64,
    pub family: Option<u8>,
    pub sections: Vec<Section>,
}

impl EliminationReport {
    pub fn cells(&self) -> impl Iterator<Item = &CellReport> {
        self.sections.iter().flat_map(|s| s.cells.iter())
    }

    pub fn all_agree(&self) -> bool {
        self.cells().all(|c| c.agree)
    }

    pub fn all_empty(&self) -> bool {
        self.cells()
            .all(|c| c.trace.survivors.is_empty() && c.oracle_survivors.is_empty())
            && self
                .sections
                .iter()
                .flat_map(|s| &s.table_rows)
                .all(|t| t.survivors.is_empty())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for sec in &self.sections {
            let _ = writeln!(s, "== lemma {} ==", sec.lemma_id);
            if sec.cells.is_empty() && sec.table_rows.is_empty() {
                let _ = writeln!(s, "no valid cells for q <= {}", self.qmax);
            }
            for c in &sec.cells {
                s.push_str(&c.trace.to_string());
                let _ = writeln!(
                    s,
                    "  oracle survivors: [{}] ({})",
                    c.oracle_survivors
                        .iter()
                        .map(|p| format!("({},{},{})", p.v, p.k, p.lambda))
                        .collect::<Vec<_>>()
                        .join(", "),
                    if c.agree { "agree" } else { "DISAGREE" }
                );
                if c.tits_prunes {
                    let _ = writeln!(s, "  tits: p divides v-1 (cross-check only)");
                }
            }
            for t in &sec.table_rows {
                s.push_str("table row: ");
                s.push_str(&t.to_string());
            }
        }
        let _ = writeln!(
            s,
            "cells: {}  all empty: {}  lemma/oracle agree: {}",
            self.cells().count(),
            self.all_empty(),
            self.all_agree()
        );
        s
    }
}

fn run_context(ctx: &FamilyContext) -> Result<CellReport> {
    let cell = elimination::run_cell(ctx).map_err(|e| anyhow!("{}: {e}", ctx.label()))?;
    Ok(CellReport {
        agree: cell.agree(),
        tits_prunes: cell.tits_prunes,
        oracle_survivors: cell.oracle.survivors,
        trace: cell.trace,
    })
}

/// Runs every valid cell (or those of one family line) in parallel. Output
/// order is fixed: by lemma, then `q`, then line and subfield.
pub fn run(qmax: u64, family: Option<u8>) -> Result<EliminationReport> {
    let mut contexts = Vec::new();
    for q in catalog::prime_powers_up_to(qmax) {
        for ctx in catalog::families(q)? {
            if ctx.valid && family.is_none_or(|f| f == ctx.family_line) {
                contexts.push(ctx);
            }
        }
    }
    let cells: Vec<CellReport> = contexts
        .par_iter()
        .map(run_context)
        .collect::<Result<_>>()?;
    let lemmas: Vec<u8> = match family {
        Some(f) => vec![lemma_for_line(f)],
        None => (1..=9).collect(),
    };
    let mut sections: Vec<Section> = lemmas
        .iter()
        .map(|&l| Section {
            lemma_id: l,
            cells: Vec::new(),
            table_rows: Vec::new(),
        })
        .collect();
    for c in cells {
        let l = lemma_for_line(c.trace.family_line);
        if let Some(sec) = sections.iter_mut().find(|s| s.lemma_id == l) {
            sec.cells.push(c);
        }
    }
    for sec in &mut sections {
        sec.cells
            .sort_by_key(|c| (c.trace.q, c.trace.family_line, c.trace.subfield));
        if sec.lemma_id == 9 {
            sec.table_rows = elimination::eliminate_sporadic()?
                .into_iter()
                .filter(|t| t.q <= qmax && family.is_none_or(|f| f == t.family_line))
                .collect();
        }
    }
    Ok(EliminationReport {
        qmax,
        family,
        sections,
    })
}
