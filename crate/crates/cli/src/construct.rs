//! Designs from the catalog representations: sieve the parameters, search
//! base blocks among unions of subgroup orbits, certify, and sort into
//! isomorphism classes.

use std::collections::BTreeSet;

use anyhow::{Context, Result};
use num_bigint::BigUint;
use psu_designs::catalog::{StabilizerDescription, PSU33, PSU42};
use psu_designs::design::{
    self, DesignCertificate, IncidenceStructure, Isomorphism, DEFAULT_NODE_BUDGET,
};
use psu_designs::permgroup::PermGroup;
use psu_designs::{hermitian, sieve, DesignParams};
use serde::Serialize;

use crate::setup::{self, Generated, CLASSES};

/// Parameter multiset the construction must realize.
pub const EXPECTED_PARAMS: [(u64, u64, u64); 5] = [
    (36, 15, 6),
    (36, 21, 12),
    (40, 27, 18),
    (45, 12, 3),
    (63, 32, 16),
];
/// Number of isomorphism classes the construction must realize.
pub const EXPECTED_CLASSES: usize = 8;
pub const EXPECTED_LAMBDAS: [u64; 5] = [3, 6, 12, 16, 18];

#[derive(Debug, Clone, Serialize)]
pub struct ConstructedDesign {
    pub id: String,
    pub group: String,
    pub generator_file: String,
    /// Point stabilizer of the representation.
    pub stabilizer: String,
    /// Subgroup whose orbits formed the base block.
    pub helper: String,
    pub base_block: Vec<u32>,
    /// Under the socle `X`.
    pub certificate: DesignCertificate,
    /// Under `X:2`.
    pub extension_certificate: DesignCertificate,
    pub class: usize,
    #[serde(skip)]
    pub design: IncidenceStructure,
    #[serde(skip)]
    pub action: PermGroup,
}

impl ConstructedDesign {
    /// Flag-transitive and point-primitive under `X` or under `X:2`.
    pub fn certified(&self) -> bool {
        self.certificate.passes() || self.extension_certificate.passes()
    }

    pub fn file_name(&self) -> String {
        format!("{}.design", self.id)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoComparison {
    pub a: String,
    pub b: String,
    pub isomorphic: bool,
    /// 1-based images of the points of `a`, when isomorphic.
    pub witness: Option<Vec<u32>>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructionReport {
    pub designs: Vec<ConstructedDesign>,
    pub classes: Vec<Vec<String>>,
    pub comparisons: Vec<IsoComparison>,
    pub lambda_set: Vec<u64>,
    pub params_set: Vec<(u64, u64, u64)>,
    pub group_orders: Vec<(String, u64)>,
    pub lines: Vec<LineRealization>,
    /// The `(40,27,18)` design from the `3^{1+2}:2A_4` representation
    /// against the complement of the `PG(3,3)` point-hyperplane design.
    pub pg3_complement: Option<IsoComparison>,
}

impl ConstructionReport {
    pub fn all_certified(&self) -> bool {
        !self.designs.is_empty() && self.designs.iter().all(ConstructedDesign::certified)
    }

    pub fn params_match(&self) -> bool {
        self.params_set == EXPECTED_PARAMS.to_vec() && self.lambda_set == EXPECTED_LAMBDAS.to_vec()
    }

    pub fn class_count_matches(&self) -> bool {
        self.classes.len() == EXPECTED_CLASSES
    }

    pub fn all_lines_realized(&self) -> bool {
        self.lines.iter().all(|l| l.realized_by.is_some())
    }

    pub fn success(&self) -> bool {
        self.all_certified()
            && self.params_match()
            && self.class_count_matches()
            && self.all_lines_realized()
    }
}

/// One line of the classification table: parameters, socle, the point
/// stabilizer in the socle, and whether `G` is `X` or `X:2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TableLine {
    pub line: u8,
    pub params: (u64, u64, u64),
    pub group: &'static str,
    pub stabilizer: &'static str,
    pub extended: bool,
}

const fn line(
    line: u8,
    params: (u64, u64, u64),
    group: &'static str,
    stabilizer: &'static str,
    extended: bool,
) -> TableLine {
    TableLine {
        line,
        params,
        group,
        stabilizer,
        extended,
    }
}

pub const TABLE_LINES: [TableLine; 14] = [
    line(1, (36, 21, 12), PSU33, "PSL_2(7)", false),
    line(2, (36, 21, 12), PSU33, "PSL_2(7)", true),
    line(3, (36, 15, 6), PSU42, "S_6", false),
    line(4, (36, 15, 6), PSU42, "S_6", true),
    line(5, (40, 27, 18), PSU42, "3^{1+2}:2A_4", false),
    line(6, (40, 27, 18), PSU42, "3^{1+2}:2A_4", true),
    line(7, (40, 27, 18), PSU42, "3^3:S_4", false),
    line(8, (40, 27, 18), PSU42, "3^3:S_4", true),
    line(9, (45, 12, 3), PSU42, "2.(A_4xA_4).2", false),
    line(10, (45, 12, 3), PSU42, "2.(A_4xA_4).2", true),
    line(11, (63, 32, 16), PSU33, "4.S_4", false),
    line(12, (63, 32, 16), PSU33, "4.S_4", true),
    line(13, (63, 32, 16), PSU33, "4^2:S_3", false),
    line(14, (63, 32, 16), PSU33, "4^2:S_3", true),
];

/// Whether a constructed design realizes a table line with the stated `G`.
#[derive(Debug, Clone, Serialize)]
pub struct LineRealization {
    pub line: TableLine,
    /// Designs with the line's parameters and point stabilizer.
    pub candidates: Vec<String>,
    /// The first candidate flag-transitive and point-primitive under `G`.
    pub realized_by: Option<String>,
}

pub fn realize_lines(designs: &[ConstructedDesign]) -> Vec<LineRealization> {
    TABLE_LINES
        .iter()
        .map(|l| {
            let cands: Vec<&ConstructedDesign> = designs
                .iter()
                .filter(|d| {
                    let p = &d.certificate.params;
                    (p.v, p.k, p.lambda) == l.params
                        && d.group == l.group
                        && d.stabilizer == l.stabilizer
                })
                .collect();
            let realized_by = cands
                .iter()
                .find(|d| {
                    if l.extended {
                        d.extension_certificate.passes()
                    } else {
                        d.certificate.passes()
                    }
                })
                .map(|d| d.id.clone());
            LineRealization {
                line: *l,
                candidates: cands.iter().map(|d| d.id.clone()).collect(),
                realized_by,
            }
        })
        .collect()
}

fn point_stabilizer(g: &Generated) -> Option<&StabilizerDescription> {
    g.entry
        .stabilizer_descriptions
        .iter()
        .find(|s| s.expected_v == g.entry.degree as u64)
}

fn short(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect::<String>()
        .split('_')
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("_")
}

/// Symmetric-design parameters the sieve allows for a representation.
pub fn sieve_parameters(v: u64, stabilizer_order: u64, out_factor: u64) -> Vec<DesignParams<u64>> {
    let bound = BigUint::from(out_factor * stabilizer_order);
    sieve::k_candidates(&BigUint::from(v), &bound)
        .into_iter()
        .map(|p| {
            let t = |x: BigUint| u64::try_from(x).expect("small parameters");
            DesignParams::new(t(p.v), t(p.k), t(p.lambda))
        })
        .collect()
}

/// Designs from one representation. Helpers are the point stabilizer and
/// every other subgroup class of the same index.
pub fn designs_for(g: &Generated, seed: u64) -> Result<Vec<ConstructedDesign>> {
    let Some(stab) = point_stabilizer(g) else {
        return Ok(Vec::new());
    };
    let v = g.entry.degree;
    let params = sieve_parameters(v as u64, stab.order, g.entry.out_factor);
    if params.is_empty() {
        return Ok(Vec::new());
    }
    let mut helpers: Vec<(String, PermGroup)> = vec![(stab.name.clone(), g.group.stabilizer(0)?)];
    for (group, c) in CLASSES.iter() {
        if *group == g.entry.group_name && c.order as u64 == stab.order && c.name != stab.name {
            helpers.push((c.name.to_string(), c.find(&g.group, seed)?));
        }
    }
    let mut out: Vec<ConstructedDesign> = Vec::new();
    for p in &params {
        for (helper_name, helper) in &helpers {
            for d in design::find_base_blocks(&g.group, helper, p.k as usize)? {
                if out.iter().any(|o| o.design.same_blocks(&d)) {
                    continue;
                }
                let certificate = DesignCertificate::issue(&d, &g.group)?;
                let extension_certificate = DesignCertificate::issue(&d, &g.extended)?;
                let base_block = d.blocks()[0].iter().map(|&x| x + 1).collect();
                let id = format!(
                    "{}_v{}_k{}_{}_{}",
                    short(&g.entry.group_name),
                    v,
                    p.k,
                    short(&stab.name),
                    out.iter().filter(|o| o.certificate.params.k == p.k).count() + 1
                );
                out.push(ConstructedDesign {
                    id,
                    group: g.entry.group_name.clone(),
                    generator_file: g.entry.generator_file.display().to_string(),
                    stabilizer: stab.name.clone(),
                    helper: helper_name.clone(),
                    base_block,
                    certificate,
                    extension_certificate,
                    class: 0,
                    design: d,
                    action: g.group.clone(),
                });
            }
        }
    }
    Ok(out)
}

fn compare(
    a: &str,
    da: &IncidenceStructure,
    b: &str,
    db: &IncidenceStructure,
) -> Result<IsoComparison> {
    let r = design::isomorphic(da, db, DEFAULT_NODE_BUDGET)
        .with_context(|| format!("isomorphism test {a} vs {b}"))?;
    Ok(match r {
        Isomorphism::Isomorphic { witness } => IsoComparison {
            a: a.into(),
            b: b.into(),
            isomorphic: true,
            witness: Some(witness.iter().map(|&x| x + 1).collect()),
            reason: None,
        },
        Isomorphism::NonIsomorphic { reason } => IsoComparison {
            a: a.into(),
            b: b.into(),
            isomorphic: false,
            witness: None,
            reason: Some(reason),
        },
    })
}

/// Splits designs into isomorphism classes, comparing each design with one
/// representative per class of the same parameters.
pub fn classify(
    designs: &mut [ConstructedDesign],
) -> Result<(Vec<Vec<String>>, Vec<IsoComparison>)> {
    let mut reps: Vec<usize> = Vec::new();
    let mut classes: Vec<Vec<String>> = Vec::new();
    let mut comparisons = Vec::new();
    for i in 0..designs.len() {
        let mut found = None;
        for (c, &r) in reps.iter().enumerate() {
            if designs[r].certificate.params != designs[i].certificate.params {
                continue;
            }
            let cmp = compare(
                &designs[r].id,
                &designs[r].design,
                &designs[i].id,
                &designs[i].design,
            )?;
            let iso = cmp.isomorphic;
            comparisons.push(cmp);
            if iso {
                found = Some(c);
                break;
            }
        }
        let c = found.unwrap_or_else(|| {
            reps.push(i);
            classes.push(Vec::new());
            reps.len() - 1
        });
        designs[i].class = c + 1;
        classes[c].push(designs[i].id.clone());
    }
    Ok((classes, comparisons))
}

/// Which representations to use: all, or those of one group and degree.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub group: Option<String>,
    pub v: Option<usize>,
}

impl Selection {
    fn keeps(&self, g: &Generated) -> bool {
        self.group.as_ref().is_none_or(|n| *n == g.entry.group_name)
            && self.v.is_none_or(|v| v == g.entry.degree)
    }
}

pub fn construct(
    generated: &[Generated],
    selection: &Selection,
    seed: u64,
) -> Result<ConstructionReport> {
    let mut designs = Vec::new();
    let mut group_orders: Vec<(String, u64)> = Vec::new();
    for g in generated.iter().filter(|g| selection.keeps(g)) {
        let order = g.group.order()? as u64;
        if !group_orders.iter().any(|(n, _)| *n == g.entry.group_name) {
            group_orders.push((g.entry.group_name.clone(), order));
        }
        designs.extend(designs_for(g, seed)?);
    }
    let (classes, comparisons) = classify(&mut designs)?;
    let lambda_set: BTreeSet<u64> = designs
        .iter()
        .map(|d| d.certificate.params.lambda)
        .collect();
    let params_set: BTreeSet<(u64, u64, u64)> = designs
        .iter()
        .map(|d| {
            (
                d.certificate.params.v,
                d.certificate.params.k,
                d.certificate.params.lambda,
            )
        })
        .collect();
    let pg3_complement = match designs
        .iter()
        .find(|d| d.certificate.params.v == 40 && d.stabilizer == "3^{1+2}:2A_4")
    {
        Some(d) => Some(compare(
            &d.id,
            &d.design,
            "PG_3(3)_complement",
            &hermitian::pg3_design(3).complement(),
        )?),
        None => None,
    };
    let lines = realize_lines(&designs);
    Ok(ConstructionReport {
        lines,
        designs,
        classes,
        comparisons,
        lambda_set: lambda_set.into_iter().collect(),
        params_set: params_set.into_iter().collect(),
        group_orders,
        pg3_complement,
    })
}

/// Default full run: shipped data (or regenerated) and every representation.
pub fn construct_all(seed: u64) -> Result<ConstructionReport> {
    let generated = setup::load_or_generate(&setup::data_dir(), seed)?;
    construct(&generated, &Selection::default(), seed)
}
