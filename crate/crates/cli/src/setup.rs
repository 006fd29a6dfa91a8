//! Building and loading the permutation representations of `PSU_3(3)` and
//! `PSU_4(2)`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use psu_designs::catalog::{self, CatalogEntry, PSU33, PSU42};
use psu_designs::hermitian;
use psu_designs::permgroup::{self, PermGroup};

/// Environment variable that overrides the data directory.
pub const DATA_DIR_ENV: &str = "PSU_DESIGNS_DATA";
/// Attempts per subgroup search.
pub const SEARCH_ATTEMPTS: usize = 400;
/// Seed the shipped data files were generated with.
pub const DEFAULT_SEED: u64 = 0;

/// Finds `data/` by the environment variable, the working directory, or
/// the source tree.
pub fn data_dir() -> PathBuf {
    if let Ok(d) = std::env::var(DATA_DIR_ENV) {
        return PathBuf::from(d);
    }
    let local = PathBuf::from("data");
    if local.join("catalog.txt").exists() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// How a maximal subgroup is recognized among subgroups of its order: by
/// whether its largest normal `p`-subgroup is abelian.
#[derive(Debug, Clone, Copy)]
pub struct SubgroupClass {
    pub name: &'static str,
    pub order: u128,
    pub core: Option<(u64, bool)>,
}

pub const CLASSES: [(&str, SubgroupClass); 7] = [
    (
        PSU33,
        SubgroupClass {
            name: "PSL_2(7)",
            order: 168,
            core: None,
        },
    ),
    (
        PSU33,
        SubgroupClass {
            name: "4.S_4",
            order: 96,
            core: Some((2, false)),
        },
    ),
    (
        PSU33,
        SubgroupClass {
            name: "4^2:S_3",
            order: 96,
            core: Some((2, true)),
        },
    ),
    (
        PSU42,
        SubgroupClass {
            name: "S_6",
            order: 720,
            core: None,
        },
    ),
    (
        PSU42,
        SubgroupClass {
            name: "3^{1+2}:2A_4",
            order: 648,
            core: Some((3, false)),
        },
    ),
    (
        PSU42,
        SubgroupClass {
            name: "3^3:S_4",
            order: 648,
            core: Some((3, true)),
        },
    ),
    (
        PSU42,
        SubgroupClass {
            name: "2.(A_4xA_4).2",
            order: 576,
            core: None,
        },
    ),
];

pub fn class(group: &str, name: &str) -> Option<SubgroupClass> {
    CLASSES
        .iter()
        .find(|(g, c)| *g == group && c.name == name)
        .map(|(_, c)| *c)
}

impl SubgroupClass {
    pub fn matches(&self, h: &PermGroup) -> Result<bool, permgroup::GroupError> {
        if h.order()? != self.order {
            return Ok(false);
        }
        Ok(match self.core {
            None => true,
            Some((p, abelian)) => {
                let core = h.p_core(p)?;
                core.order()? > 1 && core.is_abelian() == abelian
            }
        })
    }

    /// A subgroup of `g` in this class.
    pub fn find(&self, g: &PermGroup, seed: u64) -> Result<PermGroup> {
        permgroup::find_subgroup_where(g, self.order, seed, SEARCH_ATTEMPTS, |h| self.matches(h))
            .with_context(|| format!("subgroup {} of order {}", self.name, self.order))
    }
}

/// A representation of `X` and of `X:2` on the same points. The
/// generators of `extended` are those of `group` plus one outer element.
pub struct Generated {
    pub entry: CatalogEntry,
    pub group: PermGroup,
    pub extended: PermGroup,
}

/// Builds every catalog representation from the Hermitian geometry and
/// coset actions. Natural actions come straight from the matrices, with the
/// Frobenius map as outer automorphism. The others are actions of `X:2` on
/// the cosets of `H:2`, where `H` is found in the isotropic-point action and
/// `H:2 = <H, t>` for an outer `t` normalizing `H`.
pub fn generate(seed: u64) -> Result<Vec<Generated>> {
    let mut out = Vec::new();
    for (group_name, n, q) in [(PSU33, 3usize, 3u64), (PSU42, 4, 2)] {
        let actions = hermitian::natural_actions(n, q)?;
        let frobenius = hermitian::frobenius_actions(n, q)?;
        let base = actions[0].1.clone().with_seed(seed);
        let base_ext = base.with_generator(frobenius[0].1.clone())?;
        for entry in catalog::builtin_catalog()
            .into_iter()
            .filter(|e| e.group_name == group_name)
        {
            let mut natural = None;
            if let Some(i) = actions.iter().position(|(d, _)| *d == entry.degree) {
                let g = actions[i].1.clone().with_seed(seed);
                let fits = match entry.stabilizer_descriptions.as_slice() {
                    [only] => class(group_name, &only.name)
                        .context("unknown class")?
                        .matches(&g.stabilizer(0)?)?,
                    _ => true,
                };
                if fits {
                    let ext = g.with_generator(frobenius[i].1.clone())?;
                    natural = Some((g, ext));
                }
            }
            let (group, extended) = match natural {
                Some(pair) => pair,
                None => {
                    let name = &entry.stabilizer_descriptions[0].name;
                    let c = class(group_name, name).context("unknown class")?;
                    let h = c.find(&base, seed)?;
                    let t = permgroup::normalizing_element(&base, &h, &frobenius[0].1)?
                        .with_context(|| format!("no outer element normalizes {name}"))?;
                    let h_ext = h.with_generator(t)?;
                    let hom = permgroup::coset_action(&base_ext, &h_ext)?;
                    let ext = hom.target().with_seed(seed);
                    let n_gens = base.generators().len();
                    let g = PermGroup::new(ext.degree(), ext.generators()[..n_gens].to_vec())?
                        .with_seed(seed);
                    (g, ext)
                }
            };
            let order = group.order()? as u64;
            if order != entry.expected_order || group.degree() != entry.degree {
                bail!(
                    "{} {}: got degree {} order {order}",
                    group_name,
                    entry.generator_file.display(),
                    group.degree()
                );
            }
            if extended.order()? as u64 != 2 * order {
                bail!(
                    "{} {}: extension has the wrong order",
                    group_name,
                    entry.generator_file.display()
                );
            }
            out.push(Generated {
                entry,
                group,
                extended,
            });
        }
    }
    Ok(out)
}

/// Writes generator files and `catalog.txt`.
pub fn write_data(dir: &Path, generated: &[Generated]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut records = Vec::new();
    for g in generated {
        let path = dir.join(&g.entry.generator_file);
        std::fs::write(&path, g.group.to_text()).with_context(|| path.display().to_string())?;
        let path = dir.join(g.entry.extension_file());
        std::fs::write(&path, g.extended.to_text()).with_context(|| path.display().to_string())?;
        records.extend(g.entry.records());
    }
    std::fs::write(dir.join("catalog.txt"), catalog::write_catalog(&records))?;
    Ok(())
}

/// Loads every catalog entry from `dir`, checking group orders.
pub fn load(dir: &Path, seed: u64) -> Result<Vec<Generated>> {
    let mut out = Vec::new();
    for entry in catalog::builtin_catalog() {
        let group = entry.load(dir)?.with_seed(seed);
        let extended = entry.load_extension(dir, &group)?.with_seed(seed);
        let order = group.order()? as u64;
        if order != entry.expected_order {
            bail!(
                "{}: order {order}, expected {}",
                entry.generator_file.display(),
                entry.expected_order
            );
        }
        if extended.order()? != 2 * group.order()? {
            bail!(
                "{}: extension has the wrong order",
                entry.extension_file().display()
            );
        }
        out.push(Generated {
            entry,
            group,
            extended,
        });
    }
    Ok(out)
}

/// Loads from `dir`, or builds in memory when the files are missing.
pub fn load_or_generate(dir: &Path, seed: u64) -> Result<Vec<Generated>> {
    if dir.join("catalog.txt").exists() {
        load(dir, seed)
    } else {
        generate(seed)
    }
}
