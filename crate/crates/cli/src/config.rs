//! The JSON configuration document. See `configs/README.md` for the schema.

use std::path::Path;

use margulis_core::{
    adjoint_rep, ChartChoice, Cocycle, CrookedHalfspace, FreeWord, LinearIso, MinkVec,
    SidePairedDomain, StripData,
};
use nalgebra::{Matrix2, Matrix3};
use serde::Deserialize;

use crate::failure::Failure;

/// A generator, as a 2x2 matrix of determinant one or as a 3x3 matrix of
/// SO(2,1) in the basis `(x1, x2, x3)`.
#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GeneratorSpec {
    Sl2([[f64; 2]; 2]),
    So21([[f64; 3]; 3]),
}

impl GeneratorSpec {
    fn to_linear(&self) -> margulis_core::Result<LinearIso> {
        match self {
            GeneratorSpec::Sl2(m) => adjoint_rep(&Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1])),
            GeneratorSpec::So21(m) => LinearIso::new(Matrix3::from_fn(|i, j| m[i][j])),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanOptions {
    pub max_length: Option<usize>,
    pub tolerance: Option<f64>,
    pub chart: Option<String>,
    pub primitive_only: Option<bool>,
    /// Finite-difference step for `gradcheck`.
    pub step: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchottkyBlock {
    /// One slab normal `w_i` per generator.
    pub slab_normals: Vec<MinkVec>,
    /// One positive scale per side, in the order `-1, +1, -2, +2, ...`.
    pub widths: Option<Vec<f64>>,
    pub t_max: Option<f64>,
}

/// Either explicit sides (paired by the top-level generators) or ideal arcs
/// of the circle with shears, which determine the generators.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainBlock {
    pub sides: Option<Vec<MinkVec>>,
    pub arcs: Option<Vec<(f64, f64)>>,
    pub shears: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StripsBlock {
    pub widths: Vec<f64>,
    /// Defaults to the points of the sides `s_{+i}` nearest the center.
    pub waists: Option<Vec<MinkVec>>,
    pub reversed: Option<Vec<bool>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Free text, ignored.
    pub description: Option<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    pub translations: Option<Vec<MinkVec>>,
    pub word: Option<FreeWord>,
    pub words: Option<Vec<FreeWord>>,
    /// In the order `-1, +1, -2, +2, ...`.
    pub halfspaces: Option<Vec<CrookedHalfspace>>,
    pub schottky: Option<SchottkyBlock>,
    pub domain: Option<DomainBlock>,
    pub strips: Option<StripsBlock>,
    #[serde(default)]
    pub scan: ScanOptions,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub raw: Config,
    pub gens: Vec<LinearIso>,
    pub domain: Option<SidePairedDomain>,
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Parse(msg.into())
}

fn check_len(what: &str, got: usize, want: usize) -> Result<(), Failure> {
    if got == want {
        Ok(())
    } else {
        Err(invalid(format!("{what}: expected {want} entries, got {got}")))
    }
}

impl Loaded {
    pub fn from_path(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self, Failure> {
        let raw: Config = serde_json::from_str(text).map_err(|e| invalid(format!("invalid configuration: {e}")))?;
        let mut gens = raw
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| g.to_linear().map_err(|e| invalid(format!("generator {}: {e}", i + 1))))
            .collect::<Result<Vec<_>, _>>()?;

        let domain = match &raw.domain {
            None => None,
            Some(d) => Some(match (&d.sides, &d.arcs) {
                (Some(sides), None) => {
                    if d.shears.is_some() {
                        return Err(invalid("domain: shears only apply to arcs"));
                    }
                    check_len("domain.sides", sides.len(), 2 * gens.len())?;
                    SidePairedDomain::new(sides.clone(), gens.clone())
                        .map_err(|e| invalid(format!("domain: {e}")))?
                }
                (None, Some(arcs)) => {
                    let shears = d.shears.clone().unwrap_or_else(|| vec![0.0; arcs.len() / 2]);
                    let dom = SidePairedDomain::from_ideal_arcs(arcs, &shears)
                        .map_err(|e| invalid(format!("domain: {e}")))?;
                    if gens.is_empty() {
                        gens = dom.pairings.clone();
                    } else {
                        check_len("generators", gens.len(), dom.pairings.len())?;
                        let off = gens
                            .iter()
                            .zip(&dom.pairings)
                            .map(|(a, b)| a.max_abs_diff(b))
                            .fold(0.0, f64::max);
                        if off > 1e-8 {
                            return Err(invalid(format!(
                                "generators disagree with the pairings of the arcs (by {off:.2e})"
                            )));
                        }
                    }
                    dom
                }
                _ => return Err(invalid("domain: give exactly one of sides or arcs")),
            }),
        };

        if gens.is_empty() {
            return Err(invalid("no generators"));
        }
        let n = gens.len();
        if let Some(t) = &raw.translations {
            check_len("translations", t.len(), n)?;
        }
        if let Some(h) = &raw.halfspaces {
            check_len("halfspaces", h.len(), 2 * n)?;
        }
        if let Some(s) = &raw.schottky {
            check_len("schottky.slab_normals", s.slab_normals.len(), n)?;
            if let Some(w) = &s.widths {
                check_len("schottky.widths", w.len(), 2 * n)?;
            }
        }
        if let Some(s) = &raw.strips {
            check_len("strips.widths", s.widths.len(), n)?;
            if let Some(w) = &s.waists {
                check_len("strips.waists", w.len(), n)?;
            }
            if let Some(r) = &s.reversed {
                check_len("strips.reversed", r.len(), n)?;
            }
        }
        for w in raw.word.iter().chain(raw.words.iter().flatten()) {
            if w.max_generator() > n {
                return Err(invalid(format!("word {w} uses a generator beyond rank {n}")));
            }
        }
        Ok(Loaded { raw, gens, domain })
    }

    pub fn cocycle(&self) -> Result<Cocycle, Failure> {
        self.raw
            .translations
            .clone()
            .map(Cocycle::new)
            .ok_or_else(|| invalid("this command needs translations"))
    }

    pub fn domain(&self) -> Result<&SidePairedDomain, Failure> {
        self.domain.as_ref().ok_or_else(|| invalid("this command needs a domain block"))
    }

    pub fn strips(&self) -> Result<StripData, Failure> {
        let domain = self.domain()?;
        let block = self.raw.strips.as_ref().ok_or_else(|| invalid("this command needs a strips block"))?;
        let mut data = match &block.waists {
            Some(w) => StripData {
                waists: w.clone(),
                widths: block.widths.clone(),
                reversed: Vec::new(),
            },
            None => StripData::centered(domain, block.widths.clone()).map_err(Failure::from)?,
        };
        data.reversed = block.reversed.clone().unwrap_or_default();
        Ok(data)
    }
}

/// Scan settings after merging command-line flags over the config.
#[derive(Clone, Debug)]
pub struct Settings {
    pub max_length: Option<usize>,
    pub tolerance: Option<f64>,
    pub chart: ChartChoice,
    pub primitive_only: Option<bool>,
    pub step: f64,
}

impl Settings {
    pub fn merge(flags: &crate::Flags, scan: &ScanOptions) -> Result<Self, Failure> {
        let chart = match flags.chart.as_deref().or(scan.chart.as_deref()) {
            Some(c) => c.parse().map_err(|e: margulis_core::Error| invalid(e.to_string()))?,
            None => ChartChoice::Auto,
        };
        Ok(Settings {
            max_length: flags.max_length.or(scan.max_length),
            tolerance: flags.tolerance.or(scan.tolerance),
            chart,
            primitive_only: flags.primitive_only.or(scan.primitive_only),
            step: scan.step.unwrap_or(1e-5),
        })
    }
}
