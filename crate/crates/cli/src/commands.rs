//! One function per subcommand. Each returns the report text and exit code.

use margulis_core::deformation::{scan_words, spectrum_scan_words};
use margulis_core::schottky::{SchottkyData, DRUMM_T_MAX};
use margulis_core::strips::strip_generators;
use margulis_core::{
    affine_axis, arc_crooked_planes, classify_iso, cone_plot, drumm_construct, enumerate_classes,
    eval_affine, h1_chart, length_derivative, margulis_alpha, pingpong_certify, sign_report,
    strip_cocycle, AffineIso, Certificate, Cocycle, Conclusion, ConePlotOptions, CrookedHalfspace,
    Error, FreeWord, IsoClass, MinkVec, PingPongFailure, SpectrumEntry, WordFamily,
};
use serde::{Deserialize, Serialize};

use crate::config::{Loaded, Settings};
use crate::failure::*;
use crate::Format;

pub const DEFAULT_MAX_LENGTH: usize = 6;
pub const DEFAULT_PLOT_LENGTH: usize = 8;
pub const DEFAULT_GRADCHECK_LENGTH: usize = 4;
pub const DEFAULT_SIGN_TOL: f64 = 1e-9;
pub const DEFAULT_GRADCHECK_TOL: f64 = 1e-5;

/// Text to emit and the exit code that goes with it.
pub struct Report {
    pub body: String,
    pub code: u8,
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn ok<T: Serialize>(value: &T) -> Result<Report, Failure> {
    Ok(Report {
        body: json(value),
        code: EXIT_OK,
    })
}

fn no_svg(format: Format) -> Result<(), Failure> {
    match format {
        Format::Json => Ok(()),
        Format::Svg => Err(Failure::Parse("only cone-plot produces SVG".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub word: FreeWord,
    pub class: String,
    pub alpha: f64,
    pub length: f64,
    pub ratio: f64,
    pub axis_point: MinkVec,
    pub axis_direction: MinkVec,
}

pub fn invariant(cfg: &Loaded, s: &Settings, format: Format) -> Result<Report, Failure> {
    no_svg(format)?;
    let word = cfg
        .raw
        .word
        .clone()
        .ok_or_else(|| Failure::Parse("invariant needs a word".into()))?;
    let g = eval_affine(&cfg.gens, &cfg.cocycle()?, &word)?;
    let tol = s.tolerance.unwrap_or(margulis_core::isometry::CLASSIFY_TOL);
    let class = classify_iso(&g.linear, tol)?;
    let IsoClass::Hyperbolic(h) = class else {
        return Err(Failure::Degenerate(format!(
            "word {word} is {}, not hyperbolic",
            class.name()
        )));
    };
    let alpha = margulis_alpha(&g)?;
    let (axis_point, axis_direction) = affine_axis(&g)?;
    ok(&InvariantReport {
        word,
        class: class.name().into(),
        alpha,
        length: h.length,
        ratio: alpha / h.length,
        axis_point,
        axis_direction,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub max_length: usize,
    pub family: WordFamily,
    pub entries: Vec<SpectrumEntry>,
    /// Classes whose linear part is not hyperbolic.
    pub skipped: Vec<FreeWord>,
}

fn scan(cfg: &Loaded, s: &Settings) -> Result<SpectrumReport, Failure> {
    let u = cfg.cocycle()?;
    let family = if s.primitive_only.unwrap_or(false) {
        WordFamily::Primitive
    } else {
        WordFamily::All
    };
    let (words, max_length) = match &cfg.raw.words {
        Some(w) => (w.clone(), w.iter().map(FreeWord::len).max().unwrap_or(0)),
        None => {
            let m = s.max_length.unwrap_or(DEFAULT_MAX_LENGTH);
            (scan_words(cfg.gens.len(), m, family)?, m)
        }
    };
    let scan = spectrum_scan_words(&cfg.gens, &u, &words)?;
    Ok(SpectrumReport {
        max_length,
        family,
        entries: scan.entries,
        skipped: scan.skipped,
    })
}

pub fn spectrum(cfg: &Loaded, s: &Settings, format: Format) -> Result<Report, Failure> {
    no_svg(format)?;
    ok(&scan(cfg, s)?)
}

pub fn report(cfg: &Loaded, s: &Settings, format: Format) -> Result<Report, Failure> {
    no_svg(format)?;
    let sp = scan(cfg, s)?;
    let rep = sign_report(
        &margulis_core::SpectrumScan {
            entries: sp.entries,
            skipped: sp.skipped,
        },
        sp.max_length,
        s.tolerance.unwrap_or(DEFAULT_SIGN_TOL),
    )?;
    let code = match rep.conclusion {
        Conclusion::Inconclusive => EXIT_INCONCLUSIVE,
        Conclusion::NotProper | Conclusion::NotProperNotFree => EXIT_CERTIFICATION,
    };
    Ok(Report { body: json(&rep), code })
}

fn affine_gens(cfg: &Loaded) -> Result<Vec<AffineIso>, Failure> {
    let u = cfg.cocycle()?;
    Ok(cfg
        .gens
        .iter()
        .zip(&u.u_gen)
        .map(|(a, t)| AffineIso::new(*a, *t))
        .collect())
}

fn certified(result: Result<Certificate, PingPongFailure>) -> Result<Report, Failure> {
    match result {
        Ok(c) => ok(&c),
        Err(f) => Ok(Report {
            body: json(&f),
            code: EXIT_CERTIFICATION,
        }),
    }
}

pub fn certify(cfg: &Loaded, format: Format) -> Result<Report, Failure> {
    no_svg(format)?;
    let hs = cfg
        .raw
        .halfspaces
        .as_ref()
        .ok_or_else(|| Failure::Parse("certify needs halfspaces".into()))?;
    certified(pingpong_certify(&affine_gens(cfg)?, hs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "failure")]
pub enum ConstructionWitness {
    ConstructionFailed { t_max: f64, first: i32, second: i32 },
}

pub fn drumm(cfg: &Loaded, format: Format) -> Result<Report, Failure> {
    no_svg(format)?;
    let block = cfg
        .raw
        .schottky
        .as_ref()
        .ok_or_else(|| Failure::Parse("drumm needs a schottky block".into()))?;
    let data = SchottkyData::new(cfg.gens.clone(), block.slab_normals.clone())?;
    let widths = block.widths.clone().unwrap_or_else(|| vec![1.0; 2 * data.rank()]);
    match drumm_construct(&data, &widths, block.t_max.unwrap_or(DRUMM_T_MAX)) {
        Ok(r) => ok(&r),
        Err(Error::ConstructionFailed { t_max, first, second }) => Ok(Report {
            body: json(&ConstructionWitness::ConstructionFailed { t_max, first, second }),
            code: EXIT_CERTIFICATION,
        }),
        Err(Error::ConfigurationUnsupported(m)) => Err(Failure::Parse(format!("schottky block: {m}"))),
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub widths: Vec<f64>,
    pub cocycle: Cocycle,
    pub halfspaces: Vec<CrookedHalfspace>,
    pub certificate: Certificate,
}

pub fn strip(cfg: &Loaded, format: Format) -> Result<Report, Failure> {
    no_svg(format)?;
    let domain = cfg.domain()?;
    let strips = cfg.strips()?;
    let cocycle = strip_cocycle(domain, &strips)?;
    let halfspaces = arc_crooked_planes(domain, &strips)?;
    match pingpong_certify(&strip_generators(domain, &strips)?, &halfspaces) {
        Ok(certificate) => ok(&StripReport {
            widths: strips.widths,
            cocycle,
            halfspaces,
            certificate,
        }),
        Err(f) => certified(Err(f)),
    }
}

pub fn cone(cfg: &Loaded, s: &Settings, format: Format) -> Result<Report, Failure> {
    let max_length = s.max_length.unwrap_or(DEFAULT_PLOT_LENGTH);
    let opts = ConePlotOptions {
        chart: s.chart,
        family: if s.primitive_only.unwrap_or(true) {
            WordFamily::Primitive
        } else {
            WordFamily::All
        },
        metadata: ["margulis cone-plot".to_string()]
            .into_iter()
            .chain(cfg.raw.description.clone())
            .collect(),
    };
    let chart = h1_chart(&cfg.gens)?;
    let plot = cone_plot(&cfg.gens, max_length, &chart, &opts)?;
    match format {
        Format::Svg => Ok(Report {
            body: plot.svg,
            code: EXIT_OK,
        }),
        Format::Json => ok(&plot),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradRow {
    pub word: FreeWord,
    pub fd: f64,
    pub alpha: f64,
    pub rel_err: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradReport {
    pub step: f64,
    pub tolerance: f64,
    pub rows: Vec<GradRow>,
    pub max_rel_err: f64,
    pub passed: bool,
}

pub fn gradcheck(cfg: &Loaded, s: &Settings, format: Format) -> Result<Report, Failure> {
    no_svg(format)?;
    let u = cfg.cocycle()?;
    let words = match (&cfg.raw.word, &cfg.raw.words) {
        (_, Some(w)) => w.clone(),
        (Some(w), None) => vec![w.clone()],
        (None, None) => enumerate_classes(cfg.gens.len(), s.max_length.unwrap_or(DEFAULT_GRADCHECK_LENGTH)),
    };
    let rows = words
        .into_iter()
        .map(|word| {
            let g = length_derivative(&cfg.gens, &u, &word, s.step)?;
            Ok(GradRow {
                word,
                fd: g.fd,
                alpha: g.alpha,
                rel_err: g.rel_err,
            })
        })
        .collect::<margulis_core::Result<Vec<_>>>()?;
    let tolerance = s.tolerance.unwrap_or(DEFAULT_GRADCHECK_TOL);
    let max_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let passed = max_rel_err <= tolerance;
    Ok(Report {
        body: json(&GradReport {
            step: s.step,
            tolerance,
            rows,
            max_rel_err,
            passed,
        }),
        code: if passed { EXIT_OK } else { EXIT_CERTIFICATION },
    })
}
