//! Affine deformations of a linear group: cocycles modulo coboundaries, the
//! Margulis invariant as a linear functional, spectrum scans, sign reports
//! and projective cone plots.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::{enumerate_classes, eval_affine, eval_linear, primitive_classes, Cocycle, FreeWord};
use crate::isometry::{hyperbolic_data, margulis_alpha, translation_length, LinearIso};
use crate::lorentz::MinkVec;

/// Orthonormal (in the Euclidean structure of R^{3r}) bases for the
/// coboundaries and a complementary chart of H^1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct H1Chart {
    pub basis: Vec<Vec<f64>>,
    pub coboundary_basis: Vec<Vec<f64>>,
}

impl H1Chart {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The cocycle with the given chart coordinates.
    pub fn cocycle(&self, coords: &[f64]) -> Cocycle {
        let n = self.basis.first().map_or(0, Vec::len);
        let mut flat = vec![0.0; n];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (f, x) in flat.iter_mut().zip(b) {
                *f += c * x;
            }
        }
        Cocycle::from_flat(&flat)
    }

    /// Chart coordinates of a covector on R^{3r}.
    pub fn covector_coords(&self, covector: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| dot(b, covector)).collect()
    }

    /// Chart coordinates of the class of a cocycle.
    pub fn coords(&self, u: &Cocycle) -> Vec<f64> {
        self.covector_coords(&u.to_flat())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Coboundary map `v -> (v - L(a_i) v)_i` as a `3r x 3` matrix.
pub fn coboundary_matrix(gens: &[LinearIso]) -> DMatrix<f64> {
    let r = gens.len();
    DMatrix::from_fn(3 * r, 3, |row, col| {
        let e = MinkVec::from(std::array::from_fn::<f64, 3, _>(|k| f64::from(k == col)));
        let d = e - gens[row / 3].apply(e);
        d.to_array()[row % 3]
    })
}

pub fn h1_chart(gens: &[LinearIso]) -> Result<H1Chart> {
    let d = coboundary_matrix(gens);
    let svd = d.clone().svd(true, false);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10 * smax.max(1.0))
        .count();
    if rank < 3 {
        return Err(Error::ElementaryGroup(rank));
    }
    let u = svd.u.expect("requested U");
    let mut cob: Vec<Vec<f64>> = (0..3).map(|j| u.column(j).iter().copied().collect()).collect();
    // keep a consistent sign so repeated calls agree bit for bit
    for c in &mut cob {
        normalize_sign(c);
    }
    let n = 3 * gens.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        if basis.len() == n - 3 {
            break;
        }
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        // two passes of Gram-Schmidt for stability
        for _ in 0..2 {
            for b in cob.iter().chain(basis.iter()) {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    Ok(H1Chart {
        basis,
        coboundary_basis: cob,
    })
}

fn normalize_sign(v: &mut [f64]) {
    if let Some(&first) = v.iter().find(|x| x.abs() > 1e-12) {
        if first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// The Margulis invariant of `word` as a covector on R^{3r}, with the
/// translation length of its linear part.
///
/// Computed as a sum over cyclic rotations of the word, each paired with the
/// neutral vector of the rotation's own linear part. This avoids multiplying
/// large matrices into the translation and stays accurate for long words.
pub fn alpha_covector_with_length(gens: &[LinearIso], word: &FreeWord) -> Result<(Vec<f64>, f64)> {
    let base = hyperbolic_data(&eval_linear(gens, word)?)?;
    let letters = word.letters();
    let mut cov = vec![0.0; 3 * gens.len()];
    for k in 0..letters.len() {
        let rot = word.rotate(k);
        let w0 = if k == 0 {
            base.w_neutral
        } else {
            hyperbolic_data(&eval_linear(gens, &rot)?)?.w_neutral
        };
        let l = letters[k];
        let i = l.unsigned_abs() as usize - 1;
        let dual = if l > 0 { w0 } else { -gens[i].apply(w0) };
        cov[3 * i] += dual.c1;
        cov[3 * i + 1] += dual.c2;
        cov[3 * i + 2] -= dual.c3;
    }
    Ok((cov, base.length))
}

pub fn alpha_covector(gens: &[LinearIso], word: &FreeWord) -> Result<Vec<f64>> {
    alpha_covector_with_length(gens, word).map(|(c, _)| c)
}

/// One row of a length spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub word: FreeWord,
    pub alpha: f64,
    pub length: f64,
    pub ratio: f64,
}

/// Result of scanning a family of conjugacy classes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumScan {
    pub entries: Vec<SpectrumEntry>,
    /// Classes whose linear part was not (numerically) hyperbolic.
    pub skipped: Vec<FreeWord>,
}

/// Which conjugacy classes a scan visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WordFamily {
    All,
    /// Primitive classes; rank 2 only.
    Primitive,
}

pub fn scan_words(rank: usize, max_len: usize, family: WordFamily) -> Result<Vec<FreeWord>> {
    match family {
        WordFamily::All => Ok(enumerate_classes(rank, max_len)),
        WordFamily::Primitive if rank == 2 => Ok(primitive_classes(max_len)),
        WordFamily::Primitive => Err(Error::Domain(format!(
            "primitive word family is only available in rank 2, got rank {rank}"
        ))),
    }
}

/// Covector and translation length for each word; `None` marks a skipped
/// (non-hyperbolic) class. Order follows `words`.
pub fn covector_table(gens: &[LinearIso], words: &[FreeWord]) -> Vec<Option<(Vec<f64>, f64)>> {
    words
        .par_iter()
        .map(|w| alpha_covector_with_length(gens, w).ok())
        .collect()
}

pub fn spectrum_scan_words(gens: &[LinearIso], u: &Cocycle, words: &[FreeWord]) -> Result<SpectrumScan> {
    if u.rank() != gens.len() {
        return Err(Error::Dimension(format!(
            "{} generators but {} translational parts",
            gens.len(),
            u.rank()
        )));
    }
    let flat = u.to_flat();
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (w, data) in words.iter().zip(covector_table(gens, words)) {
        match data {
            Some((cov, length)) => {
                let alpha = dot(&cov, &flat);
                entries.push(SpectrumEntry {
                    word: w.clone(),
                    alpha,
                    length,
                    ratio: alpha / length,
                });
            }
            None => skipped.push(w.clone()),
        }
    }
    Ok(SpectrumScan { entries, skipped })
}

/// Normalized Margulis spectrum over all classes up to `max_len`.
pub fn spectrum_scan(gens: &[LinearIso], u: &Cocycle, max_len: usize) -> Result<SpectrumScan> {
    spectrum_scan_words(gens, u, &enumerate_classes(gens.len(), max_len))
}

/// Outcome of a sign scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SignVerdict {
    AllPositive { min_ratio: f64, witness: FreeWord },
    AllNegative { max_ratio: f64, witness: FreeWord },
    Mixed { positive: SpectrumEntry, negative: SpectrumEntry },
    Zero { witness: SpectrumEntry },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub verdict: SignVerdict,
    pub conclusion: Conclusion,
    pub scanned_max_len: usize,
    pub scanned: usize,
    pub skipped: usize,
}

/// What a sign scan allows one to conclude.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    /// Two classes with opposite signs: the action is not proper.
    NotProper,
    /// A class with vanishing invariant has a fixed point: not free, not
    /// proper.
    NotProperNotFree,
    /// One-signed at this depth. Consistent with properness, proves nothing.
    Inconclusive,
}

/// Classifies a spectrum by the signs of its ratios; `|ratio| <= tol` counts
/// as zero.
pub fn sign_report(scan: &SpectrumScan, scanned_max_len: usize, tol: f64) -> Result<SignReport> {
    let entries = &scan.entries;
    if entries.is_empty() {
        return Err(Error::Domain("sign report of an empty spectrum".into()));
    }
    let by_ratio = |a: &&SpectrumEntry, b: &&SpectrumEntry| a.ratio.total_cmp(&b.ratio);
    let max = entries.iter().max_by(by_ratio).expect("nonempty");
    let min = entries.iter().min_by(by_ratio).expect("nonempty");
    let (verdict, conclusion) = if max.ratio > tol && min.ratio < -tol {
        (
            SignVerdict::Mixed {
                positive: max.clone(),
                negative: min.clone(),
            },
            Conclusion::NotProper,
        )
    } else if let Some(z) = entries.iter().find(|e| e.ratio.abs() <= tol) {
        (SignVerdict::Zero { witness: z.clone() }, Conclusion::NotProperNotFree)
    } else if min.ratio > 0.0 {
        (
            SignVerdict::AllPositive {
                min_ratio: min.ratio,
                witness: min.word.clone(),
            },
            Conclusion::Inconclusive,
        )
    } else {
        (
            SignVerdict::AllNegative {
                max_ratio: max.ratio,
                witness: max.word.clone(),
            },
            Conclusion::Inconclusive,
        )
    };
    Ok(SignReport {
        verdict,
        conclusion,
        scanned_max_len,
        scanned: entries.len(),
        skipped: scan.skipped.len(),
    })
}

/// Finite-difference check of `d/dt l(word)` against the Margulis invariant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradCheck {
    pub fd: f64,
    pub alpha: f64,
    pub rel_err: f64,
}

/// Compares the central difference of `t -> l(word)` along the path
/// `a_i -> exp(t u_i) a_i` with `alpha(word)`.
pub fn length_derivative(gens: &[LinearIso], u: &Cocycle, word: &FreeWord, h: f64) -> Result<GradCheck> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::Domain(format!("step must lie in (0, 1e-3], got {h}")));
    }
    let alpha = margulis_alpha(&eval_affine(gens, u, word)?)?;
    let length_at = |t: f64| -> Result<f64> {
        let moved: Vec<LinearIso> = gens
            .iter()
            .zip(&u.u_gen)
            .map(|(a, x)| LinearIso::killing_flow(*x, t).compose(a))
            .collect();
        let l = translation_length(&eval_linear(&moved, word)?);
        if l > 0.0 {
            Ok(l)
        } else {
            Err(Error::StepTooLarge(h))
        }
    };
    let fd = (length_at(h)? - length_at(-h)?) / (2.0 * h);
    Ok(GradCheck {
        fd,
        alpha,
        rel_err: (fd - alpha).abs() / alpha.abs().max(1.0),
    })
}

/// Affine chart of the projectivized H^1 used by [`cone_plot`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartChoice {
    /// Normal is the normalized sum of the normalized functionals of `a`,
    /// `b` and `ab`.
    Auto,
    XPlane,
    YPlane,
    ZPlane,
}

impl std::str::FromStr for ChartChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(ChartChoice::Auto),
            "x" | "x-plane" => Ok(ChartChoice::XPlane),
            "y" | "y-plane" => Ok(ChartChoice::YPlane),
            "z" | "z-plane" => Ok(ChartChoice::ZPlane),
            _ => Err(Error::Domain(format!(
                "unknown chart {s:?}; expected auto, x-plane, y-plane or z-plane"
            ))),
        }
    }
}

/// The plane `{x : normal . x = 1}` with an orthonormal frame `(e1, e2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartFrame {
    pub normal: [f64; 3],
    pub e1: [f64; 3],
    pub e2: [f64; 3],
}

impl ChartFrame {
    pub fn from_normal(n: [f64; 3]) -> Result<Self> {
        let len = dot(&n, &n).sqrt();
        if !(len > 1e-12) {
            return Err(Error::Plot("chart normal is zero".into()));
        }
        let n = n.map(|x| x / len);
        // pick the coordinate axis least aligned with n
        let k = (0..3)
            .min_by(|&i, &j| n[i].abs().total_cmp(&n[j].abs()))
            .expect("three axes");
        let mut e1 = [0.0; 3];
        e1[k] = 1.0;
        let p = dot(&e1, &n);
        let mut e1 = std::array::from_fn(|i| e1[i] - p * n[i]);
        let l1 = dot(&e1, &e1).sqrt();
        e1 = e1.map(|x: f64| x / l1);
        let e2 = [
            n[1] * e1[2] - n[2] * e1[1],
            n[2] * e1[0] - n[0] * e1[2],
            n[0] * e1[1] - n[1] * e1[0],
        ];
        Ok(ChartFrame { normal: n, e1, e2 })
    }

    /// The point of R^3 at chart coordinates `(s, t)`.
    pub fn lift(&self, s: f64, t: f64) -> [f64; 3] {
        std::array::from_fn(|i| self.normal[i] + s * self.e1[i] + t * self.e2[i])
    }

    /// Coefficients `(a, b, d)` of the functional `c` restricted to the
    /// chart: `c . lift(s, t) = a s + b t + d`.
    pub fn restrict(&self, c: &[f64]) -> [f64; 3] {
        [dot(c, &self.e1), dot(c, &self.e2), dot(c, &self.normal)]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConePlotOptions {
    pub chart: ChartChoice,
    pub family: WordFamily,
    /// Extra lines for the metadata comment block.
    pub metadata: Vec<String>,
}

impl Default for ConePlotOptions {
    fn default() -> Self {
        ConePlotOptions {
            chart: ChartChoice::Auto,
            family: WordFamily::Primitive,
            metadata: Vec::new(),
        }
    }
}

/// The zero set of one class's functional in the chart: `a s + b t + d = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotLine {
    pub word: FreeWord,
    pub coeffs: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConePlot {
    pub svg: String,
    pub chart: ChartFrame,
    pub lines: Vec<PlotLine>,
    /// Vertices of the shaded region in chart coordinates.
    pub region: Vec<[f64; 2]>,
    /// `1` if the shaded region is where all functionals are positive, `-1`
    /// if negative, `0` if no region survived.
    pub region_sign: i8,
    /// Chart-to-viewBox scale factor.
    pub scale: f64,
    pub skipped: usize,
    /// Functionals whose line is the line at infinity of the chart.
    pub at_infinity: usize,
}

const CLIP_BOX: f64 = 1e3;

fn clip(poly: &[[f64; 2]], c: [f64; 3]) -> Vec<[f64; 2]> {
    let f = |p: &[f64; 2]| c[0] * p[0] + c[1] * p[1] + c[2];
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (fp, fq) = (f(&p), f(&q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}

fn area(poly: &[[f64; 2]]) -> f64 {
    0.5 * (0..poly.len())
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn dedup_ring(poly: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for p in poly {
        if out
            .last()
            .is_none_or(|q| (p[0] - q[0]).hypot(p[1] - q[1]) > 1e-9)
        {
            out.push(p);
        }
    }
    while out.len() > 1 {
        let (f, l) = (out[0], out[out.len() - 1]);
        if (f[0] - l[0]).hypot(f[1] - l[1]) > 1e-9 {
            break;
        }
        out.pop();
    }
    out
}

/// Intersection of the halfplanes `sign * (a s + b t + d) >= 0` with a large
/// box, or an empty vector.
pub fn feasible_region(coeffs: &[[f64; 3]], sign: f64) -> Vec<[f64; 2]> {
    let mut poly = vec![
        [-CLIP_BOX, -CLIP_BOX],
        [CLIP_BOX, -CLIP_BOX],
        [CLIP_BOX, CLIP_BOX],
        [-CLIP_BOX, CLIP_BOX],
    ];
    for c in coeffs {
        poly = clip(&poly, c.map(|x| sign * x));
        if poly.len() < 3 {
            return Vec::new();
        }
    }
    let poly = dedup_ring(poly);
    if poly.len() < 3 || area(&poly).abs() < 1e-12 {
        Vec::new()
    } else {
        poly
    }
}

fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|&x| fmt6(x)).collect::<Vec<_>>().join(", ")
}

/// Chart normal for `choice`, given the chart coordinates of the
/// functionals of `a`, `b`, `ab` (or whatever functionals are available).
fn chart_normal(choice: ChartChoice, anchors: &[Vec<f64>]) -> Result<[f64; 3]> {
    match choice {
        ChartChoice::XPlane => Ok([1.0, 0.0, 0.0]),
        ChartChoice::YPlane => Ok([0.0, 1.0, 0.0]),
        ChartChoice::ZPlane => Ok([0.0, 0.0, 1.0]),
        ChartChoice::Auto => {
            let mut n = [0.0; 3];
            for c in anchors {
                let len = dot(c, c).sqrt();
                if len > 1e-12 {
                    n.iter_mut().zip(c).for_each(|(x, y)| *x += y / len);
                }
            }
            if dot(&n, &n).sqrt() > 1e-9 {
                return Ok(n);
            }
            anchors
                .iter()
                .find(|c| dot(c, c).sqrt() > 1e-12)
                .map(|c| [c[0], c[1], c[2]])
                .ok_or_else(|| Error::Plot("all functionals vanish".into()))
        }
    }
}

/// Draws the lines `{alpha(gamma) = 0}` in an affine chart of P(H^1) and
/// shades the region where every scanned functional has the same sign.
pub fn cone_plot(gens: &[LinearIso], max_len: usize, chart: &H1Chart, opts: &ConePlotOptions) -> Result<ConePlot> {
    if gens.len() != 2 || chart.dim() != 3 {
        return Err(Error::Plot(format!(
            "cone plots need rank 2 (a projective plane), got rank {}",
            gens.len()
        )));
    }
    let words = scan_words(2, max_len, opts.family)?;
    let table = covector_table(gens, &words);
    let mut funcs: Vec<(FreeWord, Vec<f64>)> = Vec::new();
    let mut skipped = 0;
    for (w, data) in words.iter().zip(table) {
        match data {
            Some((cov, _)) => funcs.push((w.clone(), chart.covector_coords(&cov))),
            None => skipped += 1,
        }
    }
    if funcs.iter().all(|(_, c)| dot(c, c).sqrt() <= 1e-12) {
        return Err(Error::Plot("all functionals vanish on the chart".into()));
    }
    let anchor_words: Vec<FreeWord> = ["a", "b", "ab"].iter().map(|s| s.parse().expect("word")).collect();
    let mut anchors: Vec<Vec<f64>> = anchor_words
        .iter()
        .filter_map(|w| alpha_covector(gens, w).ok())
        .map(|cov| chart.covector_coords(&cov))
        .collect();
    if anchors.len() < anchor_words.len() {
        anchors.extend(funcs.iter().map(|(_, c)| c.clone()));
    }
    let frame = ChartFrame::from_normal(chart_normal(opts.chart, &anchors)?)?;

    let mut lines = Vec::new();
    let mut at_infinity = 0;
    for (w, c) in &funcs {
        let len = dot(c, c).sqrt();
        if len <= 1e-12 {
            continue;
        }
        let r = frame.restrict(&c.iter().map(|x| x / len).collect::<Vec<_>>());
        if r[0].hypot(r[1]) <= 1e-9 {
            at_infinity += 1;
            continue;
        }
        lines.push(PlotLine {
            word: w.clone(),
            coeffs: r,
        });
    }
    let coeffs: Vec<[f64; 3]> = lines.iter().map(|l| l.coeffs).collect();
    let (mut region, mut region_sign) = (feasible_region(&coeffs, 1.0), 1);
    if region.is_empty() {
        region = feasible_region(&coeffs, -1.0);
        region_sign = if region.is_empty() { 0 } else { -1 };
    }
    let extent = region
        .iter()
        .flat_map(|p| [p[0].abs(), p[1].abs()])
        .fold(0.0f64, f64::max);
    let scale = if extent > 1e-12 { 1.2 / extent } else { 1.0 };
    let svg = render_svg(&frame, &lines, &region, region_sign, scale, max_len, opts);
    Ok(ConePlot {
        svg,
        chart: frame,
        lines,
        region,
        region_sign,
        scale,
        skipped,
        at_infinity,
    })
}

fn render_svg(
    frame: &ChartFrame,
    lines: &[PlotLine],
    region: &[[f64; 2]],
    region_sign: i8,
    scale: f64,
    max_len: usize,
    opts: &ConePlotOptions,
) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.5 -1.5 3 3\" width=\"600\" height=\"600\">\n",
    );
    s.push_str("<!--\n");
    for line in &opts.metadata {
        let _ = writeln!(s, "{}", line.replace("--", "- -"));
    }
    let _ = writeln!(s, "max-length: {max_len}");
    let _ = writeln!(s, "words: {:?}", opts.family);
    let _ = writeln!(s, "chart: {:?}", opts.chart);
    let _ = writeln!(s, "chart-normal: [{}]", fmt_vec(&frame.normal));
    let _ = writeln!(s, "chart-e1: [{}]", fmt_vec(&frame.e1));
    let _ = writeln!(s, "chart-e2: [{}]", fmt_vec(&frame.e2));
    let _ = writeln!(s, "scale: {}", fmt6(scale));
    let sign = match region_sign {
        1 => "positive",
        -1 => "negative",
        _ => "empty",
    };
    let _ = writeln!(s, "region: {sign}");
    let _ = writeln!(s, "lines: {}", lines.len());
    s.push_str("-->\n");
    s.push_str("<rect x=\"-1.5\" y=\"-1.5\" width=\"3\" height=\"3\" fill=\"white\"/>\n");
    // plot coordinates: (scale s, -scale t) so that t points up
    let pts: Vec<String> = region
        .iter()
        .map(|p| format!("{},{}", fmt6(scale * p[0]), fmt6(-scale * p[1])))
        .collect();
    let _ = writeln!(
        s,
        "<polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.7\" stroke=\"none\"/>",
        pts.join(" ")
    );
    for l in lines {
        let [a, b, d] = l.coeffs;
        // in plot coordinates: a X - b Y + scale d = 0
        let (pa, pb, pd) = (a, -b, scale * d);
        let nn = pa * pa + pb * pb;
        let p0 = [-pd * pa / nn, -pd * pb / nn];
        let dir = [-pb / nn.sqrt(), pa / nn.sqrt()];
        let r = 10.0;
        let _ = writeln!(
            s,
            "<path d=\"M {} {} L {} {}\" stroke=\"black\" stroke-width=\"0.004\" fill=\"none\" data-word=\"{}\"/>",
            fmt6(p0[0] - r * dir[0]),
            fmt6(p0[1] - r * dir[1]),
            fmt6(p0[0] + r * dir[0]),
            fmt6(p0[1] + r * dir[1]),
            l.word
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::adjoint_rep;
    use nalgebra::Matrix2;

    fn gens() -> Vec<LinearIso> {
        let a = LinearIso::killing_flow(MinkVec::X2, 3.0);
        let r = LinearIso::killing_flow(MinkVec::X3, std::f64::consts::FRAC_PI_2);
        let b = r.compose(&a).compose(&r.inverse());
        vec![a, b]
    }

    #[test]
    fn chart_dimensions() {
        let c = h1_chart(&gens()).unwrap();
        assert_eq!(c.dim(), 3);
        for b in &c.basis {
            for k in &c.coboundary_basis {
                assert!(dot(b, k).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn elementary_group_rejected() {
        let a = LinearIso::killing_flow(MinkVec::X2, 1.0);
        let b = LinearIso::killing_flow(MinkVec::X2, 2.0);
        assert!(matches!(h1_chart(&[a, b]), Err(Error::ElementaryGroup(_))));
    }

    #[test]
    fn coboundary_columns() {
        let g = gens();
        let d = coboundary_matrix(&g);
        let v = MinkVec::new(0.3, -1.0, 2.0);
        let img = &d * nalgebra::DVector::from_column_slice(&v.to_array());
        let expect = Cocycle::coboundary(&g, v).to_flat();
        for (x, y) in img.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn covector_of_generator() {
        let a = adjoint_rep(&Matrix2::new(2.0, 0.0, 0.0, 0.5)).unwrap();
        let b = gens()[1];
        let cov = alpha_covector(&[a, b], &"a".parse().unwrap()).unwrap();
        let u = Cocycle::new(vec![MinkVec::X2.scale(5.0), MinkVec::ZERO]);
        assert!((dot(&cov, &u.to_flat()) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn covector_matches_direct_alpha() {
        let g = gens();
        let u = Cocycle::new(vec![MinkVec::new(0.2, 0.7, -0.1), MinkVec::new(-0.4, 0.1, 0.3)]);
        for s in ["ab", "aB", "aab", "abAB", "aaBab"] {
            let w: FreeWord = s.parse().unwrap();
            let cov = alpha_covector(&g, &w).unwrap();
            let direct = margulis_alpha(&eval_affine(&g, &u, &w).unwrap()).unwrap();
            assert!((dot(&cov, &u.to_flat()) - direct).abs() < 1e-9 * direct.abs().max(1.0), "{s}");
        }
    }

    #[test]
    fn zero_and_coboundary_scans() {
        let g = gens();
        let scan = spectrum_scan(&g, &Cocycle::zero(2), 4).unwrap();
        assert!(scan.entries.iter().all(|e| e.alpha == 0.0));
        let r = sign_report(&scan, 4, 1e-8).unwrap();
        assert!(matches!(r.verdict, SignVerdict::Zero { .. }));
        let cob = Cocycle::coboundary(&g, MinkVec::new(1.0, 2.0, -0.5));
        let scan = spectrum_scan(&g, &cob, 5).unwrap();
        assert!(scan.entries.iter().all(|e| e.alpha.abs() < 1e-8));
    }

    #[test]
    fn mixed_verdict() {
        let g = gens();
        let wa = hyperbolic_data(&g[0]).unwrap().w_neutral;
        let wb = hyperbolic_data(&g[1]).unwrap().w_neutral;
        let u = Cocycle::new(vec![wa, -wb]);
        let scan = spectrum_scan(&g, &u, 3).unwrap();
        let r = sign_report(&scan, 3, 1e-8).unwrap();
        assert_eq!(r.conclusion, Conclusion::NotProper);
        match r.verdict {
            SignVerdict::Mixed { positive, negative } => {
                assert!(positive.ratio > 0.0 && negative.ratio < 0.0);
            }
            v => panic!("expected mixed, got {v:?}"),
        }
    }

    #[test]
    fn gradcheck_generator() {
        let g = gens();
        let u = Cocycle::new(vec![MinkVec::new(0.2, 0.7, -0.1), MinkVec::new(-0.4, 0.1, 0.3)]);
        for s in ["a", "ab", "aBB"] {
            let c = length_derivative(&g, &u, &s.parse().unwrap(), 1e-5).unwrap();
            assert!(c.rel_err < 1e-6, "{s}: {c:?}");
        }
        assert!(length_derivative(&g, &u, &"a".parse().unwrap(), 0.1).is_err());
    }

    #[test]
    fn clip_square() {
        let r = feasible_region(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-1.0, -1.0, 1.0]], 1.0);
        assert_eq!(r.len(), 3);
        assert!((area(&r).abs() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn chart_parse() {
        assert_eq!("z-plane".parse::<ChartChoice>().unwrap(), ChartChoice::ZPlane);
        assert!("w-plane".parse::<ChartChoice>().is_err());
    }
}
