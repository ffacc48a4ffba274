//! Command implementations. Each returns a serializable report; text output
//! is rendered from the report so a cached result prints identically.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use kr_core::gmod::group_cohomology;
use kr_core::krtables::{
    curve_affine_kr, curve_projective_kr, mod_m_table, pieces_periodicity_check, sphere_ko, sphere_ko_mod,
    GradedGroupTable, KRTableError,
};
use kr_core::realcx::{build_model, KRCoefficientSystem, ModelKind, RealComplex};
use kr_core::specseq::{
    abutment_with_filtration, collapse_certificate, compare, kr_pieces, run_to_infinity, SSMorphism, SpecSeqError,
    Verdict,
};
use kr_core::znf::{GroupMap, IntegerMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cache::Cache;
use crate::json::{
    matrix_from_json, ComplexJson, FilteredPieceJson, GroupJson, KRDegreeJson, ModuleJson, PageJson, PiecesJson,
    SpotMatrixJson, TableJson,
};
use crate::CliError;

pub trait Report: Serialize + DeserializeOwned {
    fn render_text(&self) -> String;

    /// A disagreement that should turn into exit code 1.
    fn mismatch(&self) -> Option<String> {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn emit<R: Report>(r: &R, format: Format) -> String {
    match format {
        Format::Text => r.render_text(),
        Format::Json => serde_json::to_string_pretty(r).expect("reports serialize") + "\n",
    }
}

/// Runs `compute` unless the cache already holds the result for `(command, params)`.
pub fn cached<R: Report>(
    cache: Option<&Cache>,
    command: &str,
    params: &Value,
    compute: impl FnOnce() -> Result<R, CliError>,
) -> Result<R, CliError> {
    let Some(cache) = cache else { return compute() };
    let key = cache.key(command, params);
    if let Some(v) = cache.get(&key)? {
        if let Ok(r) = serde_json::from_value(v) {
            return Ok(r);
        }
    }
    let r = compute()?;
    cache.put(&key, &serde_json::to_value(&r)?)?;
    Ok(r)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// `a..b` (exclusive) or `a..=b`.
pub fn parse_range(s: &str) -> Result<Vec<i64>, CliError> {
    let bad = || CliError::Input(format!("expected a range like 0..8 or 0..=7, got {s:?}"));
    let (a, b, inclusive) = if let Some((a, b)) = s.split_once("..=") {
        (a, b, true)
    } else if let Some((a, b)) = s.split_once("..") {
        (a, b, false)
    } else {
        return Err(bad());
    };
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    let end = if inclusive { b } else { b - 1 };
    if end < a || end - a > 10_000 {
        return Err(bad());
    }
    Ok((a..=end).collect())
}

fn group_text(g: &GroupJson) -> String {
    match g.to_group() {
        Ok(g) => g.to_string(),
        Err(_) => "?".to_string(),
    }
}

fn kr_text(out: &mut String, rows: &[KRDegreeJson]) {
    for k in rows {
        let pieces: Vec<String> =
            k.pieces.iter().map(|p| format!("E∞^{{{},{}}} = {}", p.p, k.degree - p.p, group_text(&p.group))).collect();
        let group = k.group.as_ref().map(group_text).unwrap_or_else(|| "extension open".to_string());
        let pieces = if pieces.is_empty() { "0".to_string() } else { pieces.join(", ") };
        let _ = writeln!(out, "  KR^{:<3} {:<24} [{}]", k.degree, group, pieces);
    }
}

fn ss_err(e: SpecSeqError) -> CliError {
    match e {
        SpecSeqError::NonCollapsing { .. } => CliError::Mismatch(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn table_err(e: KRTableError) -> CliError {
    CliError::Input(e.to_string())
}

/// Whether computed pieces can assemble to `expected`.
fn admits(k: &KRDegreeJson, expected: &GroupJson) -> bool {
    let (Ok(e), Some(pieces)) =
        (expected.to_group(), k.pieces.iter().map(|p| p.group.to_group().ok()).collect::<Option<Vec<_>>>())
    else {
        return false;
    };
    if let Some(g) = &k.group {
        return g == expected;
    }
    let rank: usize = pieces.iter().map(|g| g.free_rank()).sum();
    let torsion: kr_core::znf::Int = pieces.iter().map(|g| g.torsion_order()).product();
    rank == e.free_rank() && (torsion % e.torsion_order()) == kr_core::znf::Int::from(0)
}

fn kr_rows(x: &RealComplex) -> Result<Vec<KRDegreeJson>, CliError> {
    Ok(kr_pieces(x, &KRCoefficientSystem::new()).map_err(ss_err)?.iter().map(KRDegreeJson::from_pieces).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub genus: usize,
    pub real_components: usize,
    pub projective: bool,
    pub closed_form: TableJson,
    pub model: Option<String>,
    pub simplicial: Option<Vec<KRDegreeJson>>,
    pub agreement: Option<bool>,
    pub modulus: Option<u64>,
    pub mod_m: Option<BTreeMap<i64, PiecesJson>>,
}

/// Largest genus for which the simplicial cross-check is run.
const MODEL_GENUS_LIMIT: usize = 3;

pub fn cmd_curve(genus: usize, lambda: usize, projective: bool, m: Option<u64>) -> Result<CurveReport, CliError> {
    if m == Some(0) || m == Some(1) {
        return Err(CliError::Input("modulus must be at least 2".into()));
    }
    let closed: GradedGroupTable =
        if projective { curve_projective_kr(genus, lambda).map_err(table_err)? } else { curve_affine_kr(lambda) };
    let kind = if !projective {
        Some(ModelKind::AffineCurve { lambda, free_loops: genus })
    } else if genus <= MODEL_GENUS_LIMIT && lambda == 0 {
        Some(ModelKind::SurfaceFree(genus))
    } else if genus <= MODEL_GENUS_LIMIT && lambda == genus + 1 {
        Some(ModelKind::SurfaceReflection(genus))
    } else {
        None
    };
    let simplicial = match kind {
        Some(k) => Some(kr_rows(&build_model(k).map_err(|e| CliError::Input(e.to_string()))?)?),
        None => None,
    };
    let closed_json = TableJson::from_table(&closed);
    let agreement = simplicial.as_ref().map(|rows| {
        rows.iter().all(|k| match closed_json.values.get(&closed.normalize(k.degree)) {
            Some(expected) => admits(k, expected),
            None => true,
        })
    });
    let mod_m =
        m.map(|m| mod_m_table(&closed, m).pieces.iter().map(|(n, p)| (*n, PiecesJson::from_pieces(p))).collect());
    Ok(CurveReport {
        genus,
        real_components: lambda,
        projective,
        closed_form: closed_json,
        model: kind.map(|k| format!("{k:?}")),
        simplicial,
        agreement,
        modulus: m,
        mod_m,
    })
}

impl Report for CurveReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        let kind = if self.projective { "projective" } else { "affine" };
        let _ = writeln!(out, "{kind} real curve, genus {}, {} real components", self.genus, self.real_components);
        match self.closed_form.period {
            Some(p) => {
                let _ = writeln!(out, "closed form (period {p}):");
            }
            None => {
                let _ = writeln!(out, "closed form (listed degrees only):");
            }
        }
        for (n, g) in self.closed_form.values.iter().rev() {
            let _ = writeln!(out, "  KR^{:<3} {}", n, group_text(g));
        }
        if let (Some(model), Some(rows)) = (&self.model, &self.simplicial) {
            let _ = writeln!(out, "simplicial model {model}:");
            kr_text(&mut out, rows);
        }
        if let Some(a) = self.agreement {
            let _ = writeln!(out, "agreement: {}", if a { "yes" } else { "NO" });
        }
        if let (Some(m), Some(rows)) = (self.modulus, &self.mod_m) {
            let _ = writeln!(out, "Z/{m} coefficients (sub, quot):");
            for (n, p) in rows.iter().rev() {
                let _ = writeln!(out, "  KR^{:<3} ({}, {})", n, group_text(&p.sub), group_text(&p.quot));
            }
        }
        out
    }

    fn mismatch(&self) -> Option<String> {
        (self.agreement == Some(false)).then(|| "closed form and simplicial model disagree".to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereRow {
    pub n: i64,
    pub group: GroupJson,
    pub mod_m: Option<PiecesJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereReport {
    pub dim: usize,
    pub modulus: Option<u64>,
    pub rows: Vec<SphereRow>,
}

/// `KO^{−n}(S^d)` and its `Z/m` pieces for each `n`.
pub fn cmd_sphere(d: usize, degrees: &[i64], m: Option<u64>) -> Result<SphereReport, CliError> {
    if m == Some(0) || m == Some(1) {
        return Err(CliError::Input("modulus must be at least 2".into()));
    }
    let rows = degrees
        .iter()
        .map(|&n| SphereRow {
            n,
            group: GroupJson::from_group(&sphere_ko(d, n)),
            mod_m: m.map(|m| PiecesJson::from_pieces(&sphere_ko_mod(d, n, m))),
        })
        .collect();
    Ok(SphereReport { dim: d, modulus: m, rows })
}

impl Report for SphereReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "KO^{{-n}}(S^{})", self.dim);
        for r in &self.rows {
            let _ = write!(out, "  n = {:<3} {:<16}", r.n, group_text(&r.group));
            if let (Some(m), Some(p)) = (self.modulus, &r.mod_m) {
                let order = p.order.as_deref().unwrap_or("∞");
                let _ = write!(out, " Z/{m}: ({}, {}) order {order}", group_text(&p.sub), group_text(&p.quot));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: String,
    pub simplices: Vec<usize>,
    pub euler_characteristic: i64,
    pub fixed_euler_characteristic: i64,
    pub quotient_euler_characteristic: i64,
    pub free: bool,
    pub kr: Vec<KRDegreeJson>,
    pub period_four: bool,
}

pub fn cmd_model(name: String, x: &RealComplex) -> Result<ModelReport, CliError> {
    let dim = x.dim().max(0) as usize;
    let pieces = kr_pieces(x, &KRCoefficientSystem::new()).map_err(ss_err)?;
    Ok(ModelReport {
        model: name,
        simplices: (0..=dim).map(|p| x.complex().count(p)).collect(),
        euler_characteristic: x.complex().euler_characteristic(),
        fixed_euler_characteristic: x.fixed_subcomplex().euler_characteristic(),
        quotient_euler_characteristic: x.quotient().euler_characteristic(),
        free: x.is_free(),
        kr: pieces.iter().map(KRDegreeJson::from_pieces).collect(),
        period_four: pieces_periodicity_check(&pieces, 4),
    })
}

pub fn model_from_file(path: &Path) -> Result<RealComplex, CliError> {
    read_json::<ComplexJson>(path)?.to_complex()
}

impl Report for ModelReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.model);
        let _ = writeln!(out, "  simplices by dimension: {:?}", self.simplices);
        let _ = writeln!(
            out,
            "  χ(X) = {}, χ(X^G) = {}, χ(X/G) = {}, free: {}",
            self.euler_characteristic, self.fixed_euler_characteristic, self.quotient_euler_characteristic, self.free
        );
        kr_text(&mut out, &self.kr);
        let _ = writeln!(out, "  period 4: {}", if self.period_four { "yes" } else { "no" });
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbutmentJson {
    pub n: i64,
    pub pieces: Vec<FilteredPieceJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsRunReport {
    pub collapse_certificate: bool,
    pub e_infinity: PageJson,
    pub abutment: Vec<AbutmentJson>,
}

pub fn cmd_ss_run(page: &PageJson) -> Result<SsRunReport, CliError> {
    let p = page.to_page()?;
    let certificate = collapse_certificate(&p);
    let inf = run_to_infinity(&p).map_err(ss_err)?;
    let w = p.window();
    let abutment = (w.p_min + w.q_min..=w.p_max + w.q_max)
        .map(|n| AbutmentJson {
            n,
            pieces: abutment_with_filtration(&inf, n)
                .iter()
                .map(|(p, g)| FilteredPieceJson { p: *p, group: GroupJson::from_group(g) })
                .collect(),
        })
        .collect();
    Ok(SsRunReport { collapse_certificate: certificate, e_infinity: PageJson::from_page(&inf), abutment })
}

impl Report for SsRunReport {
    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "collapse certificate: {}", self.collapse_certificate);
        let _ = writeln!(out, "E_{} page:", self.e_infinity.r);
        for e in &self.e_infinity.entries {
            let _ = writeln!(out, "  E^{{{},{}}} = {}", e.p, e.q, group_text(&e.group));
        }
        let _ = writeln!(out, "abutment:");
        for a in &self.abutment {
            let pieces: Vec<String> = a.pieces.iter().map(|p| format!("F^{}: {}", p.p, group_text(&p.group))).collect();
            let pieces = if pieces.is_empty() { "0".to_string() } else { pieces.join(", ") };
            let _ = writeln!(out, "  H^{:<3} {}", a.n, pieces);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CompareReport {
    Confirmed { through: i64, e_infinity: Vec<crate::json::EntryJson> },
    HypothesisFailed { p: i64, q: i64 },
    InductionBroken { r: u32, p: i64, q: i64 },
}

/// Compares `a → b` along `maps`; without maps the identity is used where the
/// two entries agree and the zero map elsewhere.
pub fn cmd_ss_compare(
    a: &PageJson,
    b: &PageJson,
    maps: Option<&[SpotMatrixJson]>,
    n: i64,
    r0: u32,
) -> Result<CompareReport, CliError> {
    let (pa, pb) = (a.to_page()?, b.to_page()?);
    if pa.r() != r0 || pb.r() != r0 {
        return Err(CliError::Input(format!("--r0 {r0} but the pages are E_{} and E_{}", pa.r(), pb.r())));
    }
    let given: BTreeMap<(i64, i64), &SpotMatrixJson> = maps.unwrap_or(&[]).iter().map(|m| ((m.p, m.q), m)).collect();
    let mut f = BTreeMap::new();
    for (s, src) in pa.entries() {
        let tgt = pb.entry(s);
        let m = match (given.get(&s), maps.is_some()) {
            (Some(m), _) => matrix_from_json(tgt.generators(), src.generators(), &m.matrix)?,
            (None, true) => IntegerMatrix::zeros(tgt.generators(), src.generators()),
            (None, false) if src == &tgt => IntegerMatrix::identity(src.generators()),
            (None, false) => IntegerMatrix::zeros(tgt.generators(), src.generators()),
        };
        let map = GroupMap::new(src.clone(), tgt, m).map_err(|e| CliError::Input(format!("map at {s:?}: {e}")))?;
        f.insert(s, map);
    }
    let morphism = SSMorphism::new(pa, pb, f).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(match compare(&morphism, n, r0).map_err(|e| CliError::Input(e.to_string()))? {
        Verdict::ConfirmedThrough { n, e_infinity } => CompareReport::Confirmed {
            through: n,
            e_infinity: e_infinity
                .iter()
                .map(|(&(p, q), g)| crate::json::EntryJson { p, q, group: GroupJson::from_group(g) })
                .collect(),
        },
        Verdict::HypothesisFailed { p, q } => CompareReport::HypothesisFailed { p, q },
        Verdict::InductionBroken { r, p, q } => CompareReport::InductionBroken { r, p, q },
    })
}

impl Report for CompareReport {
    fn render_text(&self) -> String {
        match self {
            CompareReport::Confirmed { through, e_infinity } => {
                let mut out = format!("Confirmed: E∞ agree in total degrees ≤ {through}\n");
                for e in e_infinity {
                    let _ = writeln!(out, "  E∞^{{{},{}}} = {}", e.p, e.q, group_text(&e.group));
                }
                out
            }
            CompareReport::HypothesisFailed { p, q } => {
                format!("HypothesisFailed: not an isomorphism (or not injective) at ({p}, {q}) on the starting page\n")
            }
            CompareReport::InductionBroken { r, p, q } => format!("InductionBroken: fails at ({p}, {q}) on page {r}\n"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcohRow {
    pub p: i64,
    pub group: GroupJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcohReport {
    pub module: GroupJson,
    pub rows: Vec<GcohRow>,
}

pub fn cmd_gcoh(module: &ModuleJson, degrees: &[i64]) -> Result<GcohReport, CliError> {
    let m = module.to_module()?;
    let rows = degrees
        .iter()
        .map(|&p| {
            let p32 = u32::try_from(p).map_err(|_| CliError::Input(format!("negative degree {p}")))?;
            let g = group_cohomology(&m, p32).map_err(|e| CliError::Input(e.to_string()))?;
            Ok(GcohRow { p, group: GroupJson::from_group(&g) })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(GcohReport { module: module.group.clone(), rows })
}

impl Report for GcohReport {
    fn render_text(&self) -> String {
        let mut out = format!("H^p(Z/2; M), M = {}\n", group_text(&self.module));
        for r in &self.rows {
            let _ = writeln!(out, "  p = {:<3} {}", r.p, group_text(&r.group));
        }
        out
    }
}
