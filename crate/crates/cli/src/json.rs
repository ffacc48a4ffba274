//! JSON encodings of groups, tables, pages, complexes and modules.

use std::collections::BTreeMap;

use kr_core::gmod::InvolutiveModule;
use kr_core::krtables::{GradedGroupTable, GradedPieces};
use kr_core::realcx::RealComplex;
use kr_core::specseq::{KRPieces, Page, Window};
use kr_core::znf::{FGAbelianGroup, GroupMap, Int, IntegerMatrix, Presentation};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `Z^rank ⊕ ⊕ Z/d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

impl GroupJson {
    pub fn from_group(g: &FGAbelianGroup) -> Self {
        GroupJson {
            rank: g.free_rank(),
            torsion: g.torsion().iter().map(|d| u64::try_from(d).expect("torsion fits in u64")).collect(),
        }
    }

    pub fn to_group(&self) -> Result<FGAbelianGroup, CliError> {
        let torsion = self.torsion.iter().map(|&d| Int::from(d)).collect();
        FGAbelianGroup::new(self.rank, torsion).map_err(|e| CliError::Input(format!("bad group: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub period: Option<u32>,
    pub values: BTreeMap<i64, GroupJson>,
}

impl TableJson {
    pub fn from_table(t: &GradedGroupTable) -> Self {
        TableJson { period: t.period(), values: t.entries().map(|(n, g)| (n, GroupJson::from_group(g))).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecesJson {
    pub sub: GroupJson,
    pub quot: GroupJson,
    pub order: Option<String>,
}

impl PiecesJson {
    pub fn from_pieces(p: &GradedPieces) -> Self {
        PiecesJson {
            sub: GroupJson::from_group(&p.sub),
            quot: GroupJson::from_group(&p.quot),
            order: p.order().map(|o| o.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredPieceJson {
    pub p: i64,
    pub group: GroupJson,
}

/// `KR^n` from a collapsed spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRDegreeJson {
    pub degree: i64,
    pub pieces: Vec<FilteredPieceJson>,
    pub group: Option<GroupJson>,
}

impl KRDegreeJson {
    pub fn from_pieces(k: &KRPieces) -> Self {
        KRDegreeJson {
            degree: k.degree,
            pieces: k
                .pieces
                .iter()
                .map(|(p, g)| FilteredPieceJson { p: *p, group: GroupJson::from_group(g) })
                .collect(),
            group: k.group.as_ref().map(GroupJson::from_group),
        }
    }
}

pub fn matrix_to_json(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| i64::try_from(x).expect("entry fits in i64")).collect()).collect()
}

/// Rows of a `rows × cols` matrix; an empty list is read as `rows × cols` zeros.
pub fn matrix_from_json(rows: usize, cols: usize, m: &[Vec<i64>]) -> Result<IntegerMatrix, CliError> {
    if m.is_empty() && (rows == 0 || cols == 0) {
        return Ok(IntegerMatrix::zeros(rows, cols));
    }
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::Input(format!("expected a {rows}×{cols} matrix")));
    }
    Ok(IntegerMatrix::from_rows(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowJson {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl From<Window> for WindowJson {
    fn from(w: Window) -> Self {
        WindowJson { p_min: w.p_min, p_max: w.p_max, q_min: w.q_min, q_max: w.q_max }
    }
}

impl From<WindowJson> for Window {
    fn from(w: WindowJson) -> Self {
        Window { p_min: w.p_min, p_max: w.p_max, q_min: w.q_min, q_max: w.q_max }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub p: i64,
    pub q: i64,
    pub group: GroupJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpotMatrixJson {
    pub p: i64,
    pub q: i64,
    pub matrix: Vec<Vec<i64>>,
}

/// Entries are given by their groups; matrices act on the canonical generators
/// (free summands first, then cyclic summands in order).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageJson {
    pub r: u32,
    pub window: WindowJson,
    pub entries: Vec<EntryJson>,
    #[serde(default)]
    pub differentials: Vec<SpotMatrixJson>,
}

/// Re-expresses a map between arbitrary presentations on canonical generators.
pub fn canonical_map(f: &GroupMap) -> IntegerMatrix {
    let back = f.source().canonical_isomorphisms().1;
    let to = f.target().canonical_isomorphisms().0;
    back.then(f).and_then(|g| g.then(&to)).expect("maps compose").matrix().clone()
}

impl PageJson {
    pub fn from_page(page: &Page) -> Self {
        let entries =
            page.entries().map(|((p, q), e)| EntryJson { p, q, group: GroupJson::from_group(&e.group()) }).collect();
        let differentials = page
            .nonzero_differentials()
            .map(|((p, q), d)| SpotMatrixJson { p, q, matrix: matrix_to_json(&canonical_map(d)) })
            .collect();
        PageJson { r: page.r(), window: page.window().into(), entries, differentials }
    }

    pub fn to_page(&self) -> Result<Page, CliError> {
        let mut entries = BTreeMap::new();
        for e in &self.entries {
            let g = e.group.to_group()?;
            if !g.is_trivial() {
                entries.insert((e.p, e.q), Presentation::canonical(&g));
            }
        }
        let r = self.r as i64;
        let mut diffs = BTreeMap::new();
        for d in &self.differentials {
            let src = entries.get(&(d.p, d.q)).cloned().unwrap_or_else(Presentation::zero);
            let tgt = entries.get(&(d.p + r, d.q - r + 1)).cloned().unwrap_or_else(Presentation::zero);
            let m = matrix_from_json(tgt.generators(), src.generators(), &d.matrix)?;
            let f = GroupMap::new(src, tgt, m)
                .map_err(|e| CliError::Input(format!("differential at ({}, {}): {e}", d.p, d.q)))?;
            diffs.insert((d.p, d.q), f);
        }
        Page::new(self.r, self.window.into(), entries, diffs).map_err(|e| CliError::Input(format!("bad page: {e}")))
    }
}

/// Vertices `0..vertices`, maximal simplices and the vertex involution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub vertices: usize,
    pub simplices: Vec<Vec<usize>>,
    pub tau: Vec<usize>,
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<RealComplex, CliError> {
        RealComplex::new(self.vertices, self.simplices.clone(), self.tau.clone())
            .map_err(|e| CliError::Input(format!("bad complex: {e}")))
    }
}

/// An abelian group with an involution given on its canonical generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub group: GroupJson,
    pub sigma: Vec<Vec<i64>>,
}

impl ModuleJson {
    pub fn to_module(&self) -> Result<InvolutiveModule, CliError> {
        let p = Presentation::canonical(&self.group.to_group()?);
        let n = p.generators();
        let sigma = matrix_from_json(n, n, &self.sigma)?;
        InvolutiveModule::new(p, sigma).map_err(|e| CliError::Input(format!("bad module: {e}")))
    }
}
