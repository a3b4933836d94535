//! JSON input schemas. Every ring element is a string: decimal integers for
//! `Z`, expressions such as `3*x^2 + x + 4` for `GF(p)[x]`. Unknown fields are
//! rejected.

use serde::{Deserialize, Serialize};

use crate::dirsys::{DirectSystem, Presentation, SystemTail};
use crate::error::{Error, Result};
use crate::linalg::{EuclideanDomain, Mat};
use crate::module::{FPModule, ModuleMap};
use crate::tower::{Tail, Tower};

/// Caps applied while decoding, before any computation starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub max_dim: usize,
    pub max_depth: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_dim: 64, max_depth: 256 }
    }
}

impl Caps {
    pub fn check_dim(&self, what: &str, n: usize) -> Result<()> {
        if n > self.max_dim {
            return Err(Error::ResourceCap(format!("{what} = {n} exceeds max dimension {}", self.max_dim)));
        }
        Ok(())
    }

    pub fn check_depth(&self, n: usize) -> Result<()> {
        if n > self.max_depth {
            return Err(Error::ResourceCap(format!("depth {n} exceeds max depth {}", self.max_depth)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub entries: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub gens: usize,
    /// `gens × k`; each column is a relation.
    pub relations: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum TowerTailJson {
    Truncated,
    Periodic { module: ModuleJson, map: MatrixJson, attach: Option<MatrixJson> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerJson {
    pub prefix: Vec<ModuleJson>,
    /// `maps[n-1]: H_{n+1} → H_n`.
    pub maps: Vec<MatrixJson>,
    pub tail: TowerTailJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum SystemTailJson {
    Truncated,
    Periodic { rank: usize, map: MatrixJson, attach: Option<MatrixJson> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub ranks: Vec<usize>,
    /// `maps[n-1]: F_n → F_{n+1}`, an `r_{n+1} × r_n` matrix.
    pub maps: Vec<MatrixJson>,
    pub tail: SystemTailJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationJson {
    pub gens: usize,
    pub relations: MatrixJson,
}

/// The union of every verb's input; each verb states which fields it needs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<ModuleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ModuleJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<TowerJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationJson>,
}

/// Parses an input document; syntax errors carry line and column.
pub fn parse_input(text: &str) -> Result<InputJson> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T> {
    field.as_ref().ok_or_else(|| Error::InvalidInput(format!("missing field {name:?}")))
}

pub fn decode_matrix<R: EuclideanDomain>(ring: &R, m: &MatrixJson, caps: &Caps) -> Result<Mat<R::Elem>> {
    caps.check_dim("rows", m.rows)?;
    caps.check_dim("cols", m.cols)?;
    if m.entries.len() != m.rows {
        return Err(Error::DimensionMismatch(format!("{} rows listed, {} declared", m.entries.len(), m.rows)));
    }
    let rows = m
        .entries
        .iter()
        .map(|row| {
            if row.len() != m.cols {
                return Err(Error::DimensionMismatch(format!("row of length {}, {} columns declared", row.len(), m.cols)));
            }
            row.iter().map(|s| ring.parse_elem(s)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(rows, m.cols)
}

pub fn encode_matrix<R: EuclideanDomain>(m: &Mat<R::Elem>) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect()).collect(),
    }
}

pub fn decode_module<R: EuclideanDomain>(ring: &R, m: &ModuleJson, caps: &Caps) -> Result<FPModule<R>> {
    caps.check_dim("gens", m.gens)?;
    FPModule::with_relations(ring, m.gens, decode_matrix(ring, &m.relations, caps)?)
}

pub fn encode_module<R: EuclideanDomain>(m: &FPModule<R>) -> ModuleJson {
    ModuleJson { gens: m.gens(), relations: encode_matrix::<R>(m.relations()) }
}

fn decode_map<R: EuclideanDomain>(ring: &R, source: &FPModule<R>, target: &FPModule<R>, m: &MatrixJson, caps: &Caps) -> Result<ModuleMap<R>> {
    ModuleMap::new(source, target, decode_matrix(ring, m, caps)?)
}

pub fn decode_tower<R: EuclideanDomain>(ring: &R, t: &TowerJson, caps: &Caps) -> Result<Tower<R>> {
    caps.check_depth(t.prefix.len())?;
    let prefix = t.prefix.iter().map(|m| decode_module(ring, m, caps)).collect::<Result<Vec<_>>>()?;
    if t.maps.len() != prefix.len().saturating_sub(1) {
        return Err(Error::DimensionMismatch(format!("{} prefix modules need {} maps", prefix.len(), prefix.len().saturating_sub(1))));
    }
    let maps = t
        .maps
        .iter()
        .enumerate()
        .map(|(n, m)| decode_map(ring, &prefix[n + 1], &prefix[n], m, caps))
        .collect::<Result<Vec<_>>>()?;
    let tail = match &t.tail {
        TowerTailJson::Truncated => Tail::Truncated,
        TowerTailJson::Periodic { module, map, attach } => {
            let h = decode_module(ring, module, caps)?;
            let map = decode_map(ring, &h, &h, map, caps)?;
            let attach = match (attach, prefix.last()) {
                (Some(a), Some(last)) => Some(decode_map(ring, &h, last, a, caps)?),
                (None, None) => None,
                _ => return Err(Error::InvalidInput("attach is required exactly when the prefix is nonempty".into())),
            };
            Tail::Periodic { module: h, map, attach }
        }
    };
    Tower::new(prefix, maps, tail)
}

pub fn encode_tower<R: EuclideanDomain>(t: &Tower<R>) -> TowerJson {
    let tail = match t.tail() {
        Tail::Truncated => TowerTailJson::Truncated,
        Tail::Periodic { module, map, attach } => TowerTailJson::Periodic {
            module: encode_module(module),
            map: encode_matrix::<R>(map.matrix()),
            attach: attach.as_ref().map(|a| encode_matrix::<R>(a.matrix())),
        },
    };
    TowerJson {
        prefix: t.prefix().iter().map(encode_module).collect(),
        maps: t.maps().iter().map(|f| encode_matrix::<R>(f.matrix())).collect(),
        tail,
    }
}

pub fn decode_system<R: EuclideanDomain>(ring: &R, s: &SystemJson, caps: &Caps) -> Result<DirectSystem<R>> {
    caps.check_depth(s.ranks.len())?;
    for &r in &s.ranks {
        caps.check_dim("rank", r)?;
    }
    let maps = s.maps.iter().map(|m| decode_matrix(ring, m, caps)).collect::<Result<Vec<_>>>()?;
    let tail = match &s.tail {
        SystemTailJson::Truncated => SystemTail::Truncated,
        SystemTailJson::Periodic { rank, map, attach } => {
            caps.check_dim("rank", *rank)?;
            SystemTail::Periodic {
                rank: *rank,
                map: decode_matrix(ring, map, caps)?,
                attach: attach.as_ref().map(|a| decode_matrix(ring, a, caps)).transpose()?,
            }
        }
    };
    DirectSystem::new(ring, s.ranks.clone(), maps, tail)
}

pub fn encode_system<R: EuclideanDomain>(d: &DirectSystem<R>) -> SystemJson {
    let tail = match d.tail() {
        SystemTail::Truncated => SystemTailJson::Truncated,
        SystemTail::Periodic { rank, map, attach } => SystemTailJson::Periodic {
            rank: *rank,
            map: encode_matrix::<R>(map),
            attach: attach.as_ref().map(encode_matrix::<R>),
        },
    };
    SystemJson { ranks: d.ranks().to_vec(), maps: d.maps().iter().map(encode_matrix::<R>).collect(), tail }
}

pub fn decode_presentation<R: EuclideanDomain>(ring: &R, p: &PresentationJson, caps: &Caps) -> Result<Presentation<R>> {
    caps.check_dim("gens", p.gens)?;
    Presentation::new(ring, p.gens, decode_matrix(ring, &p.relations, caps)?)
}

/// Comma-separated ring elements, as used for sample flags.
pub fn parse_elements<R: EuclideanDomain>(ring: &R, list: &str) -> Result<Vec<R::Elem>> {
    list.split(',').map(|s| ring.parse_elem(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{GfPoly, Integers};
    use proptest::prelude::*;

    #[test]
    fn round_trips() {
        let r = Integers;
        let text = r#"{"ring":"Z","system":{"ranks":[1],"maps":[],"tail":{"kind":"periodic","rank":1,"map":{"rows":1,"cols":1,"entries":[["2"]]},"attach":{"rows":1,"cols":1,"entries":[["1"]]}}}}"#;
        let input = parse_input(text).unwrap();
        let d = decode_system(&r, input.system.as_ref().unwrap(), &Caps::default()).unwrap();
        assert_eq!(&encode_system(&d), input.system.as_ref().unwrap());
        let m = ModuleJson { gens: 2, relations: MatrixJson { rows: 2, cols: 1, entries: vec![vec!["4".into()], vec!["-6".into()]] } };
        assert_eq!(encode_module(&decode_module(&r, &m, &Caps::default()).unwrap()), m);
        let g = GfPoly::new(3).unwrap();
        let mj = MatrixJson { rows: 1, cols: 2, entries: vec![vec!["x^2 + 2".into(), "2*x".into()]] };
        assert_eq!(encode_matrix::<GfPoly>(&decode_matrix(&g, &mj, &Caps::default()).unwrap()), mj);
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_input(r#"{"ring":"Z","extra":1}"#), Err(Error::Parse(_))));
        let err = parse_input("{\n  \"ring\": 3\n}").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let big = MatrixJson { rows: 100, cols: 1, entries: vec![vec!["1".into()]; 100] };
        assert!(matches!(decode_matrix(&Integers, &big, &Caps::default()), Err(Error::ResourceCap(_))));
        let ragged = MatrixJson { rows: 2, cols: 2, entries: vec![vec!["1".into(), "2".into()], vec!["3".into()]] };
        assert!(matches!(decode_matrix(&Integers, &ragged, &Caps::default()), Err(Error::DimensionMismatch(_))));
        let bad = MatrixJson { rows: 1, cols: 1, entries: vec![vec!["1.5".into()]] };
        assert!(matches!(decode_matrix(&Integers, &bad, &Caps::default()), Err(Error::Parse(_))));
    }

    proptest! {
        #[test]
        fn decoders_never_panic(text in ".{0,200}") {
            if let Ok(input) = parse_input(&text) {
                let caps = Caps { max_dim: 6, max_depth: 6 };
                if let Some(s) = &input.system { let _ = decode_system(&Integers, s, &caps); }
                if let Some(t) = &input.tower { let _ = decode_tower(&Integers, t, &caps); }
            }
        }

        #[test]
        fn structured_inputs_never_panic(rows in 0usize..4, cols in 0usize..4, cells in proptest::collection::vec("-?[0-9]{1,3}|x|[a-z]+|", 0..20), kind in 0u8..3) {
            let mut it = cells.into_iter();
            let entries: Vec<Vec<String>> = (0..rows).map(|_| (0..cols).map(|_| it.next().unwrap_or_default()).collect()).collect();
            let m = MatrixJson { rows, cols, entries };
            let caps = Caps::default();
            let _ = decode_matrix(&Integers, &m, &caps);
            let _ = decode_matrix(&GfPoly::new(5).unwrap(), &m, &caps);
            let module = ModuleJson { gens: rows + kind as usize % 2, relations: m.clone() };
            let _ = decode_module(&Integers, &module, &caps);
            let sys = SystemJson { ranks: vec![cols, rows], maps: vec![m.clone()], tail: SystemTailJson::Periodic { rank: rows, map: m.clone(), attach: Some(m.clone()) } };
            let _ = decode_system(&Integers, &sys, &caps);
            let tower = TowerJson { prefix: vec![module.clone(), module.clone()], maps: vec![m.clone()], tail: TowerTailJson::Truncated };
            let _ = decode_tower(&Integers, &tower, &caps);
            let _ = decode_presentation(&Integers, &PresentationJson { gens: rows, relations: m }, &caps);
        }
    }
}
