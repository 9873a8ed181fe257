//! CSV lattice dumps with columns `field,n,a,re,im`.
//!
//! Values are written with 17 significant digits, which is enough for
//! `load(dump(x)) == x` bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use li_core::lattice::{Grid, SpaceBc};
use li_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    field: String,
    n: usize,
    a: usize,
    re: String,
    im: String,
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes named grids to `path`, one row per site and field.
pub fn dump_lattice(path: &Path, fields: &[(&str, &Grid)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for (name, grid) in fields {
        for a in 0..grid.time_len() {
            for n in 0..grid.space_len() {
                let v = grid.at(n, a);
                w.serialize(Row { field: name.to_string(), n, a, re: fmt17(v.re), im: fmt17(v.im) })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a dump back; every field must cover a full rectangle.
pub fn load_lattice(path: &Path, bc: SpaceBc) -> Result<BTreeMap<String, Grid>> {
    let mut r = csv::Reader::from_reader(std::fs::File::open(path)?);
    let mut raw: BTreeMap<String, BTreeMap<(usize, usize), C64>> = BTreeMap::new();
    for row in r.deserialize() {
        let row: Row = row?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| CliError::Format(format!("bad number {s:?}: {e}")));
        let v = C64::new(parse(&row.re)?, parse(&row.im)?);
        if raw.entry(row.field.clone()).or_default().insert((row.n, row.a), v).is_some() {
            return Err(CliError::Format(format!("duplicate site ({}, {}) in field {}", row.n, row.a, row.field)));
        }
    }
    if raw.is_empty() {
        return Err(CliError::Format(format!("{} contains no lattice rows", path.display())));
    }
    let mut out = BTreeMap::new();
    for (name, sites) in raw {
        let n = sites.keys().map(|k| k.0).max().unwrap_or(0) + 1;
        let m = sites.keys().map(|k| k.1).max().unwrap_or(0) + 1;
        if sites.len() != n * m {
            return Err(CliError::Format(format!("field {name} does not cover a full {n}×{m} grid")));
        }
        out.insert(name, Grid::from_fn(n, m, bc, |s, a| sites[&(s, a)]));
    }
    Ok(out)
}

/// Fetches a field from a loaded dump.
pub fn field<'a>(fields: &'a BTreeMap<String, Grid>, name: &str) -> Result<&'a Grid> {
    fields.get(name).ok_or_else(|| CliError::Format(format!("missing field {name}")))
}
