use std::io::Write;

use super::config::SchemeChoice;
use crate::error::Result;
use crate::radii::{awake_from_delta, optimal_radius, rgg_radius, weak_radius, CnPreset};

/// Published ratios, as `(δ, [L=200 DC-C, L=200 DC-R, L=100 DC-C, L=100 DC-R])`.
const WEAK_OVER_OPTIMAL: [(f64, [f64; 4]); 6] = [
    (0.02, [1.322, 1.970, 1.224, 1.407]),
    (0.05, [1.378, 2.832, 1.341, 2.127]),
    (0.10, [1.396, 2.963, 1.378, 2.552]),
    (0.15, [1.402, 2.572, 1.390, 2.466]),
    (0.20, [1.405, 2.236, 1.396, 2.249]),
    (0.50, [1.410, 1.414, 1.407, 1.414]),
];

const OPTIMAL_OVER_RGG: [(f64, [f64; 4]); 6] = [
    (0.02, [5.345, 3.589, 5.773, 5.025]),
    (0.05, [3.244, 1.578, 3.333, 2.102]),
    (0.10, [2.264, 1.067, 2.294, 1.239]),
    (0.15, [1.841, 1.003, 1.857, 1.046]),
    (0.20, [1.591, 1.000, 1.601, 1.005]),
    (0.50, [1.002, 1.000, 1.005, 1.005]),
];

const COLUMNS: [(usize, SchemeChoice); 4] = [
    (200, SchemeChoice::Contiguous),
    (200, SchemeChoice::RandomSelection),
    (100, SchemeChoice::Contiguous),
    (100, SchemeChoice::RandomSelection),
];

/// Radius ratios do not depend on `n`; any admissible size works.
const TABLE_N: f64 = 1e6;

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    /// 1: weak over optimal radius; 2: optimal over RGG radius.
    pub table: u8,
    pub delta: f64,
    pub slots: usize,
    pub scheme: SchemeChoice,
    pub computed: f64,
    pub published: f64,
}

impl TableEntry {
    pub fn diff(&self) -> f64 {
        self.computed - self.published
    }
}

/// Both radius-ratio tables, every entry next to its published value.
pub fn reproduce_tables() -> Result<Vec<TableEntry>> {
    let cn = CnPreset::LogLog;
    let rgg = rgg_radius(TABLE_N, cn)?;
    let mut out = Vec::with_capacity(48);
    for (table, published) in [(1u8, &WEAK_OVER_OPTIMAL), (2u8, &OPTIMAL_OVER_RGG)] {
        for &(delta, row) in published.iter() {
            for (&(slots, scheme), &value) in COLUMNS.iter().zip(&row) {
                let awake = awake_from_delta(delta, slots)?;
                let optimal = optimal_radius(TABLE_N, scheme.gamma(slots, awake)?, cn)?;
                let computed = match table {
                    1 => weak_radius(TABLE_N, awake as f64 / slots as f64, cn)? / optimal,
                    _ => optimal / rgg,
                };
                out.push(TableEntry {
                    table,
                    delta,
                    slots,
                    scheme,
                    computed,
                    published: value,
                });
            }
        }
    }
    Ok(out)
}

/// CSV with header `table,delta,L,scheme,computed,published,diff`.
pub fn write_tables<W: Write>(w: W, entries: &[TableEntry]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "table",
        "delta",
        "L",
        "scheme",
        "computed",
        "published",
        "diff",
    ])?;
    for e in entries {
        out.write_record([
            e.table.to_string(),
            e.delta.to_string(),
            e.slots.to_string(),
            e.scheme.label().to_string(),
            format!("{:.4}", e.computed),
            format!("{:.3}", e.published),
            format!("{:+.4}", e.diff()),
        ])?;
    }
    out.flush().map_err(|e| crate::Error::Csv(e.into()))?;
    Ok(())
}
