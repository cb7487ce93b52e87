//! Duty-cycled communication graphs and their connected components.
//!
//! An edge joins `u` and `v` when `|u - v| <= r` and the marks of the two
//! nodes satisfy the connection predicate (shared awake slot for schedules).
//! Marks are drawn once per node, so all pairs touching a node see the same
//! mark.

mod isolated;
mod unionfind;

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Deployment, SpatialIndex};
use crate::schedules::{Schedule, VbModel};

pub use isolated::{count_isolated, isolated_node_trial, IsolatedOptions, IsolatedTrials};
pub use unionfind::UnionFind;

/// Where the connection predicate came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectionSource {
    Schedules,
    VbModel(String),
}

/// Symmetric adjacency in compressed sparse rows.
#[derive(Clone, Debug)]
pub struct DCGraph {
    r: f64,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    source: ConnectionSource,
}

impl DCGraph {
    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn source(&self) -> &ConnectionSource {
        &self.source
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Undirected edge count.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Sorted neighbours of `u`.
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// CSV edge list with header `u,v`.
    pub fn write_edge_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "u,v")?;
        for (u, v) in self.edges() {
            writeln!(w, "{u},{v}")?;
        }
        Ok(())
    }
}

fn validate(deployment: &Deployment, idx: &SpatialIndex, r: f64, marks: usize) -> Result<()> {
    if idx.len() != deployment.len() {
        return Err(Error::invalid(format!(
            "index covers {} points, deployment has {}",
            idx.len(),
            deployment.len()
        )));
    }
    if !(r >= 0.0) {
        return Err(Error::invalid(format!(
            "radius must be nonnegative, got {r}"
        )));
    }
    if marks != deployment.len() {
        return Err(Error::invalid(format!(
            "need one mark per node: {} marks for {} nodes",
            marks,
            deployment.len()
        )));
    }
    Ok(())
}

/// Graph over `idx`'s points with edges `|u - v| <= r && connects(mark_u, mark_v)`.
pub fn build_graph<T, F>(
    idx: &SpatialIndex,
    r: f64,
    marks: &[T],
    connects: F,
    source: ConnectionSource,
) -> DCGraph
where
    T: Sync,
    F: Fn(&T, &T) -> bool + Sync,
{
    let rows: Vec<Vec<u32>> = (0..idx.len())
        .into_par_iter()
        .map(|u| {
            let mut row = Vec::new();
            idx.for_each_within(idx.point(u), r, |v| {
                if v != u && connects(&marks[u], &marks[v]) {
                    row.push(v as u32);
                }
            });
            row.sort_unstable();
            row
        })
        .collect();
    let mut offsets = Vec::with_capacity(rows.len() + 1);
    offsets.push(0);
    for row in &rows {
        offsets.push(offsets.last().unwrap() + row.len());
    }
    let targets = rows.concat();
    DCGraph {
        r,
        offsets,
        targets,
        source,
    }
}

/// Graph induced by per-node schedules: in range and sharing an awake slot.
pub fn build_dc_graph(
    deployment: &Deployment,
    schedules: &[Schedule],
    r: f64,
    idx: &SpatialIndex,
) -> Result<DCGraph> {
    validate(deployment, idx, r, schedules.len())?;
    if let Some(s) = schedules.iter().find(|s| s.slots() != schedules[0].slots()) {
        return Err(Error::invalid(format!(
            "schedules disagree on L: {} vs {}",
            s.slots(),
            schedules[0].slots()
        )));
    }
    Ok(build_graph(
        idx,
        r,
        schedules,
        Schedule::overlaps_unchecked,
        ConnectionSource::Schedules,
    ))
}

/// Draws one mark per node from `model` and builds the induced graph.
pub fn build_vb_graph<M: VbModel, R: Rng + ?Sized>(
    deployment: &Deployment,
    model: &M,
    r: f64,
    idx: &SpatialIndex,
    rng: &mut R,
) -> Result<(DCGraph, Vec<M::Mark>)> {
    let marks: Vec<M::Mark> = (0..deployment.len())
        .map(|_| model.sample_mark(rng))
        .collect();
    validate(deployment, idx, r, marks.len())?;
    let g = build_graph(
        idx,
        r,
        &marks,
        |a, b| model.connects(a, b),
        ConnectionSource::VbModel(model.name()),
    );
    Ok((g, marks))
}

/// Summary of a component decomposition over `n + 1` nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentStats {
    pub node_count: usize,
    pub component_count: usize,
    pub largest_size: usize,
    pub largest_fraction: f64,
    pub second_largest_size: usize,
    pub isolated_count: usize,
    pub origin_component_size: usize,
}

impl ComponentStats {
    pub fn from_union_find(uf: &mut UnionFind) -> Self {
        let sizes = uf.sizes_desc();
        let node_count = uf.len();
        let largest_size = sizes.first().copied().unwrap_or(0);
        ComponentStats {
            node_count,
            component_count: sizes.len(),
            largest_size,
            largest_fraction: largest_size as f64 / node_count as f64,
            second_largest_size: sizes.get(1).copied().unwrap_or(0),
            isolated_count: sizes.iter().filter(|&&s| s == 1).count(),
            origin_component_size: if node_count > 0 { uf.set_size(0) } else { 0 },
        }
    }

    pub const CSV_HEADER: &'static str =
        "nodes,components,largest,largest_fraction,second_largest,isolated,origin_component";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.node_count,
            self.component_count,
            self.largest_size,
            self.largest_fraction,
            self.second_largest_size,
            self.isolated_count,
            self.origin_component_size
        )
    }
}

fn union_find_of(g: &DCGraph) -> UnionFind {
    let mut uf = UnionFind::new(g.node_count());
    for (u, v) in g.edges() {
        uf.union(u, v);
    }
    uf
}

/// Component statistics of a stored graph.
pub fn components(g: &DCGraph) -> ComponentStats {
    ComponentStats::from_union_find(&mut union_find_of(g))
}

/// Component label of every node: the smallest node index in its component.
pub fn component_labels(g: &DCGraph) -> Vec<usize> {
    union_find_of(g).labels()
}

const STREAM_BLOCK: usize = 1 << 14;

/// Union-find over the implicit graph without storing adjacency.
///
/// Nodes are processed in fixed blocks: edges of a block are gathered in
/// parallel, then merged in node order, so the result does not depend on
/// thread scheduling.
pub fn stream_union_find<T, F>(idx: &SpatialIndex, r: f64, marks: &[T], connects: F) -> UnionFind
where
    T: Sync,
    F: Fn(&T, &T) -> bool + Sync,
{
    let n = idx.len();
    let mut uf = UnionFind::new(n);
    for start in (0..n).step_by(STREAM_BLOCK) {
        let end = (start + STREAM_BLOCK).min(n);
        let edges: Vec<Vec<u32>> = (start..end)
            .into_par_iter()
            .map(|u| {
                let mut out = Vec::new();
                idx.for_each_within(idx.point(u), r, |v| {
                    if v > u && connects(&marks[u], &marks[v]) {
                        out.push(v as u32);
                    }
                });
                out
            })
            .collect();
        for (u, vs) in (start..end).zip(edges) {
            for v in vs {
                uf.union(u, v as usize);
            }
        }
    }
    uf
}

/// [`ComponentStats`] of the schedule graph, computed by streaming.
pub fn stream_components(
    idx: &SpatialIndex,
    r: f64,
    schedules: &[Schedule],
) -> Result<ComponentStats> {
    if schedules.len() != idx.len() {
        return Err(Error::invalid("need one schedule per node"));
    }
    let mut uf = stream_union_find(idx, r, schedules, Schedule::overlaps_unchecked);
    Ok(ComponentStats::from_union_find(&mut uf))
}

/// Plain random geometric graph components (every in-range pair connects).
pub fn stream_rgg_components(idx: &SpatialIndex, r: f64) -> ComponentStats {
    let marks = vec![(); idx.len()];
    let mut uf = stream_union_find(idx, r, &marks, |_, _| true);
    ComponentStats::from_union_find(&mut uf)
}
