use super::{Deployment, Point};
use crate::error::{Error, Result};

pub const DEFAULT_LEAF_CAPACITY: usize = 32;

#[derive(Clone, Debug)]
struct Node {
    lo: Point,
    hi: Point,
    kind: Kind,
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Leaf { start: u32, end: u32 },
    Split { left: u32, right: u32 },
}

/// Static 2-d tree over the nodes of a [`Deployment`].
///
/// Boxes are split at the median of alternating axes until they hold at most
/// `leaf_capacity` points. Every node keeps the tight bounding box of its
/// points, which is what radius queries prune on.
#[derive(Clone, Debug)]
pub struct SpatialIndex {
    points: Vec<Point>,
    // point ids in tree order and their coordinates, leaves are contiguous runs
    order: Vec<u32>,
    packed: Vec<Point>,
    nodes: Vec<Node>,
    leaf_capacity: usize,
}

impl SpatialIndex {
    pub fn build(deployment: &Deployment, leaf_capacity: usize) -> Result<Self> {
        Self::from_points(deployment.points().to_vec(), leaf_capacity)
    }

    pub fn from_points(points: Vec<Point>, leaf_capacity: usize) -> Result<Self> {
        if leaf_capacity == 0 {
            return Err(Error::invalid("leaf capacity must be at least 1"));
        }
        if points.len() > u32::MAX as usize {
            return Err(Error::invalid("too many points for a 32-bit index"));
        }
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        let mut nodes = Vec::with_capacity(2 * points.len() / leaf_capacity + 1);
        if !points.is_empty() {
            build(&points, &mut order, 0, 0, leaf_capacity, &mut nodes);
        }
        let packed = order.iter().map(|&i| points[i as usize]).collect();
        Ok(SpatialIndex {
            points,
            order,
            packed,
            nodes,
            leaf_capacity,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn leaf_capacity(&self) -> usize {
        self.leaf_capacity
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Point ids held by each leaf.
    pub fn leaves(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.nodes.iter().filter_map(move |n| match n.kind {
            Kind::Leaf { start, end } => Some(&self.order[start as usize..end as usize]),
            Kind::Split { .. } => None,
        })
    }

    /// All `j != center` with `|p_center - p_j| <= r`, in increasing order.
    pub fn radius_query(&self, center: usize, r: f64) -> Result<Vec<usize>> {
        if center >= self.points.len() {
            return Err(Error::invalid(format!(
                "point index {center} out of range (len {})",
                self.points.len()
            )));
        }
        if !(r >= 0.0) {
            return Err(Error::invalid(format!(
                "radius must be nonnegative, got {r}"
            )));
        }
        let mut out = Vec::new();
        self.for_each_within(self.points[center], r, |j| {
            if j != center {
                out.push(j);
            }
        });
        out.sort_unstable();
        Ok(out)
    }

    /// Calls `visit` for every point within `r` of `q` (including a point at
    /// `q` itself), in tree order.
    pub fn for_each_within<F: FnMut(usize)>(&self, q: Point, r: f64, mut visit: F) {
        if self.nodes.is_empty() {
            return;
        }
        let r2 = r * r;
        let mut stack: Vec<u32> = Vec::with_capacity(64);
        stack.push(0);
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if box_dist_sq(node, q) > r2 {
                continue;
            }
            match node.kind {
                Kind::Leaf { start, end } => {
                    let (s, e) = (start as usize, end as usize);
                    for (p, &i) in self.packed[s..e].iter().zip(&self.order[s..e]) {
                        if p.dist_sq(&q) <= r2 {
                            visit(i as usize);
                        }
                    }
                }
                Kind::Split { left, right } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
    }

    /// Early-exit variant of [`Self::for_each_within`]: stops as soon as
    /// `visit` returns `true` and reports whether it did.
    pub fn any_within<F: FnMut(usize) -> bool>(&self, q: Point, r: f64, mut visit: F) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let r2 = r * r;
        let mut stack: Vec<u32> = Vec::with_capacity(64);
        stack.push(0);
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if box_dist_sq(node, q) > r2 {
                continue;
            }
            match node.kind {
                Kind::Leaf { start, end } => {
                    let (s, e) = (start as usize, end as usize);
                    for (p, &i) in self.packed[s..e].iter().zip(&self.order[s..e]) {
                        if p.dist_sq(&q) <= r2 && visit(i as usize) {
                            return true;
                        }
                    }
                }
                Kind::Split { left, right } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        false
    }
}

#[inline]
fn box_dist_sq(node: &Node, q: Point) -> f64 {
    let dx = (node.lo.x - q.x).max(0.0).max(q.x - node.hi.x);
    let dy = (node.lo.y - q.y).max(0.0).max(q.y - node.hi.y);
    dx * dx + dy * dy
}

fn build(
    points: &[Point],
    order: &mut [u32],
    offset: usize,
    depth: usize,
    cap: usize,
    nodes: &mut Vec<Node>,
) -> u32 {
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for &i in order.iter() {
        let p = points[i as usize];
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    }
    let id = nodes.len() as u32;
    let len = order.len();
    nodes.push(Node {
        lo,
        hi,
        kind: Kind::Leaf {
            start: offset as u32,
            end: (offset + len) as u32,
        },
    });
    if len <= cap {
        return id;
    }
    let mid = len / 2;
    let key = |i: &u32| {
        let p = points[*i as usize];
        if depth.is_multiple_of(2) {
            p.x
        } else {
            p.y
        }
    };
    order.select_nth_unstable_by(mid, |a, b| key(a).total_cmp(&key(b)));
    let (left_ids, right_ids) = order.split_at_mut(mid);
    let left = build(points, left_ids, offset, depth + 1, cap, nodes);
    let right = build(points, right_ids, offset + mid, depth + 1, cap, nodes);
    nodes[id as usize].kind = Kind::Split { left, right };
    id
}
