//! Deployments in the unit disk and spatial indexing.

mod kdtree;

use std::f64::consts::TAU;
use std::io::{BufRead, Read, Write};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

pub use kdtree::{SpatialIndex, DEFAULT_LEAF_CAPACITY};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dist_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    #[inline]
    pub fn distance(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.x * self.x + self.y * self.y
    }
}

/// Euclidean distance.
#[inline]
pub fn distance(p: Point, q: Point) -> f64 {
    p.distance(&q)
}

/// Default opening angle of the sampling wedge.
pub const DEFAULT_WEDGE_ANGLE: f64 = TAU / 1024.0;

/// How points are placed in the unit disk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Sampler {
    /// Pick a random direction `θ`, then a uniform point of the thin triangle
    /// `O, (cos θ, sin θ), (cos(θ+ε), sin(θ+ε))`.
    Wedge { angle: f64 },
    /// Exact polar sampling, `ρ = √u`, `θ` uniform.
    Polar,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler::Wedge {
            angle: DEFAULT_WEDGE_ANGLE,
        }
    }
}

impl Sampler {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Sampler::Wedge { angle } if !(angle > 0.0 && angle <= std::f64::consts::PI / 8.0) => {
                Err(Error::invalid(format!(
                    "wedge angle must lie in (0, π/8], got {angle}"
                )))
            }
            _ => Ok(()),
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        loop {
            let p = match *self {
                Sampler::Wedge { angle } => {
                    let theta = rng.random::<f64>() * TAU;
                    let (mut u, mut v) = (rng.random::<f64>(), rng.random::<f64>());
                    if u + v > 1.0 {
                        u = 1.0 - u;
                        v = 1.0 - v;
                    }
                    let (sa, ca) = theta.sin_cos();
                    let (sb, cb) = (theta + angle).sin_cos();
                    Point::new(u * ca + v * cb, u * sa + v * sb)
                }
                Sampler::Polar => {
                    let rho = rng.random::<f64>().sqrt();
                    let (s, c) = (rng.random::<f64>() * TAU).sin_cos();
                    Point::new(rho * c, rho * s)
                }
            };
            // rounding can push a chord point a hair outside the circle
            if p.norm_sq() <= 1.0 {
                return p;
            }
        }
    }
}

/// `n` sensors uniform in the unit disk, preceded by a sensor at the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Deployment {
    points: Vec<Point>,
    seed: u64,
}

impl Deployment {
    /// Samples with the default wedge method.
    pub fn sample_uniform_disk(n: usize, seed: u64, wedge_angle: f64) -> Result<Self> {
        Self::sample(n, seed, Sampler::Wedge { angle: wedge_angle })
    }

    pub fn sample(n: usize, seed: u64, sampler: Sampler) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("deployment needs at least one sensor"));
        }
        sampler.validate()?;
        let mut rng = rng::stream(seed, rng::STREAM_POINTS);
        let mut points = Vec::with_capacity(n + 1);
        points.push(Point::ORIGIN);
        points.extend((0..n).map(|_| sampler.draw(&mut rng)));
        Ok(Deployment { points, seed })
    }

    /// Wraps explicit coordinates; `points[0]` must be the origin.
    pub fn from_points(points: Vec<Point>, seed: u64) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("deployment needs the origin and one sensor"));
        }
        if points[0] != Point::ORIGIN {
            return Err(Error::invalid("points[0] must be the origin"));
        }
        if let Some((i, p)) = points
            .iter()
            .enumerate()
            .find(|(_, p)| !(p.norm_sq() <= 1.0))
        {
            return Err(Error::invalid(format!(
                "point {i} = {p:?} is outside the unit disk"
            )));
        }
        Ok(Deployment { points, seed })
    }

    /// Number of sensors excluding the origin.
    pub fn n(&self) -> usize {
        self.points.len() - 1
    }

    /// Number of nodes including the origin.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    /// Index of the node closest to `target` (lowest index on ties).
    pub fn nearest_to(&self, target: Point) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, p) in self.points.iter().enumerate() {
            let d = p.dist_sq(&target);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    /// CSV with header `index,x,y`, coordinates in 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,x,y")?;
        for (i, p) in self.points.iter().enumerate() {
            writeln!(w, "{i},{:.16e},{:.16e}", p.x, p.y)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, seed: u64) -> Result<Self> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "index,x,y" => {}
            _ => return Err(Error::Parse("expected header `index,x,y`".into())),
        }
        let mut points = Vec::new();
        for (row, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {row}: {e}")))
            };
            if fields.len() != 3 || fields[0].parse::<usize>().ok() != Some(row) {
                return Err(Error::Parse(format!("row {row}: malformed `{line}`")));
            }
            points.push(Point::new(parse(fields[1])?, parse(fields[2])?));
        }
        Self::from_points(points, seed)
    }

    const MAGIC: &'static [u8; 4] = b"DCWD";

    /// Little-endian binary form: magic, version, n, seed, then `(x, y)` pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 16 * self.points.len());
        out.extend_from_slice(Self::MAGIC);
        out.extend_from_slice(&1u32.to_le_bytes());
        out.extend_from_slice(&(self.n() as u64).to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        for p in &self.points {
            out.extend_from_slice(&p.x.to_le_bytes());
            out.extend_from_slice(&p.y.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(mut bytes: &[u8]) -> Result<Self> {
        let mut header = [0u8; 24];
        bytes
            .read_exact(&mut header)
            .map_err(|_| Error::Parse("truncated deployment header".into()))?;
        if &header[..4] != Self::MAGIC || header[4..8] != 1u32.to_le_bytes() {
            return Err(Error::Parse("not a deployment file".into()));
        }
        let n = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
        let seed = u64::from_le_bytes(header[16..24].try_into().unwrap());
        if bytes.len() != 16 * (n + 1) {
            return Err(Error::Parse(format!(
                "expected {} coordinate bytes, found {}",
                16 * (n + 1),
                bytes.len()
            )));
        }
        let points = bytes
            .chunks_exact(16)
            .map(|c| {
                Point::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        Self::from_points(points, seed)
    }
}
