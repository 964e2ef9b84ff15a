//! Poisson point process realizations on a square window centred at the
//! origin, nearest-BS (Voronoi) association and typical-cell selection.

use std::f64::consts::PI;
use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Samples a homogeneous PPP of `intensity` points per km² on the square
/// of side `side` km centred at the origin.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, side: f64, rng: &mut R) -> Vec<Point> {
    let mean = intensity * side * side;
    if !(mean > 0.0) {
        return Vec::new();
    }
    let count = Poisson::new(mean)
        .expect("finite positive Poisson mean")
        .sample(rng) as usize;
    let half = 0.5 * side;
    (0..count)
        .map(|_| {
            let x = rng.random::<f64>() * side - half;
            let y = rng.random::<f64>() * side - half;
            Point { x, y }
        })
        .collect()
}

/// Uniform bucket grid for nearest-point queries. Results are identical
/// to an exhaustive scan, including the lowest-index tie-break.
pub struct NearestIndex<'a> {
    points: &'a [Point],
    min: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl<'a> NearestIndex<'a> {
    pub fn new(points: &'a [Point]) -> Self {
        let (mut min, mut max) = (
            Point::new(f64::INFINITY, f64::INFINITY),
            Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        );
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        if points.is_empty() {
            min = Point::ORIGIN;
            max = Point::ORIGIN;
        }
        let (w, h) = (max.x - min.x, max.y - min.y);
        // about two points per bucket
        let area = (w * h).max(w.max(h).powi(2) / points.len().max(1) as f64);
        let mut cell = (2.0 * area / points.len().max(1) as f64).sqrt();
        if !(cell > 0.0) || !cell.is_finite() {
            cell = 1.0;
        }
        let nx = ((w / cell).floor() as usize + 1).min(4096);
        let ny = ((h / cell).floor() as usize + 1).min(4096);

        let bucket_of = |p: &Point| -> usize {
            let ix = (((p.x - min.x) / cell) as usize).min(nx - 1);
            let iy = (((p.y - min.y) / cell) as usize).min(ny - 1);
            iy * nx + ix
        };
        let mut counts = vec![0u32; nx * ny + 1];
        for p in points {
            counts[bucket_of(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let starts = counts.clone();
        let mut fill = counts;
        let mut items = vec![0u32; points.len()];
        for (i, p) in points.iter().enumerate() {
            let b = bucket_of(p);
            items[fill[b] as usize] = i as u32;
            fill[b] += 1;
        }
        NearestIndex {
            points,
            min,
            cell,
            nx,
            ny,
            starts,
            items,
        }
    }

    fn clamp_cell(&self, v: f64, origin: f64, n: usize) -> isize {
        let c = ((v - origin) / self.cell).floor();
        c.clamp(0.0, (n - 1) as f64) as isize
    }

    fn scan(&self, ix: isize, iy: isize, q: Point, best: &mut (f64, usize)) {
        if ix < 0 || iy < 0 || ix >= self.nx as isize || iy >= self.ny as isize {
            return;
        }
        let b = iy as usize * self.nx + ix as usize;
        for &i in &self.items[self.starts[b] as usize..self.starts[b + 1] as usize] {
            let i = i as usize;
            let d2 = self.points[i].dist2(q);
            if d2 < best.0 || (d2 == best.0 && i < best.1) {
                *best = (d2, i);
            }
        }
    }

    /// Index of the point nearest `q`, or `None` when the index is empty.
    pub fn nearest(&self, q: Point) -> Option<usize> {
        if self.points.is_empty() {
            return None;
        }
        let cx = self.clamp_cell(q.x, self.min.x, self.nx);
        let cy = self.clamp_cell(q.y, self.min.y, self.ny);
        let mut best = (f64::INFINITY, usize::MAX);
        let max_ring = self.nx.max(self.ny) as isize;
        for k in 0..=max_ring {
            if k == 0 {
                self.scan(cx, cy, q, &mut best);
            } else {
                for ix in cx - k..=cx + k {
                    self.scan(ix, cy - k, q, &mut best);
                    self.scan(ix, cy + k, q, &mut best);
                }
                for iy in cy - k + 1..=cy + k - 1 {
                    self.scan(cx - k, iy, q, &mut best);
                    self.scan(cx + k, iy, q, &mut best);
                }
            }
            // unscanned buckets lie beyond the sides of the scanned block
            // that have not reached the grid edge
            let mut reach = f64::INFINITY;
            if cx - k > 0 {
                reach = reach.min(q.x - (self.min.x + (cx - k) as f64 * self.cell));
            }
            if cx + k < self.nx as isize - 1 {
                reach = reach.min(self.min.x + (cx + k + 1) as f64 * self.cell - q.x);
            }
            if cy - k > 0 {
                reach = reach.min(q.y - (self.min.y + (cy - k) as f64 * self.cell));
            }
            if cy + k < self.ny as isize - 1 {
                reach = reach.min(self.min.y + (cy + k + 1) as f64 * self.cell - q.y);
            }
            if reach == f64::INFINITY || (reach > 0.0 && best.0 < reach * reach) {
                break;
            }
        }
        Some(best.1)
    }
}

/// Maps every UE to its Euclidean-nearest BS (lowest index on ties).
pub fn associate(bs: &[Point], ue: &[Point]) -> Result<Vec<usize>> {
    if bs.is_empty() {
        return Err(Error::NoBaseStations);
    }
    let index = NearestIndex::new(bs);
    Ok(ue
        .iter()
        .map(|&u| index.nearest(u).expect("non-empty index"))
        .collect())
}

/// BS nearest the origin: the nucleus of the cell containing the origin.
pub fn typical_cell(bs: &[Point]) -> Result<usize> {
    let mut best = (f64::INFINITY, usize::MAX);
    for (i, p) in bs.iter().enumerate() {
        let d2 = p.dist2(Point::ORIGIN);
        if d2 < best.0 {
            best = (d2, i);
        }
    }
    if bs.is_empty() {
        Err(Error::NoBaseStations)
    } else {
        Ok(best.1)
    }
}

/// Distances from `point` to every BS in nondecreasing order.
pub fn ordered_bs_distances(point: Point, bs: &[Point]) -> Result<Vec<f64>> {
    if bs.is_empty() {
        return Err(Error::NoBaseStations);
    }
    let mut d: Vec<f64> = bs.iter().map(|b| b.dist(point)).collect();
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Distance from BS `idx` to its nearest other BS (infinite if alone).
pub fn nearest_neighbor_distance(bs: &[Point], idx: usize) -> f64 {
    let c = bs[idx];
    bs.iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, p)| p.dist2(c))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Upper bound on how far the Voronoi cell of BS `idx` extends from its
/// nucleus. Splits the plane around the nucleus into six 60° sectors; any
/// point further than the nearest BS of its sector is strictly closer to
/// that BS. Infinite when some sector holds no other BS.
pub fn cell_extent_bound(bs: &[Point], idx: usize) -> f64 {
    let c = bs[idx];
    let mut nearest = [f64::INFINITY; 6];
    for (i, p) in bs.iter().enumerate() {
        if i == idx {
            continue;
        }
        let (dx, dy) = (p.x - c.x, p.y - c.y);
        let angle = dy.atan2(dx).rem_euclid(2.0 * PI);
        let sector = ((angle / (PI / 3.0)) as usize).min(5);
        nearest[sector] = nearest[sector].min(dx.hypot(dy));
    }
    nearest.into_iter().fold(0.0, f64::max)
}

/// One sampled world: BSs, UEs and the nearest-BS association.
#[derive(Debug, Clone)]
pub struct NetworkRealization {
    /// Side of the square window (km), centred at the origin.
    pub side: f64,
    pub bs_points: Vec<Point>,
    pub ue_points: Vec<Point>,
    /// `association[u]` is the index of the BS serving UE `u`.
    pub association: Vec<usize>,
}

impl NetworkRealization {
    pub fn new(side: f64, bs_points: Vec<Point>, ue_points: Vec<Point>) -> Result<Self> {
        let association = associate(&bs_points, &ue_points)?;
        Ok(NetworkRealization {
            side,
            bs_points,
            ue_points,
            association,
        })
    }

    pub fn sample<R: Rng + ?Sized>(
        bs_density: f64,
        ue_density: f64,
        side: f64,
        bs_rng: &mut R,
        ue_rng: &mut R,
    ) -> Result<Self> {
        let bs = sample_ppp(bs_density, side, bs_rng);
        let ue = sample_ppp(ue_density, side, ue_rng);
        Self::new(side, bs, ue)
    }

    pub fn typical_cell(&self) -> Result<usize> {
        typical_cell(&self.bs_points)
    }

    /// UE indices served by BS `bs`, ascending.
    pub fn cell_members(&self, bs: usize) -> Vec<usize> {
        self.association
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b == bs)
            .map(|(u, _)| u)
            .collect()
    }

    /// Writes one row per point: `kind x y association` (BS rows carry
    /// their own index).
    pub fn write_table<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "kind\tx_km\ty_km\tassociation")?;
        for (i, p) in self.bs_points.iter().enumerate() {
            writeln!(out, "bs\t{}\t{}\t{}", p.x, p.y, i)?;
        }
        for (p, a) in self.ue_points.iter().zip(&self.association) {
            writeln!(out, "ue\t{}\t{}\t{}", p.x, p.y, a)?;
        }
        Ok(())
    }
}
