//! Two-subiteration parallel thinning (Guo and Hall, algorithm A1) and
//! extraction of skeleton endpoints and junctions.

use std::sync::OnceLock;

use super::histogram::AbHistogram;
use crate::colorspace::normalize_deg;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryGrid {
    pub width: usize,
    pub height: usize,
    pub data: Vec<bool>,
}

impl BinaryGrid {
    pub fn new(width: usize, height: usize) -> Self {
        BinaryGrid {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    /// Parse rows of `#` (set) and `.` (clear).
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut g = BinaryGrid::new(width, height);
        for (r, line) in rows.iter().enumerate() {
            assert_eq!(line.len(), width, "ragged grid");
            for (c, ch) in line.chars().enumerate() {
                g.set(r, c, ch == '#');
            }
        }
        g
    }

    pub fn to_ascii(&self) -> Vec<String> {
        (0..self.height)
            .map(|r| {
                (0..self.width)
                    .map(|c| if self.get(r, c) { '#' } else { '.' })
                    .collect()
            })
            .collect()
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col]
    }

    /// Out-of-range coordinates read as background.
    fn get_i(&self, row: isize, col: isize) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.get(row as usize, col as usize)
    }

    pub fn set(&mut self, row: usize, col: usize, v: bool) {
        self.data[row * self.width + col] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn has_solid_2x2(&self) -> bool {
        (1..self.height).any(|r| {
            (1..self.width).any(|c| {
                self.get(r, c) && self.get(r - 1, c) && self.get(r, c - 1) && self.get(r - 1, c - 1)
            })
        })
    }

    /// Neighbor code: bit 0 is east, then counterclockwise (NE, N, NW, W,
    /// SW, S, SE) with row 0 at the top.
    fn code(&self, row: usize, col: usize) -> u8 {
        const OFFSETS: [(isize, isize); 8] = [
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
            (1, 0),
            (1, 1),
        ];
        let (r, c) = (row as isize, col as isize);
        OFFSETS.iter().enumerate().fold(0u8, |acc, (i, (dr, dc))| {
            acc | ((self.get_i(r + dr, c + dc) as u8) << i)
        })
    }

    pub fn neighbor_count(&self, row: usize, col: usize) -> u32 {
        self.code(row, col).count_ones()
    }
}

struct ThinLuts {
    first: [bool; 256],
    second: [bool; 256],
}

fn luts() -> &'static ThinLuts {
    static LUTS: OnceLock<ThinLuts> = OnceLock::new();
    LUTS.get_or_init(|| {
        let bit = |n: usize, i: usize| (n >> (i % 8)) & 1 == 1;
        let g1 = |n: usize| {
            [0, 2, 4, 6]
                .iter()
                .filter(|&&i| !bit(n, i) && (bit(n, i + 1) || bit(n, i + 2)))
                .count()
                == 1
        };
        let g2 = |n: usize| {
            let mut n1 = 0;
            let mut n2 = 0;
            for k in [1, 3, 5, 7] {
                if bit(n, k) || bit(n, k - 1) {
                    n1 += 1;
                }
                if bit(n, k) || bit(n, k + 1) {
                    n2 += 1;
                }
            }
            (2..=3).contains(&n1.min(n2))
        };
        let g3 = |n: usize| !((bit(n, 1) || bit(n, 2) || !bit(n, 7)) && bit(n, 0));
        let g3p = |n: usize| !((bit(n, 5) || bit(n, 6) || !bit(n, 3)) && bit(n, 4));
        ThinLuts {
            first: std::array::from_fn(|n| g1(n) && g2(n) && g3(n)),
            second: std::array::from_fn(|n| g1(n) && g2(n) && g3p(n)),
        }
    })
}

/// Thin a binary grid in place until no pixel changes. Each subiteration
/// decides deletions from a snapshot, so the result does not depend on
/// scan order.
pub fn thin(grid: &mut BinaryGrid) {
    let luts = luts();
    loop {
        let mut changed = false;
        for lut in [&luts.first, &luts.second] {
            let doomed: Vec<usize> = (0..grid.height)
                .flat_map(|r| (0..grid.width).map(move |c| (r, c)))
                .filter(|&(r, c)| grid.get(r, c) && lut[grid.code(r, c) as usize])
                .map(|(r, c)| r * grid.width + c)
                .collect();
            changed |= !doomed.is_empty();
            for i in doomed {
                grid.data[i] = false;
            }
        }
        if !changed {
            break;
        }
    }
}

/// A cluster of 8-connected branch pixels, reported as one junction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Junction {
    pub row: f64,
    pub col: f64,
    pub pixels: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonGraph {
    pub skeleton: BinaryGrid,
    /// Pixels with exactly one 8-neighbor.
    pub endpoints: Vec<(usize, usize)>,
    /// Pixels with three or more 8-neighbors.
    pub branch_points: Vec<(usize, usize)>,
    pub junctions: Vec<Junction>,
    /// Grid position of the AB origin and the size of one cell in AB units.
    pub origin: (f64, f64),
    pub bin_size: f64,
}

impl SkeletonGraph {
    pub fn from_skeleton(skeleton: BinaryGrid, origin: (f64, f64), bin_size: f64) -> Self {
        let mut endpoints = Vec::new();
        let mut branch_points = Vec::new();
        for r in 0..skeleton.height {
            for c in 0..skeleton.width {
                if !skeleton.get(r, c) {
                    continue;
                }
                match skeleton.neighbor_count(r, c) {
                    1 => endpoints.push((r, c)),
                    n if n >= 3 => branch_points.push((r, c)),
                    _ => {}
                }
            }
        }
        let junctions = cluster(&branch_points, skeleton.width, skeleton.height);
        SkeletonGraph {
            skeleton,
            endpoints,
            branch_points,
            junctions,
            origin,
            bin_size,
        }
    }

    /// Distance from the AB origin, in AB units.
    pub fn radius_of(&self, row: f64, col: f64) -> f64 {
        (row - self.origin.0).hypot(col - self.origin.1) * self.bin_size
    }

    /// Hue angle of the ray from the AB origin. Rows follow +B.
    pub fn angle_of(&self, row: f64, col: f64) -> f64 {
        let (a, b) = (col - self.origin.1, row - self.origin.0);
        if a == 0.0 && b == 0.0 {
            0.0
        } else {
            normalize_deg(b.atan2(a).to_degrees())
        }
    }

    pub fn junction_radii(&self) -> Vec<f64> {
        self.junctions
            .iter()
            .map(|j| self.radius_of(j.row, j.col))
            .collect()
    }
}

fn cluster(points: &[(usize, usize)], width: usize, height: usize) -> Vec<Junction> {
    let mut mark = BinaryGrid::new(width, height);
    for &(r, c) in points {
        mark.set(r, c, true);
    }
    let mut out = Vec::new();
    for &(r0, c0) in points {
        if !mark.get(r0, c0) {
            continue;
        }
        mark.set(r0, c0, false);
        let mut stack = vec![(r0, c0)];
        let (mut sr, mut sc, mut n) = (0.0, 0.0, 0usize);
        while let Some((r, c)) = stack.pop() {
            sr += r as f64;
            sc += c as f64;
            n += 1;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    let (rr, cc) = (r as isize + dr, c as isize + dc);
                    if mark.get_i(rr, cc) {
                        mark.set(rr as usize, cc as usize, false);
                        stack.push((rr as usize, cc as usize));
                    }
                }
            }
        }
        out.push(Junction {
            row: sr / n as f64,
            col: sc / n as f64,
            pixels: n,
        });
    }
    out
}

pub fn skeletonize(h: &AbHistogram) -> Result<SkeletonGraph> {
    let side = h.side();
    let mut grid = BinaryGrid {
        width: side,
        height: side,
        data: h.occupancy(),
    };
    if grid.count() == 0 {
        return Err(Error::NoChromaticContent);
    }
    thin(&mut grid);
    let (r0, c0) = h.origin();
    Ok(SkeletonGraph::from_skeleton(
        grid,
        (r0 as f64, c0 as f64),
        h.bin_size(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_segment_is_already_thin() {
        let rows = [".......", ".#####.", "......."];
        let mut g = BinaryGrid::from_ascii(&rows);
        let before = g.clone();
        thin(&mut g);
        assert_eq!(g, before);
        let sk = SkeletonGraph::from_skeleton(g, (1.0, 3.0), 1.0);
        assert_eq!(sk.endpoints.len(), 2);
        assert!(sk.branch_points.is_empty());
    }

    #[test]
    fn single_pixel_survives() {
        let mut g = BinaryGrid::from_ascii(&["...", ".#.", "..."]);
        thin(&mut g);
        assert_eq!(g.count(), 1);
    }

    #[test]
    fn thick_bar_thins_to_one_pixel() {
        let mut g = BinaryGrid::new(20, 9);
        for r in 2..7 {
            for c in 2..18 {
                g.set(r, c, true);
            }
        }
        thin(&mut g);
        assert!(g.count() > 0);
        assert!(!g.has_solid_2x2());
        let sk = SkeletonGraph::from_skeleton(g, (4.0, 10.0), 1.0);
        assert_eq!(sk.endpoints.len(), 2);
    }

    #[test]
    fn ray_angles_follow_ab_axes() {
        let sk = SkeletonGraph::from_skeleton(BinaryGrid::new(5, 5), (2.0, 2.0), 2.0);
        assert_eq!(sk.angle_of(2.0, 4.0), 0.0);
        assert!((sk.angle_of(4.0, 2.0) - 90.0).abs() < 1e-12);
        assert!((sk.radius_of(4.0, 2.0) - 4.0).abs() < 1e-12);
    }
}
