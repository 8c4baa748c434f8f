//! Occupancy grid with sub-cell exact dilation.
//!
//! Every occupied cell remembers a source disk (center `p`, radius
//! `k + VT·t`) that it lies in and that contains only possible evader
//! positions. Dilation occupies a clean neighbour once the source disk of
//! an occupied cell reaches the neighbour's center, and the neighbour
//! inherits that disk. Growth therefore accumulates exactly across steps
//! even when `VT·dt` is far below the cell size. Cells near a sensor swath
//! get their disk shrunk so it no longer reaches into the swept area.

use super::geometry::{ConvexPolygon, Point};

const NEIGHBOURS: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

#[derive(Debug, Clone)]
pub struct Grid {
    side: usize,
    cell: f64,
    half_width: f64,
    occupied: Vec<bool>,
    src_x: Vec<f64>,
    src_y: Vec<f64>,
    /// Source radius at time zero; the radius at time `t` is `k + VT·t`.
    src_k: Vec<f64>,
    in_frontier: Vec<bool>,
    frontier: Vec<u32>,
    occupied_count: usize,
}

/// Extremes of the occupied set measured on its boundary cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extent {
    pub max_radius: f64,
    pub min_radius: f64,
    /// Index of the boundary cell farthest from the origin.
    pub farthest: usize,
}

impl Grid {
    /// Grid over `[−half_width, half_width]²` with every cell whose center
    /// lies in the disk of radius `radius` occupied.
    pub fn disk(cell: f64, half_width: f64, radius: f64) -> Grid {
        let side = (2.0 * half_width / cell).ceil() as usize;
        let half_width = side as f64 * cell / 2.0;
        let len = side * side;
        let mut grid = Grid {
            side,
            cell,
            half_width,
            occupied: vec![false; len],
            src_x: vec![0.0; len],
            src_y: vec![0.0; len],
            src_k: vec![radius; len],
            in_frontier: vec![false; len],
            frontier: Vec::new(),
            occupied_count: 0,
        };
        for idx in 0..len {
            let [x, y] = grid.center(idx);
            if x * x + y * y <= radius * radius {
                grid.occupied[idx] = true;
                grid.occupied_count += 1;
            }
        }
        for idx in 0..len {
            if grid.occupied[idx] && grid.has_clean_neighbour(idx) {
                grid.in_frontier[idx] = true;
                grid.frontier.push(idx as u32);
            }
        }
        grid
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied_count
    }

    pub fn is_occupied(&self, idx: usize) -> bool {
        self.occupied[idx]
    }

    pub fn occupancy(&self) -> &[bool] {
        &self.occupied
    }

    pub fn cell_area(&self) -> f64 {
        self.cell * self.cell
    }

    pub fn center(&self, idx: usize) -> Point {
        let (ix, iy) = (idx % self.side, idx / self.side);
        [
            -self.half_width + (ix as f64 + 0.5) * self.cell,
            -self.half_width + (iy as f64 + 0.5) * self.cell,
        ]
    }

    /// Column and row of cell `idx`.
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.side, idx / self.side)
    }

    fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let (ix, iy) = (idx % self.side, idx / self.side);
        let side = self.side as isize;
        NEIGHBOURS.iter().filter_map(move |&(dx, dy)| {
            let (nx, ny) = (ix as isize + dx, iy as isize + dy);
            (nx >= 0 && ny >= 0 && nx < side && ny < side).then(|| (ny * side + nx) as usize)
        })
    }

    fn has_clean_neighbour(&self, idx: usize) -> bool {
        self.neighbours(idx).any(|m| !self.occupied[m])
    }

    fn mark_frontier(&mut self, idx: usize) {
        if !self.in_frontier[idx] {
            self.in_frontier[idx] = true;
            self.frontier.push(idx as u32);
        }
    }

    /// Grows the occupied set to its extent at time `t`.
    pub fn dilate(&mut self, vt: f64, t: f64) {
        let mut queue = std::mem::take(&mut self.frontier);
        let mut next = Vec::with_capacity(queue.len());
        let mut head = 0;
        while head < queue.len() {
            let c = queue[head] as usize;
            head += 1;
            if !self.occupied[c] {
                self.in_frontier[c] = false;
                continue;
            }
            let radius = self.src_k[c] + vt * t;
            let (px, py) = (self.src_x[c], self.src_y[c]);
            let mut open = false;
            let (ix, iy) = (c % self.side, c / self.side);
            for &(dx, dy) in &NEIGHBOURS {
                let (nx, ny) = (ix as isize + dx, iy as isize + dy);
                if nx < 0 || ny < 0 || nx >= self.side as isize || ny >= self.side as isize {
                    continue;
                }
                let m = ny as usize * self.side + nx as usize;
                if self.occupied[m] {
                    continue;
                }
                let [mx, my] = self.center(m);
                let (ex, ey) = (mx - px, my - py);
                if radius >= 0.0 && ex * ex + ey * ey <= radius * radius {
                    self.occupied[m] = true;
                    self.occupied_count += 1;
                    self.src_x[m] = px;
                    self.src_y[m] = py;
                    self.src_k[m] = self.src_k[c];
                    if !self.in_frontier[m] {
                        self.in_frontier[m] = true;
                        queue.push(m as u32);
                    }
                } else {
                    open = true;
                }
            }
            if open {
                next.push(c as u32);
            } else {
                self.in_frontier[c] = false;
            }
        }
        self.frontier = next;
    }

    /// Clears every occupied cell within `eps` of `swath` and shrinks the
    /// source disks of occupied cells within `band` of it. Returns the
    /// number of cells cleared.
    pub fn clear_swath(&mut self, swath: &ConvexPolygon, eps: f64, band: f64, vt: f64, t: f64) -> usize {
        let (lo, hi) = swath.bounds();
        let to_index = |v: f64| ((v + self.half_width) / self.cell).floor();
        let max = self.side as f64 - 1.0;
        let x0 = to_index(lo[0] - band).clamp(0.0, max) as usize;
        let x1 = to_index(hi[0] + band).clamp(0.0, max) as usize;
        let y0 = to_index(lo[1] - band).clamp(0.0, max) as usize;
        let y1 = to_index(hi[1] + band).clamp(0.0, max) as usize;
        let shrink_margin = eps + 1e-9 * self.cell;
        let mut cleared = 0;
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                let idx = iy * self.side + ix;
                if !self.occupied[idx] {
                    continue;
                }
                let p = self.center(idx);
                let d = swath.distance(p);
                if d <= eps {
                    self.occupied[idx] = false;
                    self.occupied_count -= 1;
                    cleared += 1;
                } else if d <= band {
                    self.confine(idx, swath, d, shrink_margin, vt, t);
                    self.mark_frontier(idx);
                }
            }
        }
        // Frontier cells outside the band can still own a large disk whose rim
        // reaches into the swath sideways.
        for k in 0..self.frontier.len() {
            let idx = self.frontier[k] as usize;
            if !self.occupied[idx] {
                continue;
            }
            let reach = self.src_k[idx] + vt * t + shrink_margin;
            let (sx, sy) = (self.src_x[idx], self.src_y[idx]);
            if sx + reach < lo[0] || sx - reach > hi[0] || sy + reach < lo[1] || sy - reach > hi[1] {
                continue;
            }
            let d = swath.distance(self.center(idx));
            self.confine(idx, swath, d, shrink_margin, vt, t);
        }
        cleared
    }

    /// Replaces the source disk of `idx` by one centered on the cell when
    /// the current disk comes within `margin` of `swath`. The new disk keeps
    /// the old reach beyond the cell but stops `margin` short of the swath,
    /// which lies at distance `d` from the cell center.
    fn confine(&mut self, idx: usize, swath: &ConvexPolygon, d: f64, margin: f64, vt: f64, t: f64) {
        let allowed = d - margin;
        let radius = self.src_k[idx] + vt * t;
        let src = [self.src_x[idx], self.src_y[idx]];
        let p = self.center(idx);
        let slack = radius - (p[0] - src[0]).hypot(p[1] - src[1]);
        if slack <= allowed && swath.distance(src) >= radius + margin {
            return;
        }
        self.src_x[idx] = p[0];
        self.src_y[idx] = p[1];
        self.src_k[idx] = slack.min(allowed) - vt * t;
    }

    /// Largest and smallest origin distance over boundary cells, or `None`
    /// when nothing is occupied.
    pub fn extent(&self) -> Option<Extent> {
        let mut best: Option<Extent> = None;
        for &c in &self.frontier {
            let c = c as usize;
            // Cells near a swath are queued before they touch clean space.
            if !self.occupied[c] || !self.has_clean_neighbour(c) {
                continue;
            }
            let [x, y] = self.center(c);
            let rho = (x * x + y * y).sqrt();
            match &mut best {
                None => {
                    best = Some(Extent {
                        max_radius: rho,
                        min_radius: rho,
                        farthest: c,
                    })
                }
                Some(e) => {
                    if rho > e.max_radius {
                        e.max_radius = rho;
                        e.farthest = c;
                    }
                    e.min_radius = e.min_radius.min(rho);
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_disk_matches_area() {
        let grid = Grid::disk(0.25, 30.0, 20.0);
        let area = grid.occupied_count() as f64 * grid.cell_area();
        let exact = std::f64::consts::PI * 400.0;
        assert!((area - exact).abs() / exact < 0.01);
        let e = grid.extent().unwrap();
        assert!(e.max_radius <= 20.0 && e.max_radius > 20.0 - 0.25);
    }

    #[test]
    fn dilation_accumulates_sub_cell_growth() {
        let mut grid = Grid::disk(0.25, 30.0, 10.0);
        let mut t = 0.0;
        for _ in 0..500 {
            t += 0.01;
            grid.dilate(1.0, t);
        }
        let e = grid.extent().unwrap();
        assert!((e.max_radius - 15.0).abs() < 0.25, "{}", e.max_radius);
        assert!((e.min_radius - 15.0).abs() < 0.4, "{}", e.min_radius);
    }

    #[test]
    fn cleared_cells_are_not_refilled_by_stale_disks() {
        let mut grid = Grid::disk(0.25, 30.0, 10.0);
        let swath = ConvexPolygon::hull(&[[-2.0, -12.0], [2.0, -12.0], [2.0, 12.0], [-2.0, 12.0]]);
        let before = grid.occupied_count();
        let cleared = grid.clear_swath(&swath, 0.0, 0.5 + 2.0 * 0.25, 0.0, 0.0);
        assert!(cleared > 0);
        assert_eq!(grid.occupied_count(), before - cleared);
        // Static evaders: dilation must not re-enter the strip.
        grid.dilate(0.0, 1.0);
        grid.dilate(0.0, 2.0);
        assert_eq!(grid.occupied_count(), before - cleared);
        for idx in 0..grid.side() * grid.side() {
            if grid.is_occupied(idx) {
                assert!(grid.center(idx)[0].abs() > 2.0);
            }
        }
    }

    #[test]
    fn shrunk_disks_regrow_at_evader_speed() {
        let mut grid = Grid::disk(0.25, 30.0, 10.0);
        let swath = ConvexPolygon::hull(&[[-2.0, -12.0], [2.0, -12.0], [2.0, 12.0], [-2.0, 12.0]]);
        grid.clear_swath(&swath, 0.0, 0.75, 1.0, 0.0);
        grid.dilate(1.0, 1.0);
        // After one time unit the strip edge has moved in by about one unit.
        for idx in 0..grid.side() * grid.side() {
            let [x, y] = grid.center(idx);
            if y.abs() < 5.0 && x.abs() < 0.9 {
                assert!(!grid.is_occupied(idx), "({x}, {y})");
            }
            if y.abs() < 5.0 && x.abs() > 1.2 && x.abs() < 3.0 {
                assert!(grid.is_occupied(idx), "({x}, {y})");
            }
        }
    }
}
