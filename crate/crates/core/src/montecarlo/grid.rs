//! Uniform bucket grid for nearest-neighbor queries inside the simulation disc.

pub(crate) struct BucketGrid {
    origin: f64,
    cell: f64,
    side: usize,
    buckets: Vec<Vec<u32>>,
    points: Vec<[f64; 2]>,
}

impl BucketGrid {
    /// Grid over `[-radius, radius]²` sized for roughly one point per bucket.
    pub fn new(points: &[[f64; 2]], radius: f64) -> Self {
        let n = points.len().max(1) as f64;
        let side = (n.sqrt().ceil() as usize).clamp(1, 4096);
        let cell = 2.0 * radius / side as f64;
        let mut buckets = vec![Vec::new(); side * side];
        let mut grid = Self {
            origin: -radius,
            cell,
            side,
            buckets: Vec::new(),
            points: points.to_vec(),
        };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(p);
            buckets[cy * side + cx].push(i as u32);
        }
        grid.buckets = buckets;
        grid
    }

    fn cell_of(&self, p: &[f64; 2]) -> (usize, usize) {
        let clamp = |v: f64| (((v - self.origin) / self.cell).floor().max(0.0) as usize).min(self.side - 1);
        (clamp(p[0]), clamp(p[1]))
    }

    /// Index and squared distance of the closest point, or `None` when empty.
    pub fn nearest(&self, p: &[f64; 2]) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let (cx, cy) = self.cell_of(p);
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..self.side {
            // Any point in ring `ring` is at least (ring - 1) cells away.
            if let Some((_, d2)) = best {
                let reach = (ring as f64 - 1.0).max(0.0) * self.cell;
                if reach * reach > d2 {
                    break;
                }
            }
            let lo_x = cx.saturating_sub(ring);
            let hi_x = (cx + ring).min(self.side - 1);
            let lo_y = cy.saturating_sub(ring);
            let hi_y = (cy + ring).min(self.side - 1);
            for y in lo_y..=hi_y {
                for x in lo_x..=hi_x {
                    let on_ring = x + ring == cx || x == cx + ring || y + ring == cy || y == cy + ring;
                    if !on_ring {
                        continue;
                    }
                    for &i in &self.buckets[y * self.side + x] {
                        let q = self.points[i as usize];
                        let d2 = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
                        let closer = match best {
                            None => true,
                            Some((bi, bd)) => d2 < bd || (d2 == bd && (i as usize) < bi),
                        };
                        if closer {
                            best = Some((i as usize, d2));
                        }
                    }
                }
            }
        }
        best
    }
}
