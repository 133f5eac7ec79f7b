//! Grid hash of disk points for approximate lookup.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
#[allow(unused_imports)] // only needed without std
use num_traits::Float;

use crate::Complex;

#[derive(Debug, Clone)]
pub(crate) struct PointIndex {
    cell: f64,
    cells: BTreeMap<(i64, i64), Vec<usize>>,
    points: Vec<Complex>,
}

impl PointIndex {
    pub fn new(cell: f64) -> Self {
        PointIndex {
            cell,
            cells: BTreeMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: Complex) -> (i64, i64) {
        ((p.re / self.cell).floor() as i64, (p.im / self.cell).floor() as i64)
    }

    pub fn insert(&mut self, p: Complex) -> usize {
        let id = self.points.len();
        self.points.push(p);
        let k = self.key(p);
        self.cells.entry(k).or_default().push(id);
        id
    }

    /// Ids of stored points within `tol` of `p`, ascending; `tol` must not
    /// exceed the cell size.
    pub fn near(&self, p: Complex, tol: f64) -> Vec<usize> {
        let (kx, ky) = self.key(p);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(kx + dx, ky + dy)) {
                    out.extend(
                        ids.iter()
                            .copied()
                            .filter(|&i| (self.points[i] - p).norm() <= tol),
                    );
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn nearest(&self, p: Complex, tol: f64) -> Option<usize> {
        self.near(p, tol).into_iter().min_by(|&a, &b| {
            (self.points[a] - p)
                .norm()
                .total_cmp(&(self.points[b] - p).norm())
        })
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.points.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_neighbours_across_cell_borders() {
        let mut idx = PointIndex::new(1e-7);
        let a = idx.insert(Complex::new(0.3, 0.3));
        idx.insert(Complex::new(0.5, 0.3));
        assert_eq!(idx.near(Complex::new(0.3 + 5e-8, 0.3 - 5e-8), 1e-7), [a]);
        assert_eq!(idx.nearest(Complex::new(0.3, 0.3000000999), 1e-7), Some(a));
        assert!(idx.near(Complex::new(0.31, 0.3), 1e-7).is_empty());
        assert_eq!(idx.len(), 2);
    }
}
