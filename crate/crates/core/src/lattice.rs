//! Space–time grids of complex field values.
//!
//! A [`Grid`] stores one field on `N` space sites × `M` time sites. Space
//! indices wrap modulo `N` when the boundary condition is periodic; time is
//! always open, so every access outside `0..M` is an error.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::{Error, Result, C64};

/// Spatial boundary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceBc {
    /// Indices wrap modulo `N`.
    Periodic,
    /// Only `0..N` is stored; residual sweeps stay in the interior.
    Open,
}

/// One complex field on an `N × M` space–time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    m: usize,
    bc: SpaceBc,
    data: Vec<C64>,
}

impl Grid {
    /// All-zero grid.
    pub fn zeros(n: usize, m: usize, bc: SpaceBc) -> Self {
        Self { n, m, bc, data: vec![C64::zero(); n * m] }
    }

    /// Grid filled from `f(n, a)`.
    pub fn from_fn(n: usize, m: usize, bc: SpaceBc, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut g = Self::zeros(n, m, bc);
        for a in 0..m {
            for s in 0..n {
                g.data[a * n + s] = f(s, a);
            }
        }
        g
    }

    /// Fallible variant of [`Grid::from_fn`].
    pub fn try_from_fn(
        n: usize,
        m: usize,
        bc: SpaceBc,
        mut f: impl FnMut(usize, usize) -> Result<C64>,
    ) -> Result<Self> {
        let mut g = Self::zeros(n, m, bc);
        for a in 0..m {
            for s in 0..n {
                g.data[a * n + s] = f(s, a)?;
            }
        }
        Ok(g)
    }

    /// Number of space sites.
    pub fn space_len(&self) -> usize {
        self.n
    }

    /// Number of time sites.
    pub fn time_len(&self) -> usize {
        self.m
    }

    /// Boundary condition in space.
    pub fn bc(&self) -> SpaceBc {
        self.bc
    }

    /// Resolves signed indices to a storage slot.
    pub fn slot(&self, n: isize, a: isize) -> Result<usize> {
        if a < 0 || a as usize >= self.m {
            return Err(Error::InvalidParam(alloc::format!("time index {a} outside 0..{}", self.m)));
        }
        let s = match self.bc {
            SpaceBc::Periodic => n.rem_euclid(self.n as isize) as usize,
            SpaceBc::Open if n >= 0 && (n as usize) < self.n => n as usize,
            SpaceBc::Open => return Err(Error::InvalidParam(alloc::format!("space index {n} outside 0..{}", self.n))),
        };
        Ok(a as usize * self.n + s)
    }

    /// Value at `(n, a)`.
    pub fn get(&self, n: isize, a: isize) -> Result<C64> {
        Ok(self.data[self.slot(n, a)?])
    }

    /// Value at in-range indices (panics when out of range).
    pub fn at(&self, n: usize, a: usize) -> C64 {
        self.data[a * self.n + n]
    }

    /// Overwrites the value at `(n, a)`.
    pub fn set(&mut self, n: isize, a: isize, v: C64) -> Result<()> {
        let i = self.slot(n, a)?;
        self.data[i] = v;
        Ok(())
    }

    /// Whether every `(n', a')` with `n' ∈ n+dn.0..=n+dn.1`, `a' ∈ a+da.0..=a+da.1` is addressable.
    pub fn covers(&self, n: isize, a: isize, dn: (isize, isize), da: (isize, isize)) -> bool {
        let time_ok = a + da.0 >= 0 && a + da.1 < self.m as isize;
        let space_ok = match self.bc {
            SpaceBc::Periodic => true,
            SpaceBc::Open => n + dn.0 >= 0 && n + dn.1 < self.n as isize,
        };
        time_ok && space_ok
    }

    /// Time slice `a` as a vector over space.
    pub fn slice(&self, a: usize) -> &[C64] {
        &self.data[a * self.n..(a + 1) * self.n]
    }

    /// Iterates over `(n, a, value)` in time-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.data.iter().enumerate().map(move |(i, v)| (i % self.n, i / self.n, *v))
    }

    /// Largest magnitude stored.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest entry-wise distance to another grid of the same shape.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        if self.n != other.n || self.m != other.m {
            return Err(Error::ShapeError { expected: self.n * self.m, found: other.n * other.m });
        }
        Ok(self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }
}

/// Result of a residual sweep over many sites.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepResult {
    /// Largest residual seen.
    pub max_residual: f64,
    /// Site `(n, a)` of the largest residual.
    pub argmax: (isize, isize),
    /// Number of sites visited.
    pub sites: usize,
}

impl SweepResult {
    /// An empty sweep.
    pub fn new() -> Self {
        Self { max_residual: 0.0, argmax: (0, 0), sites: 0 }
    }

    /// Records one site residual.
    pub fn record(&mut self, site: (isize, isize), residual: f64) {
        if residual > self.max_residual || self.sites == 0 || residual.is_nan() {
            self.max_residual = if residual.is_nan() { f64::INFINITY } else { residual.max(self.max_residual) };
            self.argmax = site;
        }
        self.sites += 1;
    }

    /// Merges another sweep into this one.
    pub fn merge(&mut self, other: &Self) {
        if other.sites > 0 && (other.max_residual > self.max_residual || self.sites == 0) {
            self.max_residual = other.max_residual;
            self.argmax = other.argmax;
        }
        self.sites += other.sites;
    }
}

impl Default for SweepResult {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn periodic_wrap_and_open_bounds() {
        let g = Grid::from_fn(3, 2, SpaceBc::Periodic, |n, a| c64(n as f64, a as f64));
        assert_eq!(g.get(-1, 1).unwrap(), c64(2.0, 1.0));
        assert_eq!(g.get(4, 0).unwrap(), c64(1.0, 0.0));
        assert!(g.get(0, 2).is_err());
        let o = Grid::from_fn(3, 2, SpaceBc::Open, |n, a| c64(n as f64, a as f64));
        assert!(o.get(-1, 0).is_err());
        assert!(o.covers(1, 0, (-1, 1), (0, 1)));
        assert!(!o.covers(0, 0, (-1, 1), (0, 0)));
    }

    #[test]
    fn sweep_tracks_argmax() {
        let mut s = SweepResult::new();
        s.record((0, 0), 1e-3);
        s.record((1, 2), 5e-3);
        s.record((2, 2), 1e-4);
        assert_eq!(s.argmax, (1, 2));
        assert_eq!(s.sites, 3);
    }
}
