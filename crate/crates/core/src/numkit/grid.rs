use crate::error::{Error, Result};

/// Closed interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }
}

/// Uniform grid with inclusive endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    t0: f64,
    t1: f64,
    points: Vec<f64>,
}

impl Grid {
    /// Finite-difference stencils need at least this many points.
    pub const MIN_POINTS: usize = 5;

    pub fn uniform(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 {
            return Err(Error::Argument(format!(
                "grid needs finite t0 < t1, got [{t0}, {t1}]"
            )));
        }
        if n < Self::MIN_POINTS {
            return Err(Error::Argument(format!(
                "grid needs at least {} points, got {n}",
                Self::MIN_POINTS
            )));
        }
        let span = t1 - t0;
        let last = (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| t0 + span * (i as f64 / last)).collect();
        points[n - 1] = t1;
        Ok(Grid { t0, t1, points })
    }

    /// Accepts an explicit list of abscissae; they must be uniformly spaced.
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        let n = points.len();
        if n < Self::MIN_POINTS {
            return Err(Error::Argument(format!(
                "grid needs at least {} points, got {n}",
                Self::MIN_POINTS
            )));
        }
        let t0 = points[0];
        let t1 = points[n - 1];
        if !(t0.is_finite() && t1.is_finite()) || t1 <= t0 {
            return Err(Error::Argument("grid must be strictly increasing".into()));
        }
        let h = (t1 - t0) / (n - 1) as f64;
        let slack = 1e-6 * h;
        for (i, w) in points.windows(2).enumerate() {
            let step = w[1] - w[0];
            if !(step > 0.0) {
                return Err(Error::Argument(format!(
                    "grid not strictly increasing at index {}",
                    i + 1
                )));
            }
            if (step - h).abs() > slack {
                return Err(Error::Argument(format!(
                    "non-uniform grid: step {step} at index {} differs from {h}",
                    i + 1
                )));
            }
        }
        Ok(Grid { t0, t1, points })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.t1 - self.t0) / (self.points.len() - 1) as f64
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.t0, self.t1)
    }

    /// Cell index `i` and local coordinate `s in [0, 1]` such that
    /// `t = points[i] + s * h`. Returns `None` outside the grid.
    pub fn locate(&self, t: f64) -> Option<(usize, f64)> {
        let h = self.step();
        let tol = 1e-12 * (self.t1 - self.t0);
        if t < self.t0 - tol || t > self.t1 + tol {
            return None;
        }
        let cells = self.points.len() - 1;
        let u = ((t - self.t0) / h).clamp(0.0, cells as f64);
        let i = (u.floor() as usize).min(cells - 1);
        let s = ((t - self.points[i]) / h).clamp(0.0, 1.0);
        Some((i, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_endpoints_exact() {
        let g = Grid::uniform(-1.0, 1.0, 2001).unwrap();
        assert_eq!(g.points()[0], -1.0);
        assert_eq!(g.points()[1000], 0.0);
        assert_eq!(g.points()[2000], 1.0);
        assert!((g.step() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn rejects_small_or_reversed() {
        assert!(Grid::uniform(0.0, 1.0, 4).is_err());
        assert!(Grid::uniform(1.0, 0.0, 10).is_err());
        assert!(Grid::uniform(0.0, f64::NAN, 10).is_err());
    }

    #[test]
    fn from_points_checks_uniformity() {
        assert!(Grid::from_points(vec![0.0, 0.25, 0.5, 0.75, 1.0]).is_ok());
        let err = Grid::from_points(vec![0.0, 0.2, 0.5, 0.75, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Argument(_)));
        assert!(Grid::from_points(vec![0.0, 0.5, 0.5, 0.75, 1.0]).is_err());
    }

    #[test]
    fn locate_cells() {
        let g = Grid::uniform(0.0, 1.0, 11).unwrap();
        let (i, s) = g.locate(0.35).unwrap();
        assert_eq!(i, 3);
        assert!((s - 0.5).abs() < 1e-12);
        assert_eq!(g.locate(1.0).unwrap().0, 9);
        assert!(g.locate(1.1).is_none());
    }
}
