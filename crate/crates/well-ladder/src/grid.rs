//! Uniform open-interval discretization of (0, L).
//!
//! Samples live strictly inside the well: x_i = i·L/(n+1), i = 1..n. The
//! walls are never stored — the superpotentials diverge there — but the
//! quadrature and, on request, the difference stencils use the known zero
//! boundary values of Dirichlet-compliant functions.

use std::io::{self, Write};

use num_complex::Complex64 as C64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least {need} interior points, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("grids do not match: {0} points on width {1} vs {2} points on width {3}")]
    Mismatch(usize, f64, usize, f64),
    #[error("invalid grid: width {width}, {n_points} points")]
    Invalid { width: f64, n_points: usize },
}

/// Whether the sampled function is known to vanish at both walls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// f(0) = f(L) = 0 may be used as extra stencil data.
    Dirichlet,
    /// Nothing is assumed at the walls; edge stencils are fully one-sided.
    General,
}

/// Uniform grid of interior points over (0, L).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    width: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(width: f64, n_points: usize) -> Result<Self, GridError> {
        if !(width > 0.0 && width.is_finite()) || n_points == 0 {
            return Err(GridError::Invalid { width, n_points });
        }
        Ok(Self { width, n_points })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Spacing h = L/(n+1).
    pub fn spacing(&self) -> f64 {
        self.width / (self.n_points + 1) as f64
    }

    /// i-th interior point (0-based index): x = (i+1)·h.
    pub fn point(&self, i: usize) -> f64 {
        debug_assert!(i < self.n_points);
        (i + 1) as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.point(i))
    }

    /// Sample a complex-valued function on the grid.
    pub fn sample<F: Fn(f64) -> C64>(&self, f: F) -> GridFunction {
        GridFunction {
            grid: *self,
            values: self.points().map(f).collect(),
        }
    }

    /// Sample a real-valued function on the grid.
    pub fn sample_real<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        self.sample(|x| C64::new(f(x), 0.0))
    }

    pub fn zeros(&self) -> GridFunction {
        GridFunction {
            grid: *self,
            values: vec![C64::new(0.0, 0.0); self.n_points],
        }
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn from_values(grid: Grid, values: Vec<C64>) -> Result<Self, GridError> {
        if values.len() != grid.n_points() {
            return Err(GridError::Mismatch(
                values.len(),
                grid.width(),
                grid.n_points(),
                grid.width(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_same_grid(&self, other: &GridFunction) -> Result<(), GridError> {
        if self.grid != other.grid {
            return Err(GridError::Mismatch(
                self.grid.n_points(),
                self.grid.width(),
                other.grid.n_points(),
                other.grid.width(),
            ));
        }
        Ok(())
    }

    /// First derivative by 9-point stencils: 8th-order central differences on
    /// the interior, 8th-order one-sided stencils on the four points nearest
    /// each wall. With [`Boundary::Dirichlet`] the wall itself (value zero)
    /// joins the edge stencils.
    pub fn differentiate(&self, boundary: Boundary) -> Result<GridFunction, GridError> {
        let n = self.grid.n_points();
        if n < 9 {
            return Err(GridError::TooSmall { need: 9, got: n });
        }
        let h = self.grid.spacing();
        let mut out = vec![C64::new(0.0, 0.0); n];

        // Central weights for offsets -4..=4, divided by h.
        let central: [f64; 9] = [
            1.0 / 280.0,
            -4.0 / 105.0,
            1.0 / 5.0,
            -4.0 / 5.0,
            0.0,
            4.0 / 5.0,
            -1.0 / 5.0,
            4.0 / 105.0,
            -1.0 / 280.0,
        ];
        for i in 4..n - 4 {
            let mut acc = C64::new(0.0, 0.0);
            for (k, w) in central.iter().enumerate() {
                if *w != 0.0 {
                    acc += self.values[i + k - 4] * *w;
                }
            }
            out[i] = acc / h;
        }

        // Edge stencils from Fornberg weights over 9 nodes. Node offsets are
        // in units of h relative to the wall-adjacent sample.
        let edge = |target_idx: usize, left: bool| -> C64 {
            let mut nodes = [0.0_f64; 9];
            let mut vals = [C64::new(0.0, 0.0); 9];
            match (boundary, left) {
                (Boundary::Dirichlet, true) => {
                    // wall at offset -1 plus samples 0..8
                    nodes[0] = -1.0;
                    for k in 0..8 {
                        nodes[k + 1] = k as f64;
                        vals[k + 1] = self.values[k];
                    }
                }
                (Boundary::General, true) => {
                    for k in 0..9 {
                        nodes[k] = k as f64;
                        vals[k] = self.values[k];
                    }
                }
                (Boundary::Dirichlet, false) => {
                    for k in 0..8 {
                        nodes[k] = (n - 8 + k) as f64;
                        vals[k] = self.values[n - 8 + k];
                    }
                    nodes[8] = n as f64; // wall at x = L
                }
                (Boundary::General, false) => {
                    for k in 0..9 {
                        nodes[k] = (n - 9 + k) as f64;
                        vals[k] = self.values[n - 9 + k];
                    }
                }
            }
            let w = fd_weights(target_idx as f64, &nodes);
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..9 {
                acc += vals[k] * w[k];
            }
            acc / h
        };
        for i in 0..4 {
            out[i] = edge(i, true);
        }
        for i in n - 4..n {
            out[i] = edge(i, false);
        }
        Ok(GridFunction { grid: self.grid, values: out })
    }

    /// ∫₀^L conj(f)·g dx by composite Simpson over the closed interval, with
    /// both wall values taken as zero. An odd number of panels is closed out
    /// with a single 3/8 rule at the right wall.
    pub fn inner_product(&self, other: &GridFunction) -> Result<C64, GridError> {
        self.check_same_grid(other)?;
        let w = simpson_weights(self.grid);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.values.len() {
            acc += self.values[i].conj() * other.values[i] * w[i];
        }
        Ok(acc)
    }

    /// L² norm by quadrature.
    pub fn norm(&self) -> f64 {
        self.inner_product(self)
            .expect("same grid")
            .re
            .max(0.0)
            .sqrt()
    }

    /// L² distance ‖f − g‖.
    pub fn l2_distance(&self, other: &GridFunction) -> Result<f64, GridError> {
        self.check_same_grid(other)?;
        let diff = self.sub(other);
        Ok(diff.norm())
    }

    pub fn scaled(&self, c: C64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Pointwise sum; panics on grid mismatch.
    pub fn add(&self, other: &GridFunction) -> GridFunction {
        self.check_same_grid(other).expect("grid mismatch in add");
        GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Pointwise difference; panics on grid mismatch.
    pub fn sub(&self, other: &GridFunction) -> GridFunction {
        self.check_same_grid(other).expect("grid mismatch in sub");
        GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Pointwise product with a real multiplier function evaluated on the grid.
    pub fn mul_real<F: Fn(f64) -> f64>(&self, f: F) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self
                .grid
                .points()
                .zip(&self.values)
                .map(|(x, v)| v * f(x))
                .collect(),
        }
    }

    /// Two- or three-column CSV (x, Re[, Im]); the imaginary column appears
    /// only when some sample has a nonzero imaginary part.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let complex = self.values.iter().any(|v| v.im != 0.0);
        if complex {
            writeln!(out, "x,re,im")?;
            for (x, v) in self.grid.points().zip(&self.values) {
                writeln!(out, "{},{},{}", x, v.re, v.im)?;
            }
        } else {
            writeln!(out, "x,re")?;
            for (x, v) in self.grid.points().zip(&self.values) {
                writeln!(out, "{},{}", x, v.re)?;
            }
        }
        Ok(())
    }
}

/// Quadrature weights for the interior samples: composite Simpson over the
/// closed interval with zero walls; odd panel counts get a 3/8 tail.
fn simpson_weights(grid: Grid) -> Vec<f64> {
    let n = grid.n_points();
    let h = grid.spacing();
    let panels = n + 1;
    let mut w = vec![0.0_f64; n];
    // Closed-interval node k = 0..panels; interior sample i corresponds to
    // node k = i + 1. Wall weights are irrelevant (values are zero).
    if panels % 2 == 0 {
        for k in 1..panels {
            w[k - 1] = h / 3.0 * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
    } else {
        // Simpson over nodes 0..panels-3, 3/8 rule over the last 3 panels.
        let m = panels - 3;
        for k in 1..m {
            w[k - 1] = h / 3.0 * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        if m > 0 {
            w[m - 1] = h / 3.0 + 3.0 * h / 8.0;
        }
        w[m] = 3.0 * h / 8.0 * 3.0;
        w[m + 1] = 3.0 * h / 8.0 * 3.0;
    }
    w
}

/// Fornberg weights for the first derivative at `target` over `nodes`
/// (all in the same length unit).
fn fd_weights(target: f64, nodes: &[f64; 9]) -> [f64; 9] {
    const M: usize = 1;
    let n = nodes.len();
    let mut c = [[0.0_f64; M + 1]; 9];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - target;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(M);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - target;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    let mut out = [0.0_f64; 9];
    for (i, row) in c.iter().enumerate() {
        out[i] = row[M];
    }
    out
}
