//! Discrete checks on cusp strips S = [0, 2π) × [Y, Ymax].
//!
//! Fields are sampled on a grid periodic in x. The checks are the finite-window
//! counterparts of the asymptotic statements: every report carries its window
//! and tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ch2::{distance, in_ch2};
use crate::error::{Error, Result};
use crate::exactnum::CVec3;

/// Default constant C in tol = C·max(hx, hy)².
pub const DEFAULT_TOL_CONSTANT: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StripGrid {
    #[serde(rename = "Nx")]
    pub nx: usize,
    #[serde(rename = "Ny")]
    pub ny: usize,
    #[serde(rename = "Y")]
    pub y0: f64,
    #[serde(rename = "Ymax")]
    pub y_max: f64,
}

impl StripGrid {
    pub fn new(nx: usize, ny: usize, y0: f64, y_max: f64) -> Result<Self> {
        let g = Self { nx, ny, y0, y_max };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 8 || self.ny < 8 {
            return Err(Error::InvalidInput("grid needs Nx >= 8 and Ny >= 8".into()));
        }
        if !(self.y0.is_finite() && self.y_max.is_finite() && self.y_max > self.y0) {
            return Err(Error::InvalidInput("grid needs finite Y < Ymax".into()));
        }
        Ok(())
    }

    pub fn hx(&self) -> f64 {
        2.0 * PI / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_max - self.y0) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    /// C·max(hx, hy)²
    pub fn tolerance(&self, c: f64) -> f64 {
        c * self.hx().max(self.hy()).powi(2)
    }
}

/// Samples of U, and optionally of a map F into CH², stored row by row (fixed y).
#[derive(Clone, Debug)]
pub struct StripField {
    grid: StripGrid,
    u: Vec<f64>,
    f: Option<Vec<CVec3<Complex64>>>,
}

impl StripField {
    pub fn from_fn(grid: StripGrid, u: impl Fn(f64, f64) -> f64) -> Result<Self> {
        grid.validate()?;
        let u: Vec<f64> = (0..grid.ny)
            .flat_map(|j| (0..grid.nx).map(move |i| (i, j)))
            .map(|(i, j)| u(grid.x(i), grid.y(j)))
            .collect();
        Self::from_samples(grid, u)
    }

    pub fn from_samples(grid: StripGrid, u: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if u.len() != grid.nx * grid.ny {
            return Err(Error::LengthMismatch {
                expected: grid.nx * grid.ny,
                got: u.len(),
            });
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("U must be finite".into()));
        }
        Ok(Self { grid, u, f: None })
    }

    /// U(x, y) = d(o, F(x, y)).
    pub fn from_map(
        grid: StripGrid,
        o: &CVec3<Complex64>,
        f: impl Fn(f64, f64) -> CVec3<Complex64>,
    ) -> Result<Self> {
        grid.validate()?;
        let mut samples = Vec::with_capacity(grid.nx * grid.ny);
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                samples.push(f(grid.x(i), grid.y(j)));
            }
        }
        if samples.iter().any(|z| !in_ch2(z)) {
            return Err(Error::NotInCh2);
        }
        let u = samples
            .iter()
            .map(|z| distance(o, z))
            .collect::<Result<Vec<_>>>()?;
        let mut field = Self::from_samples(grid, u)?;
        field.f = Some(samples);
        Ok(field)
    }

    pub fn grid(&self) -> &StripGrid {
        &self.grid
    }

    pub fn u(&self, i: usize, j: usize) -> f64 {
        self.u[j * self.grid.nx + i % self.grid.nx]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.u[j * self.grid.nx..(j + 1) * self.grid.nx]
    }

    pub fn map_samples(&self) -> Option<&[CVec3<Complex64>]> {
        self.f.as_deref()
    }

    /// Five-point Laplacian at an interior row, periodic in x.
    pub fn laplacian(&self, i: usize, j: usize) -> f64 {
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let nx = self.grid.nx;
        let c = self.u(i, j);
        let uxx = (self.u(i + 1, j) - 2.0 * c + self.u(i + nx - 1, j)) / (hx * hx);
        let uyy = (self.u(i, j + 1) - 2.0 * c + self.u(i, j - 1)) / (hy * hy);
        uxx + uyy
    }
}

/// m(y) = (1/2π)∫ U dx by the periodic trapezoid rule.
pub fn mean_function(s: &StripField) -> Vec<f64> {
    (0..s.grid.ny)
        .map(|j| s.row(j).iter().sum::<f64>() / s.grid.nx as f64)
        .collect()
}

/// 𝒜(y) = (∫ U_x² dx)^(1/2) with centered periodic differences.
pub fn oscillation_a(s: &StripField) -> Vec<f64> {
    let hx = s.grid.hx();
    let nx = s.grid.nx;
    (0..s.grid.ny)
        .map(|j| {
            let sum: f64 = (0..nx)
                .map(|i| {
                    let d = (s.u(i + 1, j) - s.u(i + nx - 1, j)) / (2.0 * hx);
                    d * d
                })
                .sum();
            (sum * hx).sqrt()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityRow {
    pub y: f64,
    /// Discrete m''(y).
    pub second_difference: f64,
    /// m''(y) + tol
    pub slack: f64,
    /// min over x of ΔU + tol
    pub laplacian_slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityReport {
    pub window: [f64; 2],
    pub tol: f64,
    /// ΔU ≥ −tol at every interior node.
    pub precondition_holds: bool,
    pub convex: bool,
    pub passes: bool,
    pub worst_slack: f64,
    pub rows: Vec<ConvexityRow>,
}

pub fn check_mean_convexity(s: &StripField, tol: f64) -> ConvexityReport {
    let g = &s.grid;
    let m = mean_function(s);
    let hy2 = g.hy() * g.hy();
    let rows: Vec<ConvexityRow> = (1..g.ny - 1)
        .map(|j| {
            let d2 = (m[j + 1] - 2.0 * m[j] + m[j - 1]) / hy2;
            let lap = (0..g.nx).map(|i| s.laplacian(i, j)).fold(f64::INFINITY, f64::min);
            ConvexityRow {
                y: g.y(j),
                second_difference: d2,
                slack: d2 + tol,
                laplacian_slack: lap + tol,
            }
        })
        .collect();
    let precondition_holds = rows.iter().all(|r| r.laplacian_slack >= 0.0);
    let convex = rows.iter().all(|r| r.slack >= 0.0);
    let worst_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    ConvexityReport {
        window: [g.y0, g.y_max],
        tol,
        precondition_holds,
        convex,
        passes: precondition_holds && convex,
        worst_slack,
        rows,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SupBoundRow {
    pub y: f64,
    /// U(0, y)
    pub lhs: f64,
    /// sup m + √(2π) 𝒜(y)
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupBoundReport {
    pub window: [f64; 2],
    pub tol: f64,
    pub sup_mean: f64,
    pub passes: bool,
    pub worst_slack: f64,
    pub rows: Vec<SupBoundRow>,
}

/// U(0, y) ≤ sup_t m(t) + √(2π)𝒜(y) + tol at every row, sup over the window.
pub fn check_sup_bound(s: &StripField, tol: f64) -> SupBoundReport {
    let g = &s.grid;
    let m = mean_function(s);
    let a = oscillation_a(s);
    let sup_mean = m.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let root = (2.0 * PI).sqrt();
    let rows: Vec<SupBoundRow> = (0..g.ny)
        .map(|j| {
            let lhs = s.u(0, j);
            let rhs = sup_mean + root * a[j];
            SupBoundRow {
                y: g.y(j),
                lhs,
                rhs,
                slack: rhs + tol - lhs,
            }
        })
        .collect();
    let worst_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    SupBoundReport {
        window: [g.y0, g.y_max],
        tol,
        sup_mean,
        passes: worst_slack >= 0.0,
        worst_slack,
        rows,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub tol: f64,
    pub passes: bool,
    /// min over nodes of d(F(x+hx), F(x)) + tol − |U(x+hx) − U(x)|
    pub worst_slack: f64,
}

/// |U(x+hx, y) − U(x, y)| ≤ d(F(x+hx, y), F(x, y)) + tol at every node.
pub fn check_distance_lipschitz(
    s: &StripField,
    o: &CVec3<Complex64>,
    tol: f64,
) -> Result<LipschitzReport> {
    let f = s
        .map_samples()
        .ok_or_else(|| Error::InvalidInput("field carries no map samples".into()))?;
    let g = &s.grid;
    let mut worst = f64::INFINITY;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let a = &f[j * g.nx + i];
            let b = &f[j * g.nx + (i + 1) % g.nx];
            let du = (distance(o, b)? - distance(o, a)?).abs();
            worst = worst.min(distance(a, b)? + tol - du);
        }
    }
    Ok(LipschitzReport {
        tol,
        passes: worst >= 0.0,
        worst_slack: worst,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TailWitness {
    Found { y: f64, index: usize },
    NotFound { window: [f64; 2] },
}

/// Smallest sampled y with |g(y)| < ε.
pub fn l2_tail_witness(ys: &[f64], g: &[f64], eps: f64) -> Result<TailWitness> {
    if ys.len() != g.len() {
        return Err(Error::LengthMismatch {
            expected: ys.len(),
            got: g.len(),
        });
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    Ok(match g.iter().position(|v| v.abs() < eps) {
        Some(index) => TailWitness::Found { y: ys[index], index },
        None => TailWitness::NotFound {
            window: [ys.first().copied().unwrap_or(f64::NAN), ys.last().copied().unwrap_or(f64::NAN)],
        },
    })
}

/// a·e^{−ky} cos(kx + φ), harmonic in (x, y).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicMode {
    pub k: u32,
    pub a: f64,
    pub phi: f64,
}

/// U = Σ modes + b0 + b1·y + b2·y² + b3·e^{−y} with b2, b3 ≥ 0.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SubharmonicSpec {
    #[serde(default)]
    pub modes: Vec<HarmonicMode>,
    #[serde(default)]
    pub g: [f64; 4],
}

impl SubharmonicSpec {
    /// Modes k ≤ 4 with |a| ≤ 1, so the stencil error stays below C·h² for Y ≥ 1.
    pub fn random<R: Rng>(rng: &mut R) -> Self {
        let modes = (0..rng.gen_range(0..=4))
            .map(|_| HarmonicMode {
                k: rng.gen_range(1..=4),
                a: rng.gen_range(-1.0..1.0),
                phi: rng.gen_range(0.0..2.0 * PI),
            })
            .collect();
        let g = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(0.0..0.5),
            rng.gen_range(0.0..2.0),
        ];
        Self { modes, g }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.iter().any(|m| m.k == 0 || !m.a.is_finite() || !m.phi.is_finite()) {
            return Err(Error::InvalidInput("modes need k >= 1 and finite coefficients".into()));
        }
        if self.g.iter().any(|b| !b.is_finite()) || self.g[2] < 0.0 || self.g[3] < 0.0 {
            return Err(Error::InvalidInput("g needs finite coefficients with b2, b3 >= 0".into()));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let h: f64 = self
            .modes
            .iter()
            .map(|m| {
                let k = f64::from(m.k);
                m.a * (-k * y).exp() * (k * x + m.phi).cos()
            })
            .sum();
        let [b0, b1, b2, b3] = self.g;
        h + b0 + b1 * y + b2 * y * y + b3 * (-y).exp()
    }

    /// ΔU = 2·b2 + b3·e^{−y}
    pub fn laplacian(&self, y: f64) -> f64 {
        2.0 * self.g[2] + self.g[3] * (-y).exp()
    }
}

pub fn make_subharmonic_sample(grid: StripGrid, spec: &SubharmonicSpec) -> Result<StripField> {
    spec.validate()?;
    StripField::from_fn(grid, |x, y| spec.eval(x, y))
}

/// log2(e_k / e_{k+1}) for errors on successively doubled grids.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ch2::boost;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn grid(nx: usize, ny: usize) -> StripGrid {
        StripGrid::new(nx, ny, 1.0, 20.0).unwrap()
    }

    fn e3() -> CVec3<Complex64> {
        [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
    }

    #[test]
    fn grid_validation_and_json() {
        assert!(StripGrid::new(4, 16, 1.0, 2.0).is_err());
        assert!(StripGrid::new(16, 16, 2.0, 1.0).is_err());
        let g: StripGrid = serde_json::from_str(r#"{"Nx":256,"Ny":256,"Y":1.0,"Ymax":20.0}"#).unwrap();
        assert_eq!(g, grid(256, 256));
        assert!((g.hx() - 2.0 * PI / 256.0).abs() < 1e-15);
    }

    #[test]
    fn mean_examples() {
        let g = grid(64, 32);
        let c = StripField::from_fn(g, |_, _| 3.5).unwrap();
        assert!(mean_function(&c).iter().all(|m| (m - 3.5).abs() < 1e-14));
        let cos = StripField::from_fn(g, |x, _| x.cos()).unwrap();
        assert!(mean_function(&cos).iter().all(|m| m.abs() < 1e-15));
        let s = StripField::from_fn(g, |x, y| y + (-y).exp() * x.cos()).unwrap();
        for (m, y) in mean_function(&s).iter().zip(g.ys()) {
            assert!((m - y).abs() < 1e-13);
        }
    }

    #[test]
    fn oscillation_examples() {
        let g = grid(64, 16);
        let c = StripField::from_fn(g, |_, _| -2.0).unwrap();
        assert!(oscillation_a(&c).iter().all(|&a| a == 0.0));
        let cos = StripField::from_fn(g, |x, _| x.cos()).unwrap();
        let a = oscillation_a(&cos)[0];
        assert!((a - PI.sqrt()).abs() < g.hx().powi(2));
    }

    #[test]
    fn oscillation_converges_at_second_order() {
        let errors: Vec<f64> = [64, 128, 256]
            .iter()
            .map(|&nx| {
                let f = StripField::from_fn(grid(nx, 8), |x, _| x.cos()).unwrap();
                (oscillation_a(&f)[0] - PI.sqrt()).abs()
            })
            .collect();
        for order in observed_orders(&errors) {
            assert!((order - 2.0).abs() < 0.05, "{order}");
        }
    }

    #[test]
    fn convexity_examples() {
        let g = grid(32, 64);
        let tol = g.tolerance(DEFAULT_TOL_CONSTANT);
        let lin = check_mean_convexity(&StripField::from_fn(g, |_, y| y).unwrap(), tol);
        assert!(lin.passes);
        assert!(lin.rows.iter().all(|r| r.second_difference.abs() < 1e-9));
        let quad = check_mean_convexity(&StripField::from_fn(g, |_, y| y * y).unwrap(), tol);
        assert!(quad.passes);
        assert!(quad.rows.iter().all(|r| (r.second_difference - 2.0).abs() < 1e-8));
        // Concave in y: the precondition fails and is reported.
        let bad = check_mean_convexity(&StripField::from_fn(g, |_, y| -y * y).unwrap(), tol);
        assert!(!bad.precondition_holds && !bad.passes);
    }

    #[test]
    fn sup_bound_examples() {
        let g = grid(64, 16);
        let c = check_sup_bound(&StripField::from_fn(g, |_, _| 1.0).unwrap(), 0.0);
        assert!(c.passes);
        assert!(c.worst_slack.abs() < 1e-14);
        let cos = check_sup_bound(&StripField::from_fn(g, |x, _| x.cos()).unwrap(), 1e-12);
        assert!(cos.passes);
        assert!((cos.rows[0].rhs - (2.0 * PI).sqrt() * PI.sqrt()).abs() < 0.01);
    }

    #[test]
    fn lipschitz_examples() {
        let g = grid(16, 8);
        let o = e3();
        let constant = StripField::from_map(g, &o, |_, _| geodesic(0.7)).unwrap();
        let r = check_distance_lipschitz(&constant, &o, 1e-9).unwrap();
        assert!(r.passes && (r.worst_slack - 1e-9).abs() < 1e-12);
        // Along a geodesic through o, on one side of o, the inequality is an equality.
        let along = StripField::from_map(g, &o, |x, y| geodesic(0.1 + x.sin() + 1.5 + y / 10.0)).unwrap();
        let r = check_distance_lipschitz(&along, &o, 1e-9).unwrap();
        assert!(r.passes && r.worst_slack < 1e-8);
        let plain = StripField::from_fn(g, |_, _| 0.0).unwrap();
        assert!(check_distance_lipschitz(&plain, &o, 1e-9).is_err());
    }

    fn geodesic(t: f64) -> CVec3<Complex64> {
        boost(t).mul_vec(&e3())
    }

    #[test]
    fn tail_witness_examples() {
        let ys: Vec<f64> = (0..=990).map(|k| 1.0 + k as f64 * 0.1).collect();
        let g: Vec<f64> = ys.iter().map(|y| 1.0 / y).collect();
        match l2_tail_witness(&ys, &g, 0.1).unwrap() {
            TailWitness::Found { y, .. } => assert!(y > 10.0 && y < 10.2),
            other => panic!("{other:?}"),
        }
        let zero = vec![0.0; ys.len()];
        assert_eq!(l2_tail_witness(&ys, &zero, 0.1).unwrap(), TailWitness::Found { y: 1.0, index: 0 });
        let one = vec![1.0; ys.len()];
        assert!(matches!(l2_tail_witness(&ys, &one, 0.5).unwrap(), TailWitness::NotFound { .. }));
    }

    #[test]
    fn generator_examples() {
        let g = grid(64, 64);
        let zero = make_subharmonic_sample(g, &SubharmonicSpec::default()).unwrap();
        assert!(zero.row(10).iter().all(|&u| u == 0.0));
        let one_mode = SubharmonicSpec {
            modes: vec![HarmonicMode { k: 1, a: 1.0, phi: 0.0 }],
            g: [0.0; 4],
        };
        let f = make_subharmonic_sample(g, &one_mode).unwrap();
        let tol = g.tolerance(DEFAULT_TOL_CONSTANT);
        for j in 1..g.ny - 1 {
            for i in 0..g.nx {
                assert!(f.laplacian(i, j).abs() < tol);
            }
        }
        let bad = SubharmonicSpec { modes: vec![], g: [0.0, 0.0, -1.0, 0.0] };
        assert!(make_subharmonic_sample(g, &bad).is_err());
    }

    #[test]
    fn random_fields_pass_both_checks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = grid(128, 128);
        let tol = g.tolerance(DEFAULT_TOL_CONSTANT);
        for _ in 0..5 {
            let spec = SubharmonicSpec::random(&mut rng);
            let f = make_subharmonic_sample(g, &spec).unwrap();
            assert!(check_mean_convexity(&f, tol).passes);
            assert!(check_sup_bound(&f, tol).passes);
        }
    }
}
