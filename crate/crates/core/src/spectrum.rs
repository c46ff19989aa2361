//! The limiting singular-value density of the Z-shape, the linear ODEs
//! satisfied by the Z and 3-layer densities, and the numerics used to
//! work with them: adaptive Gauss–Kronrod quadrature with
//! singularity-absorbing substitutions, an adaptive Dormand–Prince
//! solver for backward integration from the spectral edge, and density
//! tables with moment/CDF/local-exponent utilities.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpectrumError {
    #[error("edge offset eps must lie in (0, edge), got {0}")]
    BadEps(f64),
    #[error("ODE step size underflow at x = {0}")]
    StepUnderflow(f64),
    #[error("density table needs at least two grid points")]
    TableTooSmall,
}

/// Right edge a = 3√3/2 of the Z-shape density support (a² = 27/4).
pub fn z_edge() -> f64 {
    1.5 * 3.0_f64.sqrt()
}

/// Right edge a = 16/(3√3) of the 3-layer density support (a² = 256/27).
pub fn three_layer_edge() -> f64 {
    16.0 / (3.0 * 3.0_f64.sqrt())
}

/// The inner variable z(x) ∈ (0, 1] of the Z density, in the
/// cancellation-free rationalized form
/// `z = 2x² / (27 − 2x² + 9√(9 − 4x²/3))`
/// (equal to `(27 − 2x² − 9√(9 − 4x²/3)) / (2x²)`, which loses ~3
/// digits near the origin). z/x² → 1/27 as x → 0, z(a) = 1.
pub fn z_inner(x: f64) -> f64 {
    let w2 = (9.0 - 4.0 * x * x / 3.0).max(0.0);
    2.0 * x * x / (27.0 - 2.0 * x * x + 9.0 * w2.sqrt())
}

/// Limiting singular-value density of the normalized Z-shape matrix:
/// `f(x) = −(1/π)(z^{1/6} − z^{−1/6})` on (0, a), 0 outside.
/// Behaves like `27^{1/6}/π · x^{−1/3}` at the origin and like
/// `c √(a − x)` at the edge.
pub fn density_z(x: f64) -> f64 {
    if x <= 0.0 || x >= z_edge() {
        return 0.0;
    }
    let p = z_inner(x).powf(1.0 / 6.0);
    -(p - 1.0 / p) / PI
}

/// The same density through the complex closed form
/// `2 Re[(i/π)(√3 sin G + cos G)]` with
/// `G = (1/3) arctan(3 / √(4x²/3 − 9))`. Inside the support the
/// arctangent argument is purely imaginary with modulus ≥ 1 — on the
/// principal branch cut — so it is evaluated through the identity
/// `arctan(iy) = (i/2) ln((1+y)/(1−y))` with the principal complex log.
/// Agrees with `density_z` to ~1e-12; kept as an independent cross-check
/// of the branch bookkeeping.
pub fn density_z_complex(x: f64) -> f64 {
    if x <= 0.0 || x >= z_edge() {
        return 0.0;
    }
    // 3/√(4x²/3 − 9) = i·y with y = −3/√(9 − 4x²/3). The log argument
    // (1+y)/(1−y) = (w−3)/(w+3) with w = √(9 − 4x²/3) rationalizes to
    // exactly −z (computing 1+y directly cancels catastrophically near
    // the origin). The arctangent limit from inside the support
    // corresponds to approaching the log's cut from below (arg = −π),
    // hence the −0.0.
    let ratio = Complex64::new(-z_inner(x), -0.0);
    let g = Complex64::i() * ratio.ln() / 2.0 / 3.0;
    let val = Complex64::i() / PI * (3.0_f64.sqrt() * g.sin() + g.cos());
    2.0 * val.re
}

/// Closed-form derivative of `density_z`:
/// `f'(x) = −(1/π)(z^{1/6} + z^{−1/6}) / (x √(9 − 4x²/3))`,
/// using z'/z = 6/(x√(9 − 4x²/3)).
pub fn density_z_derivative(x: f64) -> f64 {
    let w = (9.0 - 4.0 * x * x / 3.0).sqrt();
    let p = z_inner(x).powf(1.0 / 6.0);
    -(p + 1.0 / p) / (PI * x * w)
}

/// Closed-form second derivative of `density_z` (differentiating the
/// first-derivative formula once more).
pub fn density_z_second_derivative(x: f64) -> f64 {
    let w2 = 9.0 - 4.0 * x * x / 3.0;
    let w = w2.sqrt();
    let p = z_inner(x).powf(1.0 / 6.0);
    let diff = p - 1.0 / p;
    let sum = p + 1.0 / p;
    -(diff - sum * (9.0 - 8.0 * x * x / 3.0) / w) / (PI * x * x * w2)
}

/// A homogeneous linear ODE `Σ_k c_k(x) f^{(k)}(x) = 0` with polynomial
/// coefficients, up to third order.
#[derive(Debug, Clone, Copy)]
pub struct LinearOde {
    pub order: usize,
    /// `coeffs(x)[k]` multiplies `f^{(k)}`; entries above `order` are 0.
    pub coeffs: fn(f64) -> [f64; 4],
}

/// The Z-shape density ODE: `(4x⁴ − 27x²) f″ + (8x³ − 27x) f′ + 3 f = 0`.
pub fn ode_z() -> LinearOde {
    LinearOde {
        order: 2,
        coeffs: |x| {
            let x2 = x * x;
            [3.0, 8.0 * x2 * x - 27.0 * x, 4.0 * x2 * x2 - 27.0 * x2, 0.0]
        },
    }
}

/// The 3-layer density ODE:
/// `(27x⁴ − 256x²) f‴ + (162x³ − 768x) f″ + (177x² − 192) f′ + 15x f = 0`.
/// The f′ coefficient has constant term −192: the factorization
/// `177x² − 192 = (3/4)(209x² + 27x² − 256)` used at the spectral edge
/// only works with the constant, not a `−192x` term.
pub fn ode_3z() -> LinearOde {
    LinearOde {
        order: 3,
        coeffs: |x| {
            let x2 = x * x;
            [
                15.0 * x,
                177.0 * x2 - 192.0,
                162.0 * x2 * x - 768.0 * x,
                27.0 * x2 * x2 - 256.0 * x2,
            ]
        },
    }
}

impl LinearOde {
    /// Plain residual `Σ_k c_k(x) d_k` for supplied derivative values
    /// `derivs[k] = f^{(k)}(x)`.
    pub fn residual(&self, x: f64, derivs: &[f64]) -> f64 {
        let c = (self.coeffs)(x);
        derivs.iter().enumerate().map(|(k, &d)| c[k] * d).sum()
    }

    /// Residual divided by the largest term magnitude, so "satisfies the
    /// ODE" is scale-free.
    pub fn relative_residual(&self, x: f64, derivs: &[f64]) -> f64 {
        let c = (self.coeffs)(x);
        let terms: Vec<f64> = derivs.iter().enumerate().map(|(k, &d)| c[k] * d).collect();
        let sum: f64 = terms.iter().sum();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        if scale == 0.0 {
            0.0
        } else {
            sum.abs() / scale
        }
    }

    /// Highest derivative solved from the lower ones (the first-order
    /// system right-hand side).
    fn top_derivative(&self, x: f64, y: &[f64]) -> f64 {
        let c = (self.coeffs)(x);
        let low: f64 = y.iter().enumerate().map(|(k, &d)| c[k] * d).sum();
        -low / c[self.order]
    }
}

// --- Gauss–Kronrod 7-15 quadrature ---

/// Kronrod nodes on [0, 1] half-interval (symmetric), weights, and the
/// embedded Gauss-7 weights at the odd-indexed nodes.
const GK_NODES: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for (i, (&t, &w)) in GK_NODES.iter().zip(&GK_WEIGHTS).enumerate() {
        let pair = if t == 0.0 { f(c) } else { f(c - h * t) + f(c + h * t) };
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * pair;
        }
    }
    let value = kronrod * h;
    let err = ((kronrod - gauss) * h).abs();
    (value, err)
}

/// Adaptive bisection Gauss–Kronrod quadrature of `f` over [a, b] to
/// absolute tolerance `tol`.
pub fn adaptive_quad(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, floor: f64, depth: u32) -> f64 {
        let (v, e) = gk15(f, a, b);
        // stop at the requested tolerance, at the machine-precision floor
        // of the whole integral, or at depth 30 (interval width 2^-30 of
        // the original)
        if e <= tol.max(floor) || depth >= 30 {
            return v;
        }
        let c = 0.5 * (a + b);
        rec(f, a, c, 0.5 * tol, floor, depth + 1) + rec(f, c, b, 0.5 * tol, floor, depth + 1)
    }
    let (v0, _) = gk15(&f, a, b);
    let floor = 1e-15 * v0.abs();
    rec(&f, a, b, tol, floor, 0)
}

/// `∫₀^edge x^{2k} f(x) dx` for a density with an integrable `x^{−1/3}`
/// origin singularity and a `√(edge − x)` edge. Split at `x₀ = edge/10`;
/// the substitution `x = s³` absorbs the origin (integrand
/// `3s² (s³)^{2k} f(s³)`), and `x = edge·sin θ` absorbs the edge
/// square root.
pub fn moment_of_density(f: impl Fn(f64) -> f64, edge: f64, k: u32) -> f64 {
    let x0 = 0.1 * edge;
    let tol = 1e-12;
    let power = 2 * k as i32;
    let origin = adaptive_quad(
        |s| {
            let x = s * s * s;
            3.0 * s * s * x.powi(power) * f(x)
        },
        0.0,
        x0.cbrt(),
        tol,
    );
    let theta0 = (x0 / edge).asin();
    let bulk = adaptive_quad(
        |theta| {
            let x = edge * theta.sin();
            edge * theta.cos() * x.powi(power) * f(x)
        },
        theta0,
        0.5 * PI,
        tol,
    );
    origin + bulk
}

// --- Dormand–Prince 5(4) ---

const DP_C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One accepted solver step: position, state vector, and its derivative
/// (the lowest `order` derivatives of f, and their slopes).
#[derive(Debug, Clone)]
struct OdeNode {
    x: f64,
    y: Vec<f64>,
    dy: Vec<f64>,
}

fn ode_rhs(ode: &LinearOde, x: f64, y: &[f64]) -> Vec<f64> {
    let mut dy = Vec::with_capacity(y.len());
    dy.extend_from_slice(&y[1..]);
    dy.push(ode.top_derivative(x, y));
    dy
}

/// Integrates `ode` from `x_start` down to `x_end < x_start` with the
/// adaptive Dormand–Prince 5(4) pair at mixed tolerance `tol`,
/// returning accepted nodes in decreasing x. The initial state is
/// `y0 = [f, f', …]` at `x_start`.
fn integrate_backward(
    ode: &LinearOde,
    x_start: f64,
    x_end: f64,
    y0: Vec<f64>,
    tol: f64,
) -> Result<Vec<OdeNode>, SpectrumError> {
    let mut x = x_start;
    let mut y = y0;
    let mut dy = ode_rhs(ode, x, &y);
    let mut nodes = vec![OdeNode { x, y: y.clone(), dy: dy.clone() }];
    let mut h = -(x_start - x_end) * 1e-6;
    let min_h = (x_start - x_end) * 1e-14;

    while x > x_end {
        if -h > x - x_end {
            h = -(x - x_end);
        }
        if -h < min_h {
            return Err(SpectrumError::StepUnderflow(x));
        }
        // stage derivatives
        let mut k = vec![dy.clone()];
        for s in 1..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = DP_A[s][j];
                if a != 0.0 {
                    for (yi, ki) in ys.iter_mut().zip(kj) {
                        *yi += h * a * ki;
                    }
                }
            }
            k.push(ode_rhs(ode, x + DP_C[s] * h, &ys));
        }
        // 5th-order solution is stage row 6 of A (FSAL)
        let mut y5 = y.clone();
        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            let mut acc = 0.0;
            let mut e = 0.0;
            for s in 0..7 {
                if s < 6 {
                    acc += DP_A[6][s] * k[s][i];
                }
                e += DP_E[s] * k[s][i];
            }
            y5[i] += h * acc;
            let scale = 1.0 + y[i].abs().max(y5[i].abs());
            err = err.max((h * e / scale).abs());
        }
        if err <= tol {
            x += h;
            y = y5;
            dy = k[6].clone(); // FSAL: last stage is f(x+h, y5)
            nodes.push(OdeNode { x, y: y.clone(), dy: dy.clone() });
        }
        let factor = if err > 0.0 { 0.9 * (tol / err).powf(0.2) } else { 5.0 };
        h *= factor.clamp(0.2, 5.0);
    }
    Ok(nodes)
}

/// A tabulated density on a uniform grid over [x_min, x_max], with the
/// support edge recorded for moment/CDF bookkeeping. Values below x_min
/// are modeled as the `x^{−1/3}` envelope matched at x_min.
#[derive(Debug, Clone)]
pub struct DensityTable {
    pub xs: Vec<f64>,
    pub fs: Vec<f64>,
    pub edge: f64,
}

impl DensityTable {
    /// Linear interpolation inside the grid; envelope continuation below
    /// x_min; 0 above the edge.
    pub fn eval(&self, x: f64) -> f64 {
        let (x0, x1) = (self.xs[0], *self.xs.last().unwrap());
        if x >= self.edge {
            return 0.0;
        }
        if x <= 0.0 {
            return 0.0;
        }
        if x < x0 {
            return self.fs[0] * (x0 / x).cbrt();
        }
        if x >= x1 {
            return *self.fs.last().unwrap();
        }
        let step = (x1 - x0) / (self.xs.len() - 1) as f64;
        let i = ((x - x0) / step) as usize;
        let t = (x - self.xs[i]) / step;
        self.fs[i] * (1.0 - t) + self.fs[i + 1] * t
    }

    /// `∫ x^{2k} f` over the table, trapezoidal, plus the origin-envelope
    /// correction `∫₀^{x_min} x^{2k} · f(x_min)(x_min/x)^{1/3} dx` (only
    /// noticeable for k = 0).
    pub fn moment(&self, k: u32) -> f64 {
        let p = 2 * k as i32;
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            let g0 = self.xs[i - 1].powi(p) * self.fs[i - 1];
            let g1 = self.xs[i].powi(p) * self.fs[i];
            acc += 0.5 * (g0 + g1) * (self.xs[i] - self.xs[i - 1]);
        }
        // ∫₀^{x0} x^{2k - 1/3} dx · f(x0) x0^{1/3} = f(x0) x0^{2k+1} / (2k + 2/3)
        let x0 = self.xs[0];
        acc + self.fs[0] * x0.powi(p) * x0 / (2.0 * k as f64 + 2.0 / 3.0)
    }

    /// Rescales so the k = 0 moment is 1.
    pub fn normalize(&mut self) {
        let total = self.moment(0);
        for f in &mut self.fs {
            *f /= total;
        }
    }

    /// Sup distance to a reference function over [lo, hi], sampled on the
    /// table grid restricted to the window.
    pub fn sup_distance(&self, reference: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        self.xs
            .iter()
            .filter(|&&x| x >= lo && x <= hi)
            .map(|&x| (self.eval(x) - reference(x)).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples accepted solver nodes onto a uniform grid by cubic Hermite
/// interpolation of the value component.
fn table_from_nodes(
    nodes: &[OdeNode],
    edge: f64,
    grid_points: usize,
) -> Result<DensityTable, SpectrumError> {
    if nodes.len() < 2 || grid_points < 2 {
        return Err(SpectrumError::TableTooSmall);
    }
    // nodes are in decreasing x
    let x_lo = nodes.last().unwrap().x;
    let x_hi = nodes[0].x;
    let step = (x_hi - x_lo) / (grid_points - 1) as f64;
    let mut xs = Vec::with_capacity(grid_points);
    let mut fs = Vec::with_capacity(grid_points);
    let mut seg = nodes.len() - 1; // segment [nodes[seg], nodes[seg-1]]
    for g in 0..grid_points {
        let x = x_lo + g as f64 * step;
        while seg > 1 && x > nodes[seg - 1].x {
            seg -= 1;
        }
        let (l, r) = (&nodes[seg], &nodes[seg - 1]);
        let h = r.x - l.x;
        let t = ((x - l.x) / h).clamp(0.0, 1.0);
        let (t2, t3) = (t * t, t * t * t);
        let val = (2.0 * t3 - 3.0 * t2 + 1.0) * l.y[0]
            + (t3 - 2.0 * t2 + t) * h * l.dy[0]
            + (-2.0 * t3 + 3.0 * t2) * r.y[0]
            + (t3 - t2) * h * r.dy[0];
        xs.push(x);
        fs.push(val);
    }
    Ok(DensityTable { xs, fs, edge })
}

/// Fraction of the support (relative to the edge) kept below the table:
/// integration stops at `x_min = 1e-3 · edge`.
pub const ODE_X_MIN_FRACTION: f64 = 1e-3;

const ODE_TOL: f64 = 1e-10;
const ODE_GRID: usize = 4000;

/// Solves the Z ODE backward from `x = a − eps` with the square-root
/// edge model `f = √(a − x)` as initial data, down to `x = 1e-3·a`,
/// and normalizes the result to unit mass. As eps → 0 the normalized
/// solution converges to `density_z`.
pub fn solve_ode_z(eps: f64) -> Result<DensityTable, SpectrumError> {
    let a = z_edge();
    if !(eps > 0.0 && eps < a) {
        return Err(SpectrumError::BadEps(eps));
    }
    let y0 = vec![eps.sqrt(), -0.5 / eps.sqrt()];
    let nodes = integrate_backward(&ode_z(), a - eps, ODE_X_MIN_FRACTION * a, y0, ODE_TOL)?;
    let mut table = table_from_nodes(&nodes, a, ODE_GRID)?;
    table.normalize();
    Ok(table)
}

/// Solves the 3-layer ODE backward from `x = a − eps` with the two-term
/// edge model `f = (a−x)^{1/2} + c₃ (a−x)^{3/2}`, c₃ = 209/(192√3),
/// down to `x = 1e-3·a`, normalized to unit mass.
pub fn solve_ode_3z(eps: f64) -> Result<DensityTable, SpectrumError> {
    let a = three_layer_edge();
    if !(eps > 0.0 && eps < a) {
        return Err(SpectrumError::BadEps(eps));
    }
    let c3 = 209.0 / (64.0 * 3.0 * 3.0_f64.sqrt());
    let (s, s3) = (eps.sqrt(), eps.sqrt() * eps);
    let y0 = vec![
        s + c3 * s3,
        -0.5 / s - 1.5 * c3 * s,
        -0.25 / s3 + 0.75 * c3 / s,
    ];
    let nodes = integrate_backward(&ode_3z(), a - eps, ODE_X_MIN_FRACTION * a, y0, ODE_TOL)?;
    let mut table = table_from_nodes(&nodes, a, ODE_GRID)?;
    table.normalize();
    Ok(table)
}

/// Least-squares slope of `ln v` against `ln u` — the local power-law
/// exponent of v(u).
pub fn log_log_slope(us: &[f64], vs: &[f64]) -> f64 {
    let n = us.len() as f64;
    let (mut su, mut sv, mut suu, mut suv) = (0.0, 0.0, 0.0, 0.0);
    for (&u, &v) in us.iter().zip(vs) {
        let (lu, lv) = (u.ln(), v.ln());
        su += lu;
        sv += lv;
        suu += lu * lu;
        suv += lu * lv;
    }
    (n * suv - su * sv) / (n * suu - su * su)
}

/// Power-law exponent of the table against `edge − x`, fit over
/// `x ∈ [edge − window_lo, edge − window_hi]` (so `window_hi < window_lo`
/// are distances from the edge).
pub fn edge_exponent(table: &DensityTable, window_lo: f64, window_hi: f64) -> f64 {
    let pairs: Vec<(f64, f64)> = table
        .xs
        .iter()
        .zip(&table.fs)
        .filter(|&(&x, &f)| {
            let d = table.edge - x;
            d >= window_hi && d <= window_lo && f > 0.0
        })
        .map(|(&x, &f)| (table.edge - x, f))
        .collect();
    let us: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let vs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    log_log_slope(&us, &vs)
}

/// Power-law exponent of the table against `x` near the origin, fit over
/// `x ∈ [lo, hi]`.
pub fn origin_exponent(table: &DensityTable, lo: f64, hi: f64) -> f64 {
    let pairs: Vec<(f64, f64)> = table
        .xs
        .iter()
        .zip(&table.fs)
        .filter(|&(&x, &f)| x >= lo && x <= hi && f > 0.0)
        .map(|(&x, &f)| (x, f))
        .collect();
    let us: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let vs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    log_log_slope(&us, &vs)
}

/// Tabulated CDF `F(x) = ∫₀^x g` of a density on [0, edge], built by
/// per-segment Gauss–Kronrod quadrature (with the cube-root substitution
/// on the first segment) and normalized so F(edge) = 1.
#[derive(Debug, Clone)]
pub struct CdfTable {
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
}

impl CdfTable {
    pub fn build(density: impl Fn(f64) -> f64, edge: f64, points: usize) -> Self {
        let step = edge / (points - 1) as f64;
        let xs: Vec<f64> = (0..points).map(|i| i as f64 * step).collect();
        let mut ps = vec![0.0; points];
        for i in 1..points {
            let seg = if i == 1 {
                // absorb the x^{-1/3} origin behavior
                adaptive_quad(
                    |s| 3.0 * s * s * density(s * s * s),
                    0.0,
                    xs[1].cbrt(),
                    1e-12,
                )
            } else {
                adaptive_quad(&density, xs[i - 1], xs[i], 1e-12)
            };
            ps[i] = ps[i - 1] + seg;
        }
        let total = ps[points - 1];
        for p in &mut ps {
            *p /= total;
        }
        CdfTable { xs, ps }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let last = *self.xs.last().unwrap();
        if x >= last {
            return 1.0;
        }
        let step = last / (self.xs.len() - 1) as f64;
        let i = (x / step) as usize;
        let t = (x - self.xs[i]) / step;
        self.ps[i] * (1.0 - t) + self.ps[i + 1] * t
    }
}
