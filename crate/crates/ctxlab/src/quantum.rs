//! Quantum model generation: states, dichotomic observables, and the Born
//! rule over a measurement cover.
//!
//! Complex linear algebra is implemented here directly over `f64` pairs;
//! dimensions are capped at [`MAX_DIM`], so dense arithmetic is cheap.
//! Structural checks (projectors, commutation) use [`STRUCTURAL_TOL`];
//! probability checks use [`PROBABILISTIC_TOL`]. Born probabilities are
//! snapped to nearest rationals with bounded denominator so the rest of the
//! crate stays exact.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

pub use num_complex::Complex64;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::model::{EmpiricalModel, MeasurementCover};
use crate::{Error, Int, Rat, Result};

/// Hilbert space dimension cap.
pub const MAX_DIM: usize = 16;
/// Spatial dimension cap for Kochen-Specker ray inputs.
pub const MAX_RAY_DIM: usize = 8;
/// Tolerance for structural matrix identities (projector, commutation).
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for probability identities (normalization).
pub const PROBABILISTIC_TOL: f64 = 1e-12;
/// Default denominator bound when snapping Born probabilities to rationals.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 1 << 20;

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a {}-row matrix",
                    r.len(),
                    dim
                )));
            }
        }
        Ok(Self {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix {
            dim: self.dim,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    /// Kronecker product; the left factor is the most significant index
    /// block, matching the `|site 0, site 1, ...>` basis convention.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (da, db) = (self.dim, other.dim);
        let d = da * db;
        let mut out = CMatrix::zeros(d);
        for ia in 0..da {
            for ja in 0..da {
                let a = self.data[ia * da + ja];
                if a == Complex64::ZERO {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        out.data[(ia * db + ib) * d + (ja * db + jb)] =
                            a * other.data[ib * db + jb];
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| self.data[i * d + j] * v[j])
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        self.mul(self).max_abs_diff(self) <= tol
    }

    pub fn commutes_with(&self, other: &CMatrix, tol: f64) -> bool {
        self.mul(other).max_abs_diff(&other.mul(self)) <= tol
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// A pure state as a normalized complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() > MAX_DIM {
            return Err(Error::DimensionTooLarge(amplitudes.len(), MAX_DIM));
        }
        let n = norm2(&amplitudes);
        if (n - 1.0).abs() > PROBABILISTIC_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes })
    }

    /// Normalize an arbitrary nonzero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = norm2(&amplitudes).sqrt();
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Self::new(amplitudes.into_iter().map(|a| a / n).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// The two-qubit state `(|00> + |11>)/sqrt(2)`.
pub fn bell_state() -> StateVector {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    StateVector {
        amplitudes: vec![r, Complex64::ZERO, Complex64::ZERO, r],
    }
}

/// The `n`-qubit state `(|0..0> + |1..1>)/sqrt(2)`, for `2 <= n` with
/// `2^n <= 16`.
pub fn ghz_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::BadScenario(format!(
            "a GHZ state needs at least 2 sites, got {n}"
        )));
    }
    let dim = 1usize << n;
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim, MAX_DIM));
    }
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut amplitudes = vec![Complex64::ZERO; dim];
    amplitudes[0] = r;
    amplitudes[dim - 1] = r;
    Ok(StateVector { amplitudes })
}

/// A Haar-random pure state from normalized complex Gaussian amplitudes.
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> Result<StateVector> {
    let mut amplitudes = Vec::with_capacity(dim);
    for _ in 0..dim {
        amplitudes.push(Complex64::new(gaussian(rng), gaussian(rng)));
    }
    StateVector::normalized(amplitudes)
}

fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; the uniform draw is bounded away from zero.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A two-outcome measurement as a pair of complementary projectors;
/// outcome `0` corresponds to `p0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomicObservable {
    p0: CMatrix,
    p1: CMatrix,
}

impl DichotomicObservable {
    /// Validate and wrap a projector pair.
    pub fn from_projectors(p0: CMatrix, p1: CMatrix) -> Result<Self> {
        let reject = |reason: String| Error::NotAProjector {
            variable: "(anonymous)".to_string(),
            reason,
        };
        if p0.dim() != p1.dim() {
            return Err(reject(format!(
                "projector dimensions {} and {} differ",
                p0.dim(),
                p1.dim()
            )));
        }
        if p0.dim() > MAX_DIM {
            return Err(Error::DimensionTooLarge(p0.dim(), MAX_DIM));
        }
        for (name, p) in [("P0", &p0), ("P1", &p1)] {
            if !p.is_hermitian(STRUCTURAL_TOL) {
                return Err(reject(format!("{name} is not self-adjoint")));
            }
            if !p.is_idempotent(STRUCTURAL_TOL) {
                return Err(reject(format!("{name} is not idempotent")));
            }
        }
        let sum = p0.add(&p1);
        let dev = sum.max_abs_diff(&CMatrix::identity(p0.dim()));
        if dev > STRUCTURAL_TOL {
            return Err(reject(format!(
                "projectors sum to identity only within {dev:.3e}"
            )));
        }
        Ok(Self { p0, p1 })
    }

    /// The validated complement pair `(P, I - P)`.
    pub fn from_projector(p0: CMatrix) -> Result<Self> {
        let p1 = CMatrix::identity(p0.dim()).sub(&p0);
        Self::from_projectors(p0, p1)
    }

    pub fn dim(&self) -> usize {
        self.p0.dim()
    }

    pub fn projector(&self, outcome: u8) -> &CMatrix {
        if outcome == 0 {
            &self.p0
        } else {
            &self.p1
        }
    }
}

/// Spin measurement in the XY plane of the Bloch sphere at angle `phi`:
/// the observable `cos(phi) X + sin(phi) Y`, with outcome `0` on the `+1`
/// eigenvector.
pub fn xy_spin_observable(phi: f64) -> DichotomicObservable {
    let half = Complex64::new(0.5, 0.0);
    let off = Complex64::from_polar(0.5, phi);
    let p0 = CMatrix::from_rows(vec![vec![half, off.conj()], vec![off, half]])
        .expect("static shape");
    let p1 = CMatrix::identity(2).sub(&p0);
    DichotomicObservable { p0, p1 }
}

/// Embed a single-site observable at tensor position `site` of `n_sites`
/// qubits; site 0 is the most significant basis index block.
pub fn lift_site(
    obs: &DichotomicObservable,
    site: usize,
    n_sites: usize,
) -> Result<DichotomicObservable> {
    if site >= n_sites {
        return Err(Error::DimensionMismatch(format!(
            "site {site} out of range for {n_sites} sites"
        )));
    }
    let dim = obs.dim() << (n_sites - 1);
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge(dim, MAX_DIM));
    }
    let left = CMatrix::identity(1 << site);
    let right = CMatrix::identity(1 << (n_sites - site - 1));
    let lift = |p: &CMatrix| left.kron(p).kron(&right);
    Ok(DichotomicObservable {
        p0: lift(&obs.p0),
        p1: lift(&obs.p1),
    })
}

/// A named family of observables on a shared Hilbert space.
#[derive(Debug, Clone)]
pub struct ObservableAssignment {
    dim: usize,
    observables: BTreeMap<String, DichotomicObservable>,
}

impl ObservableAssignment {
    pub fn new(dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim, MAX_DIM));
        }
        Ok(Self {
            dim,
            observables: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn insert(&mut self, name: &str, obs: DichotomicObservable) -> Result<()> {
        if obs.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "observable `{name}` has dimension {}, assignment has {}",
                obs.dim(),
                self.dim
            )));
        }
        self.observables.insert(name.to_string(), obs);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&DichotomicObservable> {
        self.observables
            .get(name)
            .ok_or_else(|| Error::MissingObservable(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.observables.keys()
    }

    /// Check that every cover variable has an observable and that the
    /// observables of each context pairwise commute. Commutation of the
    /// outcome-0 projectors settles all outcome pairs, since the outcome-1
    /// projectors are complements.
    pub fn verify_cover(&self, cover: &MeasurementCover) -> Result<()> {
        for v in cover.variables() {
            self.get(v)?;
        }
        for c in 0..cover.n_contexts() {
            let ctx = cover.context(c);
            for (i, &x) in ctx.iter().enumerate() {
                for &y in &ctx[i + 1..] {
                    let ox = self.get(cover.var_name(x))?;
                    let oy = self.get(cover.var_name(y))?;
                    if !ox.p0.commutes_with(&oy.p0, STRUCTURAL_TOL) {
                        return Err(Error::NonCommuting(
                            cover.var_name(x).to_string(),
                            cover.var_name(y).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Raw Born rows: for each context cell, the squared norm of the state
/// after applying the outcome projectors. The product over a context is
/// taken in the cover's variable order and applied right-to-left; the
/// projectors commute, so the order is immaterial up to rounding.
pub fn born_probabilities(
    state: &StateVector,
    cover: &MeasurementCover,
    obs: &ObservableAssignment,
) -> Result<Vec<Vec<f64>>> {
    if state.dim() != obs.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs observable dimension {}",
            state.dim(),
            obs.dim()
        )));
    }
    obs.verify_cover(cover)?;
    let mut rows = Vec::with_capacity(cover.n_contexts());
    for c in 0..cover.n_contexts() {
        let ctx = cover.context(c);
        let mut row = Vec::with_capacity(1 << ctx.len());
        for cell in 0..cover.n_cells(c) {
            let mut v = state.amplitudes().to_vec();
            for j in (0..ctx.len()).rev() {
                let outcome = ((cell >> j) & 1) as u8;
                let p = obs.get(cover.var_name(ctx[j]))?.projector(outcome);
                v = p.apply(&v);
            }
            row.push(norm2(&v));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > PROBABILISTIC_TOL {
            return Err(Error::NotNormalized(sum));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Born-rule empirical model with probabilities snapped to the nearest
/// rationals of denominator at most `max_denominator`; each row's snapping
/// residual goes to its largest cell, so rows sum to exactly 1.
///
/// Probabilities below half the denominator resolution snap to zero, so a
/// support cell carrying less than `1/2^21` of mass at the default bound
/// disappears from the exact model.
pub fn born_model_with_denominator(
    state: &StateVector,
    cover: &MeasurementCover,
    obs: &ObservableAssignment,
    max_denominator: u64,
) -> Result<EmpiricalModel> {
    let float_rows = born_probabilities(state, cover, obs)?;
    let mut rows = Vec::with_capacity(float_rows.len());
    for row in float_rows {
        let mut cells: Vec<Rat> = row
            .iter()
            .map(|&p| rationalize(p.clamp(0.0, 1.0), max_denominator))
            .collect();
        let sum: Rat = cells.iter().fold(Rat::zero(), |acc, c| acc + c);
        let residual = Rat::one() - sum;
        if !residual.is_zero() {
            let largest = (0..cells.len())
                .max_by(|&a, &b| cells[a].cmp(&cells[b]))
                .expect("nonempty row");
            cells[largest] += residual;
        }
        rows.push(cells);
    }
    EmpiricalModel::new(cover.clone(), rows)
}

/// [`born_model_with_denominator`] at the default denominator bound.
pub fn born_model(
    state: &StateVector,
    cover: &MeasurementCover,
    obs: &ObservableAssignment,
) -> Result<EmpiricalModel> {
    born_model_with_denominator(state, cover, obs, DEFAULT_MAX_DENOMINATOR)
}

/// Nearest rational with denominator at most `max_den`, found by walking
/// the continued fraction of the exact binary value and comparing the last
/// in-bound convergent with the best in-bound semiconvergent.
pub fn rationalize(x: f64, max_den: u64) -> Rat {
    let max_den = Int::from(max_den.max(1));
    let exact = match Rat::from_float(x) {
        Some(r) => r,
        None => return Rat::zero(),
    };
    if exact.denom() <= &max_den {
        return exact;
    }
    let (mut p0, mut q0) = (Int::one(), Int::zero());
    let mut whole = exact.floor();
    let (mut p1, mut q1) = (whole.to_integer(), Int::one());
    let mut rem = &exact - whole;
    loop {
        // rem is nonzero: an exact value would have returned early.
        let r = rem.recip();
        whole = r.floor();
        let a = whole.to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > max_den {
            let k = (&max_den - &q0) / &q1;
            let convergent = Rat::new(p1.clone(), q1.clone());
            if k.is_zero() {
                return convergent;
            }
            let semi = Rat::new(&k * &p1 + &p0, &k * &q1 + &q0);
            return if (&semi - &exact).abs() < (&convergent - &exact).abs() {
                semi
            } else {
                convergent
            };
        }
        rem = r - whole;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        if rem.is_zero() {
            return Rat::new(p1, q1);
        }
    }
}

/// The Bell table scenario: the `(2,2,1)` cover with XY-plane spin
/// measurements at angles `a = b = 0` and `a' = b' = pi/3`, which
/// reproduce the correlated/lean table rows for the Bell state.
pub fn bell_xy_assignment() -> Result<(MeasurementCover, ObservableAssignment)> {
    let cover = crate::model::bell_scenario_cover(2, 2, 1)?;
    let third = std::f64::consts::FRAC_PI_3;
    let mut obs = ObservableAssignment::new(4)?;
    for (name, site, angle) in [
        ("a", 0, 0.0),
        ("a'", 0, third),
        ("b", 1, 0.0),
        ("b'", 1, third),
    ] {
        obs.insert(name, lift_site(&xy_spin_observable(angle), site, 2)?)?;
    }
    Ok((cover, obs))
}

/// The GHZ scenario: the four-context three-site cover with `X` at the
/// unprimed and `Y` at the primed variables.
pub fn ghz_xy_assignment() -> Result<(MeasurementCover, ObservableAssignment)> {
    let cover = crate::zoo::ghz_support().cover().clone();
    let x = xy_spin_observable(0.0);
    let y = xy_spin_observable(std::f64::consts::FRAC_PI_2);
    let mut obs = ObservableAssignment::new(8)?;
    for (site, base) in ["a", "b", "c"].iter().enumerate() {
        obs.insert(base, lift_site(&x, site, 3)?)?;
        obs.insert(&format!("{base}'"), lift_site(&y, site, 3)?)?;
    }
    Ok((cover, obs))
}

/// Build a Kochen-Specker style scenario from real rays: one variable
/// `r1..rn` per ray, one context per maximal mutually orthogonal set of
/// full size `d`, and the ray projector pair as each observable.
pub fn ks_observables(rays: &[Vec<f64>]) -> Result<(MeasurementCover, ObservableAssignment)> {
    if rays.is_empty() {
        return Err(Error::BadScenario("no rays given".to_string()));
    }
    let d = rays[0].len();
    if d > MAX_RAY_DIM {
        return Err(Error::DimensionTooLarge(d, MAX_RAY_DIM));
    }
    let mut unit: Vec<Vec<f64>> = Vec::with_capacity(rays.len());
    for (i, ray) in rays.iter().enumerate() {
        if ray.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "ray {} has dimension {}, expected {d}",
                i + 1,
                ray.len()
            )));
        }
        let n = ray.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::BadScenario(format!("ray {} is zero", i + 1)));
        }
        unit.push(ray.iter().map(|x| x / n).collect());
    }
    let ip = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    for i in 0..unit.len() {
        for j in i + 1..unit.len() {
            if ip(&unit[i], &unit[j]).abs() > 1.0 - STRUCTURAL_TOL {
                return Err(Error::DuplicateRay(i, j));
            }
        }
    }
    let orthogonal: Vec<Vec<bool>> = (0..unit.len())
        .map(|i| {
            (0..unit.len())
                .map(|j| i != j && ip(&unit[i], &unit[j]).abs() <= STRUCTURAL_TOL)
                .collect()
        })
        .collect();
    let mut contexts: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    cliques_of_size(d, 0, &orthogonal, &mut stack, &mut contexts);
    if contexts.is_empty() {
        return Err(Error::NoFullContext(d));
    }
    let names: Vec<String> = (1..=unit.len()).map(|i| format!("r{i}")).collect();
    let cover = MeasurementCover::new(
        names.clone(),
        contexts
            .iter()
            .map(|ctx| ctx.iter().map(|&i| names[i].clone()).collect())
            .collect(),
    )?;
    let mut obs = ObservableAssignment::new(d)?;
    for (name, ray) in names.iter().zip(&unit) {
        let mut p0 = CMatrix::zeros(d);
        for (i, &a) in ray.iter().enumerate() {
            for (j, &b) in ray.iter().enumerate() {
                p0.set(i, j, Complex64::new(a * b, 0.0));
            }
        }
        obs.insert(name, DichotomicObservable::from_projector(p0)?)?;
    }
    Ok((cover, obs))
}

/// All orthogonality-graph cliques of exactly `size` members, in
/// lexicographic index order.
fn cliques_of_size(
    size: usize,
    from: usize,
    orthogonal: &[Vec<bool>],
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if stack.len() == size {
        out.push(stack.clone());
        return;
    }
    for i in from..orthogonal.len() {
        if stack.iter().all(|&j| orthogonal[j][i]) {
            stack.push(i);
            cliques_of_size(size, i + 1, orthogonal, stack, out);
            stack.pop();
        }
    }
}

/// The 18 rays in dimension 4 realizing the two-per-context
/// Kochen-Specker cover; their orthogonality pattern reproduces the nine
/// four-element contexts.
pub fn ks18_rays() -> Vec<Vec<f64>> {
    let rows: [[f64; 4]; 18] = [
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [1.0, 1.0, 0.0, 0.0],
        [1.0, -1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, 0.0, 1.0, 0.0],
        [1.0, 0.0, -1.0, 0.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
        [0.0, 0.0, 1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
        [0.0, 1.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, -1.0, 0.0],
        [1.0, 1.0, -1.0, 1.0],
        [1.0, 1.0, 1.0, -1.0],
        [-1.0, 1.0, 1.0, 1.0],
    ];
    rows.iter().map(|r| r.to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contextuality::{classify, ContextualityClass};
    use crate::{rat, rat_int, DEFAULT_VAR_LIMIT};
    use num_traits::ToPrimitive;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn standard_states() {
        let b = bell_state();
        assert_eq!(b.dim(), 4);
        assert!((b.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(b.amplitudes()[1], Complex64::ZERO);
        let g = ghz_state(3).unwrap();
        assert_eq!(g.dim(), 8);
        assert!((g.amplitudes()[7].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(ghz_state(2).unwrap(), bell_state());
        assert!(matches!(
            ghz_state(5),
            Err(Error::DimensionTooLarge(32, 16))
        ));
        assert!(matches!(ghz_state(1), Err(Error::BadScenario(_))));
    }

    #[test]
    fn xy_observables_are_projector_pairs() {
        let x = xy_spin_observable(0.0);
        assert!((x.p0.get(0, 1).re - 0.5).abs() < 1e-15);
        assert!((x.p0.get(0, 0).re - 0.5).abs() < 1e-15);
        let y = xy_spin_observable(std::f64::consts::FRAC_PI_2);
        assert!((y.p0.get(1, 0).im - 0.5).abs() < 1e-15);
        for phi in [0.3, 1.1, 2.9, -0.7] {
            let o = xy_spin_observable(phi);
            DichotomicObservable::from_projectors(o.p0.clone(), o.p1.clone()).unwrap();
            let sum = o.p0.add(&o.p1);
            assert!(sum.max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        }
    }

    #[test]
    fn projector_validation_rejects_junk() {
        let not_proj = CMatrix::from_rows(vec![
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
            vec![Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            DichotomicObservable::from_projector(not_proj),
            Err(Error::NotAProjector { .. })
        ));
    }

    #[test]
    fn rationalization_finds_nearest_bounded_fractions() {
        assert_eq!(rationalize(0.375, 1 << 20), rat(3, 8));
        assert_eq!(rationalize(1.0 / 3.0, 1 << 20), rat(1, 3));
        assert_eq!(rationalize(std::f64::consts::PI, 10_000), rat(355, 113));
        assert_eq!(rationalize(0.0, 1 << 20), Rat::zero());
        assert_eq!(rationalize(1.0, 1 << 20), Rat::one());
        assert_eq!(rationalize(1e-9, 1 << 20), Rat::zero());
        assert_eq!(rationalize(2.25, 4), rat(9, 4));
    }

    #[test]
    fn bell_angles_reproduce_the_table() {
        let (cover, obs) = bell_xy_assignment().unwrap();
        let floats = born_probabilities(&bell_state(), &cover, &obs).unwrap();
        let expected = crate::zoo::bell_model();
        for (c, row) in floats.iter().enumerate() {
            for (s, &p) in row.iter().enumerate() {
                let want = expected.prob(c, s as u32).to_f64().unwrap();
                assert!(
                    (p - want).abs() < 1e-9,
                    "context {c} cell {s}: {p} vs {want}"
                );
            }
        }
        let model = born_model(&bell_state(), &cover, &obs).unwrap();
        assert_eq!(model, expected);
    }

    #[test]
    fn ghz_born_support_matches_the_fixture() {
        let (cover, obs) = ghz_xy_assignment().unwrap();
        let model = born_model(&ghz_state(3).unwrap(), &cover, &obs).unwrap();
        let support = model.support();
        assert_eq!(support, crate::zoo::ghz_support());
        for c in 0..cover.n_contexts() {
            for cell in support.support(c) {
                assert_eq!(model.prob(c, *cell), &rat(1, 4));
            }
        }
    }

    #[test]
    fn z_eigenstate_gives_a_deterministic_model() {
        let cover =
            MeasurementCover::from_names(&["a", "b"], &[&["a", "b"]]).unwrap();
        let z = DichotomicObservable::from_projector(
            CMatrix::from_rows(vec![
                vec![Complex64::ONE, Complex64::ZERO],
                vec![Complex64::ZERO, Complex64::ZERO],
            ])
            .unwrap(),
        )
        .unwrap();
        let mut obs = ObservableAssignment::new(4).unwrap();
        obs.insert("a", lift_site(&z, 0, 2).unwrap()).unwrap();
        obs.insert("b", lift_site(&z, 1, 2).unwrap()).unwrap();
        let mut up = vec![Complex64::ZERO; 4];
        up[0] = Complex64::ONE;
        let state = StateVector::new(up).unwrap();
        let model = born_model(&state, &cover, &obs).unwrap();
        assert_eq!(model.prob(0, 0), &Rat::one());
    }

    #[test]
    fn projector_order_within_a_context_is_immaterial() {
        let (cover, obs) = bell_xy_assignment().unwrap();
        let state = bell_state();
        let rows = born_probabilities(&state, &cover, &obs).unwrap();
        for c in 0..cover.n_contexts() {
            let ctx = cover.context(c);
            for cell in 0..cover.n_cells(c) {
                // Reversed application order.
                let mut v = state.amplitudes().to_vec();
                for (j, &var) in ctx.iter().enumerate() {
                    let p = obs
                        .get(cover.var_name(var))
                        .unwrap()
                        .projector(((cell >> j) & 1) as u8);
                    v = p.apply(&v);
                }
                assert!((norm2(&v) - rows[c][cell as usize]).abs() < PROBABILISTIC_TOL);
            }
        }
    }

    #[test]
    fn non_commuting_context_is_rejected() {
        let cover =
            MeasurementCover::from_names(&["a", "b"], &[&["a", "b"]]).unwrap();
        let mut obs = ObservableAssignment::new(2).unwrap();
        obs.insert("a", xy_spin_observable(0.0)).unwrap();
        obs.insert("b", xy_spin_observable(std::f64::consts::FRAC_PI_2))
            .unwrap();
        let plus = StateVector::normalized(vec![Complex64::ONE, Complex64::ONE]).unwrap();
        assert!(matches!(
            born_model(&plus, &cover, &obs),
            Err(Error::NonCommuting(_, _))
        ));
    }

    #[test]
    fn ks18_rays_reproduce_the_fixture_cover() {
        let (cover, obs) = ks_observables(&ks18_rays()).unwrap();
        assert_eq!(cover.n_vars(), 18);
        assert_eq!(cover.n_contexts(), 9);
        let zoo_cover = crate::zoo::ks18_cover();
        let as_sets = |cv: &MeasurementCover| -> std::collections::BTreeSet<Vec<usize>> {
            cv.contexts().iter().cloned().collect()
        };
        assert_eq!(as_sets(&cover), as_sets(&zoo_cover));
        obs.verify_cover(&cover).unwrap();
    }

    #[test]
    fn ks18_born_model_is_strongly_contextual() {
        let (cover, obs) = ks_observables(&ks18_rays()).unwrap();
        let state = StateVector::normalized(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(4.0, 0.0),
            Complex64::new(8.0, 0.0),
        ])
        .unwrap();
        let model = born_model(&state, &cover, &obs).unwrap();
        let support = model.support();
        let one_cells: std::collections::BTreeSet<u32> =
            [0b0111, 0b1011, 0b1101, 0b1110].into_iter().collect();
        for c in 0..9 {
            assert_eq!(support.support(c), &one_cells, "context {c}");
        }
        assert_eq!(
            classify(&model, DEFAULT_VAR_LIMIT).unwrap(),
            ContextualityClass::StronglyContextual
        );
    }

    #[test]
    fn ks_rejects_degenerate_inputs() {
        let mut rays = ks18_rays();
        rays.push(vec![0.0, 0.0, 0.0, -2.0]);
        assert!(matches!(
            ks_observables(&rays),
            Err(Error::DuplicateRay(0, 18))
        ));
        let skew = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 1.0],
        ];
        assert!(matches!(
            ks_observables(&skew),
            Err(Error::NoFullContext(3))
        ));
    }

    #[test]
    fn random_states_are_normalized() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_state(4, &mut rng).unwrap();
            assert!((norm2(s.amplitudes()) - 1.0).abs() < PROBABILISTIC_TOL);
        }
    }

    #[test]
    fn born_rows_snap_to_exact_rationals() {
        let (cover, obs) = bell_xy_assignment().unwrap();
        let model = born_model(&bell_state(), &cover, &obs).unwrap();
        for c in 0..4 {
            let sum: Rat = (0..4u32)
                .map(|s| model.prob(c, s))
                .fold(Rat::zero(), |acc, p| acc + p);
            assert_eq!(sum, Rat::one());
        }
        assert_eq!(model.prob(1, 0), &rat(3, 8));
        assert_eq!(model.prob(0, 1), &rat_int(0));
    }
}
