//! Randomized checks of the analytic invariance properties, driven by a
//! seeded generator so that every run with the same options is identical.
//!
//! Deviations are relative: `|a - b| / max(|a|, |b|, scale)`, where `scale`
//! bounds the magnitude of the terms that were summed to produce the value.
//! For a harmonic field the invariant is zero and the transported value is
//! a sum of terms that cancel; the scale keeps that rounding residue from
//! being read as a relative error of one.

mod integral;
pub mod sampling;

pub use integral::{inversion_integrals, IntegralPair};

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{standard_catalog, AnalyticField};
use crate::invariant::{
    conformal_numerator, diff_inv_2d, diff_inv_3d, f_b, grad_norm_sq, laplacian, map_weight, WeightKind,
    DEFAULT_EPS_DEN,
};
use crate::jet::{jet_of_transform, pullback, Jet};
use crate::xform::{determinant, ElementaryTransform, MobiusMap, Vector};
use sampling::{random_map, regular_point, StepType};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Relative change a counterexample must show.
pub const MIN_CHANGE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub dim: usize,
    /// Samples per field and check.
    pub trials: usize,
    pub seed: u64,
    pub max_steps: usize,
    pub tolerance: f64,
    pub eps_den: f64,
    /// Replaces the exponent of `‖J‖` in the expected weights. Only useful
    /// to confirm that a wrong law is caught.
    pub weight_exponent: Option<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            dim: 2,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            max_steps: 5,
            tolerance: DEFAULT_TOLERANCE,
            eps_den: DEFAULT_EPS_DEN,
            weight_exponent: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    /// Largest deviation must not exceed the threshold.
    AtMost,
    /// Largest deviation must exceed the threshold.
    Exceeds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub max_deviation: f64,
    pub threshold: f64,
    pub requirement: Requirement,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub dim: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Largest deviation over the `AtMost` checks.
    pub fn max_deviation(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.requirement == Requirement::AtMost)
            .map(|c| c.max_deviation)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.requirement {
            Requirement::AtMost => "<=",
            Requirement::Exceeds => ">",
        };
        write!(
            f,
            "{} {:<40} max_dev={:.3e} ({} {:.0e}) samples={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.max_deviation,
            op,
            self.threshold,
            self.samples
        )
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `|a - b| / max(|a|, |b|, scale)`, zero when all three vanish.
pub fn relative_deviation(a: f64, b: f64, scale: f64) -> f64 {
    let den = a.abs().max(b.abs()).max(scale);
    if den == 0.0 {
        0.0
    } else {
        (a - b).abs() / den
    }
}

/// Dimension-specific expressions probed by the suites.
pub trait Probe {
    const WEIGHT: WeightKind;
    /// Names of the entries returned by `components`.
    const COMPONENTS: &'static [&'static str];
    fn invariant(&self, eps_den: f64) -> Option<f64>;
    fn numerator(&self) -> f64;
    fn denominator(&self) -> f64;
    /// Bound on the numerator's magnitude given a bound `m` on the Hessian.
    fn numerator_scale(&self, m: f64) -> f64;
    /// Rigid-invariant components with their magnitude bounds.
    fn components(&self, m: f64) -> Vec<(&'static str, f64, f64)>;
}

impl Probe for Jet<2> {
    const WEIGHT: WeightKind = WeightKind::NumDen2D;
    const COMPONENTS: &'static [&'static str] = &["grad_norm_sq", "laplacian"];

    fn invariant(&self, eps_den: f64) -> Option<f64> {
        diff_inv_2d(self, eps_den).get()
    }
    fn numerator(&self) -> f64 {
        laplacian(self)
    }
    fn denominator(&self) -> f64 {
        grad_norm_sq(self)
    }
    fn numerator_scale(&self, m: f64) -> f64 {
        std::f64::consts::SQRT_2 * m
    }
    fn components(&self, m: f64) -> Vec<(&'static str, f64, f64)> {
        vec![
            ("grad_norm_sq", grad_norm_sq(self), 0.0),
            ("laplacian", laplacian(self), self.numerator_scale(m)),
        ]
    }
}

impl Probe for Jet<3> {
    const WEIGHT: WeightKind = WeightKind::NumDen3D;
    const COMPONENTS: &'static [&'static str] = &["grad_norm_sq", "laplacian", "f_b"];

    fn invariant(&self, eps_den: f64) -> Option<f64> {
        diff_inv_3d(self, eps_den).get()
    }
    fn numerator(&self) -> f64 {
        conformal_numerator(self)
    }
    fn denominator(&self) -> f64 {
        grad_norm_sq(self).powi(2)
    }
    fn numerator_scale(&self, m: f64) -> f64 {
        (3f64.sqrt() + 1.0) * grad_norm_sq(self) * m
    }
    fn components(&self, m: f64) -> Vec<(&'static str, f64, f64)> {
        vec![
            ("grad_norm_sq", grad_norm_sq(self), 0.0),
            ("laplacian", laplacian(self), 3f64.sqrt() * m),
            ("f_b", f_b(self), grad_norm_sq(self) * m),
        ]
    }
}

/// Jet of `f` at `x` and of `f ∘ T⁻¹` at `T(x)`, each with a bound on the
/// magnitude of the terms making up its Hessian.
struct Sample<const D: usize> {
    x: Vector<D>,
    f: Jet<D>,
    f_mag: f64,
    g: Jet<D>,
    g_mag: f64,
}

fn transported<const D: usize>(field: &AnalyticField<D>, map: &MobiusMap<D>, x: Vector<D>) -> Option<Sample<D>> {
    let f = field.jet(&x);
    let u = map.apply(&x).ok()?;
    let t = jet_of_transform(&map.inverse(), &u).ok()?;
    let g = pullback(&f, &t);
    let f_mag = f.hess.norm();
    let g_mag = t.jacobian.norm_squared() * f_mag
        + (0..D).map(|k| f.grad[k].abs() * t.hessians[k].norm()).sum::<f64>();
    (f.is_finite() && g.is_finite() && g_mag.is_finite()).then_some(Sample { x, f, f_mag, g, g_mag })
}

#[derive(Default)]
struct Tally {
    max: f64,
    samples: usize,
}

impl Tally {
    fn push(&mut self, dev: f64) {
        // NaN must fail the check rather than vanish in `max`
        self.max = if dev.is_nan() { f64::INFINITY } else { self.max.max(dev) };
        self.samples += 1;
    }

    fn finish(self, name: String, threshold: f64, requirement: Requirement) -> CheckResult {
        let ok = match requirement {
            Requirement::AtMost => self.max <= threshold,
            Requirement::Exceeds => self.max > threshold,
        };
        CheckResult {
            name,
            max_deviation: self.max,
            threshold,
            requirement,
            samples: self.samples,
            passed: self.samples > 0 && ok,
        }
    }
}

/// Weight the numerator and denominator should pick up along `map` from `x`.
fn expected_weight<const D: usize>(
    kind: WeightKind,
    map: &MobiusMap<D>,
    x: &Vector<D>,
    exponent: Option<f64>,
) -> Result<f64> {
    let Some(e) = exponent else {
        return map_weight(kind, map, x);
    };
    let path = map.trajectory(x)?;
    map.steps().iter().zip(&path).try_fold(1.0, |w, (s, p)| {
        Ok(if s.is_scaling() {
            w * determinant(&s.jacobian(p)?).abs().powf(e)
        } else {
            w
        })
    })
}

struct Suite<'a, const D: usize> {
    opts: &'a VerifyOptions,
    rng: ChaCha8Rng,
    catalog: Vec<(String, AnalyticField<D>)>,
    checks: Vec<CheckResult>,
}

impl<const D: usize> Suite<'_, D>
where
    Jet<D>: Probe,
{
    /// Visits `trials` regular samples per catalog field, each under a fresh
    /// map from `gen`.
    fn for_samples(
        &mut self,
        mut gen: impl FnMut(&mut ChaCha8Rng) -> MobiusMap<D>,
        mut visit: impl FnMut(&MobiusMap<D>, &Sample<D>),
    ) {
        for _ in 0..self.opts.trials {
            for (_, field) in &self.catalog {
                let map = gen(&mut self.rng);
                let Some(x) = regular_point(&mut self.rng, &map) else {
                    continue;
                };
                if let Some(s) = transported(field, &map, x) {
                    visit(&map, &s);
                }
            }
        }
    }

    fn invariance(&mut self, label: &str, types: &[StepType], max_steps: usize) {
        let eps = self.opts.eps_den;
        let mut tally = Tally::default();
        self.for_samples(
            |rng| random_map(rng, max_steps, types),
            |_, s| {
                if let (Some(a), Some(b)) = (s.f.invariant(eps), s.g.invariant(eps)) {
                    let scale = (s.f.numerator_scale(s.f_mag) / s.f.denominator())
                        .max(s.g.numerator_scale(s.g_mag) / s.g.denominator());
                    tally.push(relative_deviation(a, b, scale));
                }
            },
        );
        self.checks
            .push(tally.finish(format!("invariance/{label}"), self.opts.tolerance, Requirement::AtMost));
    }

    fn weights(&mut self, label: &str, types: &[StepType], max_steps: usize) -> Result<()> {
        let (eps, exponent) = (self.opts.eps_den, self.opts.weight_exponent);
        let (mut num, mut den) = (Tally::default(), Tally::default());
        let mut failure = None;
        self.for_samples(
            |rng| random_map(rng, max_steps, types),
            |map, s| {
                if s.f.denominator() < eps * eps || s.g.denominator() < eps * eps {
                    return;
                }
                match expected_weight(<Jet<D> as Probe>::WEIGHT, map, &s.x, exponent) {
                    Ok(w) => {
                        let scale = s.g.numerator_scale(s.g_mag);
                        num.push(relative_deviation(s.g.numerator(), w * s.f.numerator(), scale));
                        den.push(relative_deviation(s.g.denominator(), w * s.f.denominator(), 0.0));
                    }
                    Err(e) => failure = Some(e),
                }
            },
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let tol = self.opts.tolerance;
        self.checks
            .push(num.finish(format!("weight/numerator/{label}"), tol, Requirement::AtMost));
        self.checks
            .push(den.finish(format!("weight/denominator/{label}"), tol, Requirement::AtMost));
        Ok(())
    }

    fn rigid(&mut self) {
        let names = <Jet<D> as Probe>::COMPONENTS;
        let mut tallies: Vec<Tally> = names.iter().map(|_| Tally::default()).collect();
        let max_steps = self.opts.max_steps;
        self.for_samples(
            |rng| random_map(rng, max_steps, &StepType::RIGID),
            |_, s| {
                let before = s.f.components(s.f_mag);
                let after = s.g.components(s.g_mag);
                for ((t, (_, a, sa)), (_, b, sb)) in tallies.iter_mut().zip(before).zip(after) {
                    t.push(relative_deviation(a, b, sa.max(sb)));
                }
            },
        );
        for (name, t) in names.iter().zip(tallies) {
            self.checks
                .push(t.finish(format!("rigid/{name}"), self.opts.tolerance, Requirement::AtMost));
        }

        // stretching by 2 must change every component
        let stretch = MobiusMap::from(ElementaryTransform::stretching(2.0).expect("valid factor"));
        let mut tallies: Vec<Tally> = names.iter().map(|_| Tally::default()).collect();
        self.for_samples(
            |_| stretch.clone(),
            |_, s| {
                let before = s.f.components(s.f_mag);
                let after = s.g.components(s.g_mag);
                for ((t, (_, a, _)), (_, b, _)) in tallies.iter_mut().zip(before).zip(after) {
                    if a.abs() > DEFAULT_EPS_DEN {
                        t.push((b / a - 1.0).abs());
                    }
                }
            },
        );
        for (name, t) in names.iter().zip(tallies) {
            self.checks
                .push(t.finish(format!("rigid/{name}/stretching-changes"), MIN_CHANGE, Requirement::Exceeds));
        }
    }
}

fn run_dim<const D: usize>(opts: &VerifyOptions) -> Result<VerifyReport>
where
    Jet<D>: Probe,
{
    let mut suite = Suite::<D> {
        opts,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        catalog: standard_catalog::<D>(),
        checks: Vec::new(),
    };
    if opts.trials > 0 {
        for ty in StepType::ALL {
            suite.invariance(ty.name(), &[ty], 1);
        }
        suite.invariance("composed", &StepType::ALL, opts.max_steps);
        for ty in StepType::ALL {
            suite.weights(ty.name(), &[ty], 1)?;
        }
        suite.weights("composed", &StepType::ALL, opts.max_steps)?;
        suite.rigid();
    }
    Ok(VerifyReport {
        dim: D,
        checks: suite.checks,
    })
}

/// Runs every suite for the requested dimension.
pub fn run_verification(opts: &VerifyOptions) -> Result<VerifyReport> {
    match opts.dim {
        2 => run_dim::<2>(opts),
        3 => run_dim::<3>(opts),
        d => Err(Error::Config(format!("verification runs in 2 or 3 dimensions, not {d}"))),
    }
}
