//! Pull-back maps on moduli space and numerical lifting of twist loops.
//!
//! A twist `h` is turned into a closed polyline at the family basepoint. The
//! path is lifted through `F` over and over, each lift starting where the
//! previous one ended, and the endpoints converge to the fixed point of `F`
//! that represents the class of the twisted polynomial.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use crate::alphabets::{twists_ab, twists_ts};
use crate::error::{Error, Result};
use crate::label::ClassLabel;
use crate::periodic2::GaussInt;
use crate::word::{Alphabet, GenWord};

pub const DEFAULT_STEP_TOL: f64 = 0.05;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_LIFTS: usize = 200;
pub const LOOP_RADIUS: f64 = 0.25;
pub const LOOP_SAMPLES: usize = 64;
const HITS: usize = 3;
const MAX_DEPTH: u32 = 40;
const PUNCTURE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// `w ↦ 1 − 1/w²`, the rabbit/airplane family.
    RabbitF,
    /// `w ↦ ((2 − w)/w)²`, the family of `z² + i`.
    IF,
    /// `w ↦ ((w − 1)/(w + 1))²`, the preperiod-2 family.
    QuaterF,
}

impl FamilyId {
    pub const ALL: [FamilyId; 3] = [FamilyId::RabbitF, FamilyId::IF, FamilyId::QuaterF];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::RabbitF => "rabbit",
            FamilyId::IF => "i",
            FamilyId::QuaterF => "quater",
        }
    }

    pub fn from_name(s: &str) -> Option<FamilyId> {
        FamilyId::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FixedPoint {
    pub point: Complex64,
    pub label: ClassLabel,
    /// Fixed points lying in the post-critical set are punctures of moduli space.
    pub puncture: bool,
}

#[derive(Clone, Debug)]
pub struct RationalFamily {
    pub id: FamilyId,
    pub basepoint: Complex64,
    pub fixed_points: Vec<FixedPoint>,
}

/// Which way a loop winds around its puncture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Winding {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoopSpec {
    pub polyline: Vec<Complex64>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftedPath {
    pub endpoint: Complex64,
    pub trajectory: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericParams {
    pub step_tol: f64,
    pub tol: f64,
    pub max_lifts: usize,
}

impl Default for NumericParams {
    fn default() -> Self {
        NumericParams { step_tol: DEFAULT_STEP_TOL, tol: DEFAULT_TOL, max_lifts: DEFAULT_MAX_LIFTS }
    }
}

/// Outcome of [`classify_numeric_run`]: the label, the number of lifts
/// performed and the endpoint after every lift (index 0 is the basepoint).
#[derive(Clone, Debug, PartialEq)]
pub struct NumericRun {
    pub label: ClassLabel,
    pub lifts: usize,
    pub limit: Complex64,
    pub endpoints: Vec<Complex64>,
}

impl NumericRun {
    /// One line per lift: `index re im`.
    pub fn trajectory_dump(&self) -> String {
        let mut s = String::new();
        for (i, z) in self.endpoints.iter().enumerate() {
            let _ = writeln!(s, "{i} {} {}", z.re, z.im);
        }
        s
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

/// Newton's method on a monic cubic with coefficients `[c2, c1, c0]`.
fn polish_cubic(coef: [f64; 3], seed: Complex64) -> Complex64 {
    let [c2, c1, c0] = coef;
    let mut z = seed;
    for _ in 0..50 {
        let p = ((z + c2) * z + c1) * z + c0;
        let dp = (z * 3.0 + 2.0 * c2) * z + c1;
        let step = p / dp;
        z -= step;
        if step.norm() < 1e-16 {
            break;
        }
    }
    z
}

impl RationalFamily {
    pub fn new(id: FamilyId) -> RationalFamily {
        let fp = |point, label| FixedPoint { point, label, puncture: false };
        match id {
            FamilyId::RabbitF => {
                // w³ − w² + 1 = 0
                let k = [-1.0, 0.0, 1.0];
                let t = polish_cubic(k, c(0.8774, 0.7449));
                RationalFamily {
                    id,
                    basepoint: t,
                    fixed_points: vec![
                        fp(t, ClassLabel::Rabbit),
                        fp(polish_cubic(k, c(0.8774, -0.7449)), ClassLabel::Corabbit),
                        fp(polish_cubic(k, c(-0.7549, 0.0)), ClassLabel::Airplane),
                    ],
                }
            }
            FamilyId::IF => RationalFamily {
                id,
                basepoint: c(0.0, 2.0),
                fixed_points: vec![
                    fp(c(0.0, 2.0), ClassLabel::Fi),
                    fp(c(0.0, -2.0), ClassLabel::FminusI),
                    // the obstruction index is not visible numerically
                    FixedPoint { point: c(1.0, 0.0), label: ClassLabel::Obstructed(0), puncture: true },
                ],
            },
            FamilyId::QuaterF => {
                // w³ + w² + 3w − 1 = 0
                let k = [1.0, 3.0, -1.0];
                let t = polish_cubic(k, c(-0.6478, 1.7214));
                RationalFamily {
                    id,
                    basepoint: t,
                    fixed_points: vec![
                        fp(t, ClassLabel::F14),
                        fp(polish_cubic(k, c(-0.6478, -1.7214)), ClassLabel::F34),
                        fp(polish_cubic(k, c(0.2956, 0.0)), ClassLabel::F512),
                    ],
                }
            }
        }
    }

    /// Loop labels: `T, S` for the rabbit family, `a, b` otherwise.
    pub fn alphabet(&self) -> &'static Arc<Alphabet> {
        match self.id {
            FamilyId::RabbitF => twists_ts(),
            FamilyId::IF | FamilyId::QuaterF => twists_ab(),
        }
    }

    fn pole(&self) -> Complex64 {
        match self.id {
            FamilyId::RabbitF | FamilyId::IF => c(0.0, 0.0),
            FamilyId::QuaterF => c(-1.0, 0.0),
        }
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        if !w.is_finite() || (w - self.pole()).norm() < PUNCTURE_EPS {
            return Err(Error::NearPuncture(fmt_c(w)));
        }
        let one = c(1.0, 0.0);
        Ok(match self.id {
            FamilyId::RabbitF => one - one / (w * w),
            FamilyId::IF => {
                let u = (c(2.0, 0.0) - w) / w;
                u * u
            }
            FamilyId::QuaterF => {
                let u = (w - one) / (w + one);
                u * u
            }
        })
    }

    /// Both solutions of `F(w) = z`.
    pub fn preimages(&self, z: Complex64) -> Result<[Complex64; 2]> {
        let one = c(1.0, 0.0);
        // every family has a preimage of 1 at infinity
        if !z.is_finite() || (z - one).norm() < PUNCTURE_EPS {
            return Err(Error::NearPuncture(fmt_c(z)));
        }
        let s = z.sqrt();
        Ok(match self.id {
            FamilyId::RabbitF => {
                let w = one / (one - z).sqrt();
                [w, -w]
            }
            FamilyId::IF => [c(2.0, 0.0) / (one + s), c(2.0, 0.0) / (one - s)],
            FamilyId::QuaterF => [(one + s) / (one - s), (one - s) / (one + s)],
        })
    }

    /// Direction of the loops as drawn for this family; the rabbit family
    /// uses negatively oriented loops.
    pub fn winding(&self) -> Winding {
        match self.id {
            FamilyId::RabbitF => Winding::Negative,
            FamilyId::IF | FamilyId::QuaterF => Winding::Positive,
        }
    }

    /// Puncture encircled by generator `gen` of [`RationalFamily::alphabet`].
    fn puncture_of(&self, gen: usize) -> Complex64 {
        match (self.id, gen) {
            // T = Y goes around 1, S = X around 0
            (FamilyId::RabbitF, 0) => c(1.0, 0.0),
            (FamilyId::RabbitF, _) => c(0.0, 0.0),
            (_, 0) => c(0.0, 0.0),
            (_, _) => c(1.0, 0.0),
        }
    }

    /// Generator loop: a straight segment from the basepoint to the circle
    /// of radius [`LOOP_RADIUS`] about the puncture, once around, and back.
    pub fn generator_loop(&self, gen: usize, inverse: bool) -> LoopSpec {
        let p = self.puncture_of(gen);
        let t = self.basepoint;
        let dir = (t - p) / (t - p).norm();
        let on_circle = p + dir * LOOP_RADIUS;
        let positive = (self.winding() == Winding::Positive) != inverse;
        let sign = if positive { 1.0 } else { -1.0 };
        let theta0 = dir.arg();
        let mut polyline = vec![t];
        for k in 0..=LOOP_SAMPLES {
            let th = theta0 + sign * 2.0 * PI * k as f64 / LOOP_SAMPLES as f64;
            polyline.push(p + Complex64::from_polar(LOOP_RADIUS, th));
        }
        // close exactly
        let n = polyline.len();
        polyline[n - 1] = on_circle;
        polyline.push(t);
        let name = self.alphabet().gen_name(gen);
        LoopSpec { polyline, label: if inverse { format!("{name}'") } else { name.to_string() } }
    }

    /// The loop `γ_h`: generator loops concatenated in reading order.
    pub fn word_loop(&self, h: &GenWord) -> Result<LoopSpec> {
        if h.alphabet().id() != self.alphabet().id() {
            return Err(Error::AlphabetMismatch {
                left: h.alphabet().name().to_string(),
                right: self.alphabet().name().to_string(),
            });
        }
        let mut polyline = vec![self.basepoint];
        for l in h.letters() {
            let g = self.generator_loop(l.gen(), l.is_inverse());
            polyline.extend_from_slice(&g.polyline[1..]);
        }
        Ok(LoopSpec { polyline, label: h.to_string() })
    }
}

pub fn pullback(fam: &RationalFamily, w: Complex64) -> Result<Complex64> {
    fam.eval(w)
}

fn nearest(cands: [Complex64; 2], prev: Complex64) -> Complex64 {
    if (cands[0] - prev).norm() <= (cands[1] - prev).norm() {
        cands[0]
    } else {
        cands[1]
    }
}

struct Lifter<'a> {
    fam: &'a RationalFamily,
    step_tol: f64,
    out: Vec<Complex64>,
}

impl Lifter<'_> {
    fn segment(&mut self, p: Complex64, q: Complex64, depth: u32) -> Result<()> {
        let prev = *self.out.last().expect("lift has a start");
        let cands = self.fam.preimages(q)?;
        let w = nearest(cands, prev);
        let sep = (cands[0] - cands[1]).norm();
        // small against the gap between the branches and against the distance
        // to the punctures, so the polyline keeps its homotopy class
        let limit = self.step_tol.min(0.25 * sep).min(0.25 * puncture_dist(prev));
        if (w - prev).norm() < limit {
            self.out.push(w);
            return Ok(());
        }
        if depth >= MAX_DEPTH {
            if sep < 2.0 * self.step_tol {
                return Err(Error::BranchAmbiguity(fmt_c(q)));
            }
            self.out.push(w);
            return Ok(());
        }
        let m = (p + q) * 0.5;
        self.segment(p, m, depth + 1)?;
        self.segment(m, q, depth + 1)
    }
}

/// Lift of an arbitrary polyline starting at `start`, which must be a
/// preimage of its first point.
pub fn lift_path(fam: &RationalFamily, path: &[Complex64], start: Complex64, step_tol: f64) -> Result<LiftedPath> {
    let first = *path.first().ok_or_else(|| Error::Invalid("empty path".into()))?;
    let image = fam.eval(start)?;
    if (image - first).norm() > 1e-6 * first.norm().max(1.0) {
        return Err(Error::Invalid(format!("{} is not a preimage of {}", fmt_c(start), fmt_c(first))));
    }
    let mut l = Lifter { fam, step_tol, out: vec![start] };
    for pair in path.windows(2) {
        l.segment(pair[0], pair[1], 0)?;
    }
    let endpoint = *l.out.last().expect("nonempty");
    Ok(LiftedPath { endpoint, trajectory: l.out })
}

pub fn lift_loop(fam: &RationalFamily, lp: &LoopSpec, start: Complex64) -> Result<LiftedPath> {
    lift_path(fam, &lp.polyline, start, DEFAULT_STEP_TOL)
}

/// Distance to the nearest finite puncture `0` or `1` of moduli space.
fn puncture_dist(z: Complex64) -> f64 {
    z.norm().min((z - 1.0).norm())
}

/// Drops vertices close to the last kept one, relative to its distance to
/// the punctures.
fn thin(path: &[Complex64], step_tol: f64) -> Vec<Complex64> {
    if path.len() <= 2 {
        return path.to_vec();
    }
    let mut out = vec![path[0]];
    for &z in &path[1..path.len() - 1] {
        let last = *out.last().unwrap();
        if (z - last).norm() >= 0.125 * step_tol.min(puncture_dist(last)) {
            out.push(z);
        }
    }
    out.push(*path.last().unwrap());
    out
}

pub fn classify_numeric_run(fam: &RationalFamily, h: &GenWord, params: &NumericParams) -> Result<NumericRun> {
    let mut path = fam.word_loop(h)?.polyline;
    let mut end = *path.last().unwrap();
    let mut endpoints = vec![end];
    let mut streak: Option<(usize, usize)> = None;
    for n in 1..=params.max_lifts {
        let lifted = lift_path(fam, &path, end, params.step_tol)?;
        end = lifted.endpoint;
        endpoints.push(end);
        path = thin(&lifted.trajectory, params.step_tol);
        // a lift that is still a long loop has not settled even if it closes up
        let settled = path.iter().all(|z| (z - end).norm() < params.step_tol);
        let hit = fam.fixed_points.iter().position(|f| settled && (f.point - end).norm() < params.tol);
        streak = match (hit, streak) {
            (Some(i), Some((j, k))) if i == j => Some((i, k + 1)),
            (Some(i), _) => Some((i, 1)),
            (None, _) => None,
        };
        if let Some((i, k)) = streak {
            if k >= HITS {
                let f = fam.fixed_points[i];
                return Ok(NumericRun { label: f.label, lifts: n, limit: f.point, endpoints });
            }
        }
    }
    Err(Error::Diverged { iters: params.max_lifts })
}

pub fn classify_numeric(fam: &RationalFamily, h: &GenWord, max_lifts: usize) -> Result<ClassLabel> {
    let params = NumericParams { max_lifts, ..NumericParams::default() };
    Ok(classify_numeric_run(fam, h, &params)?.label)
}

/// `Σ(z) = ((i − 1)/2)·z + 1` on `num/den`, returned over the denominator `2·den`.
pub fn sigma_exact(num: GaussInt, den: i64) -> (GaussInt, i64) {
    (GaussInt::new(-1, 1) * num + GaussInt::new(2 * den, 0), 2 * den)
}

/// Exact test that `Σ` fixes `num/den`.
pub fn sigma_fixes(num: GaussInt, den: i64) -> bool {
    let (n2, d2) = sigma_exact(num, den);
    n2 * GaussInt::new(den, 0) == num * GaussInt::new(d2, 0)
}
