//! Distances between probabilistic structures, deformation paths and the
//! Haar-average identity for squared effects.
//!
//! Two samples are compared point by point: both must be drawn from the same
//! group elements, so point `i` of either sample is the image of the same coset.

use rand::Rng;

use crate::compact_rep::{haar_sample, RepKind};
use crate::error::{Error, Result};
use crate::numerics::{dot, least_squares, lp_solve_lazy, norm, LinearProgram, LpOptions, LpOutcome, RealMatrix};
use crate::rng::SeededRng;
use crate::state_space::{witness_effect, Effect, StructureSample};

fn check_dim(e: &Effect, s: &StructureSample) -> Result<()> {
    if e.dim() != s.dim() {
        return Err(Error::domain(format!(
            "effect has dimension {}, states have dimension {}",
            e.dim(),
            s.dim()
        )));
    }
    Ok(())
}

fn check_shared(s0: &StructureSample, s1: &StructureSample) -> Result<()> {
    if !s0.shares_group_samples(s1) {
        return Err(Error::domain(
            "structures must be sampled from the same group elements (same group, seed and size)",
        ));
    }
    Ok(())
}

/// `max_x |f0(x) − f1(x)|` over the sampled points.
pub fn opf_distance(f0: &Effect, f1: &Effect, s: &StructureSample) -> Result<f64> {
    check_dim(f0, s)?;
    check_dim(f1, s)?;
    Ok(s
        .points()
        .iter()
        .fold(0.0, |m, p| m.max((f0.evaluate(p) - f1.evaluate(p)).abs())))
}

/// `max_i |f0(Ω⁰_i) − f1(Ω¹_i)|` for effects living on two samples of the same points.
pub fn opf_distance_between(f0: &Effect, s0: &StructureSample, f1: &Effect, s1: &StructureSample) -> Result<f64> {
    check_shared(s0, s1)?;
    check_dim(f0, s0)?;
    check_dim(f1, s1)?;
    Ok(s0
        .points()
        .iter()
        .zip(s1.points())
        .fold(0.0, |m, (p0, p1)| m.max((f0.evaluate(p0) - f1.evaluate(p1)).abs())))
}

/// Evenly spread sample indices, at most `count` of them.
fn spread(n: usize, count: usize) -> impl Iterator<Item = usize> {
    let step = n.div_ceil(count.max(1)).max(1);
    (0..n).step_by(step)
}

/// Best approximation of `f0` (an effect on `s0`) by an effect valid on `s1`:
/// `min_{f1} max_i |f0(Ω⁰_i) − f1(Ω¹_i)|` as an exact Chebyshev LP with
/// `0 ≤ f1 ≤ 1` imposed on every sampled point.
pub fn best_approximation(f0: &Effect, s0: &StructureSample, s1: &StructureSample) -> Result<(f64, Effect)> {
    check_shared(s0, s1)?;
    check_dim(f0, s0)?;
    let d = s1.dim();
    let target: Vec<f64> = s0.points().iter().map(|p| f0.evaluate(p)).collect();
    let mut objective = vec![0.0; d + 1];
    objective[d] = -1.0;
    let base = LinearProgram::maximize(objective);
    let mut pool = Vec::with_capacity(4 * s1.len());
    for (p, &f) in s1.points().iter().zip(&target) {
        let mut up = p.clone();
        up.push(-1.0);
        let mut down: Vec<f64> = p.iter().map(|x| -x).collect();
        down.push(-1.0);
        let mut le1 = p.clone();
        le1.push(0.0);
        let mut ge0: Vec<f64> = p.iter().map(|x| -x).collect();
        ge0.push(0.0);
        pool.push((up, f));
        pool.push((down, -f));
        pool.push((le1, 1.0));
        pool.push((ge0, 0.0));
    }
    let mut initial: Vec<usize> = Vec::new();
    let extremes = [argmax(&target, |x| x), argmax(&target, |x| -x)];
    for i in extremes.into_iter().chain(spread(s1.len(), 4 * d + 8)) {
        initial.extend(4 * i..4 * i + 4);
    }
    initial.sort_unstable();
    initial.dedup();
    match lp_solve_lazy(&base, &pool, &initial, 8 * d + 32, &LpOptions::default())? {
        LpOutcome::Optimal(sol) => {
            let coeffs = sol.point[..d].to_vec();
            Ok((sol.point[d].max(0.0), Effect::new(coeffs, format!("best[{}]", f0.label))))
        }
        other => Err(Error::NumericalConsistency(format!(
            "approximation program should have an optimum, got {other:?}"
        ))),
    }
}

fn argmax(v: &[f64], key: impl Fn(f64) -> f64) -> usize {
    (0..v.len()).max_by(|&a, &b| key(v[a]).total_cmp(&key(v[b]))).unwrap_or(0)
}

/// Witness effects on the non-trivial blocks of `s`, one per anchor, cycling
/// through the blocks.
pub fn witness_family(s: &StructureSample, anchors: &[usize]) -> Result<Vec<Effect>> {
    let labels: Vec<&str> = s.blocks().iter().filter(|b| !b.trivial).map(|b| b.label.as_str()).collect();
    if labels.is_empty() {
        return Ok(vec![Effect::unit(s.dim())]);
    }
    anchors
        .iter()
        .enumerate()
        .map(|(k, &a)| witness_effect(s, labels[k % labels.len()], a))
        .collect()
}

/// Result of the analytic lower bound for a block missing from the second
/// structure, with its Monte-Carlo check.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub bound: f64,
    pub block_dim: usize,
    /// Least-squares residual of the witness over the second structure,
    /// averaged over the shared samples.
    pub mc_average: f64,
    pub sigma: f64,
    pub n: usize,
    pub seed: u64,
    /// `mc_average ≥ bound − 3σ̂`.
    pub verified: bool,
}

/// `1/(4d⁰)` for a block of `s0` whose representation does not occur in `s1`.
///
/// The check fits the witness effect on `block` by any linear functional on
/// `s1` (least squares over the shared samples) and compares the mean squared
/// residual with the bound.
pub fn structure_distance_lower_bound(s0: &StructureSample, s1: &StructureSample, block: &str) -> Result<LowerBound> {
    check_shared(s0, s1)?;
    let info = s0
        .block(block)
        .ok_or_else(|| Error::domain(format!("no block labelled {block:?}")))?;
    if info.trivial {
        return Err(Error::domain("the bound needs a non-trivial block"));
    }
    let spec = &s0
        .rep()
        .blocks()
        .iter()
        .find(|(l, _)| l == block)
        .ok_or_else(|| Error::domain(format!("no block labelled {block:?}")))?
        .1;
    if s1.rep().contains_label(block) || s1.rep().blocks().iter().any(|(_, sp)| sp == spec) {
        return Err(Error::domain(format!(
            "block {block:?} also occurs in the second structure; the bound does not apply"
        )));
    }
    let f0 = witness_effect(s0, block, 0)?;
    let target: Vec<f64> = s0.points().iter().map(|p| f0.evaluate(p)).collect();
    let a = RealMatrix::from_rows(s1.points())?;
    let coeffs = least_squares(&a, &target)?;
    let sq: Vec<f64> = s1
        .points()
        .iter()
        .zip(&target)
        .map(|(p, t)| (t - dot(&coeffs, p)).powi(2))
        .collect();
    let (mean, sigma) = mean_and_error(&sq);
    let bound = 1.0 / (4.0 * info.dim as f64);
    Ok(LowerBound {
        bound,
        block_dim: info.dim,
        mc_average: mean,
        sigma,
        n: sq.len(),
        seed: s0.rng().seed,
        verified: mean >= bound - 3.0 * sigma,
    })
}

fn mean_and_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    /// `max(forward, backward)`.
    pub estimate: f64,
    /// Directed estimate from the first structure to the second.
    pub forward: f64,
    pub backward: f64,
    /// Analytic lower bound `1/(4d)` when some block of one structure is
    /// absent from the other; 0 otherwise.
    pub lower_bound: f64,
    pub n: usize,
    pub effects: usize,
    pub seed: u64,
}

/// Largest `1/(4d)` over blocks of either structure whose representation is
/// missing from the other.
pub fn analytic_lower_bound(s0: &StructureSample, s1: &StructureSample) -> f64 {
    let missing = |a: &StructureSample, b: &StructureSample| {
        a.rep()
            .blocks()
            .iter()
            .filter(|(_, sp)| !sp.is_trivial() && !b.rep().blocks().iter().any(|(_, other)| other == sp))
            .map(|(_, sp)| 1.0 / (4.0 * sp.real_dimension() as f64))
            .fold(0.0, f64::max)
    };
    missing(s0, s1).max(missing(s1, s0))
}

/// Sampled estimate of the symmetrised structure distance.
///
/// Both directions use witness effects anchored at the same rng-chosen sample
/// indices; the inner minimum over the other structure's effects is solved
/// exactly on the sample. Swapping the arguments swaps `forward` and
/// `backward` and leaves `estimate` unchanged.
pub fn symmetrized_distance_estimate(
    s0: &StructureSample,
    s1: &StructureSample,
    effect_family_size: usize,
    rng: SeededRng,
) -> Result<DistanceReport> {
    check_shared(s0, s1)?;
    if s0.is_empty() {
        return Err(Error::domain("structures have no sampled points"));
    }
    let mut gen = rng.generator();
    let anchors: Vec<usize> = (0..effect_family_size.max(1))
        .map(|_| gen.random_range(0..s0.len()))
        .collect();
    let directed = |a: &StructureSample, b: &StructureSample| -> Result<f64> {
        let mut worst: f64 = 0.0;
        for f in witness_family(a, &anchors)? {
            worst = worst.max(best_approximation(&f, a, b)?.0);
        }
        Ok(worst)
    };
    let forward = directed(s0, s1)?;
    let backward = directed(s1, s0)?;
    Ok(DistanceReport {
        estimate: forward.max(backward),
        forward,
        backward,
        lower_bound: analytic_lower_bound(s0, s1),
        n: s0.len(),
        effects: anchors.len(),
        seed: rng.seed,
    })
}

/// Metadata string describing the default generator.
pub const GENERATOR_NOTE: &str =
    "R(t) rotates span(w1, w2) by t*pi/2, taking w1 to w2 at t = 1; the generator is not unique";

/// A rotation of the reference vector inside a plane of fixed vectors.
#[derive(Debug, Clone)]
pub struct DeformationPath {
    base: StructureSample,
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl DeformationPath {
    /// `w1`, `w2` span the rotation plane (Gram–Schmidt is applied); both must
    /// be fixed by the stabiliser.
    pub fn new(base: StructureSample, w1: &[f64], w2: &[f64]) -> Result<Self> {
        let rank = base.fixed_basis().cols();
        if rank < 2 {
            return Err(Error::domain(format!(
                "the fixed space has rank {rank}; there is no plane to rotate in"
            )));
        }
        let n = base.reference().len();
        if w1.len() != n || w2.len() != n {
            return Err(Error::domain("plane vectors must match the reference dimension"));
        }
        let r1 = norm(w1);
        if r1 < 1e-12 {
            return Err(Error::domain("w1 is zero"));
        }
        let w1: Vec<f64> = w1.iter().map(|x| x / r1).collect();
        let c = dot(&w1, w2);
        let w2: Vec<f64> = w2.iter().zip(&w1).map(|(b, a)| b - c * a).collect();
        let r2 = norm(&w2);
        if r2 < 1e-9 {
            return Err(Error::domain("w1 and w2 are parallel"));
        }
        let w2: Vec<f64> = w2.iter().map(|x| x / r2).collect();
        let fixed = base.fixed_basis();
        for (name, w) in [("w1", &w1), ("w2", &w2)] {
            let p = fixed.matvec(&fixed.tr_matvec(w));
            let off = norm(&crate::numerics::sub_vec(&p, w));
            if off > 1e-6 {
                return Err(Error::domain(format!("{name} is not fixed by the subgroup (violation {off:e})")));
            }
        }
        Ok(DeformationPath { base, w1, w2 })
    }

    /// Plane spanned by the non-trivial part of the reference and the fixed
    /// direction least aligned with it.
    pub fn from_reference(base: StructureSample) -> Result<Self> {
        let rank = base.fixed_basis().cols();
        if rank < 2 {
            return Err(Error::domain(format!(
                "the fixed space has rank {rank}; there is no plane to rotate in"
            )));
        }
        let mask: Vec<bool> = {
            let mut m = vec![false; base.reference().len()];
            for b in base.blocks().iter().skip(1).filter(|b| !b.trivial) {
                for i in b.range.clone() {
                    m[i - 1] = true;
                }
            }
            m
        };
        let masked = |v: &[f64]| -> Vec<f64> { v.iter().zip(&mask).map(|(x, &k)| if k { *x } else { 0.0 }).collect() };
        let w1 = masked(base.reference());
        let r1 = norm(&w1);
        if r1 < 1e-12 {
            return Err(Error::domain("the reference has no non-trivial component"));
        }
        let w1: Vec<f64> = w1.iter().map(|x| x / r1).collect();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for col in base.fixed_basis().columns() {
            let v = masked(&col);
            let c = dot(&v, &w1);
            let r: Vec<f64> = v.iter().zip(&w1).map(|(x, a)| x - c * a).collect();
            let len = norm(&r);
            if best.as_ref().is_none_or(|(l, _)| len > *l) {
                best = Some((len, r));
            }
        }
        match best {
            Some((len, w2)) if len > 1e-6 => DeformationPath::new(base, &w1, &w2),
            _ => Err(Error::domain("no fixed direction orthogonal to the reference")),
        }
    }

    pub fn base(&self) -> &StructureSample {
        &self.base
    }

    pub fn plane(&self) -> (&[f64], &[f64]) {
        (&self.w1, &self.w2)
    }

    /// `R(t)v`: rotation by `tπ/2` in the plane, identity on its complement.
    pub fn rotate(&self, v: &[f64], t: f64) -> Vec<f64> {
        let (a, b) = (dot(&self.w1, v), dot(&self.w2, v));
        let (s, c) = (t * std::f64::consts::FRAC_PI_2).sin_cos();
        let (na, nb) = (c * a - s * b, s * a + c * b);
        v.iter()
            .zip(self.w1.iter().zip(&self.w2))
            .map(|(x, (p, q))| x + (na - a) * p + (nb - b) * q)
            .collect()
    }
}

/// Structure generated by `R(t)v` from the same group samples as the base.
pub fn deform(path: &DeformationPath, t: f64) -> Result<StructureSample> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t = {t} outside [0, 1]")));
    }
    if t == 0.0 {
        return Ok(path.base.clone());
    }
    path.base.with_reference(&path.rotate(path.base.reference(), t))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurAverage {
    pub mc_average: f64,
    pub exact: f64,
    pub sigma: f64,
    pub n: usize,
    pub seed: u64,
}

impl SchurAverage {
    /// `|mc − exact| ≤ k·σ̂`.
    pub fn within(&self, k: f64) -> bool {
        (self.mc_average - self.exact).abs() <= k * self.sigma + 1e-12
    }
}

/// Haar average of `f(gx)²` for the structure's reference point, by fresh
/// Monte-Carlo draws and by the block formula: the constant part squared plus
/// `‖Λ_j‖² r_j² / d_j` for every non-trivial block (with cross terms between
/// blocks carrying the same real representation).
pub fn schur_average_check(s: &StructureSample, e: &Effect, n: usize, rng: SeededRng) -> Result<SchurAverage> {
    check_dim(e, s)?;
    if n == 0 {
        return Err(Error::domain("need at least one Monte-Carlo draw"));
    }
    let v = s.reference();
    let blocks = &s.blocks()[1..];
    let specs = s.rep().blocks();
    let mut constant = e.coeffs[0];
    for b in blocks.iter().filter(|b| b.trivial) {
        for i in b.range.clone() {
            constant += e.coeffs[i] * v[i - 1];
        }
    }
    let mut exact = constant * constant;
    for (j, bj) in blocks.iter().enumerate() {
        if bj.trivial {
            continue;
        }
        for (k, bk) in blocks.iter().enumerate() {
            if bk.trivial || specs[j].1 != specs[k].1 {
                continue;
            }
            if j != k && matches!(specs[j].1.kind, RepKind::SuFundamental(_) | RepKind::SoFundamental(2)) {
                return Err(Error::domain(
                    "repeated blocks of a non-real representation are not supported",
                ));
            }
            let lam = dot(&e.coeffs[bj.range.clone()], &e.coeffs[bk.range.clone()]);
            let vv = dot(&v[bj.range.start - 1..bj.range.end - 1], &v[bk.range.start - 1..bk.range.end - 1]);
            exact += lam * vv / bj.dim as f64;
        }
    }
    let mut gen = rng.generator();
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let g = haar_sample(s.rep().group(), &mut gen);
        let x = s.rep().apply(&g)?.matvec(v);
        let f = e.coeffs[0] + dot(&e.coeffs[1..], &x);
        values.push(f * f);
    }
    let (mc_average, sigma) = mean_and_error(&values);
    Ok(SchurAverage {
        mc_average,
        exact,
        sigma,
        n,
        seed: rng.seed,
    })
}

/// `sup_f f(x_i) − f(x_j)` over effects valid on the whole sample.
pub fn pure_state_distance(s: &StructureSample, i: usize, j: usize) -> Result<f64> {
    if s.len() < 100 {
        return Err(Error::domain(format!(
            "pure-state distance needs at least 100 sampled points, got {}",
            s.len()
        )));
    }
    if i >= s.len() || j >= s.len() {
        return Err(Error::domain("point index out of range"));
    }
    if i == j {
        return Ok(0.0);
    }
    let d = s.dim();
    let objective: Vec<f64> = s.point(i).iter().zip(s.point(j)).map(|(a, b)| a - b).collect();
    let base = LinearProgram::maximize(objective);
    let mut pool = Vec::with_capacity(2 * s.len());
    for p in s.points() {
        pool.push((p.clone(), 1.0));
        pool.push((p.iter().map(|x| -x).collect(), 0.0));
    }
    let mut initial: Vec<usize> = [i, j]
        .into_iter()
        .chain(spread(s.len(), 4 * d + 8))
        .flat_map(|k| [2 * k, 2 * k + 1])
        .collect();
    initial.sort_unstable();
    initial.dedup();
    match lp_solve_lazy(&base, &pool, &initial, 8 * d + 32, &LpOptions::default())? {
        LpOutcome::Optimal(sol) => Ok(sol.value.clamp(0.0, 1.0)),
        other => Err(Error::NumericalConsistency(format!(
            "pure-state distance program should have an optimum, got {other:?}"
        ))),
    }
}

/// `1/(4(d₀ − 1))`.
pub fn rigidity_bound(d0: usize) -> Result<f64> {
    if d0 < 2 {
        return Err(Error::domain(format!("rigidity bound needs d0 ≥ 2, got {d0}")));
    }
    Ok(1.0 / (4.0 * (d0 - 1) as f64))
}
