//! Orbit state spaces: sampled points `(1, Γ(g)v)` of a reference vector `v`
//! fixed by the stabiliser, the maximally mixed state, effects and validity.

use std::io::Write;
use std::ops::Range;

use crate::compact_rep::{invariant_projector, CompactGroup, CompactRepSpec, GroupElement, Quadrature, SubgroupSpec};
use crate::error::{Error, Result};
use crate::numerics::{dot, norm, RealMatrix};
use crate::rng::SeededRng;
use crate::DEFAULT_TOL;

/// Label of the leading normalisation block.
pub const UNIT_BLOCK: &str = "unit";

/// Direct sum of representations of one compact group, each with a distinct label.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureRep {
    group: CompactGroup,
    blocks: Vec<(String, CompactRepSpec)>,
}

impl StructureRep {
    pub fn new(blocks: Vec<(String, CompactRepSpec)>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::domain("a structure needs at least one representation block"));
        };
        let group = first.1.group();
        for (i, (label, spec)) in blocks.iter().enumerate() {
            if spec.group() != group {
                return Err(Error::domain("all blocks must represent the same group"));
            }
            if label == UNIT_BLOCK || blocks[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::domain(format!("duplicate or reserved block label {label:?}")));
            }
        }
        Ok(StructureRep { group, blocks })
    }

    /// A single block labelled by the representation's own name.
    pub fn single(spec: CompactRepSpec) -> Self {
        StructureRep {
            group: spec.group(),
            blocks: vec![(spec.label(), spec)],
        }
    }

    pub fn group(&self) -> CompactGroup {
        self.group
    }

    pub fn blocks(&self) -> &[(String, CompactRepSpec)] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|(_, s)| s.real_dimension()).sum()
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.blocks.iter().any(|(l, _)| l == label)
    }

    /// Block-diagonal Γ(g).
    pub fn apply(&self, g: &GroupElement) -> Result<RealMatrix> {
        let mats = self.blocks.iter().map(|(_, s)| s.apply(g)).collect::<Result<Vec<_>>>()?;
        Ok(RealMatrix::direct_sum(&mats))
    }
}

/// A block of the augmented coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockInfo {
    pub label: String,
    /// Range in augmented coordinates (coordinate 0 is the unit block).
    pub range: Range<usize>,
    pub dim: usize,
    pub trivial: bool,
}

/// A dual vector on augmented coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    pub coeffs: Vec<f64>,
    pub label: String,
}

impl Effect {
    pub fn new(coeffs: Vec<f64>, label: impl Into<String>) -> Self {
        Effect {
            coeffs,
            label: label.into(),
        }
    }

    /// The unit effect `u = (1, 0, …, 0)`.
    pub fn unit(dim: usize) -> Self {
        let mut c = vec![0.0; dim];
        if dim > 0 {
            c[0] = 1.0;
        }
        Effect::new(c, "u")
    }

    pub fn zero(dim: usize) -> Self {
        Effect::new(vec![0.0; dim], "0")
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn evaluate(&self, state: &[f64]) -> f64 {
        dot(&self.coeffs, state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub valid: bool,
    pub min: f64,
    pub max: f64,
}

/// A probabilistic structure realised by a seeded orbit sample.
#[derive(Debug, Clone)]
pub struct StructureSample {
    rep: StructureRep,
    sub: SubgroupSpec,
    blocks: Vec<BlockInfo>,
    reference: Vec<f64>,
    actions: Vec<RealMatrix>,
    points: Vec<Vec<f64>>,
    mixed: Vec<f64>,
    empirical_mixed: Vec<f64>,
    rng: SeededRng,
    fixed_basis: RealMatrix,
}

/// Orthonormal basis of the H-fixed vectors of the whole direct sum.
pub fn fixed_space(rep: &StructureRep, sub: &SubgroupSpec) -> Result<RealMatrix> {
    let n = rep.dimension();
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut off = 0;
    for (_, spec) in rep.blocks() {
        let s = invariant_projector(spec, sub, Quadrature::default_for(sub))?;
        for j in 0..s.rank {
            let mut v = vec![0.0; n];
            for (i, x) in s.basis.column(j).into_iter().enumerate() {
                v[off + i] = x;
            }
            cols.push(v);
        }
        off += spec.real_dimension();
    }
    if cols.is_empty() {
        return Ok(RealMatrix::zeros(n, 0));
    }
    RealMatrix::from_columns(&cols)
}

fn project(basis: &RealMatrix, v: &[f64]) -> Vec<f64> {
    basis.matvec(&basis.tr_matvec(v))
}

/// Orbit sample of `reference` under `n_samples` Haar draws.
///
/// Each non-trivial block of the reference is rescaled to unit norm; the
/// reference must be fixed by the subgroup within 1e-6.
pub fn build_structure(
    rep: &StructureRep,
    sub: &SubgroupSpec,
    reference: &[f64],
    n_samples: usize,
    rng: SeededRng,
) -> Result<StructureSample> {
    if reference.len() != rep.dimension() {
        return Err(Error::domain(format!(
            "reference has {} coordinates, representation has dimension {}",
            reference.len(),
            rep.dimension()
        )));
    }
    if reference.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("reference has non-finite entries"));
    }
    let fixed_basis = fixed_space(rep, sub)?;
    let mut blocks = vec![BlockInfo {
        label: UNIT_BLOCK.to_string(),
        range: 0..1,
        dim: 1,
        trivial: true,
    }];
    let mut reference = reference.to_vec();
    let mut off = 0;
    for (label, spec) in rep.blocks() {
        let dim = spec.real_dimension();
        let trivial = spec.is_trivial();
        if !trivial {
            let part = &mut reference[off..off + dim];
            let r = norm(part);
            if r < 1e-12 {
                return Err(Error::domain(format!("reference has no component in block {label:?}")));
            }
            for x in part.iter_mut() {
                *x /= r;
            }
        }
        blocks.push(BlockInfo {
            label: label.clone(),
            range: off + 1..off + 1 + dim,
            dim,
            trivial,
        });
        off += dim;
    }
    let violation = norm(&crate::numerics::sub_vec(&project(&fixed_basis, &reference), &reference));
    if violation > 1e-6 {
        return Err(Error::domain(format!(
            "reference is not fixed by the subgroup (violation norm {violation:e})"
        )));
    }
    let mut gen = rng.generator();
    let mut actions = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let g = crate::compact_rep::haar_sample(rep.group(), &mut gen);
        actions.push(rep.apply(&g)?);
    }
    let mut mixed = vec![0.0; off + 1];
    mixed[0] = 1.0;
    for b in &blocks[1..] {
        if b.trivial {
            for i in b.range.clone() {
                mixed[i] = reference[i - 1];
            }
        }
    }
    let mut s = StructureSample {
        rep: rep.clone(),
        sub: sub.clone(),
        blocks,
        reference,
        actions,
        points: Vec::new(),
        mixed,
        empirical_mixed: Vec::new(),
        rng,
        fixed_basis,
    };
    s.recompute_points();
    Ok(s)
}

impl StructureSample {
    fn recompute_points(&mut self) {
        let d = self.reference.len() + 1;
        self.points = self
            .actions
            .iter()
            .map(|g| {
                let mut p = Vec::with_capacity(d);
                p.push(1.0);
                p.extend(g.matvec(&self.reference));
                p
            })
            .collect();
        let mut mean = vec![0.0; d];
        for p in &self.points {
            for (m, x) in mean.iter_mut().zip(p) {
                *m += x;
            }
        }
        let n = self.points.len().max(1) as f64;
        self.empirical_mixed = mean.into_iter().map(|m| m / n).collect();
    }

    /// Same group samples, different reference vector.
    pub fn with_reference(&self, reference: &[f64]) -> Result<StructureSample> {
        let mut s = self.clone();
        if reference.len() != self.reference.len() {
            return Err(Error::domain("reference dimension mismatch"));
        }
        let violation = norm(&crate::numerics::sub_vec(&project(&self.fixed_basis, reference), reference));
        if violation > 1e-6 {
            return Err(Error::domain(format!(
                "reference is not fixed by the subgroup (violation norm {violation:e})"
            )));
        }
        s.reference = reference.to_vec();
        for b in &s.blocks[1..] {
            if b.trivial {
                for i in b.range.clone() {
                    s.mixed[i] = reference[i - 1];
                }
            }
        }
        s.recompute_points();
        Ok(s)
    }

    /// Applies a common Γ(g) to every stored action (left translation of the sample).
    pub fn translated(&self, g: &GroupElement) -> Result<StructureSample> {
        let m = self.rep.apply(g)?;
        let mut s = self.clone();
        s.actions = self.actions.iter().map(|a| m.matmul(a)).collect();
        s.recompute_points();
        Ok(s)
    }

    pub fn rep(&self) -> &StructureRep {
        &self.rep
    }

    pub fn subgroup(&self) -> &SubgroupSpec {
        &self.sub
    }

    pub fn blocks(&self) -> &[BlockInfo] {
        &self.blocks
    }

    pub fn block(&self, label: &str) -> Option<&BlockInfo> {
        self.blocks.iter().find(|b| b.label == label)
    }

    /// Reference vector without the normalisation coordinate.
    pub fn reference(&self) -> &[f64] {
        &self.reference
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Augmented dimension (including the normalisation coordinate).
    pub fn dim(&self) -> usize {
        self.reference.len() + 1
    }

    pub fn actions(&self) -> &[RealMatrix] {
        &self.actions
    }

    /// The maximally mixed state: the reference projected onto the trivial blocks.
    pub fn mixed(&self) -> &[f64] {
        &self.mixed
    }

    /// Mean of the sampled points.
    pub fn empirical_mixed(&self) -> &[f64] {
        &self.empirical_mixed
    }

    pub fn rng(&self) -> SeededRng {
        self.rng
    }

    pub fn fixed_basis(&self) -> &RealMatrix {
        &self.fixed_basis
    }

    /// True when both samples were drawn from the same group elements.
    pub fn shares_group_samples(&self, other: &StructureSample) -> bool {
        self.rng == other.rng && self.len() == other.len() && self.rep.group() == other.rep.group()
    }

    pub fn effect_valid(&self, e: &Effect) -> Result<Validity> {
        effect_valid(self, e)
    }

    /// CSV with a comment line listing block boundaries, a header `c0..c{d−1}`
    /// and one row per point.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Resource(format!("write failed: {e}"));
        let layout: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{}={}..{}", b.label, b.range.start, b.range.end))
            .collect();
        writeln!(out, "# blocks: {}", layout.join(";")).map_err(io)?;
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Resource(format!("csv write failed: {e}"));
        w.write_record((0..self.dim()).map(|i| format!("c{i}"))).map_err(csv_err)?;
        for p in &self.points {
            w.write_record(p.iter().map(|x| format!("{x:.17e}"))).map_err(csv_err)?;
        }
        w.flush().map_err(io)?;
        Ok(())
    }
}

/// `max_x |‖p_x − center‖ − r̄|` with `r̄` the mean radius; 0 for fewer than two points.
pub fn sphere_deviation(points: &[Vec<f64>], center: &[f64]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let radii: Vec<f64> = points
        .iter()
        .map(|p| norm(&crate::numerics::sub_vec(p, center)))
        .collect();
    let mean = radii.iter().sum::<f64>() / radii.len() as f64;
    radii.iter().fold(0.0, |m, r| m.max((r - mean).abs()))
}

/// Maximum radial deviation of the sample about the mixed state.
pub fn sphere_check(s: &StructureSample) -> f64 {
    sphere_deviation(&s.points, &s.mixed)
}

pub fn effect_valid(s: &StructureSample, e: &Effect) -> Result<Validity> {
    if e.dim() != s.dim() {
        return Err(Error::domain(format!(
            "effect has dimension {}, states have dimension {}",
            e.dim(),
            s.dim()
        )));
    }
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &s.points {
        let v = e.evaluate(p);
        min = min.min(v);
        max = max.max(v);
    }
    if s.points.is_empty() {
        min = 0.0;
        max = 0.0;
    }
    Ok(Validity {
        valid: min >= -DEFAULT_TOL && max <= 1.0 + DEFAULT_TOL,
        min,
        max,
    })
}

/// `f(x) = ½ + ½⟨Ω_b(x₀), Ω_b(x)⟩ / r²` on block `b`, anchored at sample point `anchor`.
pub fn witness_effect(s: &StructureSample, block: &str, anchor: usize) -> Result<Effect> {
    let b = s
        .block(block)
        .ok_or_else(|| Error::domain(format!("no block labelled {block:?}")))?;
    if b.trivial {
        return Err(Error::domain("witness effects live on non-trivial blocks"));
    }
    let x0 = s
        .points
        .get(anchor)
        .ok_or_else(|| Error::domain(format!("anchor {anchor} out of range")))?;
    let comp = &x0[b.range.clone()];
    let r2 = dot(comp, comp);
    if r2 < 1e-24 {
        return Err(Error::domain("anchor has no component in the block"));
    }
    let mut c = vec![0.0; s.dim()];
    c[0] = 0.5;
    for (i, &x) in b.range.clone().zip(comp) {
        c[i] = 0.5 * x / r2;
    }
    Ok(Effect::new(c, format!("witness[{block}@{anchor}]")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bloch(n: usize) -> StructureSample {
        let rep = StructureRep::single(CompactRepSpec::su_adjoint(2).unwrap());
        build_structure(&rep, &SubgroupSpec::FullTorus, &[0.0, 0.0, 1.0], n, SeededRng::new(0)).unwrap()
    }

    #[test]
    fn bloch_sample_is_a_unit_sphere() {
        let s = bloch(500);
        assert_eq!(s.dim(), 4);
        assert!(sphere_check(&s) < 1e-8);
        for p in s.points() {
            assert_eq!(p[0], 1.0);
            assert!((norm(&p[1..]) - 1.0).abs() < 1e-10);
        }
        assert_eq!(s.mixed(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn trivial_rep_points_coincide() {
        let spec = CompactRepSpec::trivial(CompactGroup::Su(2), 2).unwrap();
        let rep = StructureRep::single(spec);
        let s = build_structure(&rep, &SubgroupSpec::FullTorus, &[0.3, -0.2], 10, SeededRng::new(1)).unwrap();
        for p in s.points() {
            assert_eq!(p, &vec![1.0, 0.3, -0.2]);
        }
        assert_eq!(s.mixed(), &[1.0, 0.3, -0.2]);
        assert_eq!(sphere_check(&s), 0.0);
    }

    #[test]
    fn non_invariant_reference_rejected() {
        let rep = StructureRep::single(CompactRepSpec::su_adjoint(2).unwrap());
        let err = build_structure(&rep, &SubgroupSpec::FullTorus, &[1.0, 0.0, 0.0], 5, SeededRng::new(0)).unwrap_err();
        assert!(matches!(err, Error::Domain(m) if m.contains("violation norm")));
    }

    #[test]
    fn corrupted_point_is_detected() {
        let s = bloch(200);
        let mut pts = s.points().to_vec();
        for x in pts[7][1..].iter_mut() {
            *x *= 1.1;
        }
        let dev = sphere_deviation(&pts, s.mixed());
        assert!((dev - 0.1).abs() < 0.002, "{dev}");
        assert_eq!(sphere_deviation(&pts[..1], s.mixed()), 0.0);
    }

    #[test]
    fn effect_validity_examples() {
        let s = bloch(500);
        let u = effect_valid(&s, &Effect::unit(4)).unwrap();
        assert!(u.valid && u.min == 1.0 && u.max == 1.0);
        let z = effect_valid(&s, &Effect::zero(4)).unwrap();
        assert!(z.valid && z.min == 0.0 && z.max == 0.0);
        let bad = effect_valid(&s, &Effect::new(vec![0.5, 0.0, 0.0, 1.0], "too big")).unwrap();
        assert!(!bad.valid && bad.max > 1.0);
        assert!(effect_valid(&s, &Effect::unit(3)).is_err());
    }

    #[test]
    fn witness_effect_properties() {
        let s = bloch(1000);
        // Anchor at the point closest to the north pole.
        let north = (0..s.len()).max_by(|&a, &b| s.point(a)[3].total_cmp(&s.point(b)[3])).unwrap();
        let w = witness_effect(&s, "su2_adjoint", north).unwrap();
        assert!(effect_valid(&s, &w).unwrap().valid);
        assert!((w.evaluate(s.point(north)) - 1.0).abs() < 1e-12);
        assert!((w.coeffs[3] - 0.5).abs() < 0.01);
        let avg = s.points().iter().map(|p| w.evaluate(p)).sum::<f64>() / s.len() as f64;
        assert!((avg - 0.5).abs() < 0.05);
        assert!(witness_effect(&s, "nope", 0).is_err());
        assert!(witness_effect(&s, UNIT_BLOCK, 0).is_err());
    }

    #[test]
    fn csv_layout() {
        let s = bloch(3);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# blocks: unit=0..1;su2_adjoint=1..4");
        assert_eq!(lines[1], "c0,c1,c2,c3");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let a = CompactRepSpec::su_adjoint(2).unwrap();
        assert!(StructureRep::new(vec![("x".into(), a), ("x".into(), a)]).is_err());
        assert!(StructureRep::new(vec![(UNIT_BLOCK.into(), a)]).is_err());
        assert!(StructureRep::new(vec![("a".into(), a), ("b".into(), CompactRepSpec::su_adjoint(3).unwrap())]).is_err());
    }
}
