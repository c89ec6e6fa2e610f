//! Distinguishability in the deformable SU(3) family through its diagonal
//! (hexagon) projection, the two-bit encoding game, and a sampled
//! cross-check in the full eight-dimensional representation.

use std::io::Write;

use num_complex::Complex64;

use crate::compact_rep::adjoint_matrix;
use crate::error::{Error, Result};
use crate::numerics::{dot, lp_solve, CMatrix, LinearProgram, LpOutcome};
use crate::state_space::StructureSample;

const MERGE_TOL: f64 = 1e-12;

/// Spectrum `(α₁, α₂, α₃)` of the reference state, renormalized to sum 1 and
/// sorted in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaTriple {
    values: [f64; 3],
    renormalized: bool,
}

impl AlphaTriple {
    pub fn new(raw: [f64; 3]) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("α must be finite"));
        }
        if raw.iter().any(|&x| x < -1e-12) {
            return Err(Error::domain("α entries must be non-negative"));
        }
        let sum: f64 = raw.iter().sum();
        if sum <= 0.0 {
            return Err(Error::domain("α must have a positive sum"));
        }
        let mut values = raw.map(|x| x.max(0.0) / sum);
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(AlphaTriple {
            values,
            renormalized: (sum - 1.0).abs() > 1e-6,
        })
    }

    pub fn values(&self) -> [f64; 3] {
        self.values
    }

    /// True when the input did not sum to 1 within 1e-6.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    /// Pairs of equal entries (α₁ = α₂, α₂ = α₃).
    pub fn degeneracies(&self) -> (bool, bool) {
        let [a, b, c] = self.values;
        ((a - b).abs() <= MERGE_TOL, (b - c).abs() <= MERGE_TOL)
    }
}

/// Labelled permutations y₁..y₆ of α as `(i, j, k)` index triples.
pub const VERTEX_PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2], // y1
    [0, 2, 1], // y2
    [1, 0, 2], // y3
    [2, 1, 0], // y4
    [2, 0, 1], // y5
    [1, 2, 0], // y6
];

/// The six permuted spectra and their distinct values.
#[derive(Debug, Clone, PartialEq)]
pub struct HexagonProjection {
    alpha: AlphaTriple,
    labelled: [[f64; 3]; 6],
    distinct: Vec<[f64; 3]>,
    label_to_vertex: [usize; 6],
}

impl HexagonProjection {
    pub fn alpha(&self) -> AlphaTriple {
        self.alpha
    }

    /// `y_{label+1}` for `label` in 0..6.
    pub fn labelled(&self, label: usize) -> [f64; 3] {
        self.labelled[label]
    }

    pub fn labelled_vertices(&self) -> &[[f64; 3]; 6] {
        &self.labelled
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.distinct
    }

    /// Index into [`vertices`](Self::vertices) of each label y₁..y₆.
    pub fn multiplicity_map(&self) -> [usize; 6] {
        self.label_to_vertex
    }

    /// Figure data: `vertex,c1,c2,c3,plane_x,plane_y`, one row per label.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let err = |e: csv::Error| Error::Resource(format!("csv write failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["vertex", "c1", "c2", "c3", "plane_x", "plane_y"]).map_err(err)?;
        for (i, y) in self.labelled.iter().enumerate() {
            let (px, py) = plane_coordinates(*y);
            let row = [
                format!("y{}", i + 1),
                format!("{:.17e}", y[0]),
                format!("{:.17e}", y[1]),
                format!("{:.17e}", y[2]),
                format!("{px:.17e}"),
                format!("{py:.17e}"),
            ];
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(|e| Error::Resource(format!("write failed: {e}")))?;
        Ok(())
    }
}

/// Isometry of the plane `c₁ + c₂ + c₃ = 1` onto R².
pub fn plane_coordinates(c: [f64; 3]) -> (f64, f64) {
    (
        (c[0] - c[1]) / std::f64::consts::SQRT_2,
        (c[0] + c[1] - 2.0 * c[2]) / 6f64.sqrt(),
    )
}

pub fn hexagon_vertices(alpha: AlphaTriple) -> HexagonProjection {
    let a = alpha.values;
    let labelled = VERTEX_PERMUTATIONS.map(|p| [a[p[0]], a[p[1]], a[p[2]]]);
    let mut distinct: Vec<[f64; 3]> = Vec::new();
    let mut label_to_vertex = [0; 6];
    for (i, y) in labelled.iter().enumerate() {
        let found = distinct
            .iter()
            .position(|v| v.iter().zip(y).all(|(p, q)| (p - q).abs() <= MERGE_TOL));
        label_to_vertex[i] = match found {
            Some(k) => k,
            None => {
                distinct.push(*y);
                distinct.len() - 1
            }
        };
    }
    HexagonProjection {
        alpha,
        labelled,
        distinct,
        label_to_vertex,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distinguishability {
    pub n: usize,
    /// Indices into the distinct vertex list.
    pub states: Vec<usize>,
    /// One effect per state, as a linear functional on R³.
    pub effects: Vec<Vec<f64>>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Feasibility of effects `A_1..A_k` on `dim` coordinates with
/// `Σ A_i = unit`, `A_i·t_j = δ_ij` and `0 ≤ A_i·p ≤ 1` on every `p`.
fn perfect_discrimination_lp(
    dim: usize,
    unit: &[f64],
    targets: &[&[f64]],
    validity: &[&[f64]],
) -> Result<Option<Vec<Vec<f64>>>> {
    let k = targets.len();
    let nv = dim * k;
    let mut lp = LinearProgram::maximize(vec![0.0; nv]);
    for c in 0..dim {
        let mut row = vec![0.0; nv];
        for i in 0..k {
            row[i * dim + c] = 1.0;
        }
        lp.add_eq(&row, unit[c])?;
    }
    for i in 0..k {
        for (j, t) in targets.iter().enumerate() {
            let mut row = vec![0.0; nv];
            row[i * dim..(i + 1) * dim].copy_from_slice(t);
            lp.add_eq(&row, if i == j { 1.0 } else { 0.0 })?;
        }
        for p in validity {
            let mut row = vec![0.0; nv];
            row[i * dim..(i + 1) * dim].copy_from_slice(p);
            lp.add_le(&row, 1.0)?;
            lp.add_ge(&row, 0.0)?;
        }
    }
    Ok(match lp_solve(&lp)? {
        LpOutcome::Optimal(s) => Some(s.point.chunks(dim).map(<[f64]>::to_vec).collect()),
        _ => None,
    })
}

/// Largest set of perfectly distinguishable vertices, by exhaustive subset search.
pub fn max_distinguishable(h: &HexagonProjection) -> Result<Distinguishability> {
    let verts: Vec<&[f64]> = h.distinct.iter().map(|v| v.as_slice()).collect();
    let unit = [1.0; 3];
    for k in (1..=verts.len().min(3)).rev() {
        for subset in subsets(verts.len(), k) {
            let targets: Vec<&[f64]> = subset.iter().map(|&i| verts[i]).collect();
            if let Some(effects) = perfect_discrimination_lp(3, &unit, &targets, &verts)? {
                return Ok(Distinguishability {
                    n: k,
                    states: subset,
                    effects,
                });
            }
        }
    }
    Err(Error::SolverFailure("even a single state was not discriminable".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameValue {
    /// Success probability for bit 1: {y₁, y₂} versus {y₄, y₅}.
    pub bit1_success: f64,
    /// Success probability for bit 2: {y₁, y₅} versus {y₂, y₄}.
    pub bit2_success: f64,
    pub bit1_effect: Vec<f64>,
    pub bit2_effect: Vec<f64>,
}

/// Prior and payoff of the encoding game: the four encodings are equally
/// likely and the score is the average success probability.
pub const GAME_CONVENTION: &str = "uniform prior over the four encodings; average success probability";

/// `max_B ¼[B·p₁ + B·p₂ + (1 − B·q₁) + (1 − B·q₂)]` over effects valid on every vertex.
fn guessing_lp(h: &HexagonProjection, yes: [usize; 2], no: [usize; 2]) -> Result<(f64, Vec<f64>)> {
    let y = |l: usize| h.labelled[l];
    let c: Vec<f64> = (0..3)
        .map(|i| 0.25 * (y(yes[0])[i] + y(yes[1])[i] - y(no[0])[i] - y(no[1])[i]))
        .collect();
    let mut lp = LinearProgram::maximize(c);
    for v in &h.distinct {
        lp.add_le(v, 1.0)?;
        lp.add_ge(v, 0.0)?;
    }
    match lp_solve(&lp)? {
        LpOutcome::Optimal(s) => Ok((0.5 + s.value, s.point)),
        other => Err(Error::SolverFailure(format!("guessing LP returned {other:?}"))),
    }
}

pub fn encoding_game_value(alpha: AlphaTriple) -> Result<GameValue> {
    let h = hexagon_vertices(alpha);
    // Labels are 0-based: y1 = 0, y2 = 1, y4 = 3, y5 = 4.
    let (bit1_success, bit1_effect) = guessing_lp(&h, [0, 1], [3, 4])?;
    let (bit2_success, bit2_effect) = guessing_lp(&h, [0, 4], [1, 3])?;
    Ok(GameValue {
        bit1_success,
        bit2_success,
        bit1_effect,
        bit2_effect,
    })
}

/// SU(3) element permuting the standard basis by `perm` (sign-fixed to det 1).
fn permutation_unitary(perm: [usize; 3]) -> CMatrix {
    let mut p = CMatrix::zeros(3, 3);
    for (i, &pi) in perm.iter().enumerate() {
        p[(pi, i)] = Complex64::new(1.0, 0.0);
    }
    if (p.determinant().re - 1.0).abs() > 1e-12 {
        p = p.scale(Complex64::new(-1.0, 0.0));
    }
    p
}

/// Whether `k` orbit states are perfectly distinguishable by effects valid
/// on every sampled point. Target states are the six exact orbit points with
/// diagonal spectra (permutations of the reference), which are also added to
/// the validity set.
pub fn max_distinguishable_sampled(s: &StructureSample, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if s.len() < 1000 {
        return Err(Error::domain(format!("sampled check needs at least 1000 points, got {}", s.len())));
    }
    if s.rep().blocks().len() != 1 || s.dim() != 9 {
        return Err(Error::domain("sampled distinguishability expects an SU(3) adjoint structure"));
    }
    let mut targets: Vec<Vec<f64>> = Vec::new();
    for perm in VERTEX_PERMUTATIONS {
        let ad = adjoint_matrix(&permutation_unitary(perm))?;
        let mut p = vec![1.0];
        p.extend(ad.matvec(s.reference()));
        if !targets.iter().any(|t| t.iter().zip(&p).all(|(a, b)| (a - b).abs() <= 1e-9)) {
            targets.push(p);
        }
    }
    if k > targets.len() {
        return Ok(false);
    }
    let mut validity: Vec<&[f64]> = s.points().iter().map(Vec::as_slice).collect();
    validity.extend(targets.iter().map(Vec::as_slice));
    let mut unit = vec![0.0; 9];
    unit[0] = 1.0;
    for subset in subsets(targets.len(), k) {
        let chosen: Vec<&[f64]> = subset.iter().map(|&i| targets[i].as_slice()).collect();
        if perfect_discrimination_lp(9, &unit, &chosen, &validity)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `Λ·x` for an effect on R³.
pub fn evaluate3(effect: &[f64], x: [f64; 3]) -> f64 {
    dot(effect, &x)
}
