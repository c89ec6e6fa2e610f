//! Matrix models of SU(d) and SO(d): Haar sampling, the adjoint action on the
//! generalized Gell-Mann basis, subgroup samplers and projectors onto
//! subgroup-invariant vectors.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{cdot, symmetric_eigen, CMatrix, RealMatrix};
use crate::rng::SeededRng;

const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompactGroup {
    Su(usize),
    So(usize),
}

impl CompactGroup {
    pub fn matrix_size(self) -> usize {
        match self {
            CompactGroup::Su(d) | CompactGroup::So(d) => d,
        }
    }

    pub fn identity(self) -> GroupElement {
        match self {
            CompactGroup::Su(d) => GroupElement::Su(CMatrix::identity(d)),
            CompactGroup::So(d) => GroupElement::So(RealMatrix::identity(d)),
        }
    }
}

/// A group element in the fundamental picture.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    Su(CMatrix),
    So(RealMatrix),
}

impl GroupElement {
    pub fn matmul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Su(a), GroupElement::Su(b)) if a.cols() == b.rows() => Ok(GroupElement::Su(a.matmul(b))),
            (GroupElement::So(a), GroupElement::So(b)) if a.cols() == b.rows() => Ok(GroupElement::So(a.matmul(b))),
            _ => Err(Error::domain("cannot multiply elements of different groups")),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Su(u) => GroupElement::Su(u.adjoint()),
            GroupElement::So(r) => GroupElement::So(r.transpose()),
        }
    }

    /// `max(‖UᴴU − I‖, |det U − 1|)`.
    pub fn membership_defect(&self) -> f64 {
        match self {
            GroupElement::Su(u) => u.unitarity_defect().max((u.determinant() - Complex64::new(1.0, 0.0)).norm()),
            GroupElement::So(r) => r.orthonormality_defect().max((r.determinant() - 1.0).abs()),
        }
    }
}

/// Generalized Gell-Mann matrices for `d ≥ 2`, normalized by tr(T_a T_b) = 2δ_ab.
///
/// For `k = 1..d−1`: the symmetric and antisymmetric off-diagonal pairs
/// `(j, k)` for `j < k`, then the diagonal `D_k`. This gives the Pauli
/// matrices for d = 2 and λ₁..λ₈ for d = 3.
pub fn gell_mann_basis(d: usize) -> Vec<CMatrix> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut basis = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        for j in 0..k {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = one;
            s[(k, j)] = one;
            basis.push(s);
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = -i;
            a[(k, j)] = i;
            basis.push(a);
        }
        let c = (2.0 / (k * (k + 1)) as f64).sqrt();
        let mut diag = vec![Complex64::new(0.0, 0.0); d];
        for x in diag.iter_mut().take(k) {
            *x = Complex64::new(c, 0.0);
        }
        diag[k] = Complex64::new(-(k as f64) * c, 0.0);
        basis.push(CMatrix::from_diagonal(&diag));
    }
    basis
}

/// Index of the diagonal Gell-Mann element `D_k` (k ≥ 1) in [`gell_mann_basis`].
pub fn diagonal_gell_mann_index(k: usize) -> usize {
    (k + 1) * (k + 1) - 2
}

/// Coordinates of a traceless Hermitian matrix in the Gell-Mann basis:
/// `x_a = tr(T_a X)/2`.
pub fn gell_mann_coordinates(x: &CMatrix) -> Vec<f64> {
    gell_mann_basis(x.rows())
        .iter()
        .map(|t| t.matmul(x).trace().re / 2.0)
        .collect()
}

/// Coordinates of a real diagonal `diag(a)` minus its trace part.
pub fn traceless_diagonal_coordinates(a: &[f64]) -> Vec<f64> {
    let d = a.len();
    let mean = a.iter().sum::<f64>() / d as f64;
    let diag: Vec<Complex64> = a.iter().map(|x| Complex64::new(x - mean, 0.0)).collect();
    gell_mann_coordinates(&CMatrix::from_diagonal(&diag))
}

/// Matrix of `X ↦ UXUᴴ` on the Gell-Mann basis: `Ad_ab = tr(T_a U T_b Uᴴ)/2`.
pub fn adjoint_matrix(u: &CMatrix) -> Result<RealMatrix> {
    if u.rows() != u.cols() {
        return Err(Error::domain("adjoint_matrix needs a square matrix"));
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::domain(format!("matrix is not unitary (defect {defect:e})")));
    }
    let d = u.rows();
    let basis = gell_mann_basis(d);
    let n = basis.len();
    let ud = u.adjoint();
    let moved: Vec<CMatrix> = basis.iter().map(|t| u.matmul(t).matmul(&ud)).collect();
    let mut out = RealMatrix::zeros(n, n);
    for (a, ta) in basis.iter().enumerate() {
        for (b, mb) in moved.iter().enumerate() {
            // tr(T_a M) = Σ_ij (T_a)_ij M_ji
            let mut tr = Complex64::new(0.0, 0.0);
            for i in 0..d {
                for j in 0..d {
                    let t = ta[(i, j)];
                    if t.re != 0.0 || t.im != 0.0 {
                        tr += t * mb[(j, i)];
                    }
                }
            }
            out[(a, b)] = tr.re / 2.0;
        }
    }
    Ok(out)
}

fn ginibre_complex<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    m
}

/// Gram–Schmidt on columns; the implicit R has a positive real diagonal, so a
/// Ginibre input yields a Haar-distributed unitary.
fn complex_qr_q(m: &CMatrix) -> CMatrix {
    let d = m.cols();
    let mut q = CMatrix::zeros(m.rows(), d);
    let mut done: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = m.column(j);
        for _ in 0..2 {
            for u in &done {
                let p = cdot(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= p * y;
                }
            }
        }
        let n = crate::numerics::cnorm(&v);
        let v: Vec<Complex64> = v.iter().map(|x| x / n).collect();
        q.set_column(j, &v);
        done.push(v);
    }
    q
}

fn real_qr_q(m: &RealMatrix) -> RealMatrix {
    let d = m.cols();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = m.column(j);
        for _ in 0..2 {
            for u in &cols {
                let p = crate::numerics::dot(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= p * y;
                }
            }
        }
        let n = crate::numerics::norm(&v);
        cols.push(v.iter().map(|x| x / n).collect());
    }
    RealMatrix::from_columns(&cols).expect("square")
}

/// Haar-random element of U(d).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    complex_qr_q(&ginibre_complex(d, rng))
}

/// Haar-random element of O(d).
pub fn haar_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> RealMatrix {
    let mut g = RealMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = rng.sample(StandardNormal);
        }
    }
    real_qr_q(&g)
}

fn fix_su_determinant(u: &mut CMatrix) {
    let d = u.rows();
    let phase = u.determinant().arg();
    let s = Complex64::from_polar(1.0, -phase / d as f64);
    *u = u.scale(s);
}

fn fix_so_determinant(r: &mut RealMatrix) {
    if r.determinant() < 0.0 {
        for i in 0..r.rows() {
            r[(i, 0)] = -r[(i, 0)];
        }
    }
}

/// Haar-random element of the group in its fundamental picture.
pub fn haar_sample<R: Rng + ?Sized>(group: CompactGroup, rng: &mut R) -> GroupElement {
    match group {
        CompactGroup::Su(d) => {
            let mut u = haar_unitary(d, rng);
            fix_su_determinant(&mut u);
            GroupElement::Su(u)
        }
        CompactGroup::So(d) => {
            let mut r = haar_orthogonal(d, rng);
            fix_so_determinant(&mut r);
            GroupElement::So(r)
        }
    }
}

/// Orthonormal basis of the traceless symmetric 3×3 matrices used by the
/// five-dimensional SO(3) representation. The last element is fixed by
/// rotations about the z axis.
fn spin2_basis() -> [[[f64; 3]; 3]; 5] {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let b = 1.0 / 6f64.sqrt();
    [
        [[0.0, a, 0.0], [a, 0.0, 0.0], [0.0, 0.0, 0.0]],
        [[0.0, 0.0, a], [0.0, 0.0, 0.0], [a, 0.0, 0.0]],
        [[0.0, 0.0, 0.0], [0.0, 0.0, a], [0.0, a, 0.0]],
        [[a, 0.0, 0.0], [0.0, -a, 0.0], [0.0, 0.0, 0.0]],
        [[b, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, -2.0 * b]],
    ]
}

fn spin2_matrix(rot: &RealMatrix) -> RealMatrix {
    let basis = spin2_basis();
    let conj = |e: &[[f64; 3]; 3]| -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        s += rot[(i, k)] * e[k][l] * rot[(j, l)];
                    }
                }
                out[i][j] = s;
            }
        }
        out
    };
    let mut m = RealMatrix::zeros(5, 5);
    for (b, eb) in basis.iter().enumerate() {
        let moved = conj(eb);
        for (a, ea) in basis.iter().enumerate() {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += ea[i][j] * moved[i][j];
                }
            }
            m[(a, b)] = s;
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// C^d viewed as R^{2d} (real parts first, then imaginary parts).
    SuFundamental(usize),
    /// Traceless Hermitian d×d matrices on the Gell-Mann basis.
    SuAdjoint(usize),
    SoFundamental(usize),
    /// The five-dimensional (spin-2) representation of SU(2) via SO(3).
    Su2Spin2,
    /// `dim` copies of the trivial representation of `group`.
    Trivial { group: CompactGroup, dim: usize },
}

/// A concrete real representation of a compact group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CompactRepSpec {
    pub kind: RepKind,
}

impl CompactRepSpec {
    pub fn new(kind: RepKind) -> Result<Self> {
        let ok = match kind {
            RepKind::SuFundamental(d) | RepKind::SoFundamental(d) => d >= 1,
            RepKind::SuAdjoint(d) => d >= 2,
            RepKind::Su2Spin2 => true,
            RepKind::Trivial { group, .. } => group.matrix_size() >= 1,
        };
        if !ok {
            return Err(Error::domain(format!("invalid representation {kind:?}")));
        }
        Ok(CompactRepSpec { kind })
    }

    pub fn su_adjoint(d: usize) -> Result<Self> {
        Self::new(RepKind::SuAdjoint(d))
    }

    pub fn su_fundamental(d: usize) -> Result<Self> {
        Self::new(RepKind::SuFundamental(d))
    }

    pub fn so_fundamental(d: usize) -> Result<Self> {
        Self::new(RepKind::SoFundamental(d))
    }

    pub fn su2_spin2() -> Self {
        CompactRepSpec { kind: RepKind::Su2Spin2 }
    }

    pub fn trivial(group: CompactGroup, dim: usize) -> Result<Self> {
        Self::new(RepKind::Trivial { group, dim })
    }

    pub fn group(&self) -> CompactGroup {
        match self.kind {
            RepKind::SuFundamental(d) | RepKind::SuAdjoint(d) => CompactGroup::Su(d),
            RepKind::SoFundamental(d) => CompactGroup::So(d),
            RepKind::Su2Spin2 => CompactGroup::Su(2),
            RepKind::Trivial { group, .. } => group,
        }
    }

    pub fn real_dimension(&self) -> usize {
        match self.kind {
            RepKind::SuFundamental(d) => 2 * d,
            RepKind::SuAdjoint(d) => d * d - 1,
            RepKind::SoFundamental(d) => d,
            RepKind::Su2Spin2 => 5,
            RepKind::Trivial { dim, .. } => dim,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.kind, RepKind::Trivial { .. })
    }

    /// Γ(g) as a real orthogonal matrix.
    pub fn apply(&self, g: &GroupElement) -> Result<RealMatrix> {
        let size = self.group().matrix_size();
        let wrong = || Error::domain(format!("group element does not belong to {:?}", self.group()));
        match (self.kind, g) {
            (RepKind::SuFundamental(_), GroupElement::Su(u)) if u.rows() == size => Ok(u.realify()),
            (RepKind::SuAdjoint(_), GroupElement::Su(u)) if u.rows() == size => adjoint_matrix(u),
            (RepKind::SoFundamental(_), GroupElement::So(r)) if r.rows() == size => Ok(r.clone()),
            (RepKind::Su2Spin2, GroupElement::Su(u)) if u.rows() == 2 => Ok(spin2_matrix(&adjoint_matrix(u)?)),
            (RepKind::Trivial { group, dim }, g) => {
                let matches = matches!(
                    (group, g),
                    (CompactGroup::Su(d), GroupElement::Su(u)) if u.rows() == d
                ) || matches!(
                    (group, g),
                    (CompactGroup::So(d), GroupElement::So(r)) if r.rows() == d
                );
                if matches {
                    Ok(RealMatrix::identity(dim))
                } else {
                    Err(wrong())
                }
            }
            _ => Err(wrong()),
        }
    }

    pub fn haar_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        haar_sample(self.group(), rng)
    }

    pub fn label(&self) -> String {
        match self.kind {
            RepKind::SuFundamental(d) => format!("su{d}_fundamental"),
            RepKind::SuAdjoint(d) => format!("su{d}_adjoint"),
            RepKind::SoFundamental(d) => format!("so{d}_fundamental"),
            RepKind::Su2Spin2 => "su2_spin2".to_string(),
            RepKind::Trivial { dim, .. } => format!("trivial{dim}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubgroupSpec {
    /// Diagonal maximal torus of SU(d).
    FullTorus,
    /// S(U(a)×U(b)×…) in SU(d), or S(O(a)×O(b)×…) in SO(d).
    Block(Vec<usize>),
    /// An explicit finite subgroup (the list must be closed).
    Finite(Vec<GroupElement>),
}

impl SubgroupSpec {
    pub fn validate(&self, group: CompactGroup) -> Result<()> {
        match (self, group) {
            (SubgroupSpec::FullTorus, CompactGroup::Su(_)) => Ok(()),
            (SubgroupSpec::FullTorus, CompactGroup::So(_)) => {
                Err(Error::domain("the diagonal torus is only modelled for SU(d)"))
            }
            (SubgroupSpec::Block(sizes), g) => {
                if sizes.contains(&0) || sizes.iter().sum::<usize>() != g.matrix_size() {
                    Err(Error::domain(format!(
                        "block sizes {sizes:?} must be positive and sum to {}",
                        g.matrix_size()
                    )))
                } else {
                    Ok(())
                }
            }
            (SubgroupSpec::Finite(list), g) => {
                if list.is_empty() {
                    return Err(Error::domain("finite subgroup list is empty"));
                }
                for h in list {
                    let same = matches!((g, h), (CompactGroup::Su(d), GroupElement::Su(u)) if u.rows() == d)
                        || matches!((g, h), (CompactGroup::So(d), GroupElement::So(r)) if r.rows() == d);
                    if !same || h.membership_defect() > UNITARY_TOL {
                        return Err(Error::domain("finite subgroup element is not in the parent group"));
                    }
                }
                Ok(())
            }
        }
    }

    /// A random element: Haar for torus and block subgroups, uniform for finite lists.
    pub fn sample<R: Rng + ?Sized>(&self, group: CompactGroup, rng: &mut R) -> Result<GroupElement> {
        self.validate(group)?;
        Ok(match (self, group) {
            (SubgroupSpec::FullTorus, CompactGroup::Su(d)) => {
                let phases: Vec<f64> = (0..d.saturating_sub(1))
                    .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                    .collect();
                GroupElement::Su(torus_element(d, &phases))
            }
            (SubgroupSpec::Block(sizes), CompactGroup::Su(d)) => {
                let mut u = CMatrix::zeros(d, d);
                let mut off = 0;
                for &a in sizes {
                    let b = haar_unitary(a, rng);
                    for i in 0..a {
                        for j in 0..a {
                            u[(off + i, off + j)] = b[(i, j)];
                        }
                    }
                    off += a;
                }
                fix_su_determinant(&mut u);
                GroupElement::Su(u)
            }
            (SubgroupSpec::Block(sizes), CompactGroup::So(d)) => {
                let mut r = RealMatrix::zeros(d, d);
                let mut off = 0;
                for &a in sizes {
                    let b = haar_orthogonal(a, rng);
                    for i in 0..a {
                        for j in 0..a {
                            r[(off + i, off + j)] = b[(i, j)];
                        }
                    }
                    off += a;
                }
                fix_so_determinant(&mut r);
                GroupElement::So(r)
            }
            (SubgroupSpec::Finite(list), _) => list[rng.random_range(0..list.len())].clone(),
            _ => unreachable!("validated above"),
        })
    }
}

/// `diag(e^{iφ₁}, …, e^{iφ_{d−1}}, e^{−iΣφ})`.
pub fn torus_element(d: usize, phases: &[f64]) -> CMatrix {
    let mut diag: Vec<Complex64> = phases.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    diag.push(Complex64::from_polar(1.0, -phases.iter().sum::<f64>()));
    diag.truncate(d);
    CMatrix::from_diagonal(&diag)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quadrature {
    /// Exact average over the (Z_n)^{d−1} grid in the torus.
    TorusGrid(usize),
    /// Common-fixed-space estimate from Haar samples of the subgroup.
    MonteCarlo { samples: usize, rng: SeededRng },
}

impl Quadrature {
    pub fn default_for(sub: &SubgroupSpec) -> Self {
        match sub {
            SubgroupSpec::FullTorus => Quadrature::TorusGrid(16),
            _ => Quadrature::MonteCarlo {
                samples: 200,
                rng: SeededRng::new(0),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct InvariantSubspace {
    pub projector: RealMatrix,
    pub rank: usize,
    /// Orthonormal basis of the fixed space (columns).
    pub basis: RealMatrix,
    /// Spectrum of the averaged operator before cleaning, descending (for the
    /// Monte-Carlo kernel estimate, of the resulting projector).
    pub spectrum: Vec<f64>,
}

fn subspace_from_columns(n: usize, cols: Vec<Vec<f64>>, spectrum: Vec<f64>) -> InvariantSubspace {
    let rank = cols.len();
    let basis = if rank == 0 {
        RealMatrix::zeros(n, 0)
    } else {
        RealMatrix::from_columns(&cols).expect("equal lengths")
    };
    let projector = basis.matmul(&basis.transpose());
    InvariantSubspace {
        projector,
        rank,
        basis,
        spectrum,
    }
}

fn clean_projector(avg: &RealMatrix) -> Result<InvariantSubspace> {
    let n = avg.rows();
    let sym = avg.add(&avg.transpose()).scale(0.5);
    let eig = symmetric_eigen(&sym)?;
    let cols = (0..n).filter(|&i| eig.values[i] > 0.5).map(|i| eig.vector(i)).collect();
    Ok(subspace_from_columns(n, cols, eig.values))
}

/// Projector onto the vectors fixed by every element of `sub`.
pub fn invariant_projector(
    spec: &CompactRepSpec,
    sub: &SubgroupSpec,
    quadrature: Quadrature,
) -> Result<InvariantSubspace> {
    let group = spec.group();
    sub.validate(group)?;
    let n = spec.real_dimension();
    let result = match (sub, quadrature) {
        (SubgroupSpec::Finite(list), _) => {
            let mut avg = RealMatrix::zeros(n, n);
            for h in list {
                avg.add_assign_scaled(&spec.apply(h)?, 1.0 / list.len() as f64);
            }
            let idem = avg.matmul(&avg).sub(&avg).max_abs();
            if idem > 1e-6 {
                return Err(Error::domain(format!(
                    "finite element list is not closed under multiplication (idempotence defect {idem:e})"
                )));
            }
            clean_projector(&avg)?
        }
        (SubgroupSpec::FullTorus, Quadrature::TorusGrid(grid)) => {
            if let Some(exact) = structural_torus_projector(spec) {
                exact
            } else {
                torus_grid_projector(spec, grid)?
            }
        }
        (_, Quadrature::TorusGrid(_)) => {
            return Err(Error::domain("torus-grid quadrature only applies to the full torus"));
        }
        (_, Quadrature::MonteCarlo { samples, rng }) => kernel_projector(spec, sub, samples, rng)?,
    };
    verify_invariance(spec, sub, &result)?;
    Ok(result)
}

/// Weight-zero basis vectors: exact when the basis diagonalises the torus.
fn structural_torus_projector(spec: &CompactRepSpec) -> Option<InvariantSubspace> {
    let n = spec.real_dimension();
    let fixed: Vec<usize> = match spec.kind {
        RepKind::SuAdjoint(d) => (1..d).map(diagonal_gell_mann_index).collect(),
        RepKind::Trivial { dim, .. } => (0..dim).collect(),
        RepKind::SuFundamental(d) if d > 1 => Vec::new(),
        _ => return None,
    };
    let cols: Vec<Vec<f64>> = fixed
        .iter()
        .map(|&i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();
    let spectrum = {
        let mut s = vec![1.0; fixed.len()];
        s.resize(n, 0.0);
        s
    };
    Some(subspace_from_columns(n, cols, spectrum))
}

fn torus_grid_projector(spec: &CompactRepSpec, grid: usize) -> Result<InvariantSubspace> {
    let d = spec.group().matrix_size();
    if grid == 0 {
        return Err(Error::domain("torus grid needs at least one point per phase"));
    }
    let free = d.saturating_sub(1);
    let total = grid
        .checked_pow(free as u32)
        .filter(|&t| t <= 1_000_000)
        .ok_or_else(|| Error::Resource(format!("torus grid {grid}^{free} is too large")))?;
    let n = spec.real_dimension();
    let mut avg = RealMatrix::zeros(n, n);
    for idx in 0..total {
        let mut rest = idx;
        let phases: Vec<f64> = (0..free)
            .map(|_| {
                let k = rest % grid;
                rest /= grid;
                std::f64::consts::TAU * k as f64 / grid as f64
            })
            .collect();
        let g = GroupElement::Su(torus_element(d, &phases));
        avg.add_assign_scaled(&spec.apply(&g)?, 1.0 / total as f64);
    }
    let idem = avg.matmul(&avg).sub(&avg).max_abs();
    if idem > 1e-4 {
        return Err(Error::Accuracy(format!(
            "torus grid of {grid} points per phase is too coarse (idempotence defect {idem:e}); use a finer grid"
        )));
    }
    clean_projector(&avg)
}

/// Fixed space as the kernel of `mean (Γ(h) − I)ᵀ(Γ(h) − I)`.
///
/// Plain averaging of Γ(h) converges at 1/√n, far from the idempotence the
/// downstream checks need; the common kernel of the sampled `Γ(h) − I` is
/// exact once the samples generate a dense subgroup.
fn kernel_projector(
    spec: &CompactRepSpec,
    sub: &SubgroupSpec,
    samples: usize,
    rng: SeededRng,
) -> Result<InvariantSubspace> {
    if samples == 0 {
        return Err(Error::domain("Monte-Carlo quadrature needs at least one sample"));
    }
    let n = spec.real_dimension();
    let mut gen = rng.generator();
    let mut m = RealMatrix::zeros(n, n);
    let id = RealMatrix::identity(n);
    for _ in 0..samples {
        let h = sub.sample(spec.group(), &mut gen)?;
        let diff = spec.apply(&h)?.sub(&id);
        m.add_assign_scaled(&diff.transpose().matmul(&diff), 1.0 / samples as f64);
    }
    let eig = symmetric_eigen(&m)?;
    if let Some(bad) = eig.values.iter().find(|&&v| v > 1e-8 && v < 1e-4) {
        return Err(Error::Accuracy(format!(
            "Monte-Carlo fixed-space estimate is ambiguous (eigenvalue {bad:e} in the gap); use more samples"
        )));
    }
    let cols = (0..n).filter(|&i| eig.values[i] <= 1e-8).map(|i| eig.vector(i)).collect();
    // The kernel estimate is already a projector; report its 0/1 spectrum.
    let rank = eig.values.iter().filter(|&&v| v <= 1e-8).count();
    let mut spectrum = vec![1.0; rank];
    spectrum.resize(n, 0.0);
    Ok(subspace_from_columns(n, cols, spectrum))
}

/// Γ(h)P = P on 20 fresh subgroup samples, and P² = P.
fn verify_invariance(spec: &CompactRepSpec, sub: &SubgroupSpec, s: &InvariantSubspace) -> Result<()> {
    let p = &s.projector;
    let idem = p.matmul(p).sub(p).max_abs();
    if idem > 1e-6 {
        return Err(Error::Accuracy(format!("projector idempotence defect {idem:e}")));
    }
    let mut gen = SeededRng::new(0x1f1f).with_stream(7).generator();
    for _ in 0..20 {
        let h = sub.sample(spec.group(), &mut gen)?;
        let moved = spec.apply(&h)?.matmul(p).sub(p).max_abs();
        if moved > 1e-6 {
            return Err(Error::Accuracy(format!(
                "projector is not fixed by a fresh subgroup sample (defect {moved:e}); refine the quadrature"
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GelfandWitness {
    Consistent,
    NonGelfand { rank: usize },
}

/// For an irreducible representation: a fixed space of rank ≥ 2 witnesses
/// that (G, H) is not a Gelfand pair.
pub fn is_gelfand_witness(spec: &CompactRepSpec, sub: &SubgroupSpec) -> Result<GelfandWitness> {
    let s = invariant_projector(spec, sub, Quadrature::default_for(sub))?;
    Ok(if s.rank >= 2 {
        GelfandWitness::NonGelfand { rank: s.rank }
    } else {
        GelfandWitness::Consistent
    })
}
