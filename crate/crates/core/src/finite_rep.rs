//! Finite permutation groups, character tables, restriction multiplicities,
//! Gelfand-pair decisions and Frobenius–Schur indicators.
//!
//! Permutations are stored as image lists: `p[i]` is the image of `i`, and
//! the product `a·b` acts as `b` first, then `a`.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{hermitian_eigen, CMatrix};

pub type Perm = Vec<usize>;

/// Order cap applied by [`character_table`] and the standard constructors.
pub const DEFAULT_ORDER_CAP: usize = 10_000;

const INTEGRAL_TOL: f64 = 1e-8;
const HARD_FAIL_TOL: f64 = 1e-4;

pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn invert(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &pi) in p.iter().enumerate() {
        inv[pi] = i;
    }
    inv
}

fn check_perm(p: &[usize], degree: usize) -> Result<()> {
    if p.len() != degree {
        return Err(Error::domain(format!(
            "permutation of length {} in a group of degree {degree}",
            p.len()
        )));
    }
    let mut seen = vec![false; degree];
    for &x in p {
        if x >= degree || seen[x] {
            return Err(Error::domain(format!("{p:?} is not a permutation of 0..{degree}")));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Builds a permutation of `0..degree` from disjoint cycles.
pub fn perm_from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
    let mut p: Perm = (0..degree).collect();
    let mut touched = vec![false; degree];
    for cycle in cycles {
        for (k, &x) in cycle.iter().enumerate() {
            if x >= degree {
                return Err(Error::domain(format!("cycle entry {x} out of range for degree {degree}")));
            }
            if touched[x] {
                return Err(Error::domain(format!("point {x} appears in more than one cycle")));
            }
            touched[x] = true;
            p[x] = cycle[(k + 1) % cycle.len()];
        }
    }
    Ok(p)
}

/// A fully enumerated permutation group.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Closure of `generators` by breadth-first multiplication.
    pub fn generate(degree: usize, generators: &[Perm], max_order: usize) -> Result<Self> {
        if max_order == 0 {
            return Err(Error::domain("max_order must be at least 1"));
        }
        for g in generators {
            check_perm(g, degree)?;
        }
        let identity: Perm = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = compose(g, &elements[i]);
                if !index.contains_key(&next) {
                    if elements.len() == max_order {
                        return Err(Error::Resource(format!(
                            "group order exceeds the cap of {max_order}"
                        )));
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let inverse = elements.iter().map(|e| index[&invert(e)]).collect();
        Ok(FiniteGroup {
            degree,
            generators: generators.to_vec(),
            elements,
            index,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    /// The identity is always element 0.
    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&compose(&self.elements[a], &self.elements[b])]
    }

    /// Conjugacy classes, each sorted, ordered by smallest member (so the
    /// identity class comes first).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let gens: Vec<(Perm, Perm)> = self.generators.iter().map(|g| (g.clone(), invert(g))).collect();
        let mut assigned = vec![false; self.order()];
        let mut classes = Vec::new();
        for start in 0..self.order() {
            if assigned[start] {
                continue;
            }
            assigned[start] = true;
            let mut class = vec![start];
            let mut k = 0;
            while k < class.len() {
                let x = &self.elements[class[k]];
                for (g, gi) in &gens {
                    let y = self.index[&compose(g, &compose(x, gi))];
                    if !assigned[y] {
                        assigned[y] = true;
                        class.push(y);
                    }
                }
                k += 1;
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }
}

/// Closure of `generators` with inferred degree (0 for an empty list).
pub fn generate_group(generators: &[Perm], max_order: usize) -> Result<FiniteGroup> {
    let degree = generators.first().map_or(0, Vec::len);
    FiniteGroup::generate(degree, generators, max_order)
}

/// Subgroup given by member indices into a parent group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<usize>,
}

impl Subgroup {
    /// Validates closure, identity and inverses.
    pub fn new(g: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.iter().any(|&m| m >= g.order()) {
            return Err(Error::domain("subgroup member index out of range"));
        }
        let mut inside = vec![false; g.order()];
        for &m in &members {
            inside[m] = true;
        }
        if !inside[g.identity()] {
            return Err(Error::domain("subgroup does not contain the identity"));
        }
        for &a in &members {
            if !inside[g.inverse(a)] {
                return Err(Error::domain("subgroup is not closed under inverses"));
            }
            for &b in &members {
                if !inside[g.mul(a, b)] {
                    return Err(Error::domain("subgroup is not closed under composition"));
                }
            }
        }
        Ok(Subgroup {
            parent_order: g.order(),
            members,
        })
    }

    /// Subgroup generated by permutations that must lie in `g`.
    pub fn generated_by(g: &FiniteGroup, generators: &[Perm]) -> Result<Self> {
        for p in generators {
            if g.index_of(p).is_none() {
                return Err(Error::domain(format!("{p:?} is not an element of the parent group")));
            }
        }
        let h = FiniteGroup::generate(g.degree(), generators, g.order())?;
        let members: Vec<usize> = h.elements().iter().map(|p| g.index_of(p).unwrap()).collect();
        Subgroup::new(g, &members)
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Subgroup {
            parent_order: g.order(),
            members: vec![g.identity()],
        }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup {
            parent_order: g.order(),
            members: (0..g.order()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// Real, complex or quaternionic type of an irreducible representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealityType {
    Real,
    Complex,
    Quaternionic,
}

impl RealityType {
    pub fn indicator(self) -> i8 {
        match self {
            RealityType::Real => 1,
            RealityType::Complex => 0,
            RealityType::Quaternionic => -1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RealityType::Real => "real",
            RealityType::Complex => "complex",
            RealityType::Quaternionic => "quaternionic",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    group_order: usize,
    class_reps: Vec<usize>,
    class_sizes: Vec<usize>,
    element_class: Vec<usize>,
    square_class: Vec<usize>,
    /// `characters[i][k]` is the value of irrep `i` on class `k`.
    characters: Vec<Vec<Complex64>>,
    dims: Vec<usize>,
}

impl CharacterTable {
    pub fn num_irreps(&self) -> usize {
        self.characters.len()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_representatives(&self) -> &[usize] {
        &self.class_reps
    }

    pub fn class_of(&self, element: usize) -> usize {
        self.element_class[element]
    }

    pub fn character(&self, irrep: usize) -> &[Complex64] {
        &self.characters[irrep]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, irrep: usize) -> usize {
        self.dims[irrep]
    }

    /// Index of the irrep whose character is the complex conjugate of `irrep`'s.
    pub fn conjugate(&self, irrep: usize) -> usize {
        let target: Vec<Complex64> = self.characters[irrep].iter().map(|z| z.conj()).collect();
        (0..self.num_irreps())
            .min_by(|&a, &b| {
                let da = max_dist(&self.characters[a], &target);
                let db = max_dist(&self.characters[b], &target);
                da.total_cmp(&db)
            })
            .unwrap()
    }

    /// `max_{i,j} |Σ_k |C_k| χ_i(k) conj χ_j(k) − |G| δ_ij|`.
    pub fn row_orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.num_irreps() {
            for j in 0..self.num_irreps() {
                let s: Complex64 = (0..self.num_classes())
                    .map(|k| self.class_sizes[k] as f64 * self.characters[i][k] * self.characters[j][k].conj())
                    .sum();
                let want = if i == j { self.group_order as f64 } else { 0.0 };
                worst = worst.max((s - want).norm());
            }
        }
        worst
    }

    /// `max_{k,l} |Σ_i χ_i(k) conj χ_i(l) − (|G|/|C_k|) δ_kl|`.
    pub fn column_orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.num_classes() {
            for l in 0..self.num_classes() {
                let s: Complex64 = self.characters.iter().map(|chi| chi[k] * chi[l].conj()).sum();
                let want = if k == l {
                    self.group_order as f64 / self.class_sizes[k] as f64
                } else {
                    0.0
                };
                worst = worst.max((s - want).norm());
            }
        }
        worst
    }

    /// `(1/|H|) Σ_{h∈H} χ(h)`, rounded to an integer.
    pub fn trivial_restriction_multiplicity(&self, irrep: usize, h: &Subgroup) -> Result<usize> {
        if h.parent_order != self.group_order {
            return Err(Error::domain("subgroup belongs to a different group"));
        }
        let chi = &self.characters[irrep];
        let sum: Complex64 = h.members.iter().map(|&m| chi[self.element_class[m]]).sum();
        let value = round_integral(sum / h.order() as f64, "restriction multiplicity")?;
        if value < 0 {
            return Err(Error::NumericalConsistency(format!(
                "negative restriction multiplicity {value}"
            )));
        }
        Ok(value as usize)
    }

    /// `(1/|G|) Σ_g χ(g²)`.
    pub fn frobenius_schur(&self, irrep: usize) -> Result<RealityType> {
        let chi = &self.characters[irrep];
        let sum: Complex64 = (0..self.num_classes())
            .map(|k| self.class_sizes[k] as f64 * chi[self.square_class[k]])
            .sum();
        match round_integral(sum / self.group_order as f64, "Frobenius–Schur indicator")? {
            1 => Ok(RealityType::Real),
            0 => Ok(RealityType::Complex),
            -1 => Ok(RealityType::Quaternionic),
            v => Err(Error::NumericalConsistency(format!(
                "Frobenius–Schur indicator {v} is outside {{-1, 0, 1}}"
            ))),
        }
    }
}

fn max_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

fn round_integral(z: Complex64, what: &str) -> Result<i64> {
    let r = z.re.round();
    let err = (z - Complex64::new(r, 0.0)).norm();
    if err > HARD_FAIL_TOL {
        return Err(Error::NumericalConsistency(format!(
            "{what} {z} is not integral (off by {err:e})"
        )));
    }
    if err > INTEGRAL_TOL {
        return Err(Error::NumericalConsistency(format!(
            "{what} {z} drifted {err:e} from the nearest integer"
        )));
    }
    Ok(r as i64)
}

pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable> {
    character_table_with_cap(g, DEFAULT_ORDER_CAP)
}

/// Burnside's class-algebra method.
///
/// The class multiplication matrices `M_i[j][k] = c_ijk` share the central
/// characters as eigenvectors. Conjugating by `diag(√|C_k|)` makes them
/// normal with orthogonal eigenvectors, so a random Hermitian combination of
/// their real and imaginary parts is diagonalised once and the eigenvectors
/// rescaled into characters.
pub fn character_table_with_cap(g: &FiniteGroup, cap: usize) -> Result<CharacterTable> {
    let order = g.order();
    if order > cap {
        return Err(Error::Resource(format!(
            "group order {order} exceeds the character-table cap of {cap}"
        )));
    }
    let classes = g.conjugacy_classes();
    let r = classes.len();
    let mut element_class = vec![0; order];
    for (k, class) in classes.iter().enumerate() {
        for &x in class {
            element_class[x] = k;
        }
    }
    let class_reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let class_sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    let square_class: Vec<usize> = class_reps.iter().map(|&x| element_class[g.mul(x, x)]).collect();

    // coeff[i][j][k] = #{x ∈ C_i : x⁻¹ z_k ∈ C_j} for a fixed z_k ∈ C_k.
    let mut coeff = vec![vec![vec![0.0f64; r]; r]; r];
    for (k, &z) in class_reps.iter().enumerate() {
        for x in 0..order {
            let y = g.mul(g.inverse(x), z);
            coeff[element_class[x]][element_class[y]][k] += 1.0;
        }
    }
    let sqrt_sizes: Vec<f64> = class_sizes.iter().map(|&s| (s as f64).sqrt()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c4a7);
    for _attempt in 0..8 {
        let mut h = CMatrix::zeros(r, r);
        for ci in &coeff {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            for j in 0..r {
                for k in 0..r {
                    let n_jk = ci[j][k] * sqrt_sizes[k] / sqrt_sizes[j];
                    let n_kj = ci[k][j] * sqrt_sizes[j] / sqrt_sizes[k];
                    h[(j, k)] += Complex64::new(a * 0.5 * (n_jk + n_kj), -b * 0.5 * (n_jk - n_kj));
                }
            }
        }
        let (values, vectors) = hermitian_eigen(&h)?;
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let min_gap = values.windows(2).map(|w| (w[0] - w[1]).abs()).fold(f64::INFINITY, f64::min);
        if r > 1 && min_gap < 1e-7 * scale {
            continue;
        }
        let mut characters: Vec<Vec<Complex64>> = Vec::with_capacity(r);
        for z in &vectors {
            let phase = z[0].conj() / z[0].norm();
            let mut chi: Vec<Complex64> = (0..r).map(|k| z[k] * phase / sqrt_sizes[k]).collect();
            let norm2: f64 = (0..r).map(|k| class_sizes[k] as f64 * chi[k].norm_sqr()).sum();
            let s = (order as f64 / norm2).sqrt();
            for c in &mut chi {
                *c *= s;
            }
            characters.push(chi);
        }
        let mut dims = Vec::with_capacity(r);
        for chi in &characters {
            let d = round_integral(chi[0], "irrep dimension")?;
            if d < 1 {
                return Err(Error::NumericalConsistency(format!("irrep dimension {d}")));
            }
            dims.push(d as usize);
        }
        let mut order_idx: Vec<usize> = (0..r).collect();
        order_idx.sort_by(|&a, &b| character_sort_key(&characters[a], dims[a]).cmp(&character_sort_key(&characters[b], dims[b])));
        let table = CharacterTable {
            group_order: order,
            class_reps: class_reps.clone(),
            class_sizes: class_sizes.clone(),
            element_class: element_class.clone(),
            square_class: square_class.clone(),
            characters: order_idx.iter().map(|&i| characters[i].clone()).collect(),
            dims: order_idx.iter().map(|&i| dims[i]).collect(),
        };
        let dim_sum: usize = table.dims.iter().map(|d| d * d).sum();
        if dim_sum != order {
            return Err(Error::NumericalConsistency(format!(
                "sum of squared dimensions {dim_sum} differs from the group order {order}"
            )));
        }
        let defect = table.row_orthogonality_defect();
        if defect > 1e-8 * order as f64 {
            return Err(Error::NumericalConsistency(format!(
                "character rows are not orthogonal (defect {defect:e})"
            )));
        }
        return Ok(table);
    }
    Err(Error::NumericalConsistency(
        "class-algebra eigenvalues stayed degenerate after repeated random combinations".into(),
    ))
}

/// Trivial character first, then by dimension, then by rounded values.
fn character_sort_key(chi: &[Complex64], dim: usize) -> (bool, usize, Vec<(i64, i64)>) {
    let trivial = chi.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    let values = chi
        .iter()
        .map(|z| (-(z.re * 1e6).round() as i64, -(z.im * 1e6).round() as i64))
        .collect();
    (!trivial, dim, values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GelfandDecision {
    Yes,
    /// The first irrep whose restriction contains the trivial rep more than once.
    No { irrep: usize, multiplicity: usize },
}

impl GelfandDecision {
    pub fn is_gelfand(&self) -> bool {
        matches!(self, GelfandDecision::Yes)
    }
}

pub fn is_gelfand_pair(g: &FiniteGroup, h: &Subgroup) -> Result<GelfandDecision> {
    let table = character_table(g)?;
    gelfand_with_table(&table, h)
}

pub fn gelfand_with_table(table: &CharacterTable, h: &Subgroup) -> Result<GelfandDecision> {
    for i in 0..table.num_irreps() {
        let m = table.trivial_restriction_multiplicity(i, h)?;
        if m > 1 {
            return Ok(GelfandDecision::No {
                irrep: i,
                multiplicity: m,
            });
        }
    }
    Ok(GelfandDecision::Yes)
}

/// One building block of a probabilistic structure: a spherical real-type
/// irrep, or a spherical complex-type irrep merged with its conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphericalUnit {
    pub irreps: Vec<usize>,
    pub real_dim: usize,
    pub reality: RealityType,
}

/// Spherical irreps of a Gelfand pair grouped into real units.
pub fn spherical_units(table: &CharacterTable, h: &Subgroup) -> Result<Vec<SphericalUnit>> {
    let mut units = Vec::new();
    let mut used = vec![false; table.num_irreps()];
    for i in 0..table.num_irreps() {
        if used[i] || table.trivial_restriction_multiplicity(i, h)? != 1 {
            continue;
        }
        used[i] = true;
        match table.frobenius_schur(i)? {
            RealityType::Real => units.push(SphericalUnit {
                irreps: vec![i],
                real_dim: table.dim(i),
                reality: RealityType::Real,
            }),
            RealityType::Complex => {
                let j = table.conjugate(i);
                used[j] = true;
                units.push(SphericalUnit {
                    irreps: vec![i, j],
                    real_dim: 2 * table.dim(i),
                    reality: RealityType::Complex,
                });
            }
            RealityType::Quaternionic => {
                // The H-fixed line would have to carry an antilinear J with
                // J² = −1, which a one-dimensional complex space cannot.
                return Err(Error::NumericalConsistency(format!(
                    "spherical irrep {i} classified quaternionic"
                )));
            }
        }
    }
    Ok(units)
}

/// Cap on the number of enumerated structures.
const STRUCTURE_LIST_CAP: usize = 1_000_000;

/// Every direct sum of distinct spherical units with total real dimension at
/// most `dim_cap`. Each entry lists irrep indices (a complex unit contributes
/// both conjugates). Nonempty sums only, ordered by size then lexicographically.
pub fn count_probabilistic_structures(
    g: &FiniteGroup,
    h: &Subgroup,
    dim_cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let table = character_table(g)?;
    if let GelfandDecision::No { irrep, multiplicity } = gelfand_with_table(&table, h)? {
        return Err(Error::domain(format!(
            "not a Gelfand pair (irrep {irrep} restricts with {multiplicity} trivial copies); \
             probabilistic structures are not determined by representations, use the non-rigid analysis"
        )));
    }
    let units = spherical_units(&table, h)?;
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut chosen = Vec::new();
    fn walk(
        units: &[SphericalUnit],
        start: usize,
        budget: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        for u in start..units.len() {
            if units[u].real_dim > budget {
                continue;
            }
            chosen.push(u);
            let mut irreps: Vec<usize> = chosen.iter().flat_map(|&c| units[c].irreps.clone()).collect();
            irreps.sort_unstable();
            out.push(irreps);
            if out.len() > STRUCTURE_LIST_CAP {
                return Err(Error::Resource(format!(
                    "more than {STRUCTURE_LIST_CAP} probabilistic structures below the dimension cap"
                )));
            }
            walk(units, u + 1, budget - units[u].real_dim, chosen, out)?;
            chosen.pop();
        }
        Ok(())
    }
    walk(&units, 0, dim_cap, &mut chosen, &mut out)?;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Standard groups used by the tests and the CLI.
pub mod standard {
    use super::*;

    /// Symmetric group on `n` points, generated by a transposition and an n-cycle.
    pub fn symmetric(n: usize) -> Result<FiniteGroup> {
        if n <= 1 {
            return FiniteGroup::generate(n, &[], DEFAULT_ORDER_CAP);
        }
        let t = perm_from_cycles(n, &[vec![0, 1]])?;
        let c = perm_from_cycles(n, &[(0..n).collect()])?;
        FiniteGroup::generate(n, &[t, c], DEFAULT_ORDER_CAP)
    }

    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::domain("cyclic group needs n ≥ 1"));
        }
        let c = perm_from_cycles(n, &[(0..n).collect()])?;
        FiniteGroup::generate(n, &[c], DEFAULT_ORDER_CAP)
    }

    /// Symmetries of the regular `n`-gon (order 2n), n ≥ 3.
    pub fn dihedral(n: usize) -> Result<FiniteGroup> {
        if n < 3 {
            return Err(Error::domain("dihedral group needs n ≥ 3"));
        }
        let rot = perm_from_cycles(n, &[(0..n).collect()])?;
        let refl: Perm = (0..n).map(|i| (n - i) % n).collect();
        FiniteGroup::generate(n, &[rot, refl], DEFAULT_ORDER_CAP)
    }

    /// Quaternion group in its regular action. Point `2q + s` stands for the
    /// unit `(−1)^s·q` with `q ∈ {1, i, j, k}`.
    pub fn quaternion() -> Result<FiniteGroup> {
        let left = |a: usize| -> Perm {
            (0..8)
                .map(|p| {
                    let (q, s) = (p / 2, p % 2);
                    let (r, sign) = quaternion_unit_product(a, q);
                    2 * r + ((s + sign) % 2)
                })
                .collect()
        };
        FiniteGroup::generate(8, &[left(1), left(2)], DEFAULT_ORDER_CAP)
    }

    /// `q_a · q_b = (−1)^sign · q_r` for units `1, i, j, k` numbered 0..4.
    pub fn quaternion_unit_product(a: usize, b: usize) -> (usize, usize) {
        const TABLE: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        TABLE[a][b]
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    fn s3() -> FiniteGroup {
        let t = perm_from_cycles(3, &[vec![0, 1]]).unwrap();
        let c = perm_from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        generate_group(&[t, c], 100).unwrap()
    }

    #[test]
    fn generation_examples() {
        assert_eq!(s3().order(), 6);
        assert_eq!(generate_group(&[], 1).unwrap().order(), 1);
        let z4 = generate_group(&[perm_from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap()], 10).unwrap();
        assert_eq!(z4.order(), 4);
        assert!(matches!(symmetric(5).unwrap().order(), 120));
        assert!(matches!(
            FiniteGroup::generate(4, symmetric(4).unwrap().generators(), 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn bad_permutations_rejected() {
        assert!(generate_group(&[vec![0, 0, 1]], 10).is_err());
        assert!(FiniteGroup::generate(3, &[vec![1, 0]], 10).is_err());
        assert!(perm_from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn s3_table() {
        let t = character_table(&s3()).unwrap();
        assert_eq!(t.dims(), &[1, 1, 2]);
        assert!(t.column_orthogonality_defect() < 1e-8);
        let triv = generate_group(&[], 1).unwrap();
        let tt = character_table(&triv).unwrap();
        assert_eq!(tt.num_irreps(), 1);
        assert!((tt.character(0)[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn z4_characters_are_fourth_roots() {
        let t = character_table(&cyclic(4).unwrap()).unwrap();
        assert_eq!(t.dims(), &[1, 1, 1, 1]);
        for i in 0..4 {
            for z in t.character(i) {
                let z4 = z.powu(4);
                assert!((z4 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn s3_multiplicities_and_gelfand() {
        let g = s3();
        let t = character_table(&g).unwrap();
        let h = Subgroup::generated_by(&g, &[perm_from_cycles(3, &[vec![0, 1]]).unwrap()]).unwrap();
        assert_eq!(t.trivial_restriction_multiplicity(2, &h).unwrap(), 1);
        let e = Subgroup::trivial(&g);
        for i in 0..3 {
            assert_eq!(t.trivial_restriction_multiplicity(i, &e).unwrap(), t.dim(i));
            assert_eq!(t.trivial_restriction_multiplicity(0, &Subgroup::whole(&g)).unwrap(), 1);
        }
        assert_eq!(is_gelfand_pair(&g, &h).unwrap(), GelfandDecision::Yes);
        assert_eq!(
            is_gelfand_pair(&g, &e).unwrap(),
            GelfandDecision::No {
                irrep: 2,
                multiplicity: 2
            }
        );
        assert!(is_gelfand_pair(&g, &Subgroup::whole(&g)).unwrap().is_gelfand());
    }

    #[test]
    fn indicators() {
        let t = character_table(&s3()).unwrap();
        assert_eq!(t.frobenius_schur(0).unwrap(), RealityType::Real);
        assert_eq!(t.frobenius_schur(2).unwrap(), RealityType::Real);
        let q = character_table(&quaternion().unwrap()).unwrap();
        let two = (0..q.num_irreps()).find(|&i| q.dim(i) == 2).unwrap();
        assert_eq!(q.frobenius_schur(two).unwrap(), RealityType::Quaternionic);
        let z3 = character_table(&cyclic(3).unwrap()).unwrap();
        assert_eq!(z3.frobenius_schur(1).unwrap(), RealityType::Complex);
        assert_eq!(z3.conjugate(1), 2);
    }

    #[test]
    fn structure_enumeration() {
        let g = s3();
        let h = Subgroup::generated_by(&g, &[perm_from_cycles(3, &[vec![0, 1]]).unwrap()]).unwrap();
        let all = count_probabilistic_structures(&g, &h, 3).unwrap();
        assert_eq!(all, vec![vec![0], vec![2], vec![0, 2]]);
        assert_eq!(count_probabilistic_structures(&g, &h, 2).unwrap(), vec![vec![0], vec![2]]);
        assert!(count_probabilistic_structures(&g, &h, 0).unwrap().is_empty());
        let w = Subgroup::whole(&g);
        assert_eq!(count_probabilistic_structures(&g, &w, 10).unwrap(), vec![vec![0]]);
        assert!(matches!(
            count_probabilistic_structures(&g, &Subgroup::trivial(&g), 3),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn complex_units_are_merged() {
        // Z3 acting on itself with trivial stabiliser is Gelfand (abelian).
        let g = cyclic(3).unwrap();
        let t = character_table(&g).unwrap();
        let units = spherical_units(&t, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(units.len(), 2);
        assert_eq!(units[1].irreps, vec![1, 2]);
        assert_eq!(units[1].real_dim, 2);
    }

    #[test]
    fn subgroup_validation() {
        let g = s3();
        let t = g.index_of(&perm_from_cycles(3, &[vec![0, 1]]).unwrap()).unwrap();
        let c = g.index_of(&perm_from_cycles(3, &[vec![0, 1, 2]]).unwrap()).unwrap();
        assert!(Subgroup::new(&g, &[0, t]).is_ok());
        assert!(Subgroup::new(&g, &[t]).is_err());
        assert!(Subgroup::new(&g, &[0, c]).is_err());
    }

    #[test]
    fn larger_groups_satisfy_table_invariants() {
        for g in [symmetric(4).unwrap(), symmetric(5).unwrap(), dihedral(6).unwrap(), quaternion().unwrap()] {
            let t = character_table(&g).unwrap();
            assert!(t.column_orthogonality_defect() < 1e-8);
            let sum: usize = t.dims().iter().map(|d| d * d).sum();
            assert_eq!(sum, g.order());
        }
        assert_eq!(character_table(&symmetric(5).unwrap()).unwrap().dims(), &[1, 1, 4, 4, 5, 5, 6]);
    }
}
