//! Spherical representations of complex Grassmannians, Dynkin-label reality
//! rules, Weyl dimensions and the catalogue of two-point homogeneous spaces.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::finite_rep::RealityType;
use crate::numerics::RealMatrix;

/// A highest weight of SU(d) as a weakly decreasing sequence ending in 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("a partition needs at least one entry"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!("{parts:?} is not weakly decreasing")));
        }
        if parts[parts.len() - 1] != 0 {
            return Err(Error::domain(format!("{parts:?} must end in 0")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Rank `d` of the SU(d) the partition labels.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u64::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Dynkin indices `j_i = λ_i − λ_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynkinLabel {
    pub indices: Vec<u64>,
}

impl DynkinLabel {
    /// Rank `d` of SU(d), i.e. `len + 1`.
    pub fn rank(&self) -> usize {
        self.indices.len() + 1
    }

    pub fn is_palindromic(&self) -> bool {
        self.indices.iter().eq(self.indices.iter().rev())
    }
}

/// Weakly decreasing `m`-tuples with entries in `0..=max`, in lexicographic order.
pub fn decreasing_tuples(m: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(m: usize, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=cap {
            prefix.push(b);
            go(m, b, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(m, max, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Highest weight of the spherical irrep of SU(m+n) ⊃ S(U(m)×U(n)) labelled
/// by `b₁ ≥ … ≥ b_m ≥ 0`.
///
/// `m = n`:  `(2b₁, b₁+b₂, …, b₁+b_m, b₁−b_m, …, b₁−b₂, 0)`.
/// `n > m`:  the same with `b₁` repeated `n − m` times in the middle. For
/// `m = 1` both the `b₁+b_i` run and the `b₁−b_i` tail are empty.
pub fn spherical_weight(m: usize, n: usize, b: &[u64]) -> Result<Partition> {
    if m == 0 || m > n {
        return Err(Error::domain(format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}")));
    }
    if b.len() != m || b.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::domain(format!("{b:?} is not a weakly decreasing {m}-tuple")));
    }
    let b1 = b[0];
    let mut parts = Vec::with_capacity(m + n);
    parts.push(2 * b1);
    parts.extend(b[1..].iter().map(|bi| b1 + bi));
    if n > m {
        parts.extend(std::iter::repeat_n(b1, n - m));
    }
    parts.extend(b[1..].iter().rev().map(|bi| b1 - bi));
    parts.push(0);
    debug_assert_eq!(parts.len(), m + n);
    Partition::new(parts)
}

/// All spherical highest weights with `b₁ ≤ b1_max`, in lexicographic order of `b`.
pub fn spherical_partitions(m: usize, n: usize, b1_max: u64) -> Result<Vec<Partition>> {
    if m > n {
        return Err(Error::domain(format!(
            "m = {m} exceeds n = {n}; Gr(m, m+n) ≅ Gr(n, m+n), swap the arguments"
        )));
    }
    if m == 0 {
        return Err(Error::domain("m must be at least 1"));
    }
    let mut out = Vec::new();
    for b in decreasing_tuples(m, b1_max) {
        let p = spherical_weight(m, n, &b)?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn partition_to_dynkin(p: &Partition) -> DynkinLabel {
    DynkinLabel {
        indices: p.parts.windows(2).map(|w| w[0] - w[1]).collect(),
    }
}

/// Reality of the SU(d) irrep with Dynkin label `j`: complex unless `j` is a
/// palindrome; otherwise real for `d` odd or `d ≡ 0 (mod 4)`, and for
/// `d = 4k+2` real iff the middle index is even.
pub fn reality_type(j: &DynkinLabel) -> RealityType {
    if !j.is_palindromic() {
        return RealityType::Complex;
    }
    let d = j.rank();
    if !d.is_multiple_of(2) || d.is_multiple_of(4) {
        return RealityType::Real;
    }
    if j.indices[d / 2 - 1].is_multiple_of(2) {
        RealityType::Real
    } else {
        RealityType::Quaternionic
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub lambda: Partition,
    pub dynkin: DynkinLabel,
    pub dim: u64,
    pub reality: RealityType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealityAudit {
    pub m: usize,
    pub n: usize,
    pub b1_max: u64,
    pub entries: Vec<AuditEntry>,
}

/// Classifies every spherical weight; a non-real one is reported as a
/// consistency failure.
pub fn spherical_reality_audit(m: usize, n: usize, b1_max: u64) -> Result<RealityAudit> {
    let mut entries = Vec::new();
    for lambda in spherical_partitions(m, n, b1_max)? {
        let dynkin = partition_to_dynkin(&lambda);
        let reality = reality_type(&dynkin);
        if reality != RealityType::Real {
            return Err(Error::NumericalConsistency(format!(
                "spherical weight {lambda} has Dynkin label {:?} of {} type",
                dynkin.indices,
                reality.as_str()
            )));
        }
        let dim = irrep_dimension(&lambda)?;
        entries.push(AuditEntry {
            lambda,
            dynkin,
            dim,
            reality,
        });
    }
    Ok(RealityAudit { m, n, b1_max, entries })
}

/// Weyl dimension `∏_{i<j} (λ_i − λ_j + j − i)/(j − i)`.
pub fn irrep_dimension(p: &Partition) -> Result<u64> {
    let l = &p.parts;
    let mut num = BigUint::from(1u8);
    let mut den = BigUint::from(1u8);
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            num *= BigUint::from(l[i] - l[j] + (j - i) as u64);
            den *= BigUint::from((j - i) as u64);
        }
    }
    let dim = num / den;
    u64::try_from(&dim)
        .ok()
        .filter(|&d| d < 1u64 << 63)
        .ok_or_else(|| Error::Resource(format!("dimension of {p} exceeds 2^63")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub space: &'static str,
    pub group: &'static str,
    pub stabilizer: &'static str,
    pub gelfand: bool,
}

const CATALOG: [CatalogEntry; 5] = [
    CatalogEntry {
        space: "S^d",
        group: "SO(d)",
        stabilizer: "SO(d-1)",
        gelfand: true,
    },
    CatalogEntry {
        space: "PR^d",
        group: "O(d)",
        stabilizer: "O(d-1)xO(1)",
        gelfand: true,
    },
    CatalogEntry {
        space: "PC^d",
        group: "SU(d)",
        stabilizer: "S(U(d-1)xU(1))",
        gelfand: true,
    },
    CatalogEntry {
        space: "PH^d",
        group: "Sp(d)",
        stabilizer: "Sp(d-1)xSp(1)",
        gelfand: true,
    },
    CatalogEntry {
        space: "PO^3",
        group: "F(4)",
        stabilizer: "Sp(9)",
        gelfand: true,
    },
];

/// Compact two-point homogeneous spaces as `G/H`.
pub fn two_point_catalog() -> &'static [CatalogEntry] {
    &CATALOG
}

pub fn catalog_lookup(space: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.space.eq_ignore_ascii_case(space))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrassmannField {
    Real,
    Complex,
    Quaternionic,
}

/// `G/H` descriptor of the Grassmannian of `m`-planes in `(m+n)`-space.
pub fn grassmannian_descriptor(field: GrassmannField, m: usize, n: usize) -> String {
    let d = m + n;
    match field {
        GrassmannField::Real => format!("SO({d})/S(O({m})xO({n}))"),
        GrassmannField::Complex => format!("SU({d})/S(U({m})xU({n}))"),
        GrassmannField::Quaternionic => format!("Sp({d})/(Sp({m})xSp({n}))"),
    }
}

/// Rank-`k` diagonal projector of size `k²`, the reference state of the
/// quartic system.
pub fn quartic_reference(k: usize) -> Result<RealMatrix> {
    if k < 2 {
        return Err(Error::domain(format!("quartic reference needs k ≥ 2, got {k}")));
    }
    let diag: Vec<f64> = (0..k * k).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
    Ok(RealMatrix::from_diagonal(&diag))
}
