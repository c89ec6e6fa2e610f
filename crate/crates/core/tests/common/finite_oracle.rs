//! Character-free oracles for finite groups.
//!
//! Irreducible copies are read off the regular representation: a random
//! Hermitian element of the right-translation algebra commutes with every left
//! translation, so (generically) each of its eigenspaces is one irreducible
//! copy. H-fixed vectors are counted with the averaging projector.

#![allow(dead_code)]

use gptforge::finite_rep::{FiniteGroup, RealityType, Subgroup};
use gptforge::numerics::{cdot, hermitian_eigen, CMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Orthonormal basis (columns) of one irreducible copy in C[G].
pub struct IrrepCopy {
    pub basis: Vec<Vec<Complex64>>,
}

impl IrrepCopy {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn irreducible_copies(g: &FiniteGroup, seed: u64) -> Vec<IrrepCopy> {
    let n = g.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        let xi = g.inverse(x);
        if xi < x {
            continue;
        }
        if xi == x {
            a[x] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        } else {
            a[x] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            a[xi] = a[x].conj();
        }
    }
    // (Σ_g a(g) R(g)) with R(g) e_x = e_{x g⁻¹}.
    let mut m = CMatrix::zeros(n, n);
    for (gi, &coef) in a.iter().enumerate() {
        let ginv = g.inverse(gi);
        for x in 0..n {
            m[(g.mul(x, ginv), x)] += coef;
        }
    }
    let (values, vectors) = hermitian_eigen(&m).expect("hermitian");
    let mut copies = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (values[end - 1] - values[end]).abs() < 1e-6 {
            end += 1;
        }
        copies.push(IrrepCopy {
            basis: vectors[start..end].to_vec(),
        });
        start = end;
    }
    copies
}

/// `L(g)v` with `L(g) e_x = e_{gx}`.
pub fn left_translate(g: &FiniteGroup, elem: usize, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for (x, &vx) in v.iter().enumerate() {
        out[g.mul(elem, x)] = vx;
    }
    out
}

/// dim of the H-fixed subspace of a copy: tr(P_E P_H).
pub fn fixed_dimension(g: &FiniteGroup, h: &Subgroup, copy: &IrrepCopy) -> usize {
    let mut trace = 0.0;
    for v in &copy.basis {
        let mut avg = vec![Complex64::new(0.0, 0.0); v.len()];
        for &m in h.members() {
            for (a, b) in avg.iter_mut().zip(left_translate(g, m, v)) {
                *a += b;
            }
        }
        trace += cdot(v, &avg).re / h.order() as f64;
    }
    let r = trace.round();
    assert!((trace - r).abs() < 1e-6, "fixed-space trace {trace} not integral");
    r as usize
}

/// (dim, H-fixed dim) of every irreducible copy in the regular representation.
pub fn copy_profile(g: &FiniteGroup, h: &Subgroup, copies: &[IrrepCopy]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = copies.iter().map(|c| (c.dim(), fixed_dimension(g, h, c))).collect();
    out.sort_unstable();
    out
}

pub fn gelfand_oracle(g: &FiniteGroup, h: &Subgroup, copies: &[IrrepCopy]) -> bool {
    copies.iter().all(|c| fixed_dimension(g, h, c) <= 1)
}

/// Matrix of `elem` on the copy: ρ(g)_{ij} = ⟨b_i, L(g) b_j⟩.
pub fn copy_matrix(g: &FiniteGroup, copy: &IrrepCopy, elem: usize) -> Vec<Vec<Complex64>> {
    let d = copy.dim();
    let moved: Vec<Vec<Complex64>> = copy.basis.iter().map(|b| left_translate(g, elem, b)).collect();
    (0..d).map(|i| (0..d).map(|j| cdot(&copy.basis[i], &moved[j])).collect()).collect()
}

/// Type from the existence of symmetric / antisymmetric invariant bilinear forms.
pub fn bilinear_form_type(g: &FiniteGroup, copy: &IrrepCopy, seed: u64) -> RealityType {
    let d = copy.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mats: Vec<Vec<Vec<Complex64>>> = (0..g.order()).map(|e| copy_matrix(g, copy, e)).collect();
    let averaged_norm = |sign: f64, rng: &mut ChaCha8Rng| -> f64 {
        let mut b0 = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for i in 0..d {
            for j in 0..=i {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                if i == j {
                    if sign > 0.0 {
                        b0[i][i] = z;
                    }
                } else {
                    b0[i][j] = z;
                    b0[j][i] = sign * z;
                }
            }
        }
        let mut acc = vec![vec![Complex64::new(0.0, 0.0); d]; d];
        for r in &mats {
            // rᵀ b0 r
            for i in 0..d {
                for j in 0..d {
                    let mut s = Complex64::new(0.0, 0.0);
                    for k in 0..d {
                        for l in 0..d {
                            s += r[k][i] * b0[k][l] * r[l][j];
                        }
                    }
                    acc[i][j] += s;
                }
            }
        }
        acc.iter().flatten().map(|z| z.norm() / g.order() as f64).fold(0.0, f64::max)
    };
    let sym = averaged_norm(1.0, &mut rng);
    let anti = averaged_norm(-1.0, &mut rng);
    match (sym > 1e-6, anti > 1e-6) {
        (true, false) => RealityType::Real,
        (false, true) => RealityType::Quaternionic,
        (false, false) => RealityType::Complex,
        (true, true) => panic!("copy is not irreducible"),
    }
}

/// All subgroups generated by at most two elements, deduplicated.
pub fn two_generated_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut out: Vec<Subgroup> = Vec::new();
    let n = g.order();
    for a in 0..n {
        for b in a..n {
            let gens = vec![g.element(a).to_vec(), g.element(b).to_vec()];
            let h = Subgroup::generated_by(g, &gens).unwrap();
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out
}
