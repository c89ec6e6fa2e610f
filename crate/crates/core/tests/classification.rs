use gptforge::classification::*;
use gptforge::compact_rep::{adjoint_matrix, gell_mann_coordinates, SubgroupSpec, CompactGroup};
use gptforge::compact_rep::GroupElement;
use gptforge::finite_rep::standard::quaternion;
use gptforge::finite_rep::{character_table, RealityType};
use gptforge::numerics::CMatrix;
use gptforge::Error;
use num_complex::Complex64;

/// Number of Gelfand–Tsetlin patterns with top row `top`.
fn gt_patterns(top: &[u64]) -> u64 {
    if top.len() <= 1 {
        return 1;
    }
    fn rows(top: &[u64], i: usize, cur: &mut Vec<u64>, acc: &mut u64) {
        if i + 1 == top.len() {
            *acc += gt_patterns(cur);
            return;
        }
        for v in top[i + 1]..=top[i] {
            cur.push(v);
            rows(top, i + 1, cur, acc);
            cur.pop();
        }
    }
    let mut acc = 0;
    rows(top, 0, &mut Vec::new(), &mut acc);
    acc
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn weyl_dimension_matches_pattern_count() {
    for d in 1..=4usize {
        for top in decreasing_tuples(d, 4) {
            if top[d - 1] != 0 {
                continue;
            }
            let p = Partition::new(top.clone()).unwrap();
            assert_eq!(irrep_dimension(&p).unwrap(), gt_patterns(&top), "{p}");
        }
    }
    assert_eq!(gt_patterns(&[2, 1, 0]), 8);
}

#[test]
fn enumeration_counts_and_palindromes() {
    for m in 1..=3 {
        for n in m..=3 {
            for b in 0..=4u64 {
                let ps = spherical_partitions(m, n, b).unwrap();
                assert_eq!(ps.len() as u64, binomial(b + m as u64, m as u64), "({m},{n},{b})");
                let mut sorted = ps.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), ps.len());
                for p in &ps {
                    assert_eq!(p.len(), m + n);
                    let j = partition_to_dynkin(p);
                    assert!(j.is_palindromic(), "{p}");
                    assert_eq!(reality_type(&j), RealityType::Real);
                }
            }
        }
    }
    assert!(matches!(spherical_partitions(2, 1, 1), Err(Error::Domain(_))));
}

#[test]
fn grassmann_examples() {
    let ps = spherical_partitions(1, 2, 1).unwrap();
    let adj = Partition::new(vec![2, 1, 0]).unwrap();
    assert!(ps.contains(&adj));
    assert_eq!(irrep_dimension(&adj).unwrap(), 8);
    assert_eq!(spherical_partitions(2, 2, 1).unwrap().len(), 3);
    let audit = spherical_reality_audit(1, 1, 0).unwrap();
    assert_eq!(audit.entries.len(), 1);
    assert!(audit.entries[0].lambda.is_trivial());
}

/// Character of the spin-`j/2` representation at an SU(2) element of trace `tr`.
fn spin_character(j: u64, tr: f64) -> f64 {
    let half = (tr / 2.0).clamp(-1.0, 1.0).acos();
    if half.sin().abs() < 1e-12 {
        let sign = if tr < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
        return sign * (j + 1) as f64;
    }
    ((j + 1) as f64 * half).sin() / half.sin()
}

#[test]
fn reality_rule_agrees_with_indicators_on_q8() {
    let g = quaternion().unwrap();
    let table = character_table(&g).unwrap();
    // Point 0 is the unit 1; its image under an element names that element.
    let trace_of = |e: usize| -> f64 {
        let p = g.element(e)[0];
        match p {
            0 => 2.0,
            1 => -2.0,
            _ => 0.0,
        }
    };
    for j in 1..=4u64 {
        let expected = reality_type(&DynkinLabel { indices: vec![j] });
        let chi: Vec<f64> = table.class_representatives().iter().map(|&e| trace_of(e)).map(|t| spin_character(j, t)).collect();
        let mut seen = 0;
        for irrep in 0..table.num_irreps() {
            let mult: Complex64 = table
                .class_sizes()
                .iter()
                .zip(&chi)
                .zip(table.character(irrep))
                .map(|((&size, &x), c)| c.conj() * (size as f64 * x))
                .sum::<Complex64>()
                / g.order() as f64;
            let m = mult.re.round();
            assert!((mult.re - m).abs() < 1e-9 && mult.im.abs() < 1e-9);
            if m > 0.0 {
                seen += m as u64 * table.dim(irrep) as u64;
                assert_eq!(table.frobenius_schur(irrep).unwrap(), expected, "spin {j}/2, irrep {irrep}");
            }
        }
        assert_eq!(seen, j + 1);
    }
}

#[test]
fn quartic_reference_is_block_invariant() {
    let rho = quartic_reference(2).unwrap();
    assert_eq!(rho.trace(), 2.0);
    assert!(rho.matmul(&rho).sub(&rho).max_abs() == 0.0);
    let rho_c = CMatrix::from_real(&rho);
    let mut gen = gptforge::SeededRng::new(0).generator();
    let sub = SubgroupSpec::Block(vec![2, 2]);
    for _ in 0..5 {
        let GroupElement::Su(u) = sub.sample(CompactGroup::Su(4), &mut gen).unwrap() else {
            panic!("expected a unitary");
        };
        let moved = u.matmul(&rho_c).matmul(&u.adjoint());
        assert!(moved.sub(&rho_c).max_abs() < 1e-10);
        // Same statement in adjoint coordinates.
        let ad = adjoint_matrix(&u).unwrap();
        let v = gell_mann_coordinates(&rho_c);
        let w = ad.matvec(&v);
        assert!(v.iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-10));
    }
}

#[test]
fn catalog_rows() {
    let c = two_point_catalog();
    assert_eq!(c.len(), 5);
    assert_eq!(catalog_lookup("PC^d").unwrap().group, "SU(d)");
    assert_eq!(catalog_lookup("PO^3").unwrap().stabilizer, "Sp(9)");
    assert!(catalog_lookup("T^2").is_none());
}
