mod common;

use common::finite_oracle::*;
use gptforge::finite_rep::standard::{cyclic, dihedral, quaternion, symmetric};
use gptforge::finite_rep::{
    character_table, count_probabilistic_structures, gelfand_with_table, perm_from_cycles, FiniteGroup,
    GelfandDecision, RealityType, Subgroup,
};
use num_complex::Complex64;

fn klein() -> FiniteGroup {
    let a = perm_from_cycles(4, &[vec![0, 1]]).unwrap();
    let b = perm_from_cycles(4, &[vec![2, 3]]).unwrap();
    FiniteGroup::generate(4, &[a, b], 100).unwrap()
}

fn z2_cubed() -> FiniteGroup {
    let gens: Vec<_> = (0..3).map(|k| perm_from_cycles(6, &[vec![2 * k, 2 * k + 1]]).unwrap()).collect();
    FiniteGroup::generate(6, &gens, 100).unwrap()
}

fn z4_x_z2() -> FiniteGroup {
    let a = perm_from_cycles(6, &[vec![0, 1, 2, 3]]).unwrap();
    let b = perm_from_cycles(6, &[vec![4, 5]]).unwrap();
    FiniteGroup::generate(6, &[a, b], 100).unwrap()
}

fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
    let mut gs = vec![
        ("S3", symmetric(3).unwrap()),
        ("D4", dihedral(4).unwrap()),
        ("D5", dihedral(5).unwrap()),
        ("D6", dihedral(6).unwrap()),
        ("D8", dihedral(8).unwrap()),
        ("Q8", quaternion().unwrap()),
        ("V4", klein()),
        ("Z2^3", z2_cubed()),
        ("Z4xZ2", z4_x_z2()),
    ];
    for n in 1..=12 {
        gs.push(("Z_n", cyclic(n).unwrap()));
    }
    gs
}

#[test]
fn gelfand_decisions_match_regular_representation_oracle() {
    let mut groups = small_groups();
    groups.push(("S4", symmetric(4).unwrap()));
    for (name, g) in groups {
        let table = character_table(&g).unwrap();
        let copies = irreducible_copies(&g, 11);
        assert_eq!(copies.len(), table.dims().iter().sum::<usize>(), "{name}: copy count");
        for h in two_generated_subgroups(&g) {
            let decision = gelfand_with_table(&table, &h).unwrap();
            assert_eq!(decision.is_gelfand(), gelfand_oracle(&g, &h, &copies), "{name} |H|={}", h.order());
            let mut expected = Vec::new();
            for i in 0..table.num_irreps() {
                let m = table.trivial_restriction_multiplicity(i, &h).unwrap();
                for _ in 0..table.dim(i) {
                    expected.push((table.dim(i), m));
                }
            }
            expected.sort_unstable();
            assert_eq!(expected, copy_profile(&g, &h, &copies), "{name} |H|={}", h.order());
        }
    }
}

#[test]
fn multiplicities_decompose_the_permutation_character() {
    for (name, g) in small_groups().into_iter().chain([("S4", symmetric(4).unwrap())]) {
        let table = character_table(&g).unwrap();
        for h in two_generated_subgroups(&g) {
            let total: usize = (0..table.num_irreps())
                .map(|i| table.trivial_restriction_multiplicity(i, &h).unwrap() * table.dim(i))
                .sum();
            assert_eq!(total, g.order() / h.order(), "{name}");
        }
    }
}

#[test]
fn frobenius_schur_matches_invariant_forms() {
    for (name, g) in small_groups() {
        assert!(g.order() <= 16);
        let table = character_table(&g).unwrap();
        let copies = irreducible_copies(&g, 5);
        // Attribute each copy to an irrep through its character.
        for copy in &copies {
            let chi: Vec<Complex64> = table
                .class_representatives()
                .iter()
                .map(|&r| {
                    let m = copy_matrix(&g, copy, r);
                    (0..copy.dim()).map(|i| m[i][i]).sum()
                })
                .collect();
            let irrep = (0..table.num_irreps())
                .find(|&i| table.character(i).iter().zip(&chi).all(|(a, b)| (a - b).norm() < 1e-6))
                .unwrap_or_else(|| panic!("{name}: copy character not in table"));
            let fs = table.frobenius_schur(irrep).unwrap();
            assert_eq!(fs, bilinear_form_type(&g, copy, 3), "{name} irrep {irrep}");
            assert_eq!(fs == RealityType::Real, bilinear_form_type(&g, copy, 3) == RealityType::Real);
        }
    }
}

#[test]
fn column_orthogonality_across_groups() {
    for (name, g) in small_groups().into_iter().chain([("S4", symmetric(4).unwrap()), ("S5", symmetric(5).unwrap())]) {
        let t = character_table(&g).unwrap();
        assert!(t.column_orthogonality_defect() < 1e-8, "{name}");
        assert!(t.row_orthogonality_defect() < 1e-8, "{name}");
    }
}

#[test]
fn dihedral_square_and_s4_point_stabiliser() {
    // S4 acting on 4 points: stabiliser S3 is Gelfand (doubly transitive).
    let g = symmetric(4).unwrap();
    let h = Subgroup::generated_by(
        &g,
        &[perm_from_cycles(4, &[vec![0, 1]]).unwrap(), perm_from_cycles(4, &[vec![0, 1, 2]]).unwrap()],
    )
    .unwrap();
    assert_eq!(h.order(), 6);
    let t = character_table(&g).unwrap();
    assert_eq!(gelfand_with_table(&t, &h).unwrap(), GelfandDecision::Yes);
    let structures = count_probabilistic_structures(&g, &h, 4).unwrap();
    // Spherical irreps: trivial (1) and standard (3).
    assert_eq!(structures.len(), 3);
}

#[test]
fn order_cap_is_a_resource_error() {
    let g = symmetric(5).unwrap();
    assert!(matches!(
        gptforge::finite_rep::character_table_with_cap(&g, 100),
        Err(gptforge::Error::Resource(_))
    ));
}
