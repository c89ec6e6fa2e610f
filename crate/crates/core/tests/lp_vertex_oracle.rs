use gptforge::numerics::{lp_solve, lp_solve_lazy, LinearProgram, LpOptions, LpOutcome};
use proptest::prelude::*;

const BOX: f64 = 5.0;

/// Solve a small square system by Gaussian elimination; `None` if singular.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))?;
        if a[p][k].abs() < 1e-9 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in 0..n {
            if i != k {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Maximum over all feasible vertices of {Gx ≤ h} ∩ box, or `None` if empty.
fn vertex_oracle(c: &[f64], g: &[Vec<f64>], h: &[f64]) -> Option<f64> {
    let n = c.len();
    let mut rows = g.to_vec();
    let mut rhs = h.to_vec();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push(e.clone());
        rhs.push(BOX);
        e[j] = -1.0;
        rows.push(e);
        rhs.push(BOX);
    }
    let mut best: Option<f64> = None;
    for idx in combinations(rows.len(), n) {
        let a = idx.iter().map(|&i| rows[i].clone()).collect();
        let b = idx.iter().map(|&i| rhs[i]).collect();
        let Some(x) = solve_square(a, b) else { continue };
        let feasible = rows
            .iter()
            .zip(&rhs)
            .all(|(r, &hi)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= hi + 1e-9);
        if feasible {
            let v: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    best
}

fn lp_case() -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            prop::collection::vec(-3.0f64..3.0, n),
            prop::collection::vec((prop::collection::vec(-3.0f64..3.0, n), -2.0f64..4.0), 0..=8),
        )
            .prop_map(|(c, rows)| {
                let (g, h) = rows.into_iter().unzip();
                (c, g, h)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn simplex_matches_vertex_enumeration((c, g, h) in lp_case()) {
        let mut p = LinearProgram::maximize(c.clone());
        for (row, &rhs) in g.iter().zip(&h) {
            p.add_le(row, rhs).unwrap();
        }
        for j in 0..c.len() {
            p.set_bounds(j, -BOX, BOX);
        }
        let outcome = lp_solve(&p).unwrap();
        match (vertex_oracle(&c, &g, &h), outcome) {
            (Some(v), LpOutcome::Optimal(s)) => {
                prop_assert!((s.value - v).abs() < 1e-8 * (1.0 + v.abs()), "lp {} vs oracle {}", s.value, v);
                prop_assert!(p.max_violation(&s.point) < 1e-8);
            }
            (None, LpOutcome::Infeasible) => {}
            (o, l) => prop_assert!(false, "oracle {:?} but solver {:?}", o, l),
        }
    }

    #[test]
    fn lazy_rows_match_vertex_enumeration((c, g, h) in lp_case(), batch in 1usize..4) {
        let mut base = LinearProgram::maximize(c.clone());
        for j in 0..c.len() {
            base.set_bounds(j, -BOX, BOX);
        }
        let pool: Vec<(Vec<f64>, f64)> = g.iter().cloned().zip(h.iter().copied()).collect();
        let initial: Vec<usize> = (0..pool.len().min(1)).collect();
        let outcome = lp_solve_lazy(&base, &pool, &initial, batch, &LpOptions::default()).unwrap();
        match (vertex_oracle(&c, &g, &h), outcome) {
            (Some(v), LpOutcome::Optimal(s)) => {
                prop_assert!((s.value - v).abs() < 1e-8 * (1.0 + v.abs()), "lazy {} vs oracle {}", s.value, v);
            }
            (None, LpOutcome::Infeasible) => {}
            (o, l) => prop_assert!(false, "oracle {:?} but lazy solver {:?}", o, l),
        }
    }
}

#[test]
fn equality_constrained_corner() {
    // max 2x + y  s.t. x + y = 1, x ≤ 0.25 (x, y free) → x = 0.25, y = 0.75.
    let mut p = LinearProgram::maximize(vec![2.0, 1.0]);
    p.add_eq(&[1.0, 1.0], 1.0).unwrap();
    p.add_le(&[1.0, 0.0], 0.25).unwrap();
    let s = lp_solve(&p).unwrap();
    let s = s.optimal().unwrap();
    assert!((s.value - 1.25).abs() < 1e-12);
    assert!((s.point[1] - 0.75).abs() < 1e-12);
}

#[test]
fn many_redundant_rows() {
    // A tall program: max x+y over 2000 tangent half-planes of the unit disc.
    let mut p = LinearProgram::maximize(vec![1.0, 1.0]);
    for k in 0..2000 {
        let th = k as f64 * std::f64::consts::TAU / 2000.0;
        p.add_le(&[th.cos(), th.sin()], 1.0).unwrap();
    }
    let s = lp_solve(&p).unwrap();
    let s = s.optimal().unwrap();
    assert!((s.value - std::f64::consts::SQRT_2).abs() < 1e-5);
    assert!(p.max_violation(&s.point) < 1e-9);
}
