//! Brute-force maximisation of a linear objective over a small polytope by
//! enumerating every vertex (intersection of `n` constraint hyperplanes).

#![allow(dead_code)]

pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))?;
        if a[p][k].abs() < 1e-10 {
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

/// `max c·x` over `{x : rows·x ≤ rhs}`; `None` if empty. The caller adds box
/// rows when the polytope could be unbounded.
pub fn maximize(c: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Option<f64> {
    let n = c.len();
    let mut best: Option<f64> = None;
    for idx in combinations(rows.len(), n) {
        let a = idx.iter().map(|&i| rows[i].clone()).collect();
        let b = idx.iter().map(|&i| rhs[i]).collect();
        let Some(x) = solve_square(a, b) else { continue };
        let ok = rows
            .iter()
            .zip(rhs)
            .all(|(r, &h)| r.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() <= h + 1e-9);
        if ok {
            let v: f64 = c.iter().zip(&x).map(|(p, q)| p * q).sum();
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    best
}
