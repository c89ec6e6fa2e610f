use gptforge::compact_rep::haar_sample;
use gptforge::numerics::{dot, norm, sub_vec, RealMatrix};
use gptforge::presets::Preset;
use gptforge::state_space::*;
use gptforge::{Error, SeededRng};

fn augmented(m: &RealMatrix, p: &[f64]) -> Vec<f64> {
    let mut out = vec![p[0]];
    out.extend(m.matvec(&p[1..]));
    out
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub_vec(a, b))
}

fn nearest(p: &[f64], pts: &[Vec<f64>], skip: Option<usize>) -> f64 {
    pts.iter()
        .enumerate()
        .filter(|(j, _)| Some(*j) != skip)
        .map(|(_, q)| dist(p, q))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn every_preset_lies_on_a_sphere() {
    let presets = [
        Preset::Bloch,
        Preset::Spin2,
        Preset::deformable([0.5, 0.3, 0.2]),
        Preset::deformable([0.6, 0.25, 0.15]),
        Preset::deformable([1.0, 0.0, 0.0]),
        Preset::Quartic { k: 2 },
    ];
    for p in presets {
        let s = p.build(2000, SeededRng::new(0)).unwrap();
        assert!(sphere_check(&s) < 1e-8, "{p}: {}", sphere_check(&s));
        assert!(s.points().iter().all(|x| x[0] == 1.0));
        let u = Effect::unit(s.dim());
        let v = effect_valid(&s, &u).unwrap();
        assert!(v.valid && v.min == 1.0 && v.max == 1.0);
    }
}

#[test]
fn corrupted_point_is_detected() {
    let s = Preset::Bloch.build(200, SeededRng::new(3)).unwrap();
    let mut pts = s.points().to_vec();
    let c = s.mixed().to_vec();
    for (x, m) in pts[17].iter_mut().zip(&c).skip(1) {
        *x = m + 1.1 * (*x - m);
    }
    let dev = sphere_deviation(&pts, &c);
    assert!((dev - 0.1).abs() < 0.01, "{dev}");
    assert_eq!(sphere_deviation(&pts[..1], &c), 0.0);
}

#[test]
fn orbit_is_covariant() {
    let s = Preset::Bloch.build(1000, SeededRng::new(5)).unwrap();
    let pts = s.points();
    let spacing = (0..pts.len()).map(|i| nearest(&pts[i], pts, Some(i))).fold(0.0, f64::max);
    let mut gen = SeededRng::new(99).with_stream(1).generator();
    for _ in 0..3 {
        let g = haar_sample(s.rep().group(), &mut gen);
        let m = s.rep().apply(&g).unwrap();
        let moved: Vec<Vec<f64>> = pts.iter().map(|p| augmented(&m, p)).collect();
        let there = moved.iter().map(|p| nearest(p, pts, None)).fold(0.0, f64::max);
        let back = pts.iter().map(|p| nearest(p, &moved, None)).fold(0.0, f64::max);
        assert!(there.max(back) <= 2.0 * spacing, "{} vs spacing {}", there.max(back), spacing);
    }
}

#[test]
fn mixed_state_is_invariant() {
    for p in [Preset::Bloch, Preset::deformable([0.5, 0.3, 0.2])] {
        let n = 4000;
        let s = p.build(n, SeededRng::new(1)).unwrap();
        let mut gen = SeededRng::new(2).with_stream(4).generator();
        for _ in 0..20 {
            let m = s.rep().apply(&haar_sample(s.rep().group(), &mut gen)).unwrap();
            let e = s.empirical_mixed();
            assert!(dist(&augmented(&m, e), e) < 5.0 / (n as f64).sqrt());
            let w = s.mixed();
            assert!(dist(&augmented(&m, w), w) < 1e-12);
        }
        assert!(dist(s.empirical_mixed(), s.mixed()) < 5.0 / (n as f64).sqrt());
    }
}

#[test]
fn bloch_inner_products_fill_the_interval() {
    let s = Preset::Bloch.build(1000, SeededRng::new(0)).unwrap();
    let p0 = &s.point(0)[1..];
    let min = s.points().iter().map(|p| dot(p0, &p[1..])).fold(f64::INFINITY, f64::min);
    assert!(min < -0.99, "{min}");
}

#[test]
fn effect_validity_examples() {
    let s = Preset::Bloch.build(500, SeededRng::new(0)).unwrap();
    let z = Effect::zero(4);
    let v = effect_valid(&s, &z).unwrap();
    assert!(v.valid && v.min == 0.0 && v.max == 0.0);
    // The Bloch reference sits on the diagonal Gell-Mann coordinate.
    let r = s.reference().iter().position(|x| x.abs() > 0.5).unwrap();
    let mut c = vec![0.5, 0.0, 0.0, 0.0];
    c[r + 1] = 1.0;
    let v = effect_valid(&s, &Effect::new(c, "too big")).unwrap();
    assert!(!v.valid && v.max > 1.0);
    assert!(matches!(effect_valid(&s, &Effect::unit(5)), Err(Error::Domain(_))));
}

#[test]
fn witness_effects() {
    let s = Preset::deformable([0.5, 0.3, 0.2]).build(3000, SeededRng::new(8)).unwrap();
    let label = s.blocks()[1].label.clone();
    for anchor in [0, 11, 2999] {
        let w = witness_effect(&s, &label, anchor).unwrap();
        assert!(effect_valid(&s, &w).unwrap().valid);
        assert!((w.evaluate(s.point(anchor)) - 1.0).abs() < 1e-12);
        let mean = s.points().iter().map(|p| w.evaluate(p)).sum::<f64>() / s.len() as f64;
        assert!((mean - 0.5).abs() < 0.05, "{mean}");
    }
    assert!(witness_effect(&s, "unit", 0).is_err());
    assert!(witness_effect(&s, &label, 3000).is_err());
}

#[test]
fn reference_outside_fixed_space_is_rejected() {
    let p = Preset::Bloch;
    let err = build_structure(&p.rep().unwrap(), &p.subgroup(), &[1.0, 0.0, 0.0], 10, SeededRng::new(0)).unwrap_err();
    match err {
        Error::Domain(m) => assert!(m.contains("violation norm")),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn csv_export_round_trips() {
    let s = Preset::Bloch.build(25, SeededRng::new(4)).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let (comment, body) = text.split_once('\n').unwrap();
    assert!(comment.starts_with("# blocks: unit=0..1;"));
    let mut r = csv::Reader::from_reader(body.as_bytes());
    assert_eq!(r.headers().unwrap().len(), 4);
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 25);
    for (a, b) in rows.iter().zip(s.points()) {
        assert_eq!(a, b);
    }
}

#[test]
fn same_seed_same_sample() {
    let a = Preset::Spin2.build(50, SeededRng::new(12)).unwrap();
    let b = Preset::Spin2.build(50, SeededRng::new(12)).unwrap();
    assert_eq!(a.points(), b.points());
    assert!(a.shares_group_samples(&b));
}
