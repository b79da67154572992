use lefschetz_core::analytic::{parse_map_expr, ManifoldDescriptor, RatPoly, SmoothMapSpec};
use lefschetz_core::coincidence::{
    find_coincidence_components, lefschetz_coincidence_number, pair_model, verify_residue_formula, CoincidenceComponent,
    CoincidenceError, CoincidenceOptions, GlobalInvariant, Verdict,
};
use lefschetz_core::degree::{DegreeConfig, DegreeMethod};
use lefschetz_core::linalg::{rat, ratio, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn linear(a: [[i64; 2]; 2], offset: [Rational; 2]) -> SmoothMapSpec {
    SmoothMapSpec::torus_linear(a.iter().map(|r| r.to_vec()).collect(), offset.to_vec()).unwrap()
}

fn det2(c: [[i64; 2]; 2]) -> i64 {
    c[0][0] * c[1][1] - c[0][1] * c[1][0]
}

// Signed count of x in [0,1)^2 with C x ∈ Z^2, by brute force over the grid
// (1/|det|) Z^2, which contains every solution.
fn lattice_oracle(c: [[i64; 2]; 2]) -> i64 {
    let d = det2(c);
    let k = d.abs();
    let mut count = 0;
    for i in 0..k {
        for j in 0..k {
            let u = c[0][0] * i + c[0][1] * j;
            let v = c[1][0] * i + c[1][1] * j;
            if u % k == 0 && v % k == 0 {
                count += 1;
            }
        }
    }
    count * d.signum()
}

fn random_pair(rng: &mut ChaCha8Rng) -> ([[i64; 2]; 2], [[i64; 2]; 2]) {
    loop {
        let mut m = || [[rng.gen_range(-3..=3), rng.gen_range(-3..=3)], [rng.gen_range(-3..=3), rng.gen_range(-3..=3)]];
        let (a, b) = (m(), m());
        let c = [[b[0][0] - a[0][0], b[0][1] - a[0][1]], [b[1][0] - a[1][0], b[1][1] - a[1][1]]];
        if det2(c) != 0 {
            return (a, b);
        }
    }
}

#[test]
fn random_torus_pairs_match_lattice_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = CoincidenceOptions::default();
    for _ in 0..25 {
        let (a, b) = random_pair(&mut rng);
        let zero = [rat(0), rat(0)];
        let (f, g) = (linear(a, zero.clone()), linear(b, zero));
        let c = [[b[0][0] - a[0][0], b[0][1] - a[0][1]], [b[1][0] - a[1][0], b[1][1] - a[1][1]]];
        let model = pair_model(&f, &g, &opts.degree).unwrap();
        let l = lefschetz_coincidence_number(&model, "f", "g").unwrap();
        assert_eq!(l, rat(det2(c)), "A = {a:?}, B = {b:?}");
        assert_eq!(det2(c), lattice_oracle(c));
        let rep = verify_residue_formula(&f, &g, Some((&model, "f", "g")), &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass);
        assert_eq!(rep.components.len() as i64, det2(c).abs());
        assert!(rep.components.iter().all(|r| r.method == DegreeMethod::JacobianSign));
    }
}

#[test]
fn hyperbolic_torus_map_against_identity() {
    let zero = [rat(0), rat(0)];
    let f = linear([[2, 1], [1, 1]], zero.clone());
    let g = linear([[1, 0], [0, 1]], zero);
    let opts = CoincidenceOptions::default();
    let model = pair_model(&f, &g, &opts.degree).unwrap();
    assert_eq!(lefschetz_coincidence_number(&model, "f", "g").unwrap(), rat(-1));
    let rep = verify_residue_formula(&f, &g, Some((&model, "f", "g")), &opts).unwrap();
    assert_eq!(rep.components.len(), 1);
    assert_eq!(rep.components[0].value, -1);
}

#[test]
fn sphere_residue_check() {
    let z = |k: usize| {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        SmoothMapSpec::sphere_rational(RatPoly::from_integers(&c), RatPoly::from_integers(&[1])).unwrap()
    };
    let (f, g) = (z(2), z(3));
    let opts = CoincidenceOptions::default();
    let model = pair_model(&f, &g, &opts.degree).unwrap();
    let rep = verify_residue_formula(&f, &g, Some((&model, "f", "g")), &opts).unwrap();
    assert_eq!(rep.global, GlobalInvariant::Number(5));
    let labels: Vec<(String, i64)> = rep.components.iter().map(|r| (r.component.to_string(), r.value)).collect();
    assert_eq!(
        labels,
        vec![
            ("z=(0.000000, 0.000000)".to_string(), 2),
            ("z=(1.000000, 0.000000)".to_string(), 1),
            ("w=(0.000000, 0.000000)".to_string(), 2),
        ]
    );
    for r in &rep.components {
        if r.value == 2 {
            assert_eq!(r.method, DegreeMethod::Winding);
            assert!(r.residual < 1e-6);
            assert_eq!(r.confirmation, Some((DegreeMethod::Oracle, 2)));
        }
    }
}

#[test]
fn circle_components_on_t2_to_t1() {
    let t2 = ManifoldDescriptor::torus(2);
    let t1 = ManifoldDescriptor::torus(1);
    let f = parse_map_expr("x", &t2, &t1).unwrap();
    let g = parse_map_expr("2*x", &t2, &t1).unwrap();
    let opts = CoincidenceOptions::default();
    let rep = verify_residue_formula(&f, &g, None, &opts).unwrap();
    assert_eq!(rep.components.len(), 1);
    assert_eq!(rep.components[0].component.dimension(), 1);
    assert_eq!(rep.components[0].value, 1);
    assert_eq!(rep.global, rep.local_sum);
    assert_eq!(rep.verdict, Verdict::Pass);
}

#[test]
fn random_t2_to_t1_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = CoincidenceOptions::default();
    let mut done = 0;
    while done < 10 {
        let a: Vec<i64> = (0..2).map(|_| rng.gen_range(-3..=3)).collect();
        let b: Vec<i64> = (0..2).map(|_| rng.gen_range(-3..=3)).collect();
        if a == b {
            continue;
        }
        let f = SmoothMapSpec::torus_linear(vec![a.clone()], vec![rat(0)]).unwrap();
        let g = SmoothMapSpec::torus_linear(vec![b.clone()], vec![ratio(1, 3)]).unwrap();
        let rep = verify_residue_formula(&f, &g, None, &opts).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "a = {a:?}, b = {b:?}: {rep:?}");
        assert!(rep.symmetry.unwrap().holds);
        done += 1;
    }
}

#[test]
fn equal_maps_have_no_transverse_frame() {
    let f = SmoothMapSpec::torus_linear(vec![vec![1, 2]], vec![rat(0)]).unwrap();
    let err = verify_residue_formula(&f, &f, None, &CoincidenceOptions::default()).unwrap_err();
    assert!(matches!(err, CoincidenceError::FrameNotTransverse(_)));
}

#[test]
fn symmetry_across_fixtures() {
    let opts = CoincidenceOptions::default();
    let z = |c: &[i64]| SmoothMapSpec::sphere_rational(RatPoly::from_integers(c), RatPoly::from_integers(&[1])).unwrap();
    let zero = [rat(0), rat(0)];
    let pairs = vec![
        (z(&[0, 0, 1]), z(&[0, 0, 0, 1])),
        (z(&[1, 1]), z(&[0, 0, 0, 0, 1])),
        (linear([[2, 1], [1, 1]], zero.clone()), linear([[1, 0], [0, 1]], zero.clone())),
        (linear([[3, 0], [1, -1]], zero.clone()), linear([[0, 2], [1, 1]], zero)),
        (SmoothMapSpec::circle_power(3, rat(0)), SmoothMapSpec::circle_power(-2, ratio(1, 4))),
    ];
    for (f, g) in pairs {
        let model = pair_model(&f, &g, &opts.degree).unwrap();
        let n = f.codomain.dimension() as u32;
        let fg = lefschetz_coincidence_number(&model, "f", "g").unwrap();
        let gf = lefschetz_coincidence_number(&model, "g", "f").unwrap();
        assert_eq!(gf, fg * rat((-1i64).pow(n)));
        let rep = verify_residue_formula(&f, &g, Some((&model, "f", "g")), &opts).unwrap();
        assert!(rep.verdict.passed());
        assert!(rep.symmetry.unwrap().holds);
    }
}

#[test]
fn degree_config_seed_does_not_change_sphere_indices() {
    let f = SmoothMapSpec::sphere_rational(RatPoly::from_integers(&[0, 0, 1]), RatPoly::from_integers(&[1])).unwrap();
    let g = SmoothMapSpec::sphere_rational(RatPoly::from_integers(&[0, 0, 0, 1]), RatPoly::from_integers(&[1])).unwrap();
    let values: Vec<Vec<i64>> = (0..3)
        .map(|seed| {
            let opts = CoincidenceOptions { degree: DegreeConfig { seed, ..DegreeConfig::default() }, ..Default::default() };
            let comps = find_coincidence_components(&f, &g, &opts).unwrap();
            let rep = verify_residue_formula(&f, &g, None, &opts).unwrap();
            assert_eq!(comps.len(), rep.components.len());
            rep.components.iter().map(|r| r.value).collect()
        })
        .collect();
    assert!(values.windows(2).all(|w| w[0] == w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn offsets_preserve_number_and_index_sum(
        a in prop::array::uniform2(prop::array::uniform2(-2i64..=2)),
        b in prop::array::uniform2(prop::array::uniform2(-2i64..=2)),
        p in 0i64..12, q in 0i64..12,
    ) {
        let c = [[b[0][0] - a[0][0], b[0][1] - a[0][1]], [b[1][0] - a[1][0], b[1][1] - a[1][1]]];
        prop_assume!(det2(c) != 0);
        let opts = CoincidenceOptions::default();
        let zero = [rat(0), rat(0)];
        let (f0, g0) = (linear(a, zero.clone()), linear(b, zero));
        let (f1, g1) = (linear(a, [ratio(p, 12), rat(0)]), linear(b, [rat(0), ratio(q, 12)]));
        let m0 = pair_model(&f0, &g0, &opts.degree).unwrap();
        let m1 = pair_model(&f1, &g1, &opts.degree).unwrap();
        let l0 = lefschetz_coincidence_number(&m0, "f", "g").unwrap();
        prop_assert_eq!(&l0, &lefschetz_coincidence_number(&m1, "f", "g").unwrap());
        let r0 = verify_residue_formula(&f0, &g0, Some((&m0, "f", "g")), &opts).unwrap();
        let r1 = verify_residue_formula(&f1, &g1, Some((&m1, "f", "g")), &opts).unwrap();
        prop_assert_eq!(&r0.local_sum, &r1.local_sum);
        prop_assert!(r1.verdict.passed());
        let points = |r: &lefschetz_core::coincidence::CoincidenceReport| -> Vec<Vec<Rational>> {
            r.components.iter().filter_map(|x| match &x.component {
                CoincidenceComponent::IsolatedPoint { exact, .. } => exact.clone(),
                _ => None,
            }).collect()
        };
        if det2(c).abs() == 1 && (p != 0 || q != 0) {
            prop_assert_ne!(points(&r0), points(&r1));
        }
    }
}
