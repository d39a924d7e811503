use masep_algebra::{int, rat, Rational};
use masep_hecke::HeckeError;
use masep_lattice::{
    generator_direct, random_rational, rates, Convention, ModelSpec, ParamPoint, TransferBuilder,
};
use masep_stationary::*;
use masep_weyl::{antidominant_rep, generalised_sectors, orbit, sectors};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn example_point() -> ParamPoint {
    ParamPoint::new(rat(1, 2), rat(-3, 1), rat(-5, 1), rat(1, 3), rat(1, 5))
}

fn generic_point() -> ParamPoint {
    ParamPoint::new(rat(1, 3), rat(-2, 1), rat(-3, 1), rat(1, 5), rat(1, 7))
}

/// All rates nonnegative and `t < 1`.
fn positive_point() -> ParamPoint {
    ParamPoint::new(rat(1, 2), rat(1, 2), rat(1, 3), rat(-1, 3), rat(-1, 4))
}

fn random_point(rng: &mut ChaCha8Rng) -> ParamPoint {
    loop {
        let p = ParamPoint::new(
            random_rational(rng),
            random_rational(rng),
            random_rational(rng),
            random_rational(rng),
            random_rational(rng),
        );
        if rates(&p).is_ok() {
            return p;
        }
    }
}

/// Resamples while the spectrum of the sector is degenerate at the drawn point.
fn theorem_at_random(
    rng: &mut ChaCha8Rng,
    n: usize,
    r: usize,
    lambda: &[i32],
) -> (ParamPoint, TheoremReport) {
    loop {
        let p = random_point(rng);
        let spec = ModelSpec::new(n, r, p.clone()).unwrap();
        match theorem_check(&spec, lambda, None) {
            Ok(rep) => return (p, rep),
            Err(StationaryError::Hecke(HeckeError::Degenerate { .. })) => continue,
            Err(e) => panic!("{lambda:?}: {e}"),
        }
    }
}

#[test]
fn null_space_of_a_small_matrix() {
    let m = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
    let ns = null_space(&m);
    assert_eq!(ns.len(), 2);
    for v in &ns {
        for row in &m {
            let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
    assert!(null_space(&[vec![int(1), int(0)], vec![int(0), int(1)]]).is_empty());
}

#[test]
fn trivial_sector() {
    let spec = ModelSpec::new(3, 2, generic_point()).unwrap();
    let null = nullspace_stationary(&spec, &[0, 0, 0]).unwrap();
    let (hecke, _) = hecke_stationary(&spec, &[0, 0, 0]).unwrap();
    for s in [&null, &hecke] {
        assert_eq!(s.weights.len(), 1);
        assert_eq!(s.z, int(1));
    }
}

#[test]
fn single_site_balance() {
    for p in [generic_point(), positive_point()] {
        let spec = ModelSpec::new(1, 1, p.clone()).unwrap();
        let rt = rates(&p).unwrap();
        let null = nullspace_stationary(&spec, &[1]).unwrap();
        // (-1) -> (1) at rate alpha + delta, (1) -> (-1) at rate gamma + beta
        let ratio = (&rt.alpha + &rt.delta) / (&rt.gamma + &rt.beta);
        assert_eq!(&null.weights[&vec![1]] / &null.weights[&vec![-1]], ratio);
        assert_eq!(null.residual_nnz(&generator_direct(&spec).unwrap()), 0);
        assert!(theorem_check(&spec, &[1], None).unwrap().pass());
    }
    let spec = ModelSpec::new(1, 1, positive_point()).unwrap();
    let null = nullspace_stationary(&spec, &[1]).unwrap();
    assert!(null.weights.values().all(|w| w.is_positive()));
}

#[test]
fn symmetric_hopping_splits_sectors() {
    // at t = 1 every boundary rate vanishes: the signs of (1,0) are conserved
    let p = ParamPoint::new(int(1), rat(-2, 1), rat(-3, 1), rat(1, 5), rat(1, 7));
    let spec = ModelSpec::new(2, 1, p).unwrap();
    let l = generator_direct(&spec).unwrap();
    assert!(!sector_irreducible(&spec, &l, &[1, 0]));
    assert!(matches!(
        nullspace_stationary_with(&spec, &l, &[1, 0]),
        Err(StationaryError::NullDimension { dim: 2 })
    ));
    let spec = ModelSpec::new(2, 1, generic_point()).unwrap();
    assert!(sector_irreducible(
        &spec,
        &generator_direct(&spec).unwrap(),
        &[1, 0]
    ));
}

#[test]
fn example_sectors_match_the_oracle() {
    for lambda in [vec![1, 0], vec![1, 1, 0]] {
        let spec = ModelSpec::new(lambda.len(), 1, example_point()).unwrap();
        let rep = theorem_check(&spec, &lambda, None).unwrap();
        assert!(rep.pass(), "{rep:?}");
        let (hecke, fam) = hecke_stationary(&spec, &lambda).unwrap();
        let null = nullspace_stationary(&spec, &lambda).unwrap();
        assert_eq!(hecke.weights.len(), orbit(&lambda, None).len());
        let c = hecke.scale_to(&null).unwrap();
        // the anchor normalisation gives the same Z on both sides
        let delta = antidominant_rep(&lambda, None);
        assert_eq!(c, fam.members[&delta].value_at_ones());
        assert_eq!(null.rescaled(&c).z, hecke.z);
    }
}

#[test]
fn example_point_is_resonant_for_repeated_parts() {
    // abcd = 1 gives t_0 t_n = 1/q, so y(-1,-1) = y(0,-1) for every q
    let spec = ModelSpec::new(2, 1, example_point()).unwrap();
    assert!(matches!(
        hecke_stationary(&spec, &[1, 1]),
        Err(StationaryError::Hecke(HeckeError::Degenerate { .. }))
    ));
    // the oracle itself is unaffected
    let null = nullspace_stationary(&spec, &[1, 1]).unwrap();
    assert_eq!(null.residual_nnz(&generator_direct(&spec).unwrap()), 0);
}

#[test]
fn theorem_for_all_small_sectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, r) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)] {
        for lambda in sectors(n, r as i32) {
            for _ in 0..2 {
                let (p, rep) = theorem_at_random(&mut rng, n, r, &lambda);
                assert!(rep.pass(), "{p} {rep:?}");
            }
        }
    }
}

#[test]
fn theorem_for_some_four_site_sectors() {
    let spec = ModelSpec::new(4, 2, generic_point()).unwrap();
    for lambda in [[1, 1, 0, 0], [2, 1, 0, 0], [1, 1, 1, 0], [2, 0, 0, 0]] {
        let rep = theorem_check(&spec, &lambda, None).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }
}

#[test]
fn exchange_relations_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let hp = hecke_params(&generic_point());
    for (n, r) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let spec = ModelSpec::new(n, r, generic_point()).unwrap();
        for lambda in sectors(n, r as i32) {
            let fam = family_at_q1(&hp, &lambda).unwrap();
            let mut done = 0;
            while done < 2 {
                let xs: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
                match exchange_check(&spec, &fam.members, &xs) {
                    Ok(ex) => {
                        assert!(ex.all_hold(), "{lambda:?} {xs:?} {ex:?}");
                        done += 1;
                    }
                    Err(StationaryError::Lattice(_)) => continue,
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

#[test]
fn mirror_pairing_has_no_stationary_hecke_state() {
    let p = generic_point();
    // one species: both pairings are the same model
    let spec = ModelSpec::new(3, 1, p.clone())
        .unwrap()
        .with_convention(Convention::Mirror);
    assert!(theorem_check(&spec, &[1, 1, 0], None).unwrap().pass());
    let spec = ModelSpec::new(2, 2, p.clone())
        .unwrap()
        .with_convention(Convention::Mirror);
    for lambda in [[2, 1], [1, 0], [2, 2]] {
        let rep = theorem_check(&spec, &lambda, None).unwrap();
        assert!(rep.residual_nnz > 0);
        assert!(matches!(
            nullspace_stationary(&spec, &lambda),
            Err(StationaryError::SectorNotClosed(_))
        ));
    }
}

#[test]
fn positive_rates_give_positive_weights() {
    let p = positive_point();
    assert!(rates(&p).unwrap().nonnegative());
    for (n, r) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
        let spec = ModelSpec::new(n, r, p.clone()).unwrap();
        for lambda in sectors(n, r as i32) {
            let (hecke, _) = hecke_stationary(&spec, &lambda).unwrap();
            assert!(hecke.single_signed(), "{lambda:?}");
            assert!(hecke.z.is_positive(), "{lambda:?}");
            assert!(hecke.weights.values().all(|w| !w.is_zero()));
        }
    }
}

#[test]
fn row_of_ones_is_a_left_eigenvector() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (n, r) in [(2, 1), (2, 2), (3, 1)] {
        let spec = ModelSpec::new(n, r, generic_point()).unwrap();
        let l = generator_direct(&spec).unwrap();
        let builder = TransferBuilder::new(&spec).unwrap();
        for lambda in sectors(n, r as i32) {
            let idx: Vec<usize> = sector_configs(&spec, &lambda)
                .iter()
                .map(|m| spec.config_index(m))
                .collect();
            let ones: Vec<Rational> = (0..spec.dim())
                .map(|i| if idx.contains(&i) { int(1) } else { int(0) })
                .collect();
            let row = l.apply_left(&ones);
            assert!(idx.iter().all(|&i| row[i].is_zero()));
            let mut got = 0;
            while got < 2 {
                let xs: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
                let w = random_rational(&mut rng);
                let eig = |w: &Rational| match transfer_eigenvalue(&builder, &lambda, w, &xs) {
                    // a pole of the R-matrices at this point: draw again
                    Err(StationaryError::Lattice(_)) => None,
                    other => Some(other.unwrap()),
                };
                let (Some(lam_w), Some(lam_1)) = (eig(&w), eig(&int(1))) else {
                    continue;
                };
                assert!(!lam_w.is_zero());
                assert_eq!(lam_1, int(1));
                got += 1;
            }
        }
    }
}

#[test]
fn factorisation_over_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for lambda in [vec![1, 1], vec![2, 1], vec![2, 2], vec![2, 1, 0]] {
        let p = loop {
            let p = random_point(&mut rng);
            if factorisation_check(&p, &lambda, false).is_ok() {
                break p;
            }
        };
        let rep = factorisation_check(&p, &lambda, true).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert_eq!(rep.polynomial_identity, Some(true));
        // independent route: each Z from the anchored null vector
        let r = *lambda.iter().max().unwrap() as usize;
        let z_null = |mu: &[i32]| {
            let spec = ModelSpec::new(mu.len(), r, p.clone()).unwrap();
            theorem_check(&spec, mu, None).unwrap().z_nullspace.unwrap()
        };
        assert_eq!(z_null(&lambda), rep.z);
        for (col, z) in rep.columns.iter().zip(&rep.column_z) {
            assert_eq!(&z_null(col), z);
        }
    }
    let single = factorisation_check(&generic_point(), &[1, 0, 0], true).unwrap();
    assert_eq!(single.columns, vec![vec![1, 0, 0]]);
    assert_eq!(single.z, single.product);
    assert!(factorisation_check(&generic_point(), &[0, 1], false).is_err());
}

#[test]
fn zero_cutoffs_reduce_to_the_standard_family() {
    let spec = ModelSpec::new(3, 2, generic_point()).unwrap();
    for lambda in [[2, 1, 0], [1, 1, 0]] {
        let (hecke, _) = hecke_stationary(&spec, &lambda).unwrap();
        let gen = generalised_stationary(&spec, &lambda).unwrap();
        assert_eq!(gen.weights, hecke.weights);
    }
}

#[test]
fn constant_solution_verbatim() {
    let p = generic_point();
    for (n, rl, rr, lambda) in [
        (2, 2, 0, vec![2, 1]),
        (3, 2, 1, vec![2, 0, -1]),
        (3, 1, 1, vec![1, 0, -1]),
        (3, 1, 0, vec![1, 1, 0]),
    ] {
        let spec = ModelSpec::generalised(n, 2, p.clone(), rl, rr, Convention::Magnitude).unwrap();
        let gen = generalised_stationary(&spec, &lambda).unwrap();
        let tn = p.tn();
        for (mu, w) in &gen.weights {
            assert_eq!(w, &constant_weight(mu, rr, &p.t, &tn), "{mu:?}");
        }
        let null = nullspace_stationary(&spec, &lambda).unwrap();
        assert!(gen.scale_to(&null).is_some(), "{lambda:?}");
        let rep = generalised_check(&spec, &lambda).unwrap();
        assert!(rep.pass(), "{rep:?}");
    }
}

#[test]
fn mixed_cutoff_example() {
    let spec = ModelSpec::generalised(3, 2, generic_point(), 1, 0, Convention::Magnitude).unwrap();
    let rep = generalised_check(&spec, &[2, 1, 0]).unwrap();
    assert!(rep.pass(), "{rep:?}");
    assert!(rep.relations_checked > 0);
    let gen = generalised_stationary(&spec, &[2, 1, 0]).unwrap();
    let null = nullspace_stationary(&spec, &[2, 1, 0]).unwrap();
    assert!(gen.scale_to(&null).is_some());
}

#[test]
fn generalised_sectors_up_to_three_sites() {
    let p = generic_point();
    for (rl, rr) in [(1, 0), (1, 1), (2, 0)] {
        for n in 1..=3 {
            let spec =
                ModelSpec::generalised(n, 2, p.clone(), rl, rr, Convention::Magnitude).unwrap();
            for lambda in generalised_sectors(n, 2, rr as i32) {
                let rep = generalised_check(&spec, &lambda).unwrap();
                assert!(rep.pass(), "({rl},{rr}) {rep:?}");
                let fam = generalised_weights(&spec, &lambda).unwrap();
                let xs: Vec<Rational> = (0..n).map(|i| rat(3 + i as i64, 11)).collect();
                assert!(exchange_check(&spec, &fam, &xs).unwrap().all_hold());
            }
        }
    }
}

#[test]
fn generalised_input_validation() {
    let spec = ModelSpec::generalised(2, 2, generic_point(), 0, 1, Convention::Magnitude).unwrap();
    assert!(generalised_stationary(&spec, &[1, 0]).is_err());
    let spec = ModelSpec::generalised(2, 2, generic_point(), 1, 0, Convention::Magnitude).unwrap();
    assert!(generalised_stationary(&spec, &[0, 1]).is_err());
    assert!(generalised_stationary(&spec, &[1, -1]).is_err());
    assert!(hecke_stationary(&spec, &[1, 0]).is_err());
}

#[test]
fn sector_report_is_deterministic() {
    let spec = ModelSpec::new(2, 1, generic_point()).unwrap();
    let rep = theorem_check(&spec, &[1, 0], None).unwrap();
    let (hecke, _) = hecke_stationary(&spec, &[1, 0]).unwrap();
    let make = || {
        serde_json::to_string(&SectorReport::new(&hecke, &rep.anchor).with_theorem(rep.pass()))
            .unwrap()
    };
    let a = make();
    assert_eq!(a, make());
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["theorem"], "pass");
    assert_eq!(v["sector"], serde_json::json!([1, 0]));
    assert_eq!(v["weights"].as_object().unwrap().len(), 4);
    assert!(v["weights"]["-1,0"].is_string());
    assert!(v["Z"].is_string());
}

proptest! {
    #[test]
    fn rescaling_is_detected(num in -20i64..20, den in 1i64..20) {
        prop_assume!(num != 0);
        let spec = ModelSpec::new(2, 1, generic_point()).unwrap();
        let null = nullspace_stationary(&spec, &[1, 0]).unwrap();
        let c = rat(num, den);
        prop_assert_eq!(null.rescaled(&c).scale_to(&null), Some(c.clone()));
        prop_assert_eq!(null.rescaled(&c).z, &null.z * &c);
    }

    #[test]
    fn null_vectors_are_annihilated(entries in proptest::collection::vec(-3i64..4, 12)) {
        let m: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let ns = null_space(&m);
        for v in &ns {
            for row in &m {
                let dot: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                prop_assert!(dot.is_zero());
            }
        }
        // rank-nullity against an independent elimination count
        prop_assert_eq!(ns.len(), 4 - masep_hecke::linalg::rank(&m));
    }
}
