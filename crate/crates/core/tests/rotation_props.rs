use objcheck_core::linalg::{determinant, transpose};
use objcheck_core::rotation::{
    haar_sample, rotation_2d, rotation_mapping, validate_rotation, DEFAULT_TOLERANCE,
};
use objcheck_core::{RotationMatrix, SeedStream, Vector};
use proptest::prelude::*;
use rand::Rng;

fn random_unit(m: usize, rng: &mut impl Rng) -> Vector {
    loop {
        let v: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Some(u) = Vector::new(v).unwrap().normalized() {
            return u;
        }
    }
}

fn check_rotation(q: &RotationMatrix) {
    assert!(q.orthogonality_residual() <= 1e-10);
    assert!((determinant(q.matrix()) - 1.0).abs() <= 1e-10);
}

#[test]
fn mapping_sends_u_to_v() {
    let stream = SeedStream::new(17);
    for m in 2..=8 {
        let mut rng = stream.substream(m as u64);
        for _ in 0..1000 {
            let (u, v) = (random_unit(m, &mut rng), random_unit(m, &mut rng));
            let q = rotation_mapping(&u, &v).unwrap();
            assert!(q.apply(&u).unwrap().sub(&v).unwrap().max_abs() <= 1e-10);
            check_rotation(&q);
        }
    }
}

#[test]
fn mapping_handles_parallel_and_nearly_parallel_pairs() {
    let stream = SeedStream::new(3);
    for m in 2..=8 {
        let mut rng = stream.substream(m as u64);
        for _ in 0..50 {
            let u = random_unit(m, &mut rng);
            let tiny = random_unit(m, &mut rng).scaled(1e-9);
            for v in [
                u.clone(),
                u.scaled(-1.0),
                u.sub(&tiny).unwrap().normalized().unwrap(),
                u.scaled(-1.0).sub(&tiny).unwrap().normalized().unwrap(),
            ] {
                let q = rotation_mapping(&u, &v).unwrap();
                assert!(q.apply(&u).unwrap().sub(&v).unwrap().max_abs() <= 1e-10);
                check_rotation(&q);
            }
        }
    }
}

#[test]
fn haar_samples_are_rotations() {
    let stream = SeedStream::new(8);
    for m in 1..=12 {
        for i in 0..50 {
            let q = haar_sample(m, &mut stream.substream(i));
            assert!(validate_rotation(q.matrix().clone(), DEFAULT_TOLERANCE).is_ok());
        }
    }
}

#[test]
fn haar_is_bitwise_reproducible() {
    for seed in [0, 1, u64::MAX] {
        let a = haar_sample(6, &mut SeedStream::new(seed).substream(2));
        let b = haar_sample(6, &mut SeedStream::new(seed).substream(2));
        let bits = |q: &RotationMatrix| {
            q.matrix()
                .as_row_major()
                .iter()
                .map(|v| v.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
    }
}

#[test]
fn large_orders_validate_with_scaled_tolerance() {
    let q = haar_sample(40, &mut SeedStream::new(1).substream(0));
    assert!(validate_rotation(q.matrix().clone(), DEFAULT_TOLERANCE).is_ok());
    let back = transpose(q.matrix());
    assert_eq!(q.inverse().matrix(), &back);
}

proptest! {
    #[test]
    fn rotations_preserve_norms(m in 1usize..9, seed in any::<u64>(), theta in -10.0f64..10.0,
                                scale in prop_oneof![Just(1e-3), Just(1.0), Just(1e6)]) {
        let mut rng = SeedStream::new(seed).substream(0);
        let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0) * scale).collect();
        let x = Vector::new(x).unwrap();
        let mut qs = vec![haar_sample(m, &mut rng)];
        if m >= 2 {
            qs.push(rotation_mapping(&random_unit(m, &mut rng), &random_unit(m, &mut rng)).unwrap());
        }
        if m == 2 {
            qs.push(rotation_2d(theta));
        }
        for q in qs {
            let qx = q.apply(&x).unwrap();
            prop_assert!((qx.norm() - x.norm()).abs() <= 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn rotations_are_closed_under_products(m in 1usize..9, seed in any::<u64>()) {
        let stream = SeedStream::new(seed);
        let a = haar_sample(m, &mut stream.substream(0));
        let b = haar_sample(m, &mut stream.substream(1));
        prop_assert!(a.compose(&b).is_ok());
        if m >= 2 {
            let mut rng = stream.substream(2);
            let c = rotation_mapping(&random_unit(m, &mut rng), &random_unit(m, &mut rng)).unwrap();
            prop_assert!(a.compose(&c).and_then(|ac| ac.compose(&b)).is_ok());
        }
    }
}
