use mfhc::forms::{build_e32star, grid, harmonicity_residual, shintani_rhs, transformation_check, DEFAULT_D_MAX, DEFAULT_N_MAX};
use mfhc::Complex64;

fn samples() -> Vec<Complex64> {
    vec![
        Complex64::new(0.0, 1.0),
        Complex64::new(0.5, 1.0),
        Complex64::new(-0.3, 1.2),
        Complex64::new(0.25, 1.5),
        Complex64::new(0.1, 1.05),
    ]
}

#[test]
fn e32star_transforms_under_gamma0_4() {
    let f = build_e32star(DEFAULT_D_MAX, DEFAULT_N_MAX).unwrap();
    for gamma in [[[1, 0], [4, 1]], [[1, 0], [-4, 1]], [[3, -1], [4, -1]], [[1, 1], [0, 1]]] {
        let d = transformation_check(&f, gamma, &samples()).unwrap();
        println!("{gamma:?}: {d:e}");
        assert!(d <= 1e-6, "{gamma:?}: {d}");
    }
}

#[test]
fn e32star_numerically_harmonic() {
    let f = build_e32star(DEFAULT_D_MAX, DEFAULT_N_MAX).unwrap();
    let r = harmonicity_residual(&f, &grid((-0.5, 0.5), (1.0, 2.0), 5)).unwrap();
    println!("residual {r:e}");
    assert!(r <= 1e-4);
}

#[test]
fn shintani_rhs_transforms() {
    for delta in [-3, -4] {
        let f = shintani_rhs(delta, DEFAULT_D_MAX, DEFAULT_N_MAX).unwrap();
        assert!(transformation_check(&f, [[1, 0], [4, 1]], &samples()).unwrap() <= 1e-6);
    }
}
