use semilab::spectral::{hypothesis_a_check, riesz_projection_closed, riesz_projection_quadrature, Contour};
use semilab::{Complex64, Family, Model64, ModelSpec};

fn models() -> Vec<Model64> {
    [
        ModelSpec::new(Family::DiagJordan, 100),
        ModelSpec::new(Family::JordanPairs, 100),
        ModelSpec::log_spectrum(1, 100),
        ModelSpec::log_spectrum(2, 100),
    ]
    .into_iter()
    .map(|s| Model64::build(s).unwrap())
    .collect()
}

#[test]
fn quadrature_matches_closed_form_for_every_eigenvalue() {
    for m in models() {
        for (idx, e) in m.eigenvalues().iter().enumerate() {
            let contour = hypothesis_a_check(&m, e.value).unwrap();
            let quad = riesz_projection_quadrature(&m, &contour).unwrap();
            let closed = riesz_projection_closed(&m, idx).unwrap();
            let diff = quad.projection.sub(&closed.projection).unwrap().spectral_norm();
            let label = format!("{:?} at {}", m.family(), e.value);
            assert!(diff <= 1e-8, "{label}: {diff}");
            assert!(quad.idempotency_defect <= 1e-10, "{label}: {}", quad.idempotency_defect);
            assert!(quad.commutation_defect <= 1e-9, "{label}: {}", quad.commutation_defect);
            assert_eq!(quad.rank, e.multiplicity, "{label}");
        }
    }
}

#[test]
fn doubling_nodes_changes_little() {
    for m in models() {
        for e in m.eigenvalues().iter().take(12) {
            let c64 = hypothesis_a_check(&m, e.value).unwrap();
            let c128 = Contour::new(c64.center, c64.radius, 128).unwrap();
            let a = riesz_projection_quadrature(&m, &c64).unwrap().projection;
            let b = riesz_projection_quadrature(&m, &c128).unwrap().projection;
            assert!(a.sub(&b).unwrap().spectral_norm() <= 1e-10, "{:?} at {}", m.family(), e.value);
        }
    }
}

#[test]
fn disjoint_contours_give_complementary_projections() {
    let m = Model64::build(ModelSpec::new(Family::JordanPairs, 10)).unwrap();
    let c1 = Contour::new(Complex64::new(0.0, 2.5), 0.1, 64).unwrap();
    let c2 = Contour::new(Complex64::new(0.0, 1.5), 0.1, 64).unwrap();
    let p1 = riesz_projection_quadrature(&m, &c1).unwrap();
    let p2 = riesz_projection_quadrature(&m, &c2).unwrap();
    assert!(p1.projection.mul(&p2.projection).unwrap().spectral_norm() <= 1e-10);
    assert!(p2.projection.mul(&p1.projection).unwrap().spectral_norm() <= 1e-10);
    let sum = p1.projection.add(&p2.projection).unwrap();
    let rank = sum.trace().re.round() as usize;
    assert_eq!(rank, p1.rank + p2.rank);
    // both eigenvalues of the first pair: the whole block
    let whole = sum.sub(&sum.identity_like()).unwrap();
    assert!(whole.blocks()[0].max_abs() <= 1e-10);
}
