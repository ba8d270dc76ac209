use spectral_tails::ensemble::random::random_ortho_rows;
use spectral_tails::ensemble::{
    column_mask, draw_gaussian, masked_gram, sample_covariance, GaussianSampler, SparsifierConfig,
    Stream,
};
use spectral_tails::linalg::{eigvalsh, Matrix, SymMatrix};

fn covariance_of(cov: SymMatrix, seed: u64, count: usize) -> SymMatrix {
    let sampler = GaussianSampler::new(cov, seed).unwrap();
    sample_covariance(&draw_gaussian(&sampler, count).unwrap()).unwrap()
}

#[test]
fn identity_draws_have_unit_variance() {
    let c = covariance_of(SymMatrix::identity(2), 11, 100_000);
    for i in 0..2 {
        let v = c.as_matrix()[(i, i)];
        assert!((0.98..=1.02).contains(&v), "variance {v}");
    }
    assert!(c.as_matrix()[(0, 1)].abs() < 0.02);
}

#[test]
fn diagonal_covariance_keeps_its_variance_ratio() {
    let c = covariance_of(SymMatrix::diag(&[4.0, 1.0]), 12, 100_000);
    let ratio = c.as_matrix()[(0, 0)] / c.as_matrix()[(1, 1)];
    assert!((ratio / 4.0 - 1.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn sample_covariance_converges_in_operator_norm() {
    let target = SymMatrix::from_rows(&[
        vec![2.0, 0.5, 0.0],
        vec![0.5, 1.0, 0.3],
        vec![0.0, 0.3, 0.5],
    ])
    .unwrap();
    let c = covariance_of(target.clone(), 13, 100_000);
    let err = eigvalsh(&c.sub(&target).unwrap()).unwrap();
    let norm = err[0].abs().max(err[err.len() - 1].abs());
    assert!(norm <= 0.05, "‖Ĉ − C‖ = {norm}");
}

#[test]
fn mask_counts_stay_within_three_sigma() {
    let (r, p) = (20_000, 0.3);
    let cfg = SparsifierConfig::new(p, 5).unwrap();
    let sd = (r as f64 * p * (1.0 - p)).sqrt();
    for stream in 0..20 {
        let kept = column_mask(&cfg, stream, r).iter().filter(|&&b| b).count() as f64;
        assert!(
            (kept - r as f64 * p).abs() <= 3.0 * sd,
            "stream {stream}: {kept}"
        );
    }
}

#[test]
fn masked_gram_averages_to_p_times_identity() {
    let (n, r, p, trials) = (3, 40, 0.25, 4000);
    let u = random_ortho_rows(&mut Stream::new(6, 0), n, r);
    let cfg = SparsifierConfig::new(p, 6).unwrap();
    let mut acc = Matrix::zeros(n, n);
    for t in 0..trials {
        let g = masked_gram(&u, &column_mask(&cfg, t, r)).unwrap();
        acc = Matrix::from_fn(n, n, |i, j| {
            acc[(i, j)] + g.as_matrix()[(i, j)] / trials as f64
        });
    }
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { p } else { 0.0 };
            assert!(
                (acc[(i, j)] - expect).abs() < 0.02,
                "({i},{j}) = {}",
                acc[(i, j)]
            );
        }
    }
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let draw = |seed, stream| {
        let mut s = Stream::new(seed, stream);
        (0..8).map(|_| s.next_u64()).collect::<Vec<_>>()
    };
    assert_eq!(draw(1, 2), draw(1, 2));
    assert_ne!(draw(1, 2), draw(1, 3));
    assert_ne!(draw(1, 2), draw(2, 2));
}
