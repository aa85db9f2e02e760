//! Independent re-derivations of computed quantities.

use approx::assert_relative_eq;
use triadic_core::analysis::{classify_pair, kendall_tau_b, ConcordanceStats, PairClass, PairWitness};
use triadic_core::axioms::{probe_rng, sample_triad, EntryRange};
use triadic_core::indices::{koczkodaj_index, natural_index, saaty_ci, saaty_lambda_max, scale_dependent_index};
use triadic_core::{eval_catalog, Triad};

fn tri(a: f64, b: f64, c: f64) -> Triad {
    Triad::new(a, b, c).unwrap()
}

/// Principal eigenvalue of the full 3x3 matrix by power iteration.
fn lambda_max_power_iteration(t: &Triad) -> f64 {
    let a = t.to_rows();
    let mut v = [1.0f64; 3];
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w: Vec<f64> = (0..3).map(|i| (0..3).map(|j| a[i][j] * v[j]).sum()).collect();
        let norm: f64 = w.iter().sum();
        let next = norm / v.iter().sum::<f64>();
        v = [w[0] / norm, w[1] / norm, w[2] / norm];
        if (next - lambda).abs() < 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}

#[test]
fn saaty_matches_power_iteration() {
    let range = EntryRange::default();
    for i in 0..1000 {
        let t = sample_triad(&mut probe_rng(7, 900, i), range);
        let lambda = lambda_max_power_iteration(&t);
        assert!((saaty_lambda_max(&t) - lambda).abs() <= 1e-9, "{t}");
        assert!((saaty_ci(&t) - (lambda - 3.0) / 2.0).abs() <= 1e-9, "{t}");
    }
    // Consistent matrices have lambda_max = n.
    assert_relative_eq!(lambda_max_power_iteration(&tri(2.0, 6.0, 3.0)), 3.0, epsilon = 1e-12);
    assert!(saaty_ci(&tri(2.0, 6.0, 3.0)).abs() < 1e-15);
}

/// Sum of absolute deviations `|a_ik - a_ij a_jk|` over the six ordered
/// index triples with distinct entries, written out from the full matrix.
fn scale_dependent_from_matrix(t: &Triad) -> f64 {
    let a = t.to_rows();
    let mut total = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if i != j && j != k && i != k {
                    total += (a[i][k] - a[i][j] * a[j][k]).abs();
                }
            }
        }
    }
    total
}

#[test]
fn scale_dependent_matches_matrix_form() {
    for i in 0..1000 {
        let t = sample_triad(&mut probe_rng(11, 901, i), EntryRange::default());
        assert_relative_eq!(
            scale_dependent_index(&t),
            scale_dependent_from_matrix(&t),
            max_relative = 1e-12
        );
    }
    assert_relative_eq!(
        scale_dependent_from_matrix(&tri(1.0, 3.0, 2.0)),
        19.0 / 6.0,
        max_relative = 1e-12
    );
    assert_relative_eq!(
        scale_dependent_from_matrix(&tri(1.0, 6.0, 4.0)),
        5.0,
        max_relative = 1e-12
    );
}

/// Max over the three entries of the relative deviation from the value
/// implied by the other two, the textbook matrix form for triads.
fn koczkodaj_from_definition(t: &Triad) -> f64 {
    let (a, b, c) = (t.t12(), t.t13(), t.t23());
    let dev = |x: f64, y: f64| (1.0 - x / y).abs().min((1.0 - y / x).abs());
    dev(b, a * c).max(dev(a, b / c)).max(dev(c, b / a))
}

#[test]
fn koczkodaj_matches_definition() {
    for i in 0..1000 {
        let t = sample_triad(&mut probe_rng(13, 902, i), EntryRange::default());
        assert_relative_eq!(koczkodaj_index(&t), koczkodaj_from_definition(&t), max_relative = 1e-12);
    }
}

#[test]
fn natural_is_largest_cycle_ratio() {
    for i in 0..1000 {
        let t = sample_triad(&mut probe_rng(17, 903, i), EntryRange::default());
        let a = t.to_rows();
        let mut best = f64::MIN;
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            best = best.max(a[p[0]][p[2]] / (a[p[0]][p[1]] * a[p[1]][p[2]]));
        }
        assert_relative_eq!(natural_index(&t), best, max_relative = 1e-12);
    }
}

/// tau-b from tie groups of two score vectors, counting all `i < j` pairs.
fn tau_b_from_groups(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let (mut nc, mut nd) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let s = (x[i] - x[j]).signum() * (y[i] - y[j]).signum();
            if x[i] != x[j] && y[i] != y[j] {
                if s > 0.0 {
                    nc += 1;
                } else {
                    nd += 1;
                }
            }
        }
    }
    let ties = |v: &[f64]| -> i64 {
        let mut sorted = v.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted
            .chunk_by(|a, b| a == b)
            .map(|g| (g.len() * (g.len() - 1) / 2) as i64)
            .sum()
    };
    let n0 = (n * (n - 1) / 2) as i64;
    ((nc - nd) as f64) / (((n0 - ties(x)) as f64) * ((n0 - ties(y)) as f64)).sqrt()
}

#[test]
fn kendall_tau_b_matches_tie_group_formula() {
    let cases: [(&[f64], &[f64]); 4] = [
        (&[1.0, 2.0, 3.0, 4.0, 5.0], &[3.0, 4.0, 1.0, 2.0, 5.0]),
        (&[1.0, 1.0, 2.0, 3.0, 3.0, 4.0], &[2.0, 1.0, 2.0, 5.0, 5.0, 4.0]),
        (&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]),
        (
            &[1.0, 2.0, 2.0, 4.0, 5.0, 6.0, 7.0],
            &[1.0, 3.0, 3.0, 3.0, 2.0, 9.0, 8.0],
        ),
    ];
    for (x, y) in cases {
        let mut pairs = Vec::new();
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                pairs.push(PairWitness {
                    s: tri(1.0, 1.0, 1.0),
                    t: tri(1.0, 1.0, 1.0),
                    a: [x[i], x[j]],
                    b: [y[i], y[j]],
                });
            }
        }
        let stats = ConcordanceStats::from_pairs("x", "y", &pairs, 1e-12);
        assert_relative_eq!(
            stats.kendall_tau_b.unwrap(),
            tau_b_from_groups(x, y),
            max_relative = 1e-12
        );
    }
    // Known value for the first case: 6 concordant, 4 discordant of 10.
    assert_relative_eq!(
        tau_b_from_groups(&[1.0, 2.0, 3.0, 4.0, 5.0], &[3.0, 4.0, 1.0, 2.0, 5.0]),
        0.2
    );
    assert_eq!(kendall_tau_b(0, 0, 3, 0), None);
}

#[test]
fn pair_classification() {
    assert_eq!(classify_pair([1.0, 2.0], [5.0, 7.0], 1e-9), PairClass::Concordant);
    assert_eq!(classify_pair([1.0, 2.0], [7.0, 5.0], 1e-9), PairClass::Discordant);
    assert_eq!(classify_pair([1.0, 1.0 + 1e-12], [7.0, 5.0], 1e-9), PairClass::TieAOnly);
    assert_eq!(classify_pair([1.0, 2.0], [2.0, 2.0], 1e-9), PairClass::TieBOnly);
    assert_eq!(classify_pair([3.0, 3.0], [2.0, 2.0], 1e-9), PairClass::TieBoth);
}

#[test]
fn counterexample_values_from_their_formulas() {
    // Hand-evaluated on (1; 3; 2), x = 3/2.
    let t = tri(1.0, 3.0, 2.0);
    assert_eq!(eval_catalog("cx2", &t).unwrap(), -1.5);
    assert_eq!(eval_catalog("cx4", &t).unwrap(), 1.5);
    assert_eq!(eval_catalog("cx1", &t).unwrap(), 0.0);
    assert_eq!(eval_catalog("flat", &t).unwrap(), 0.0);
    assert_eq!(eval_catalog("discretised_natural", &tri(1.0, 16.0, 4.0)).unwrap(), 2.0);
    assert_eq!(eval_catalog("natural", &tri(1.0, 16.0, 4.0)).unwrap(), 4.0);
}
