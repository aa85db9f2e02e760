use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::sampling::{log_uniform, probe_rng, sample_consistent_triad, sample_triad};
use super::witness::{Relation, Transform, Witness, WitnessPoint};
use super::{approx_eq, AuditConfig, Axiom};
use crate::indices::IndexDescriptor;
use crate::matrix::Permutation;
use crate::triad::{Entry, Triad};

pub(super) struct Outcome {
    pub witness: Option<Witness>,
    pub samples_used: usize,
}

fn tri(t12: f64, t13: f64, t23: f64) -> Triad {
    Triad::new(t12, t13, t23).expect("anchor triads are positive")
}

/// Anchors first, in order; then random probes `0..samples`, keeping the
/// lowest-numbered failure regardless of which thread finds it.
fn search<A, D, T>(cfg: &AuditConfig, axiom: Axiom, anchors: &[A], draw: D, test: T) -> Outcome
where
    A: Sync,
    D: Fn(&mut ChaCha8Rng) -> A + Sync,
    T: Fn(&A) -> Option<Witness> + Sync,
{
    if let Some(w) = anchors.iter().find_map(&test) {
        return Outcome {
            witness: Some(w),
            samples_used: 0,
        };
    }
    let found = (0..cfg.samples).into_par_iter().find_map_first(|i| {
        let mut rng = probe_rng(cfg.master_seed, axiom.stream(), i as u64);
        test(&draw(&mut rng)).map(|w| (i, w))
    });
    match found {
        Some((i, w)) => Outcome {
            witness: Some(w),
            samples_used: i + 1,
        },
        None => Outcome {
            witness: None,
            samples_used: cfg.samples,
        },
    }
}

struct Ctx<'a> {
    index: &'a IndexDescriptor,
    cfg: &'a AuditConfig,
    axiom: Axiom,
}

impl Ctx<'_> {
    fn tol(&self) -> f64 {
        self.cfg.tolerance
    }

    fn point(&self, label: &str, triad: Triad) -> WitnessPoint {
        WitnessPoint {
            label: label.to_string(),
            triad,
            value: self.index.evaluate(&triad),
        }
    }

    fn witness(&self, transform: Transform, points: Vec<WitnessPoint>, relation: Relation) -> Option<Witness> {
        let values: Vec<f64> = points.iter().map(|p| p.value).collect();
        if !relation.holds(&values, self.tol()) {
            return None;
        }
        Some(Witness {
            axiom: self.axiom,
            index: self.index.id.clone(),
            transform,
            points,
            relation,
            tolerance: self.tol(),
        })
    }

    /// Witness when the index differs on two related triads.
    fn invariance(&self, transform: Transform, base: Triad, image: Triad, label: &str) -> Option<Witness> {
        let points = vec![self.point("base", base), self.point(label, image)];
        self.witness(transform, points, Relation::Differs { a: 0, b: 1 })
    }

    /// Consistent triad whose entries all satisfy the perturbation margin.
    fn margin_ok(&self, t: &Triad) -> bool {
        Entry::ALL
            .iter()
            .all(|&p| t.entry(p).ln().abs() >= self.cfg.entry_margin)
    }
}

pub(super) fn run(index: &IndexDescriptor, axiom: Axiom, cfg: &AuditConfig) -> Outcome {
    let ctx = Ctx { index, cfg, axiom };
    match axiom {
        Axiom::Urs => urs(&ctx),
        Axiom::Ipa => ipa(&ctx),
        Axiom::Mrp => mrp(&ctx),
        Axiom::Msc => single_comparison(&ctx, false),
        Axiom::Smsc => single_comparison(&ctx, true),
        Axiom::Con => continuity(&ctx),
        Axiom::Iip => iip(&ctx),
        Axiom::Hta => hta(&ctx),
        Axiom::Si => si(&ctx),
    }
}

fn standard_anchors() -> Vec<Triad> {
    vec![
        tri(1.0, 3.0, 2.0),
        tri(1.0, 8.0, 4.0),
        tri(1.0, 6.0, 4.0),
        tri(2.0, 6.0, 3.0),
    ]
}

fn urs(ctx: &Ctx) -> Outcome {
    let reference = ctx.point("reference", tri(2.0, 6.0, 3.0));
    let v = reference.value;
    let tol = ctx.tol();
    let anchors = [
        (tri(1.0, 1.0, 1.0), tri(1.0, 3.0, 2.0)),
        (tri(0.5, 1.0 / 6.0, 1.0 / 3.0), tri(1.0, 8.0, 4.0)),
        (tri(3.0, 6.0, 2.0), tri(1.0, 1.0, 2.0)),
    ];
    let range = ctx.cfg.entry_range;
    search(
        ctx.cfg,
        ctx.axiom,
        &anchors,
        |rng| (sample_consistent_triad(rng, range), sample_triad(rng, range)),
        |(consistent, other)| {
            let c = ctx.point("consistent", *consistent);
            if !approx_eq(c.value, v, tol) {
                return ctx.witness(
                    Transform::Reference,
                    vec![reference.clone(), c],
                    Relation::Differs { a: 0, b: 1 },
                );
            }
            if (other.consistency_ratio() - 1.0).abs() > 10.0 * tol {
                let o = ctx.point("inconsistent", *other);
                return ctx.witness(
                    Transform::Reference,
                    vec![reference.clone(), o],
                    Relation::Coincides { a: 0, b: 1 },
                );
            }
            None
        },
    )
}

fn ipa(ctx: &Ctx) -> Outcome {
    let perms: Vec<Permutation> = Permutation::all(3).into_iter().filter(|p| !p.is_identity()).collect();
    let range = ctx.cfg.entry_range;
    search(
        ctx.cfg,
        ctx.axiom,
        &standard_anchors(),
        |rng| sample_triad(rng, range),
        |t| {
            perms.iter().find_map(|perm| {
                let image = t.permuted(perm).ok()?;
                ctx.invariance(Transform::Permutation { perm: perm.clone() }, *t, image, "permuted")
            })
        },
    )
}

fn mrp(ctx: &Ctx) -> Outcome {
    let range = ctx.cfg.entry_range;
    search(
        ctx.cfg,
        ctx.axiom,
        &standard_anchors(),
        |rng| sample_triad(rng, range),
        |t| {
            ctx.cfg.b_grid.iter().find_map(|&b| {
                let powered = t.power(b).ok()?;
                let points = vec![ctx.point("base", *t), ctx.point("powered", powered)];
                let transform = Transform::Power { b };
                let grew_wrongly = (b <= 1.0)
                    .then(|| ctx.witness(transform.clone(), points.clone(), Relation::Less { a: 0, b: 1 }))
                    .flatten();
                grew_wrongly.or_else(|| {
                    (b >= 1.0)
                        .then(|| ctx.witness(transform, points, Relation::Less { a: 1, b: 0 }))
                        .flatten()
                })
            })
        },
    )
}

/// Exponent sequences moving away from one on each side, starting at one.
fn delta_paths(grid: &[f64]) -> [Vec<f64>; 2] {
    let mut above: Vec<f64> = grid.iter().copied().filter(|&d| d > 1.0).collect();
    above.sort_by(f64::total_cmp);
    above.dedup();
    let mut below: Vec<f64> = grid.iter().copied().filter(|&d| d < 1.0).collect();
    below.sort_by(|a, b| b.total_cmp(a));
    below.dedup();
    above.insert(0, 1.0);
    below.insert(0, 1.0);
    [above, below]
}

fn single_comparison(ctx: &Ctx, strict: bool) -> Outcome {
    let paths = delta_paths(&ctx.cfg.delta_grid);
    let range = ctx.cfg.entry_range;
    let anchors = [tri(2.0, 6.0, 3.0), tri(0.5, 1.0 / 6.0, 1.0 / 3.0), tri(3.0, 6.0, 2.0)];
    let fallback = anchors[0];
    search(
        ctx.cfg,
        ctx.axiom,
        &anchors,
        |rng| {
            (0..64)
                .map(|_| sample_consistent_triad(rng, range))
                .find(|t| ctx.margin_ok(t))
                .unwrap_or(fallback)
        },
        |base| {
            for position in Entry::ALL {
                if base.entry(position).ln().abs() < ctx.cfg.entry_margin {
                    continue;
                }
                for path in &paths {
                    for step in path.windows(2) {
                        let (from, to) = (step[0], step[1]);
                        let (Ok(prev), Ok(next)) =
                            (base.perturb_entry(position, from), base.perturb_entry(position, to))
                        else {
                            continue;
                        };
                        let transform = Transform::SingleEntry {
                            position,
                            from_delta: from,
                            to_delta: to,
                        };
                        let points = vec![
                            ctx.point("consistent", *base),
                            ctx.point("previous", prev),
                            ctx.point("next", next),
                        ];
                        let relations = [
                            Some(Relation::Less { a: 2, b: 0 }),
                            Some(Relation::Less { a: 2, b: 1 }),
                            strict.then_some(Relation::NotGreater { a: 2, b: 1 }),
                        ];
                        for relation in relations.into_iter().flatten() {
                            if let Some(w) = ctx.witness(transform.clone(), points.clone(), relation) {
                                return Some(w);
                            }
                        }
                    }
                }
            }
            None
        },
    )
}

fn continuity(ctx: &Ctx) -> Outcome {
    let ladder = &ctx.cfg.continuity_ladder;
    let coarse = ladder.iter().copied().fold(f64::MIN, f64::max);
    let fine = ladder.iter().copied().fold(f64::MAX, f64::min);
    let range = ctx.cfg.entry_range;
    let anchors: Vec<(Triad, Entry)> = [tri(2.0, 6.0, 3.0), tri(1.0, 1.0, 1.0), tri(1.0, 3.0, 2.0)]
        .into_iter()
        .flat_map(|t| Entry::ALL.map(|p| (t, p)))
        .collect();
    search(
        ctx.cfg,
        ctx.axiom,
        &anchors,
        |rng| {
            let base = if rng.random_bool(0.5) {
                sample_consistent_triad(rng, range)
            } else {
                sample_triad(rng, range)
            };
            (base, Entry::ALL[rng.random_range(0..3)])
        },
        |&(base, position)| {
            [1i8, -1].into_iter().find_map(|direction| {
                let transform = Transform::Continuity {
                    position,
                    coarse,
                    fine,
                    direction,
                };
                let derived = transform.derive(&base).ok()??;
                let points = vec![
                    ctx.point("base", derived[0]),
                    ctx.point("coarse", derived[1]),
                    ctx.point("fine", derived[2]),
                ];
                ctx.witness(
                    transform,
                    points,
                    Relation::JumpPersists {
                        base: 0,
                        coarse: 1,
                        fine: 2,
                    },
                )
            })
        },
    )
}

fn iip(ctx: &Ctx) -> Outcome {
    let range = ctx.cfg.entry_range;
    search(
        ctx.cfg,
        ctx.axiom,
        &standard_anchors(),
        |rng| sample_triad(rng, range),
        |t| ctx.invariance(Transform::Transpose, *t, t.transpose(), "transposed"),
    )
}

fn hta(ctx: &Ctx) -> Outcome {
    let range = ctx.cfg.entry_range;
    search(
        ctx.cfg,
        ctx.axiom,
        &[tri(1.0, 8.0, 4.0), tri(1.0, 3.0, 2.0), tri(1.0, 6.0, 4.0)],
        |rng| {
            let a = log_uniform(rng, range);
            let b = log_uniform(rng, range);
            tri(1.0, a, b)
        },
        |t| ctx.invariance(Transform::Hta, *t, t.hta_reduce(), "reduced"),
    )
}

fn si(ctx: &Ctx) -> Outcome {
    let range = ctx.cfg.entry_range;
    let anchors = [(tri(1.0, 8.0, 4.0), vec![2.0]), (tri(1.0, 3.0, 2.0), vec![2.0])];
    search(
        ctx.cfg,
        ctx.axiom,
        &anchors,
        |rng| (sample_triad(rng, range), ctx.cfg.k_grid.clone()),
        |(t, ks)| {
            ks.iter().find_map(|&k| {
                let scaled = t.scale(k).ok()?;
                ctx.invariance(Transform::Scale { k }, *t, scaled, "scaled")
            })
        },
    )
}

#[cfg(test)]
mod tests {
    use super::super::band;
    use super::*;

    #[test]
    fn delta_paths_move_away_from_one() {
        let [up, down] = delta_paths(&[0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0]);
        assert_eq!(up, vec![1.0, 1.5, 2.0, 3.0]);
        assert_eq!(down, vec![1.0, 0.75, 0.5, 0.25]);
    }

    #[test]
    fn band_is_used_for_ties() {
        // A step that stays within the band is a tie, not a decrease.
        let vals = [1.0, 2.0, 2.0 - 1e-12];
        assert!(!Relation::Less { a: 2, b: 1 }.holds(&vals, 1e-9));
        assert!(Relation::NotGreater { a: 2, b: 1 }.holds(&vals, 1e-9));
        assert!(band(1e-9, 2.0, 1.0) > 1e-12);
    }
}
