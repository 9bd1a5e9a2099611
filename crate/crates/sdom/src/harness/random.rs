//! Seeded generation of trial distributions, including the deterministic
//! injection of constructed counterexample pairs into the trial stream.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use crate::constructions::{
    example_counter_pair, lemma_sequence_pair, rescale_pair, ConstructedPair,
};
use crate::dist::DiscreteDistribution;
use crate::exactalg::{rat, rat_int, Rational};

/// Draws one distribution: up to `max_atoms` positions on the config
/// interval's rational grid, with probabilities over a common sampled
/// denominator of at most `denominator_bound`. Deterministic in
/// `(cfg.seed, stream)`, so draws may happen concurrently in any order.
pub fn random_distribution(cfg: &ExperimentConfig, stream: u64) -> DiscreteDistribution {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let bound = cfg.denominator_bound;
    let count = rng.gen_range(1..=cfg.max_atoms as u64).min(bound);
    let width = cfg.hi() - cfg.lo();
    let mut positions = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let q = rng.gen_range(2..=bound);
        let t = rng.gen_range(0..=q);
        let offset = &width * Rational::new(BigInt::from(t), BigInt::from(q));
        positions.push(cfg.lo() + offset);
    }
    // Split the unit of probability into `count` positive parts over a
    // common denominator by cutting at distinct interior points.
    let denominator = rng.gen_range(count..=bound.max(count));
    let mut cuts: Vec<u64> =
        rand::seq::index::sample(&mut rng, (denominator - 1) as usize, (count - 1) as usize)
            .iter()
            .map(|c| c as u64 + 1)
            .collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(denominator);
    let pairs = positions.into_iter().enumerate().map(|(i, x)| {
        let part = cuts[i + 1] - cuts[i];
        (
            x,
            Rational::new(BigInt::from(part), BigInt::from(denominator)),
        )
    });
    DiscreteDistribution::from_pairs(pairs)
        .expect("parts are positive and sum to the full denominator")
}

/// Rebuilds `d` so its mean equals `target` exactly: first by moving
/// probability between its outermost atoms, falling back to the two-point
/// distribution on `{lo, hi}` with barycentric weights when the shift
/// would drive a probability negative. `target` must lie in `[lo, hi]`.
pub fn equalize_mean(
    d: &DiscreteDistribution,
    target: &Rational,
    lo: &Rational,
    hi: &Rational,
) -> DiscreteDistribution {
    assert!(
        lo <= target && target <= hi,
        "target mean outside the interval"
    );
    let atoms = d.atoms();
    if atoms.len() >= 2 {
        let first = &atoms[0];
        let last = &atoms[atoms.len() - 1];
        let shift = (d.mean() - target) / (&last.x - &first.x);
        let p_first = &first.p + &shift;
        let p_last = &last.p - &shift;
        if p_first >= rat_int(0) && p_last >= rat_int(0) {
            let mut pairs: Vec<(Rational, Rational)> = Vec::with_capacity(atoms.len());
            pairs.push((first.x.clone(), p_first));
            for atom in &atoms[1..atoms.len() - 1] {
                pairs.push((atom.x.clone(), atom.p.clone()));
            }
            pairs.push((last.x.clone(), p_last));
            let adjusted = DiscreteDistribution::from_pairs(pairs)
                .expect("shifted probabilities stay nonnegative and sum to one");
            debug_assert_eq!(&adjusted.mean(), target);
            return adjusted;
        }
    }
    let width = hi - lo;
    DiscreteDistribution::from_pairs([
        (lo.clone(), (hi - target) / &width),
        (hi.clone(), (target - lo) / &width),
    ])
    .expect("barycentric weights are nonnegative and sum to one")
}

/// Perturbation parameters cycled through by the injection stream: eps
/// values keeping the two-atom example pair inside its
/// holds-on-the-line-fails-on-the-tight-interval window.
const EPS_VARIANTS: [(i64, i64); 5] = [(1, 80), (1, 120), (1, 180), (1, 240), (1, 350)];

/// The constructed pair planted at injection slot `variant`, rescaled
/// from its native interval onto `[lo, hi]`. Cycles through the canonical
/// example pair, the canonical lemma pair, and perturbed example pairs.
pub fn injected_pair(lo: &Rational, hi: &Rational, variant: u64) -> ConstructedPair {
    let (base, native_hi) = match variant % 3 {
        0 => (example_counter_pair(rat(1, 100)), rat_int(1)),
        1 => (lemma_sequence_pair(rat(1, 10)), rat_int(9)),
        _ => {
            let (n, d) = EPS_VARIANTS[(variant / 3) as usize % EPS_VARIANTS.len()];
            (example_counter_pair(rat(n, d)), rat_int(1))
        }
    };
    let base = base.expect("injection parameters are in range");
    let native_lo = rat_int(0);
    if &native_lo == lo && &native_hi == hi {
        return base;
    }
    rescale_pair(base, &native_lo, &native_hi, lo, hi)
        .expect("native supports fit their native interval")
}

/// The (X, Y) pair for one experiment trial: an injected constructed
/// pair on stride slots, otherwise two seeded random draws (with Y's
/// mean rebalanced onto X's when the config asks for equal means).
pub fn trial_pair(
    cfg: &ExperimentConfig,
    trial: u64,
) -> (DiscreteDistribution, DiscreteDistribution) {
    if cfg.inject_stride > 0 && trial % cfg.inject_stride == 0 {
        let pair = injected_pair(cfg.lo(), cfg.hi(), trial / cfg.inject_stride);
        return (pair.x, pair.y);
    }
    let x = random_distribution(cfg, 2 * trial);
    let mut y = random_distribution(cfg, 2 * trial + 1);
    if cfg.equal_means {
        y = equalize_mean(&y, &x.mean(), cfg.lo(), cfg.hi());
    }
    (x, y)
}
