//! Monte-Carlo check of the HK closed forms: each bound is estimated as the
//! mean log-likelihood ratio of the jointly Gaussian output.

use gic_region::hk::{hk_bounds, HkConstraint};
use gic_region::{ChannelParams, PowerSplit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Which inputs a receiver-side bound conditions on or decodes.
#[derive(Clone, Copy)]
struct Term {
    receiver: usize,
    known: [bool; 4],
    decoded: [bool; 4],
}

fn term(c: HkConstraint) -> Term {
    use HkConstraint::*;
    // order: U1, U2, V1, V2
    let (receiver, known, decoded) = match c {
        HK1 => (1, [false, true, true, false], [true, false, false, false]),
        HK2 => (2, [false, true, false, true], [true, false, false, false]),
        HK3 => (1, [true, false, true, false], [false, true, false, false]),
        HK4 => (2, [true, false, false, true], [false, true, false, false]),
        HK5 => (1, [true, true, false, false], [false, false, true, false]),
        HK6 => (2, [true, true, false, false], [false, false, false, true]),
        HK7 => (1, [false, false, true, false], [true, true, false, false]),
        HK8 => (2, [false, false, false, true], [true, true, false, false]),
        HK9 => (1, [false, true, false, false], [true, false, true, false]),
        HK10 => (2, [true, false, false, false], [false, true, false, true]),
        HK11 => (1, [true, false, false, false], [false, true, true, false]),
        HK12 => (2, [false, true, false, false], [true, false, false, true]),
        HK13 => (1, [false; 4], [true, true, true, false]),
        HK14 => (2, [false; 4], [true, true, false, true]),
    };
    Term { receiver, known, decoded }
}

fn estimate(params: &ChannelParams, split: PowerSplit, t: Term, n: usize, rng: &mut ChaCha8Rng) -> f64 {
    let (u1, u2) = params.public_powers(split);
    let (h1, h2) = params.private_powers(split);
    let gains = if t.receiver == 1 {
        [1.0, params.a(), 1.0, params.a()]
    } else {
        [params.b(), 1.0, params.b(), 1.0]
    };
    let powers = [u1, u2, h1, h2];
    let var = |mask: &dyn Fn(usize) -> bool| -> f64 {
        1.0 + (0..4).filter(|&k| mask(k)).map(|k| gains[k] * powers[k]).sum::<f64>()
    };
    // residual variance with / without the decoded messages revealed
    let v_all = var(&|k| !t.known[k] && !t.decoded[k]);
    let v_cond = var(&|k| !t.known[k]);
    let mut acc = 0.0;
    for _ in 0..n {
        let z: [f64; 5] = std::array::from_fn(|_| StandardNormal.sample(rng));
        let mut unknown = z[4];
        let mut hidden = z[4];
        for k in 0..4 {
            if t.known[k] {
                continue;
            }
            let x = (gains[k] * powers[k]).sqrt() * z[k];
            hidden += x;
            if !t.decoded[k] {
                unknown += x;
            }
        }
        acc += 0.5 * (v_cond / v_all).ln() - unknown * unknown / (2.0 * v_all) + hidden * hidden / (2.0 * v_cond);
    }
    acc / n as f64 / std::f64::consts::LN_2
}

#[test]
fn closed_forms_match_sampled_mutual_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cases = [
        (ChannelParams::new(0.2, 0.4, 30.0, 40.0).unwrap(), PowerSplit::new(2.0 / 3.0, 0.8125).unwrap()),
        (ChannelParams::new(0.5, 0.3, 5.0, 8.0).unwrap(), PowerSplit::new(0.3, 0.6).unwrap()),
    ];
    for (p, s) in cases {
        let bounds = hk_bounds(&p, s);
        for c in HkConstraint::ALL {
            let mc = estimate(&p, s, term(c), 200_000, &mut rng);
            let exact = bounds.get(c);
            assert!((mc - exact).abs() < 1e-2, "{} exact {exact} sampled {mc}", c.name());
        }
    }
}
