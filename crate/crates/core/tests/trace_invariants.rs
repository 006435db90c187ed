use gic_region::boundary::{mu1_closed, mu2_closed, Regime, TraceStatus};
use gic_region::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tangent_instances(n: usize, seed: u64) -> Vec<ChannelParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let (a, b) = (rng.random_range(0.05..0.9), rng.random_range(0.05..0.9));
        let unit = ChannelParams::new(a, b, 1.0, 1.0).unwrap();
        let p = ChannelParams::new(a, b, unit.t1() + rng.random_range(0.5..60.0), unit.t2() + rng.random_range(0.5..120.0))
            .unwrap();
        if matches!(trace_lower_boundary(&p, 8), Ok(t) if t.status == TraceStatus::Complete) {
            out.push(p);
        }
    }
    out
}

#[test]
fn mu_grid_is_monotone_and_segments_are_ordered() {
    for p in tangent_instances(20, 1) {
        let t = trace_lower_boundary(&p, 120).unwrap();
        let rank = |r: Regime| match r {
            Regime::CornerA => 0,
            Regime::StationaryUser2 => 1,
            Regime::Coupled => 2,
            Regime::SumRateFront => 3,
        };
        for w in t.points.windows(2) {
            assert!(w[1].mu >= w[0].mu, "{p:?}");
            assert!(rank(w[1].regime) >= rank(w[0].regime));
        }
        assert!((t.points[t.terminal].mu - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn traced_splits_satisfy_their_stationary_conditions() {
    for p in tangent_instances(10, 2) {
        let t = trace_lower_boundary(&p, 80).unwrap();
        for q in &t.points {
            match q.regime {
                Regime::StationaryUser2 => {
                    assert_eq!(q.rho, 0.0);
                    assert!((mu2_closed(&p, q.p1hat, q.p2hat) - q.mu).abs() <= 1e-9);
                }
                Regime::Coupled if q.mu < 1.0 => {
                    assert!((mu1_closed(&p, q.p1hat, q.p2hat) - q.mu).abs() <= 1e-9);
                    assert!((mu2_closed(&p, q.p1hat, q.p2hat) - q.mu).abs() <= 1e-9);
                }
                _ => {}
            }
        }
    }
}

#[test]
fn key_points_lie_on_the_trace() {
    let p = ChannelParams::new(0.2, 0.4, 30.0, 40.0).unwrap();
    let k = key_points(&p).unwrap();
    let t = trace_lower_boundary(&p, 300).unwrap();
    let d3 = t.points.iter().find(|q| q.mu == k.mu_at_d3).expect("D3 on the grid");
    assert!((d3.r1 - k.d3.r1).abs() < 1e-12 && (d3.r2 - k.d3.r2).abs() < 1e-12);
    assert_eq!(t.points[0], k.point_a);
    let s = &t.points[t.terminal];
    assert!((s.r1 - k.s.r1).abs() < 1e-12 && (s.r2 - k.s.r2).abs() < 1e-12);
}

#[test]
fn upper_trace_mirrors_swapped_lower() {
    for p in tangent_instances(5, 3) {
        let lower = trace_lower_boundary(&p, 50).unwrap();
        let upper = trace_upper_boundary(&p.swapped(), 50).unwrap();
        for (l, u) in lower.points.iter().zip(&upper.points) {
            assert_eq!((l.r1, l.r2), (u.r2, u.r1));
            assert!((l.mu * u.mu - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn e2_upper_part_ends_on_the_front() {
    let p = ChannelParams::new(0.2, 0.4, 30.0, 40.0).unwrap();
    let upper = trace_upper_boundary(&p, 100).unwrap();
    // The swapped channel is governed by its second receiver, so the
    // upper part is clipped where it meets the sum-rate front.
    assert_eq!(upper.status, TraceStatus::Clipped);
    let end = &upper.points[upper.terminal];
    let front = sum_rate_front(&p.swapped()).unwrap();
    assert!(end.r1 + end.r2 >= front.r_sum - 1e-12);
    assert!(end.mu >= 1.0);
}

#[test]
fn trace_points_are_lp_optima() {
    for p in tangent_instances(8, 4) {
        let t = trace_lower_boundary(&p, 60).unwrap();
        for q in t.points.iter().filter(|q| q.regime != Regime::SumRateFront) {
            let r = lp_optimize_full(&p, q.split(), q.mu).unwrap();
            assert!((r.weighted_sum(q.mu) - q.weighted(q.mu)).abs() <= 1e-9);
        }
    }
}
