//! Dribbler metrics against a fine-step explicit midpoint reference.

use ssl_predict::dribbler::{self, DribblerParams, DEFAULT_BAND_FRACTION, REFERENCE_MASSES};

// (M, max |x1|, x1(t_end), settling time) from the reference below at dt = 1e-5.
const FROZEN: [(f64, f64, f64, f64); 3] = [
    (0.05, 0.008427360749086121, 0.001407608948253987, 0.8362),
    (0.15, 0.041578521412259546, 0.0014163382344534253, 0.87429),
    (0.25, 0.07377553040670223, 0.0014442590032918482, 0.92573),
];

struct Reference {
    peak: f64,
    rest: f64,
    settling: f64,
}

/// Explicit midpoint with the contact regime frozen per step.
fn midpoint_reference(p: &DribblerParams, h: f64) -> Reference {
    let accel = |s: [f64; 4], contact: bool| -> [f64; 4] {
        let [x1, v1, x2, v2] = s;
        let mut a1 = p.force / p.ball_mass;
        let mut a2 = (-p.mount_stiffness * x2 - p.mount_damping * v2) / p.dribbler_mass;
        if contact {
            let f = p.contact_stiffness * (x1 - x2) + p.contact_damping * (v1 - v2);
            a1 -= f / p.ball_mass;
            a2 += f / p.dribbler_mass;
        }
        [v1, a1, v2, a2]
    };
    let n = (p.t_end / h).round() as usize;
    let mut s = [0.0, p.ball_speed, 0.0, 0.0];
    let mut xs = Vec::with_capacity(n + 1);
    xs.push(0.0);
    for _ in 0..n {
        let contact = s[0] - s[2] >= 0.0;
        let d1 = accel(s, contact);
        let mid = [0, 1, 2, 3].map(|i| s[i] + h / 2.0 * d1[i]);
        let d2 = accel(mid, contact);
        s = [0, 1, 2, 3].map(|i| s[i] + h * d2[i]);
        xs.push(s[0]);
    }
    let peak = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let rest = *xs.last().unwrap();
    let band = DEFAULT_BAND_FRACTION * rest.abs();
    let last_out = xs.iter().rposition(|x| (x - rest).abs() > band).unwrap();
    Reference {
        peak,
        rest,
        settling: (last_out + 1) as f64 * h,
    }
}

#[test]
fn frozen_values_match_live_reference() {
    for &(mass, peak, rest, settling) in &FROZEN {
        let r = midpoint_reference(&DribblerParams::default().with_mass(mass), 1e-5);
        assert!((r.peak - peak).abs() < 1e-9, "M={mass}: peak {}", r.peak);
        assert!((r.rest - rest).abs() < 1e-9, "M={mass}: rest {}", r.rest);
        assert!(
            (r.settling - settling).abs() < 1e-4,
            "M={mass}: settling {}",
            r.settling
        );
    }
}

#[test]
fn simulator_matches_reference_metrics() {
    for (&mass, &(m, peak, rest, settling)) in REFERENCE_MASSES.iter().zip(&FROZEN) {
        assert_eq!(mass, m);
        let trace = dribbler::simulate(&DribblerParams::default().with_mass(mass)).unwrap();
        let got_peak = dribbler::peak_displacement(&trace).unwrap();
        let got_rest = *trace.x1.last().unwrap();
        let got_settle = dribbler::settling_time(&trace, DEFAULT_BAND_FRACTION).unwrap();
        assert!(
            (got_peak - peak).abs() / peak < 5e-3,
            "M={mass}: peak {got_peak} vs {peak}"
        );
        assert!(
            (got_rest - rest).abs() / rest < 1e-3,
            "M={mass}: rest {got_rest} vs {rest}"
        );
        assert!(
            (got_settle - settling).abs() < 5e-3,
            "M={mass}: settling {got_settle} vs {settling}"
        );
    }
}
