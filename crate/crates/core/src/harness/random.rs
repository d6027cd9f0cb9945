//! Random finite spaces and map pairs for the soundness runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contraction::{check_condition, ConditionSpec, PairMode};
use crate::metric::SelfMap;
use crate::picard::find_clr_base;
use crate::scenario::{MapDesc, MapsDesc, Scenario, ScenarioFile, SigmaDesc, SpaceDesc};
use crate::sigma::ComparisonFn;

pub const MIN_POINTS: usize = 5;
pub const MAX_POINTS: usize = 12;
const MAP_TRIES: usize = 200;

/// Shortest-path completion of random positive edge weights.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = (rng.gen_range(0.1..2.0f64) * 1000.0).round() / 1000.0;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

fn point_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// `T` takes between one and three values so the condition is reachable
/// by rejection sampling.
fn random_maps<R: Rng>(rng: &mut R, n: usize, identity_s: bool) -> (Vec<usize>, Vec<usize>) {
    let k = rng.gen_range(1..=3usize.min(n));
    let mut pts: Vec<usize> = (0..n).collect();
    pts.shuffle(rng);
    let values = &pts[..k];
    let t = (0..n).map(|_| *values.choose(rng).expect("k >= 1")).collect();
    let s = if identity_s {
        (0..n).collect()
    } else {
        (0..n).map(|_| rng.gen_range(0..n)).collect()
    };
    (t, s)
}

fn assign(labels: &[String], images: &[usize]) -> MapDesc {
    let pairs: Vec<(&str, &str)> = images
        .iter()
        .enumerate()
        .map(|(i, &j)| (labels[i].as_str(), labels[j].as_str()))
        .collect();
    MapDesc::assign(&pairs)
}

/// A scenario whose maps satisfy the σ-S-Kannan condition for `chi(alpha)`
/// and admit a Picard chain. With `identity_s` the scenario targets the
/// single-map result (C3.19), otherwise the coincidence result (T3.18).
pub fn random_kannan_scenario(seed: u64, alpha: f64, identity_s: bool) -> Scenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = ComparisonFn::chi(alpha).expect("alpha in (0, 1/2)");
    let spec = if identity_s {
        ConditionSpec::SigmaKannan { sigma }
    } else {
        ConditionSpec::SigmaSKannan { sigma }
    };
    loop {
        let n = rng.gen_range(MIN_POINTS..=MAX_POINTS);
        let metric = random_metric(&mut rng, n);
        let labels = point_labels(n);
        let file = ScenarioFile {
            name: Some(format!("random-{seed}")),
            space: SpaceDesc::Finite {
                labels: Some(labels.clone()),
                points: None,
                metric: Some(metric),
            },
            sigma: Some(SigmaDesc {
                name: "chi".into(),
                alpha: Some(alpha),
                ..Default::default()
            }),
            theorem: Some(if identity_s { "C3.19" } else { "T3.18" }.into()),
            ..Default::default()
        };
        let mut sc = Scenario::from_file(file).expect("generated scenarios are valid");
        for _ in 0..MAP_TRIES {
            let (t, s) = random_maps(&mut rng, n, identity_s);
            let t = SelfMap::from_images(&sc.space, t).expect("images in range");
            let s = SelfMap::from_images(&sc.space, s).expect("images in range");
            let holds = check_condition(&sc.space, &t, &s, &spec, PairMode::PositivePairs)
                .expect("same space")
                .holds;
            if holds && find_clr_base(&sc.space, &t, &s).ok().flatten().is_some() {
                sc.file.maps = Some(MapsDesc {
                    t: assign(&labels, t.images()),
                    s: Some(assign(&labels, s.images())),
                });
                sc.t = t;
                sc.s = s;
                return sc;
            }
        }
    }
}
