use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::field_equations::{
    flat_first_order_residuals, flat_second_order_residuals, residual_rank2_eq, residual_scalar_eq, CouplingConfig,
    GaugePoint,
};
use crate::geometry::{
    bianchi_contracted_check, commutator_check, metric_compatibility, ricci_flatness, ricci_identity_check,
    ricci_proportionality, riemann_symmetries, MetricChart, MetricKind,
};
use crate::measure::{flat4, Deviation};
use crate::spin2_fields::{flat_gauge_multiplet, GaugeGenerator};
use crate::tensor::Point;
use crate::verify::config::{invalid, Check, ScenarioConfig};
use crate::verify::report::{
    summarize, Conventions, GeneratorInfo, Record, ResidualReport, Summary, Verdict, Versions, SCHEMA_VERSION,
};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SPIN2_THREADS";

/// Uniform, seeded samples from the box.
pub fn sample_points(region: &[[f64; 2]; 4], n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| std::array::from_fn(|m| rng.gen_range(region[m][0]..=region[m][1])))
        .collect()
}

/// Per-generator seeds, drawn from a second stream of the scenario seed so
/// they never overlap the point samples.
pub fn generator_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    (0..count).map(|_| rng.next_u64()).collect()
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| invalid(THREADS_ENV, format!("expected a positive integer, got '{v}'")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| invalid(THREADS_ENV, e.to_string()))
}

struct Outcome {
    deviation: Deviation,
    magnitude: Option<f64>,
    expected_nonzero: bool,
    note: Option<String>,
}

impl Outcome {
    fn plain(deviation: Deviation, note: Option<String>) -> Self {
        Outcome {
            deviation,
            magnitude: None,
            expected_nonzero: false,
            note,
        }
    }
}

/// Worst of several named deviations, remembering which one it was.
fn worst_named(parts: Vec<(&'static str, Deviation)>) -> (Deviation, Option<String>) {
    let mut best: Option<(&str, Deviation)> = None;
    for (name, d) in parts {
        let replace = match best {
            None => true,
            Some((_, b)) => d.relative() > b.relative() || d.relative().is_nan(),
        };
        if replace {
            best = Some((name, d));
        }
    }
    let (name, d) = best.expect("at least one part");
    (d, Some(format!("worst: {name}")))
}

fn geometry_outcome(chart: &MetricChart, gp: &GaugePoint) -> Result<Outcome> {
    let b = gp.bundle();
    let sym = riemann_symmetries(b);
    let mut parts = vec![
        ("metric_compatibility", metric_compatibility(b.frame())),
        ("riemann_antisymmetry", sym.antisymmetry),
        ("riemann_cyclic", sym.cyclic),
        ("ricci_identity", ricci_identity_check(gp.lambda(), b)?),
        ("commutator", commutator_check(gp.lambda(), b)?),
        ("bianchi_contracted", bianchi_contracted_check(b)),
    ];
    if chart.is_ricci_flat() {
        parts.push(("ricci_flatness", ricci_flatness(b)));
    }
    if let MetricKind::DeSitter { hubble } = chart.kind() {
        parts.push((
            "ricci_proportionality",
            ricci_proportionality(b, -3.0 * hubble * hubble),
        ));
    }
    let (d, note) = worst_named(parts);
    Ok(Outcome::plain(d, note))
}

fn flat_outcome(gp: &GaugePoint) -> Result<Outcome> {
    let curved = gp.multiplet();
    let flat = flat_gauge_multiplet(gp.lambda())?;
    let scale = flat.scale.max(curved.scale);
    let first = flat_first_order_residuals(&flat)?.deviation(scale);
    let (s, t) = flat_second_order_residuals(&flat.phi, &flat.phi2)?;
    let second = Deviation::new(s.value.abs(), s.scale.max(scale)).worst(Deviation::new(
        crate::measure::max_abs(&flat4(&t.value)),
        t.scale.max(scale),
    ));
    let mut agree = 0.0f64;
    for (x, y) in [
        (&flat.phi, &curved.phi),
        (&flat.phi1, &curved.phi1),
        (&flat.phi2, &curved.phi2),
        (&flat.phi3, &curved.phi3),
    ] {
        agree = agree.max(x.sub(y).max_partial());
    }
    let frame = gp.bundle().frame();
    let flat_res = flat_first_order_residuals(curved)?;
    let cs = residual_scalar_eq(curved, frame)?;
    let cr = residual_rank2_eq(curved, gp.bundle(), 0.0)?;
    let evaluators = Deviation::new((cs.value - flat_res.scalar.value).abs(), scale).worst(Deviation::between(
        &flat4(&cr.value),
        &flat4(&flat_res.rank2.value),
        scale,
    ));
    let (d, note) = worst_named(vec![
        ("first_order", first),
        ("second_order", second),
        ("curved_vs_flat_multiplet", Deviation::new(agree, scale)),
        ("curved_vs_flat_residuals", evaluators),
        ("structure", gp.structural()?),
    ]);
    Ok(Outcome::plain(d, note))
}

fn evaluate(check: Check, chart: &MetricChart, gp: &GaugePoint, coupling: f64) -> Result<Outcome> {
    let curved = !chart.is_flat();
    let ricci_flat = chart.is_ricci_flat();
    let from = |c: crate::field_equations::ObstructionComparison, expected_nonzero: bool| Outcome {
        deviation: c.deviation,
        magnitude: Some(c.magnitude()),
        expected_nonzero,
        note: None,
    };
    match check {
        Check::Geometry => geometry_outcome(chart, gp),
        Check::Flat => flat_outcome(gp),
        Check::ScalarChain => Ok(from(gp.scalar_chain()?, !ricci_flat)),
        Check::Rank2Chain => Ok(from(gp.rank2_chain()?, curved)),
        Check::NonminimalChain => {
            let nonzero = curved && (!ricci_flat || coupling != CouplingConfig::CANCELLING);
            Ok(from(gp.nonminimal_chain(coupling)?, nonzero))
        }
        Check::Uniqueness => Ok(from(
            gp.uniqueness(coupling)?,
            curved && coupling != CouplingConfig::CANCELLING,
        )),
    }
}

fn couples(check: Check) -> bool {
    matches!(check, Check::NonminimalChain | Check::Uniqueness)
}

struct Task {
    point_index: usize,
    point: Point,
    generator_index: usize,
    generator_seed: u64,
}

fn run_task(config: &ScenarioConfig, chart: &MetricChart, task: &Task) -> Vec<Record> {
    let generator = GaugeGenerator::random(task.generator_seed, config.generator.degree, config.generator.family);
    let gp = GaugePoint::new(chart, task.point, &generator);
    let mut records = Vec::new();
    for &check in &config.checks {
        // coupling-independent checks are evaluated once and echoed per coupling
        let shared = match (&gp, couples(check)) {
            (Ok(gp), false) => Some(evaluate(check, chart, gp, 0.0)),
            _ => None,
        };
        for &coupling in &config.couplings {
            let outcome = match (&gp, &shared) {
                (Err(e), _) => Err(e.clone()),
                (Ok(_), Some(Ok(o))) => Ok(Outcome {
                    note: o.note.clone(),
                    ..*o
                }),
                (Ok(_), Some(Err(e))) => Err(e.clone()),
                (Ok(gp), None) => evaluate(check, chart, gp, coupling),
            };
            records.push(to_record(check, task, coupling, outcome, config.tolerance));
        }
    }
    records
}

fn to_record(check: Check, task: &Task, coupling: f64, outcome: Result<Outcome>, tolerance: f64) -> Record {
    let base = Record {
        check,
        point_index: task.point_index,
        point: task.point,
        generator_index: task.generator_index,
        generator_seed: task.generator_seed,
        coupling,
        deviation: None,
        scale: None,
        magnitude: None,
        expected_nonzero: false,
        verdict: Verdict::Skipped,
        note: None,
    };
    match outcome {
        Ok(o) => {
            let rel = o.deviation.relative();
            Record {
                deviation: Some(rel),
                scale: Some(o.deviation.scale),
                magnitude: o.magnitude,
                expected_nonzero: o.expected_nonzero,
                verdict: if rel <= tolerance { Verdict::Pass } else { Verdict::Fail },
                note: o.note,
                ..base
            }
        }
        Err(e) => {
            log::warn!("{check} skipped at point {} ({:?}): {e}", task.point_index, task.point);
            Record {
                note: Some(format!("skipped: {e}")),
                ..base
            }
        }
    }
}

/// Runs every requested check at every sampled point, for every generator
/// and coupling. Deterministic for a fixed config apart from the wall time.
pub fn run(config: &ScenarioConfig) -> Result<ResidualReport> {
    let started = Instant::now();
    let (chart, region) = config.validate()?;
    let mut resolved = config.clone();
    resolved.region = Some(region);

    let points = sample_points(&region, config.n_points, config.seed);
    let seeds = generator_seeds(config.seed, config.generator.count);
    let tasks: Vec<Task> = points
        .iter()
        .enumerate()
        .flat_map(|(pi, p)| {
            seeds.iter().enumerate().map(move |(gi, s)| Task {
                point_index: pi,
                point: *p,
                generator_index: gi,
                generator_seed: *s,
            })
        })
        .collect();

    let pool = thread_pool()?;
    let chunks: Vec<Vec<Record>> = pool.install(|| tasks.par_iter().map(|t| run_task(&resolved, &chart, t)).collect());
    let mut records: Vec<Record> = chunks.into_iter().flatten().collect();
    // stable: couplings keep their configured order within a key
    records.sort_by_key(|r| {
        let check_pos = config.checks.iter().position(|c| *c == r.check).unwrap_or(usize::MAX);
        (check_pos, r.point_index, r.generator_index)
    });

    let checks: Vec<_> = config
        .checks
        .iter()
        .map(|&c| {
            let needs_witness = c == Check::Uniqueness
                && !chart.is_flat()
                && config.couplings.iter().any(|&a| a != CouplingConfig::CANCELLING);
            summarize(c, &records, config.tolerance, needs_witness)
        })
        .collect();
    let passed = checks.iter().all(|c| c.verdict == Verdict::Pass);

    Ok(ResidualReport {
        versions: Versions {
            artifact: env!("CARGO_PKG_VERSION").to_string(),
            schema: SCHEMA_VERSION,
        },
        conventions: Conventions::default(),
        config: resolved,
        chart: crate::geometry::Chart::label(&chart),
        generators: seeds
            .iter()
            .enumerate()
            .map(|(index, &seed)| GeneratorInfo { index, seed })
            .collect(),
        records,
        summary: Summary {
            checks,
            passed,
            wall_time_s: started.elapsed().as_secs_f64(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_seeded_and_inside_the_box() {
        let region = [[0.0, 1.0], [3.0, 10.0], [0.3, 2.8], [0.0, 6.0]];
        let a = sample_points(&region, 50, 4);
        assert_eq!(a, sample_points(&region, 50, 4));
        assert_ne!(a, sample_points(&region, 50, 5));
        for p in &a {
            for m in 0..4 {
                assert!(p[m] >= region[m][0] && p[m] <= region[m][1]);
            }
        }
        let s = generator_seeds(4, 3);
        assert_eq!(s, generator_seeds(4, 3));
        assert_eq!(s.len(), 3);
        assert_ne!(s[0], s[1]);
    }

    #[test]
    fn small_minkowski_run_passes() {
        let mut c = ScenarioConfig::new("minkowski", vec![Check::Flat, Check::Geometry]);
        c.n_points = 3;
        c.couplings = vec![0.0, 0.5];
        let r = run(&c).unwrap();
        assert_eq!(r.records.len(), 2 * 3 * 2);
        assert!(r.passed(), "{:?}", r.summary);
        assert_eq!(r.exit_code(), 0);
        assert!(r
            .records
            .windows(2)
            .all(|w| (w[0].check == Check::Flat) >= (w[1].check == Check::Flat)));
    }

    #[test]
    fn schwarzschild_uniqueness_needs_a_witness() {
        let mut c = ScenarioConfig::new("schwarzschild", vec![Check::Uniqueness]);
        c.n_points = 4;
        c.couplings = vec![0.0, 0.5];
        let r = run(&c).unwrap();
        let s = r.summary_for(Check::Uniqueness).unwrap();
        assert_eq!(s.verdict, Verdict::Pass, "{s:?}");
        assert!(s.witness.unwrap() >= 1e-3);
        for rec in r.records_for(Check::Uniqueness) {
            assert_eq!(rec.expected_nonzero, rec.coupling == 0.0);
        }
    }
}
