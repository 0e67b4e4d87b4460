use proptest::prelude::*;

use schmidt_core::scenarios::*;
use schmidt_core::stats::*;
use schmidt_core::stats::nosignal::Party;
use schmidt_core::stats::perturb::strongest_extra_level_a;
use schmidt_core::stats::validate::{distribution_matrix, mean_and_variance};
use schmidt_core::witness::{witness, ScenarioKind};
use schmidt_core::Execution;

const REPLICATES: usize = 1000;

fn set_i() -> ScenarioSpec {
    ScenarioSpec::a(MeasurementSet::SetI, 0).unwrap()
}

fn fraction(hits: usize, total: usize) -> f64 {
    hits as f64 / total as f64
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let plan = SamplingPlan { shots: 1000, jobs: 3, repetitions: 2, seed: 42 };
    let a = sample_counts(&spec, &dist, &plan, Execution::Parallel).unwrap();
    let b = sample_counts(&spec, &dist, &plan, Execution::Sequential).unwrap();
    assert_eq!(a, b);
    let c = sample_counts(&spec, &dist, &SamplingPlan { seed: 43, ..plan }, Execution::Sequential).unwrap();
    assert_ne!(a, c);
}

#[test]
fn zero_probability_raw_outcomes_never_drawn() {
    let spec = ScenarioSpec::b(None);
    let dist = ideal_distribution(&spec).unwrap();
    let OutcomeDistribution::B(raw) = &dist else { unreachable!() };
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(1_000_000, 5), Execution::Sequential).unwrap();
    let JobCounts::B(drawn) = &counts.jobs()[0] else { unreachable!() };
    for (p, c) in raw.iter().zip(drawn) {
        if p.abs() < 1e-12 {
            assert_eq!(*c, 0);
        } else {
            assert!(*c > 0);
        }
    }
}

// binomial standard-error oracle: each cell within 3σ of its probability
#[test]
fn large_samples_sit_within_three_standard_errors() {
    let trials = 10_000_000u64;
    let mut within = 0;
    let mut total = 0;
    let mut check = |p: f64, c: u64| {
        let se = (p * (1.0 - p) / trials as f64).sqrt();
        let est = c as f64 / trials as f64;
        total += 1;
        if (est - p).abs() <= 3.0 * se + 1e-15 {
            within += 1;
        }
    };
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(trials, 11), Execution::Parallel).unwrap();
    let (OutcomeDistribution::A(grid), JobCounts::A(drawn)) = (&dist, &counts.jobs()[0]) else { unreachable!() };
    for i in 0..4 {
        for j in 0..4 {
            for o in 0..4 {
                check(grid[i][j][o].max(0.0), drawn[i][j][o]);
            }
        }
    }
    let spec = ScenarioSpec::b(None);
    let dist = ideal_distribution(&spec).unwrap();
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(trials, 12), Execution::Parallel).unwrap();
    let (OutcomeDistribution::B(raw), JobCounts::B(drawn)) = (&dist, &counts.jobs()[0]) else { unreachable!() };
    for (p, c) in raw.iter().zip(drawn) {
        check(p.max(0.0), *c);
    }
    assert!(fraction(within, total) >= 0.99, "{within}/{total}");
}

#[test]
fn estimated_matrix_tracks_ideal() {
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let ideal = ideal_matrix_a(&spec).unwrap();
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(1_000_000, 3), Execution::Sequential).unwrap();
    let est = estimate_matrix(&counts, &[0], None).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            assert!((est.entries()[(i, j)] - ideal.entries()[(i, j)]).abs() < 0.005);
        }
    }
}

#[test]
fn raw_b_counts_show_sixteen_empty_cells() {
    let spec = ScenarioSpec::b(None);
    let dist = ideal_distribution(&spec).unwrap();
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(1_000_000, 9), Execution::Sequential).unwrap();
    let JobCounts::B(raw) = &counts.jobs()[0] else { unreachable!() };
    let empty: Vec<usize> = (0..64).filter(|&k| raw[k] == 0).collect();
    assert_eq!(empty.len(), 16);
    for k in empty {
        let o = RawOutcome::from_index(k);
        assert_eq!(o.a[1], o.b[1]);
        assert_eq!((o.a[0] + o.a[2] + o.b[0] + o.b[2]) % 2, 0);
    }
}

#[test]
fn single_job_report_has_identical_primed_values() {
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(50_000, 1), Execution::Sequential).unwrap();
    let r = score_with(&counts, None).unwrap();
    assert_eq!(r.w, r.w_prime);
    assert_eq!(r.delta_w, r.delta_w_prime);
    assert_eq!(r.job_count, 1);
}

#[test]
fn identical_jobs_pool_like_one_long_job() {
    let spec = ScenarioSpec::b(None);
    let dist = ideal_distribution(&spec).unwrap();
    let one = sample_counts(&spec, &dist, &SamplingPlan::single(40_000, 8), Execution::Sequential).unwrap();
    let JobCounts::B(raw) = one.jobs()[0].clone() else { unreachable!() };
    let k = 5u64;
    let long = CountsTable::new(
        ScenarioKind::B,
        MeasurementSet::Tetrahedron,
        40_000 * k,
        1,
        vec![JobCounts::B(raw.iter().map(|c| c * k).collect())],
        None,
        "",
    )
    .unwrap();
    let many = CountsTable::new(
        ScenarioKind::B,
        MeasurementSet::Tetrahedron,
        40_000,
        1,
        vec![JobCounts::B(raw); k as usize],
        None,
        "",
    )
    .unwrap();
    let (a, b) = (score_dataset(&many).unwrap(), score_dataset(&long).unwrap());
    for ((_, ra), (_, rb)) in a.reports.iter().zip(&b.reports) {
        assert!((ra.w - rb.w).abs() < 1e-12);
        assert!((ra.w - ra.w_prime).abs() < 1e-12);
    }
}

// ΔW′ as the error of a mean of independent jobs
#[test]
fn primed_error_matches_spread_of_job_means() {
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let reports = replicate_reports(&spec, &dist, 20_000, 8, 400, 77, Execution::Parallel).unwrap();
    let wp: Vec<f64> = reports.iter().map(|r| r.w_prime).collect();
    let (_, var) = mean_and_variance(&wp);
    let predicted = reports.iter().map(|r| r.delta_w_prime).sum::<f64>() / reports.len() as f64;
    let ratio = var.sqrt() / predicted;
    assert!((0.88..1.12).contains(&ratio), "ratio {ratio}");
}

#[test]
fn error_formula_holds_for_scenario_a() {
    let v = validate_error_formula(&set_i(), 100_000, REPLICATES, 100, Execution::Parallel).unwrap();
    assert!((0.95..=1.05).contains(&v.ratio), "{v:?}");
    assert!(v.z_mean.abs() <= 0.1, "{v:?}");
    assert!((0.8..=1.2).contains(&v.z_variance), "{v:?}");
}

// with set II the averaged marginals carry weight, so the formula is an upper
// estimate; the exact first-order spread is checked instead
#[test]
fn averaged_marginals_spread_matches_delta_method() {
    for (set, seed) in [(MeasurementSet::SetI, 102), (MeasurementSet::SetII, 101)] {
        let spec = ScenarioSpec::a(set, 0).unwrap();
        let v = validate_error_formula(&spec, 100_000, REPLICATES, seed, Execution::Parallel).unwrap();
        let dm = v.delta_method.unwrap();
        assert!(dm <= v.analytic_delta * (1.0 + 1e-12), "{set}: {v:?}");
        let r = v.empirical_std / dm;
        assert!((0.95..=1.05).contains(&r), "{set}: {r} {v:?}");
    }
}

#[test]
fn error_formula_holds_for_scenario_b() {
    for (k, s) in Spectator::ALL.into_iter().enumerate() {
        let spec = ScenarioSpec::b(Some(s));
        let v = validate_error_formula(&spec, 100_000, REPLICATES, 200 + k as u64, Execution::Parallel).unwrap();
        assert!((0.95..=1.05).contains(&v.ratio), "{s}: {v:?}");
        assert!(v.z_mean.abs() <= 0.1, "{s}: {v:?}");
        assert!((0.8..=1.2).contains(&v.z_variance), "{s}: {v:?}");
    }
}

#[test]
fn small_samples_are_reported_not_rejected() {
    let v = validate_error_formula(&set_i(), 100, 200, 3, Execution::Parallel).unwrap();
    assert!(v.ratio.is_finite() && v.ratio > 0.0);
}

#[test]
fn ideal_data_stays_consistent_with_the_null() {
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let reports = replicate_reports(&spec, &dist, 29_600_000, 1, REPLICATES, 5, Execution::Parallel).unwrap();
    let quiet = reports.iter().filter(|r| r.z_score.abs() < 3.0).count();
    assert!(fraction(quiet, REPLICATES) >= 0.99, "{quiet}");
}

#[test]
fn extra_level_contamination_is_detected() {
    let spec = set_i();
    let ideal = ideal_distribution(&spec).unwrap();
    let level = strongest_extra_level(&ideal).unwrap();
    let dist = mix_extra_level(&ideal, 0.01, level).unwrap();
    let reports = replicate_reports(&spec, &dist, 10_000_000, 1, REPLICATES, 6, Execution::Parallel).unwrap();
    let loud = reports.iter().filter(|r| r.z_score.abs() > 5.0).count();
    assert!(fraction(loud, REPLICATES) >= 0.95, "{loud}");
}

// first-order model w(1 − w)^n bᵀ𝒜a against the exact mixed determinant
#[test]
fn extra_level_shift_matches_first_order_model() {
    let spec = set_i();
    let ideal = ideal_distribution(&spec).unwrap();
    let (level, v) = strongest_extra_level_a(&distribution_matrix(&ideal, None).unwrap()).unwrap();
    for w in [1e-4, 1e-3, 1e-2] {
        let mixed = distribution_matrix(&mix_extra_level(&ideal, w, level).unwrap(), None).unwrap();
        let exact = witness(&mixed);
        let model = w * (1.0 - w).powi(4) * v;
        assert!((exact - model).abs() < 1e-9 * model.abs().max(1e-12) + 1e-15, "w={w}: {exact} vs {model}");
    }
}

#[test]
fn scenario_b_contamination_is_detected() {
    let spec = ScenarioSpec::b(None);
    let ideal = ideal_distribution(&spec).unwrap();
    let dist = mix_extra_level(&ideal, 0.01, strongest_extra_level(&ideal).unwrap()).unwrap();
    let reports = replicate_reports(&spec, &dist, 10_000_000, 1, 200, 16, Execution::Parallel).unwrap();
    let loud = reports.iter().filter(|r| r.z_score.abs() > 5.0).count();
    assert!(fraction(loud, 200) >= 0.95, "{loud}");
}

#[test]
fn no_signaling_null_behaviour() {
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let reports: Vec<NoSignalingReport> = schmidt_core::par::map_indices(Execution::Parallel, REPLICATES, |r| {
        let plan = SamplingPlan::single(1_000_000, derive_seed(31, r as u64));
        no_signaling_test(&sample_counts(&spec, &dist, &plan, Execution::Sequential).unwrap()).unwrap()
    });
    let below_four = reports.iter().filter(|r| r.max_abs_z < 4.0).count();
    let alarms = reports.iter().filter(|r| r.rejects(0.05)).count();
    assert!(fraction(below_four, REPLICATES) >= 0.95, "{below_four}");
    assert!(fraction(alarms, REPLICATES) <= 0.10, "{alarms}");
    // pairwise z is standard normal under the null
    let zs: Vec<f64> = reports.iter().flat_map(|r| r.comparisons.iter().map(|c| c.z)).collect();
    let (m, v) = mean_and_variance(&zs);
    assert!(m.abs() < 0.02 && (v - 1.0).abs() < 0.05, "{m} {v}");
}

#[test]
fn injected_signaling_is_flagged() {
    let spec = set_i();
    let ideal = ideal_distribution(&spec).unwrap();
    let (i, j) = SIGNALING_SETTING;
    let dist = shift_signaling(&ideal, (i, j), 0.01).unwrap();
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(1_000_000, 2), Execution::Sequential).unwrap();
    let report = no_signaling_test(&counts).unwrap();
    let c = report.find(Party::A, i, (0, 1)).unwrap();
    assert!(c.z.abs() > 5.0, "{c:?}");
    assert_eq!(report.worst().setting, i);
    assert!(report.rejects(1e-6));
}

#[test]
fn counts_level_perturbations_move_the_statistics() {
    let spec = set_i();
    let dist = ideal_distribution(&spec).unwrap();
    let counts = sample_counts(&spec, &dist, &SamplingPlan::single(1_000_000, 4), Execution::Sequential).unwrap();
    let signaled = perturb_counts(&counts, PerturbMode::Signaling, 0.01).unwrap();
    assert!(no_signaling_test(&signaled).unwrap().max_abs_z > 5.0);
    let contaminated = perturb_counts(&counts, PerturbMode::ExtraDim, 0.01).unwrap();
    assert!(score_with(&contaminated, None).unwrap().z_score.abs() > 5.0);
    assert!(score_with(&counts, None).unwrap().z_score.abs() < 5.0);
}

fn cell(cuts: [u64; 3], trials: u64) -> [u64; 4] {
    let mut c = cuts.map(|x| x % (trials + 1));
    c.sort_unstable();
    [c[0], c[1] - c[0], c[2] - c[1], trials - c[2]]
}

proptest! {
    #[test]
    fn estimates_are_probability_matrices(
        trials in 1u64..10_000,
        cuts in prop::collection::vec(any::<[u64; 3]>(), 16),
        jobs in 1usize..4,
    ) {
        let grid: SettingGrid = std::array::from_fn(|i| std::array::from_fn(|j| cell(cuts[4 * i + j], trials)));
        let counts = CountsTable::new(
            ScenarioKind::A, MeasurementSet::SetI, trials, 1,
            vec![JobCounts::A(Box::new(grid)); jobs], None, "",
        ).unwrap();
        let all: Vec<usize> = (0..jobs).collect();
        let p = estimate_matrix(&counts, &all, None).unwrap();
        prop_assert_eq!(p.entries()[(0, 0)], 1.0);
        let r = score_with(&counts, None).unwrap();
        prop_assert!(r.delta_w >= 0.0 && r.delta_w_prime >= 0.0);
    }

    #[test]
    fn raw_estimates_are_probability_matrices(raw in prop::collection::vec(0u64..1000, 64)) {
        prop_assume!(raw.iter().sum::<u64>() > 0);
        let total = raw.iter().sum();
        let counts = CountsTable::new(
            ScenarioKind::B, MeasurementSet::Tetrahedron, total, 1, vec![JobCounts::B(raw)], None, "",
        ).unwrap();
        for s in Spectator::ALL {
            let p = estimate_matrix(&counts, &[0], Some(s)).unwrap();
            prop_assert!((p.entries().sum() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn perturbation_preserves_totals(eps in 0.0f64..0.05, seed in any::<u64>()) {
        let spec = set_i();
        let dist = ideal_distribution(&spec).unwrap();
        let counts = sample_counts(&spec, &dist, &SamplingPlan::single(10_000, seed), Execution::Sequential).unwrap();
        for mode in [PerturbMode::Signaling, PerturbMode::ExtraDim] {
            let p = perturb_counts(&counts, mode, eps).unwrap();
            prop_assert_eq!(p.trials_per_job(), counts.trials_per_job());
        }
    }
}
