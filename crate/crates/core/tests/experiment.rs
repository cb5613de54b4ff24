use std::collections::HashMap;

use dagforge::experiment::{run_experiment, write_experiment, ExperimentSpec, Preset, Table, HEURISTICS};
use dagforge::stats::mean;

fn run(preset: Preset, seed: u64) -> Table {
    run_experiment(&ExperimentSpec::preset(preset, seed)).unwrap()
}

fn csv_with_threads(spec: &ExperimentSpec, threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let mut buf = Vec::new();
        write_experiment(spec, &mut buf).unwrap();
        buf
    })
}

#[test]
fn presets_are_byte_identical_across_thread_counts() {
    for preset in [Preset::Fig3, Preset::Fig6, Preset::Fig9, Preset::Fig11] {
        let spec = ExperimentSpec::preset(preset, 77);
        let one = csv_with_threads(&spec, 1);
        assert_eq!(one, csv_with_threads(&spec, 4), "{preset}");
        assert_eq!(one, csv_with_threads(&spec, 4), "{preset}");
    }
}

#[test]
fn seed_changes_output() {
    assert_ne!(run(Preset::Fig3, 1).to_csv(), run(Preset::Fig3, 2).to_csv());
}

#[test]
fn csv_header_is_versioned() {
    let csv = run(Preset::Fig7, 3).to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# dagforge experiment=fig7 schema=v1 seed=3"));
    assert!(lines.next().unwrap().starts_with("instance,method,p,K,layers,n,m,"));
    assert_eq!(lines.count(), 191);
}

#[test]
fn property_rows_satisfy_identities() {
    let t = run(Preset::Fig8, 5);
    for row in &t.rows {
        let get = |c: &str| -> f64 { row[t.column(c).unwrap()].parse().unwrap() };
        assert_eq!(get("n"), 100.0);
        assert!(get("m_tr") <= get("m"));
        assert!(get("sh_max") <= get("width"));
        assert!((get("sh_mean") * get("len") - get("n")).abs() < 1e-9);
        assert!(get("mass_abs") <= get("n"));
    }
}

#[test]
fn fig11_best_heuristic_has_zero_diff() {
    let t = run(Preset::Fig11, 6);
    assert_eq!(t.rows.len(), 1200 * 4 * HEURISTICS.len());
    let (inst, procs, diff) = (t.column("instance").unwrap(), t.column("P").unwrap(), t.column("diff").unwrap());
    let mut best: HashMap<(String, String), usize> = HashMap::new();
    for row in &t.rows {
        let d: usize = row[diff].parse().unwrap();
        let e = best.entry((row[inst].clone(), row[procs].clone())).or_insert(usize::MAX);
        *e = (*e).min(d);
    }
    assert_eq!(best.len(), 1200 * 4);
    assert!(best.values().all(|&d| d == 0));
}

#[test]
fn fig2_heft_plateaus() {
    let t = run(Preset::Fig2, 1).filter("heuristic", "heft").filter("P", "128");
    let plateau = |kind: &str| t.filter("method", kind).floats("makespan")[0];
    assert_eq!(plateau("empty"), 1.0);
    assert_eq!(plateau("bipartite"), 2.0);
    assert_eq!(plateau("square"), 11.0);
    assert_eq!(plateau("complete"), 128.0);
    assert_eq!(plateau("comb"), 64.0);
}

#[test]
fn fig3_edge_counts_follow_p() {
    let t = run(Preset::Fig3, 8);
    let (p, m) = (t.floats("p"), t.floats("m"));
    assert_eq!(p.len(), 300);
    // Standardized residuals of m against its binomial mean at each p.
    let z: Vec<f64> = p
        .iter()
        .zip(&m)
        .map(|(&p, &m)| (m - 4950.0 * p) / (4950.0 * p * (1.0 - p)).sqrt().max(1e-9))
        .collect();
    let mean_z = mean(&z);
    assert!(mean_z.abs() <= 3.0 / (z.len() as f64).sqrt(), "{mean_z}");
}

#[test]
fn fig9_mass_drops_past_twenty_layers() {
    let t = run(Preset::Fig9, 9);
    let (k, mass) = (t.floats("layers"), t.floats("mass"));
    let mean_mass = |range: std::ops::RangeInclusive<f64>| {
        let v: Vec<f64> = k.iter().zip(&mass).filter(|(k, _)| range.contains(k)).map(|(_, &m)| m).collect();
        mean(&v)
    };
    assert!(mean_mass(1.0..=20.0) > 0.99);
    assert!(mean_mass(40.0..=100.0) < 0.9);
}

#[test]
fn table1_uniform_width_gap() {
    let t = run(Preset::Table1, 10).filter("method", "uniform").filter("n", "10");
    let (w, sh) = (t.floats("width"), t.floats("sh_max"));
    assert_eq!(w.len(), 100);
    let gap: Vec<f64> = w.iter().zip(&sh).map(|(w, s)| w - s).collect();
    assert!((mean(&w) - 2.35).abs() <= 0.2, "{}", mean(&w));
    assert!(gap.iter().all(|&g| g >= 0.0));
}
