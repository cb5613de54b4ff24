use dagforge::metrics::DagProperties;
use dagforge::{build_special, measure_all, oracle_properties, SpecialKind};

fn columns(p: &DagProperties) -> Vec<(&'static str, f64)> {
    DagProperties::CSV_COLUMNS
        .iter()
        .copied()
        .zip(p.csv_values().iter().map(|v| v.parse::<f64>().unwrap()))
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn sizes_to_check(kind: SpecialKind) -> Vec<usize> {
    let mut sizes: Vec<usize> = kind.admissible_sizes(128).collect();
    let large: Vec<usize> = kind.admissible_sizes(1024).filter(|&n| n > 128).collect();
    sizes.extend(large.iter().rev().take(3).rev());
    sizes
}

#[test]
fn closed_forms_match_measurement() {
    for kind in SpecialKind::ALL {
        for n in sizes_to_check(kind) {
            let measured = measure_all(&build_special(kind, n).unwrap());
            let oracle = oracle_properties(kind, n).unwrap();
            for ((name, got), (_, want)) in columns(&measured).into_iter().zip(columns(&oracle)) {
                assert!(close(got, want), "{kind} n={n} {name}: measured {got}, formula {want}");
            }
        }
    }
}

#[test]
fn construction_is_deterministic() {
    for kind in SpecialKind::ALL {
        let n = kind.nearest_admissible(40);
        assert_eq!(build_special(kind, n).unwrap(), build_special(kind, n).unwrap());
    }
}

/// Leading-order values, one entry per property column that the
/// approximation table lists.
fn leading_order(kind: SpecialKind, n: f64) -> Vec<(&'static str, f64)> {
    use SpecialKind::*;
    let sq = n.sqrt();
    let tri = (2.0 * n).sqrt();
    let lg = n.log2();
    // m, deg_max, deg_in_max, deg_out_max, deg_min, deg_mean, deg_sd, deg_in_sd, deg_out_sd
    let e: [f64; 9] = match kind {
        Empty => [0.0; 9],
        Complete => [n * n / 2.0, n, n, n, n, n, 0.0, n / 12f64.sqrt(), n / 12f64.sqrt()],
        Chain => [n, 2.0, 1.0, 1.0, 1.0, 2.0, (2.0 / n).sqrt(), 1.0 / sq, 1.0 / sq],
        OutTree | Comb => [n, 3.0, 1.0, 2.0, 1.0, 2.0, 1.0, 1.0 / sq, 1.0],
        InTree | CombReversed => [n, 3.0, 2.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1.0 / sq],
        Bipartite => [n * n / 4.0, n / 2.0, n / 2.0, n / 2.0, n / 2.0, n / 2.0, 0.0, n / 4.0, n / 4.0],
        Square => [n * sq, 2.0 * sq, sq, sq, sq, 2.0 * sq, (2.0 * sq).sqrt(), sq.sqrt(), sq.sqrt()],
        Triangular => [
            2.0 * n * tri / 3.0,
            2.0 * tri,
            tri,
            tri,
            2.0,
            4.0 / 3.0 * tri,
            2.0 / 3.0 * sq,
            sq / 3.0,
            sq / 3.0,
        ],
    };
    // len, width, sh_max, sh_min, sh_mean, sh_sd, sh_first, sh_last, mass
    let v: [f64; 9] = match kind {
        Empty => [1.0, n, n, n, n, 0.0, n, n, 1.0],
        Complete | Chain => [n, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0],
        OutTree => [lg, n / 2.0, n / 2.0, 1.0, n / lg, n / (3.0 * lg).sqrt(), 1.0, n / 2.0, 1.0],
        InTree => [lg, n / 2.0, n / 2.0, 1.0, n / lg, n / (3.0 * lg).sqrt(), n / 2.0, 1.0, 1.0],
        Comb => [n / 2.0, n / 2.0, 2.0, 1.0, 2.0, (2.0 / n).sqrt(), 1.0, 2.0, 1.0],
        CombReversed => [n / 2.0, n / 2.0, n / 2.0, 1.0, 2.0, (n / 2.0).sqrt(), n / 2.0, 1.0, 0.5],
        Bipartite => [2.0, n / 2.0, n / 2.0, n / 2.0, n / 2.0, 0.0, n / 2.0, n / 2.0, 1.0],
        Square => [sq, sq, sq, sq, sq, 0.0, sq, sq, 1.0],
        Triangular => [tri, tri, tri, 1.0, (n / 2.0).sqrt(), (n / 6.0).sqrt(), 1.0, tri, 1.0],
    };
    let edge_names = [
        "m", "deg_max", "deg_in_max", "deg_out_max", "deg_min", "deg_mean", "deg_sd", "deg_in_sd",
        "deg_out_sd",
    ];
    let vertex_names = [
        "len", "width", "sh_max", "sh_min", "sh_mean", "sh_sd", "sh_first", "sh_last", "mass",
    ];
    edge_names.into_iter().zip(e).chain(vertex_names.into_iter().zip(v)).collect()
}

fn relative_gap(approx: f64, exact: f64) -> f64 {
    if approx == exact {
        0.0
    } else {
        (approx - exact).abs() / exact.abs()
    }
}

/// Columns whose leading-order value needs more vertices than the rest
/// before it is within 10%, with the smallest size from which it holds.
/// The tree shape spread converges like sqrt(1 - 3/log2 n), so it is
/// checked separately.
fn slow_columns(kind: SpecialKind, column: &str) -> Option<f64> {
    use SpecialKind::*;
    match (kind, column) {
        (OutTree | InTree, "sh_sd") => Some(f64::INFINITY),
        (Square, "m" | "deg_mean" | "deg_sd") => Some(144.0),
        (Triangular, "m" | "deg_max" | "deg_in_max" | "deg_mean" | "deg_sd") => Some(136.0),
        // sqrt((k - 1)(k + 14)) / k approaches 1 only for k near 50.
        (Triangular, "deg_out_sd") => Some(1225.0),
        _ => None,
    }
}

#[test]
fn leading_order_values_track_exact_values() {
    for kind in SpecialKind::ALL {
        for n in kind.admissible_sizes(1 << 16).filter(|&n| n >= 100) {
            let exact = oracle_properties(kind, n).unwrap();
            let exact_cols = columns(&exact);
            let lookup = |name: &str| exact_cols.iter().find(|(c, _)| *c == name).unwrap().1;
            for (name, approx) in leading_order(kind, n as f64) {
                if let Some(from) = slow_columns(kind, name) {
                    if (n as f64) < from {
                        continue;
                    }
                }
                let gap = relative_gap(approx, lookup(name));
                assert!(gap <= 0.10, "{kind} n={n} {name}: approx {approx} vs exact {} ({gap:.3})", lookup(name));
            }
        }
    }
}

#[test]
fn tree_shape_spread_converges_slowly() {
    let at = |n: usize| {
        let exact = oracle_properties(SpecialKind::OutTree, n).unwrap().sh_sd;
        let approx = n as f64 / (3.0 * (n as f64).log2()).sqrt();
        relative_gap(approx, exact)
    };
    assert!(at(127) > 0.10);
    assert!(at((1 << 20) - 1) < at((1 << 10) - 1));
    assert!(at((1 << 40) - 1) < 0.10);
}
