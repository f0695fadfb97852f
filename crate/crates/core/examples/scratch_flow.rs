// scratch: full pipeline with restart polish + shooting comparison (temporary)
use shrinker::curve::hausdorff_distance;
use shrinker::family;
use shrinker::flow::FlowConfig;
use shrinker::metric::Dimension;
use shrinker::shoot;

fn main() {
    let n = Dimension::new(2).unwrap();
    let t0 = std::time::Instant::now();
    let cfg = FlowConfig {
        node_count: 512,
        t_max: 10.0,
        area_drift_tol: 1.0 * std::f64::consts::TAU,
        ..FlowConfig::default()
    };
    let search = family::find_critical_a(n, &cfg, (0.2, 3.0)).unwrap();
    let out = &search.outcome;
    let best = &out.best_curve;
    let mut crossings = best.axis_crossings();
    crossings.sort_by(f64::total_cmp);
    println!(
        "a0={:.8} runs={} best_res={:.3e} len={:.6} crossings=({:.5},{:.5}) nodes={} elapsed={:?}",
        search.a0, search.runs, out.best_residual,
        best.curve_length(n).unwrap(), crossings[0], crossings[crossings.len()-1], best.len(), t0.elapsed()
    );
    let bracket = shoot::scan_for_bracket(n, 0.15, 1.35, 40).unwrap();
    let geo = shoot::closed_geodesic_by_shooting(n, bracket, 4096).unwrap();
    println!("hausdorff(flow, shoot) = {:.4e}", hausdorff_distance(best, &geo.curve));
}
