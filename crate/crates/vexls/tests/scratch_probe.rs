// Temporary probe of the benchmark configurations; deleted once the
// acceptance suite is in place.

use vexls::descent::{
    gauss_newton_solve, restarted_solve, ExtrapChoice, SolveConfig, StepMethod, StepperConfig,
};
use vexls::problems::{build_bratu, build_sparse_sine, BratuSpec, NllsProblem};

fn run_bratu(n: usize, alpha: f64, lambda: f64, method: StepMethod, extrap: ExtrapChoice, q: usize) {
    let p = build_bratu(BratuSpec { n, alpha, lambda }).unwrap();
    let stepper = StepperConfig::new(method);
    let cfg = if extrap == ExtrapChoice::None {
        SolveConfig::plain()
    } else {
        SolveConfig::with_extrap(extrap, q)
    };
    let x0 = vec![0.0; p.n_unknowns()];
    let t = std::time::Instant::now();
    let rep = restarted_solve(&p, &x0, &stepper, &cfg).unwrap();
    println!(
        "bratu n={n} a={alpha} l={lambda} {method:?} {extrap:?}({q}): status={:?} iters={} cycles={} RE={:.3e} wall={:.3}s probe={:.3}s",
        rep.status,
        rep.iterations,
        rep.cycles,
        rep.relative_error.unwrap(),
        rep.wall_seconds,
        t.elapsed().as_secs_f64()
    );
}

#[test]
fn probe() {
    println!("--- table 2 configs (standard bratu) ---");
    for lambda in [1e4, 1e5, 1e6] {
        run_bratu(100, 0.0, lambda, StepMethod::Sgd, ExtrapChoice::Rre, 2);
        run_bratu(100, 0.0, lambda, StepMethod::Sgd, ExtrapChoice::Mpe, 2);
        run_bratu(100, 0.0, lambda, StepMethod::Sgd, ExtrapChoice::Vea, 2);
    }
    run_bratu(100, 0.0, 10.0, StepMethod::Pgd, ExtrapChoice::Rre, 5);
    run_bratu(100, 0.0, 1e4, StepMethod::Pgd, ExtrapChoice::Rre, 5);

    println!("--- table 1 configs (extended bratu) ---");
    run_bratu(100, 1.0, 10.0, StepMethod::Pgd, ExtrapChoice::Rre, 6);
    run_bratu(100, 1.0, 10.0, StepMethod::Pgd, ExtrapChoice::Mpe, 6);
    run_bratu(100, 1.0, 10.0, StepMethod::Pgd, ExtrapChoice::None, 0);
    run_bratu(100, 1.0, 10.0, StepMethod::Sgd, ExtrapChoice::Rre, 6);

    println!("--- table 3 configs (sparse sine) ---");
    let p = build_sparse_sine(1000).unwrap();
    let x0 = vec![0.0; 1000];
    let stepper = StepperConfig::new(StepMethod::Sgd);
    for q in [1usize, 3, 5] {
        let rep =
            restarted_solve(&p, &x0, &stepper, &SolveConfig::with_extrap(ExtrapChoice::Rre, q))
                .unwrap();
        println!(
            "sparse RRE({q})-SGD: status={:?} iters={} cycles={} RE={:.3e}",
            rep.status,
            rep.iterations,
            rep.cycles,
            rep.relative_error.unwrap()
        );
    }
    let rep = restarted_solve(&p, &x0, &stepper, &SolveConfig::with_extrap(ExtrapChoice::Vea, 1))
        .unwrap();
    println!(
        "sparse VEA(1)-SGD: status={:?} iters={} RE={:.3e}",
        rep.status,
        rep.iterations,
        rep.relative_error.unwrap()
    );
    let rep = gauss_newton_solve(&p, &x0, &SolveConfig::plain()).unwrap();
    println!(
        "sparse GN: status={:?} iters={} RE={:.3e}",
        rep.status,
        rep.iterations,
        rep.relative_error.unwrap()
    );
    for entry in &rep.history {
        println!(
            "  gn history it={} rel={:.3e} re={:.3e}",
            entry.iteration,
            entry.rel_successive_norm,
            entry.relative_error.unwrap()
        );
    }
}
