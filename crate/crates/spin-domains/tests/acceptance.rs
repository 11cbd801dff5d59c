//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; the test verdicts carry the same information.

use spin_domains::dynamics::{self, analytic_element, AnalyticElement, EvolutionParams};
use spin_domains::entanglement::{
    entropy_closed_form_nb1, negativity_closed_form_nb1, von_neumann_entropy,
};
use spin_domains::oracle::{build_liouvillian, evolve_oracle};
use spin_domains::state::{
    from_tensor_product, initial_state, initial_state_tensor_product, to_tensor_product,
    BlockLayout, CMatrix, DensityMatrix,
};
use spin_domains::steady::{negative_temperature_threshold, steady_state, steady_state_matrix};

fn layout(n_a: u32, n_b: u32) -> BlockLayout {
    BlockLayout::for_domains(n_a, n_b).unwrap()
}

fn integrate_to(
    n_a: u32,
    n_b: u32,
    t_end: f64,
    sample_every: usize,
) -> spin_domains::state::Trajectory {
    let l = layout(n_a, n_b);
    let params = EvolutionParams {
        gamma: 1.0,
        t_end,
        step: dynamics::recommended_step(n_a),
        sample_every,
    };
    dynamics::integrate(&initial_state(&l), &params).unwrap()
}

fn frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).map(|z| z.norm_sqr()).sum().sqrt()
}

struct Criterion {
    number: u32,
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u32, name: &'static str) -> Self {
        Criterion {
            number,
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }

    fn finish(self) {
        let verdict = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {} ({}): {}", self.number, self.name, verdict);
        assert!(
            self.failures.is_empty(),
            "criterion {} ({}) failed:\n{}",
            self.number,
            self.name,
            self.failures.join("\n")
        );
    }
}

#[test]
fn criterion_1_steady_state_weights_nb1() {
    let mut c = Criterion::new(1, "steady-state weights, n_b = 1, N = 1..10");
    for n_a in 1..=10u32 {
        let n = n_a as f64;
        let last = integrate_to(n_a, 1, 20.0, usize::MAX);
        let rho = last.last().data();
        // 1-based (N+2, N+2) and (2N+2, 2N+2): the two block bottoms.
        let p = n_a as usize + 1;
        let q = 2 * n_a as usize + 1;
        let w1 = rho[(p, p)].re;
        let w2 = rho[(q, q)].re;
        c.check((w1 - 1.0 / (n + 1.0)).abs() <= 1e-6, || {
            format!("N={n_a}: block-1 weight {w1} vs {}", 1.0 / (n + 1.0))
        });
        c.check((w2 - n / (n + 1.0)).abs() <= 1e-6, || {
            format!("N={n_a}: block-2 weight {w2} vs {}", n / (n + 1.0))
        });
        // The whole matrix, not just the two diagonals, must have landed on
        // the predicted dark-state mixture.
        let distance = frobenius(rho, steady_state_matrix(&layout(n_a, 1)).data());
        c.check(distance <= 1e-6, || {
            format!("N={n_a}: Frobenius distance to steady state {distance}")
        });
    }
    c.finish();
}

#[test]
fn criterion_2_analytic_decay() {
    let mut c = Criterion::new(2, "analytic element solutions, max error 1e-8 on [0, 5]");
    for n_a in 1..=10u32 {
        let l = layout(n_a, 1);
        let traj = integrate_to(n_a, 1, 5.0, 200);
        let q = l.block(1).offset;
        let mut worst_diag = 0.0_f64;
        let mut worst_coh = 0.0_f64;
        for (t, v) in traj.element(1, 1) {
            worst_diag =
                worst_diag.max((v.re - analytic_element(AnalyticElement::Rho22Nb1, n_a, t)).abs());
        }
        for (t, v) in traj.element(1, q) {
            worst_coh = worst_coh
                .max((v.re - analytic_element(AnalyticElement::CoherenceNb1, n_a, t)).abs());
        }
        c.check(worst_diag <= 1e-8, || {
            format!("N={n_a}: rho_2_2 max error {worst_diag}")
        });
        c.check(worst_coh <= 1e-8, || {
            format!("N={n_a}: rho_2_(N+3) max error {worst_coh}")
        });
    }
    for n_a in 2..=10u32 {
        let traj = integrate_to(n_a, 2, 5.0, 200);
        let mut worst = 0.0_f64;
        for (t, v) in traj.element(2, 2) {
            worst = worst.max((v.re - analytic_element(AnalyticElement::Rho33Nb2, n_a, t)).abs());
        }
        c.check(worst <= 1e-8, || {
            format!("N={n_a}, n_b=2: rho_3_3 max error {worst}")
        });
    }
    c.finish();
}

#[test]
fn criterion_3_polarization_sign_flip() {
    let mut c = Criterion::new(3, "negative-temperature thresholds, exact integers");
    let t1 = negative_temperature_threshold(1).unwrap();
    let t2 = negative_temperature_threshold(2).unwrap();
    c.check(t1 == 3, || format!("n_b=1 threshold {t1} != 3"));
    c.check(t2 == 4, || format!("n_b=2 threshold {t2} != 4"));
    c.finish();
}

#[test]
fn criterion_4_negativity() {
    let mut c = Criterion::new(4, "logarithmic negativity vs closed form");
    for n_a in 1..=50u32 {
        let report = steady_state(&layout(n_a, 1)).unwrap();
        let closed = negativity_closed_form_nb1(n_a);
        c.check((report.negativity - closed).abs() <= 1e-9, || {
            format!("N={n_a}: numeric {} vs closed {closed}", report.negativity)
        });
    }
    // Integer maximum at N = 5 with value 0.56218 +/- 1e-4.
    let peak = negativity_closed_form_nb1(5);
    c.check((peak - 0.56218).abs() <= 1e-4, || {
        format!("peak value {peak} vs 0.56218")
    });
    let neighbors_smaller = (1..=200u32)
        .filter(|&n| n != 5)
        .all(|n| negativity_closed_form_nb1(n) < peak);
    c.check(neighbors_smaller, || {
        "N=5 is not the integer maximum".into()
    });
    // Monotone decay toward zero from the peak out to N = 200.
    let mut previous = peak;
    for n_a in 6..=200u32 {
        let value = negativity_closed_form_nb1(n_a);
        c.check(value < previous, || {
            format!("not decreasing at N={n_a}: {value} vs {previous}")
        });
        previous = value;
    }
    c.finish();
}

#[test]
fn criterion_5_entropy() {
    let mut c = Criterion::new(5, "von Neumann entropy vs closed form");
    let mut previous = f64::INFINITY;
    for n_a in 1..=50u32 {
        let l = layout(n_a, 1);
        let numeric = von_neumann_entropy(&steady_state_matrix(&l)).unwrap();
        let closed = entropy_closed_form_nb1(n_a);
        c.check((numeric - closed).abs() <= 1e-10, || {
            format!("N={n_a}: numeric {numeric} vs closed {closed}")
        });
        c.check(closed < previous, || {
            format!("entropy not decreasing at N={n_a}")
        });
        previous = closed;
    }
    let at_one = entropy_closed_form_nb1(1);
    c.check(at_one == 1.0, || format!("entropy at N=1 is {at_one}"));
    c.finish();
}

#[test]
fn criterion_6_oracle_equivalence() {
    let mut c = Criterion::new(6, "reduced engine vs Liouvillian oracle, Frobenius 1e-8");
    for (n_a, n_b) in [(3u32, 1u32), (4, 1), (3, 2), (4, 2)] {
        let l = build_liouvillian(n_a, n_b, 1.0, 0.0).unwrap();
        let rho0_tp = initial_state_tensor_product(n_a, n_b).unwrap();
        for t in [0.1, 0.5, 1.0, 5.0] {
            let reduced = integrate_to(n_a, n_b, t, usize::MAX);
            let reduced_tp = to_tensor_product(reduced.last()).unwrap();
            let oracle = evolve_oracle(&l, &rho0_tp, t).unwrap();
            let distance = frobenius(reduced_tp.data(), oracle.data());
            c.check(distance <= 1e-8, || {
                format!("({n_a},{n_b}) at t={t}: Frobenius {distance}")
            });
        }
    }
    c.finish();
}

#[test]
fn criterion_7_general_block_conjecture() {
    let mut c = Criterion::new(7, "three-block-plus steady structure vs oracle, n_b = 3");
    for n_a in [3u32, 4, 5] {
        let l = build_liouvillian(n_a, 3, 1.0, 0.0).unwrap();
        let rho0 = initial_state_tensor_product(n_a, 3).unwrap();
        let evolved = evolve_oracle(&l, &rho0, 20.0).unwrap();
        let ds = from_tensor_product(&evolved).unwrap();
        let predicted = steady_state_matrix(&layout(n_a, 3));
        let residual = (ds.data() - predicted.data()).map(|z| z.norm()).max();
        c.check(residual <= 1e-6, || {
            format!("n_a={n_a}: max residual {residual} vs predicted dark-state mixture")
        });
    }
    c.finish();
}

#[test]
fn criterion_8_invariant_suite() {
    let mut c = Criterion::new(8, "trace/Hermiticity/positivity/block-weight invariants");
    for (n_a, n_b) in [(3u32, 1u32), (4, 1), (3, 2), (4, 2)] {
        let l = layout(n_a, n_b);
        // Reduced engine trajectory.
        let traj = integrate_to(n_a, n_b, 10.0, 500);
        let weights0 = block_weights(&l, &traj.states()[0]);
        for (t, rho) in traj.times().iter().zip(traj.states()) {
            let context = format!("({n_a},{n_b}) reduced t={t}");
            report_state_invariants(&mut c, &l, rho, &weights0, &context);
        }
        // Oracle states along the same window.
        let liou = build_liouvillian(n_a, n_b, 1.0, 0.0).unwrap();
        let rho0_tp = initial_state_tensor_product(n_a, n_b).unwrap();
        for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let evolved = evolve_oracle(&liou, &rho0_tp, t).unwrap();
            let ds = from_tensor_product(&evolved).unwrap();
            let context = format!("({n_a},{n_b}) oracle t={t}");
            report_state_invariants(&mut c, &l, &ds, &weights0, &context);
        }
    }
    c.finish();
}

fn block_weights(l: &BlockLayout, rho: &DensityMatrix) -> Vec<f64> {
    l.blocks()
        .map(|b| {
            (b.offset..b.offset + b.len)
                .map(|p| rho.data()[(p, p)].re)
                .sum::<f64>()
        })
        .collect()
}

fn report_state_invariants(
    c: &mut Criterion,
    l: &BlockLayout,
    rho: &DensityMatrix,
    weights0: &[f64],
    context: &str,
) {
    let data = rho.data();
    let trace_drift = (data.trace() - num_complex::Complex64::new(1.0, 0.0)).norm();
    c.check(trace_drift <= 1e-10, || {
        format!("{context}: trace drift {trace_drift}")
    });
    let hermiticity = hermiticity_deviation(data);
    c.check(hermiticity <= 1e-12, || {
        format!("{context}: Hermiticity deviation {hermiticity}")
    });
    let min_eig = min_hermitian_eigenvalue(data);
    c.check(min_eig >= -1e-8, || {
        format!("{context}: min eigenvalue {min_eig}")
    });
    for (bw, w0) in block_weights(l, rho).iter().zip(weights0) {
        c.check((bw - w0).abs() <= 1e-9, || {
            format!("{context}: block weight {bw} vs {w0}")
        });
    }
}

fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            max = max.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    max
}

fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    nalgebra::linalg::SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}
