//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured runtime (visible with `cargo test -- --nocapture`). Runtime
//! budgets are asserted, not just reported.

use iteral_core::collatz::{even_strip, odd_run_endpoint, odd_transition, step, Step, StepOp};
use iteral_core::dsl::{eval, parse, Env, Expr};
use iteral_core::dynamics::{
    escape_time, lorenz_rhs, lorenz_step, lorenz_trajectory, render_grid, EscapeParams,
    FractalKind, GridSpec, LorenzParams, LorenzState,
};
use iteral_core::rng::SplitMix64;
use iteral_core::sieve::{classify, equivalent, sieve_oracle, ResidueClass, SubseqName};
use iteral_core::{Complex64, ConvergencePolicy, IterCount, IterOutcome, Natural, Scalar};
use num_traits::{One, Pow};
use std::time::{Duration, Instant};

fn nat(n: u64) -> Natural {
    Natural::from(n)
}

fn finish(criterion: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "{criterion}: runtime {elapsed:?} exceeds the {budget:?} budget"
    );
    println!("ACCEPTANCE {criterion} PASS ({elapsed:?})");
}

/// Appendix run reproduced through the CLI: `oneness 9 3`.
#[test]
fn c01_appendix_reproduction() {
    const GOLDEN: &str = r#" 0  9 IN  100 EO : 4p + 1 : (k=0, p=2) : 9
 1 14 3X  112 EO3E : 32p + 14 : (m=0, l=3, p=0) : 14
 2  7 D2   21 EO2O : 16p + 7 : (k=2, p=0) : 7
 3 11 3X  102 EO1O : 8p + 3 : (k=1, p=1) : 11
 4 17 3X  122 EO : 4p + 1 : (k=0, p=4) : 17
 5 26 3X  222 EOE : 8p + 2 : (m=0, l=1, p=3) : 26
 6 13 D2  111 EO : 4p + 1 : (k=0, p=3) : 13
 7 20 3X  202 EOE1E : 16p + 4 : (m=1, l=1, p=1) : 20
 8 10 D2  101 EOE : 8p + 2 : (m=0, l=1, p=1) : 10
 9  5 D2   12 EO : 4p + 1 : (k=0, p=1) : 5
10  8 3X   22 EOE2E : 32p + 8 : (m=2, l=1, p=0) : 8
11  4 D2   11 EOE1E : 16p + 4 : (m=1, l=1, p=0) : 4
12  2 D2    2 EOE : 8p + 2 : (m=0, l=1, p=0) : 2
13  1 D2    1 EO : 4p + 1 : (k=0, p=0) : 1
"#;
    let started = Instant::now();
    let argv: Vec<String> = ["iteral", "oneness", "9", "3"].map(String::from).to_vec();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = iteral_cli::run(&argv, &mut out, &mut err);
    let elapsed_run = started.elapsed();
    assert_eq!(code, 0);
    let out = String::from_utf8(out).unwrap();
    assert_eq!(out.lines().count(), 14);
    let got: Vec<Vec<&str>> = out
        .lines()
        .map(|l| l.split_whitespace().collect())
        .collect();
    let want: Vec<Vec<&str>> = GOLDEN
        .lines()
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(got, want, "token sequences differ from the table");

    // The --exact mode goes further: byte-for-byte.
    let argv: Vec<String> = ["iteral", "oneness", "9", "3", "--exact"]
        .map(String::from)
        .to_vec();
    let mut exact = Vec::new();
    assert_eq!(iteral_cli::run(&argv, &mut exact, &mut err), 0);
    assert_eq!(String::from_utf8(exact).unwrap(), GOLDEN);

    assert!(
        elapsed_run < Duration::from_millis(100),
        "run took {elapsed_run:?}"
    );
    finish("C1", started, Duration::from_millis(200));
}

/// value_of(classify(n)) = n over 0..2^16, and the simulated sieve agrees
/// with the closed-form classifier everywhere it resolves.
#[test]
fn c02_classification_bijection_and_oracle() {
    let started = Instant::now();
    for n in 0u64..(1 << 16) {
        let n = nat(n);
        assert_eq!(classify(&n).value(), n);
    }
    let oracle = sieve_oracle(4096, 20);
    assert_eq!(
        oracle.unresolved,
        vec![0],
        "depth 20 resolves every positive n <= 4096"
    );
    for (&n, name) in &oracle.resolved {
        assert_eq!(classify(&nat(n)).name().as_ref(), Some(name), "n={n}");
    }
    finish("C2", started, Duration::from_secs(5));
}

/// The worked examples of the three-branch algorithm and equivalence.
#[test]
fn c03_paper_worked_examples() {
    let started = Instant::now();
    assert_eq!(classify(&nat(39)), ResidueClass::odd(2, 2u32));
    assert_eq!(classify(&nat(7)), ResidueClass::odd(2, 0u32));
    assert_eq!(classify(&nat(5)), ResidueClass::odd(0, 1u32));
    assert_eq!(classify(&nat(28)), ResidueClass::even(1, 3, 0u32));
    assert_eq!(classify(&nat(38)), ResidueClass::even(0, 2, 2u32));
    assert!(equivalent(&nat(7), &nat(39)));
    assert!(!equivalent(&nat(5), &nat(7)));
    assert!(!equivalent(&nat(28), &nat(38)));
    finish("C3", started, Duration::from_secs(1));
}

/// Linear forms: the tree nodes and both closed-form families.
#[test]
fn c04_linear_form_identities() {
    let started = Instant::now();
    for (name, stride, offset) in [
        ("E", 2u64, 0u64),
        ("O", 2, 1),
        ("EO", 4, 1),
        ("EOO", 8, 3),
        ("EOOO", 16, 7),
        ("EOE", 8, 2),
        ("EOEE", 16, 4),
        ("EOOOEE", 64, 28),
        ("OE", 4, 2),
        ("OOE", 8, 6),
    ] {
        let form = name.parse::<SubseqName>().unwrap().to_form();
        assert_eq!(
            (form.stride, form.offset),
            (nat(stride), nat(offset)),
            "{name}"
        );
    }
    for k in 0u64..=20 {
        let form = ResidueClass::odd(k, 0u32).name().unwrap().to_form();
        assert_eq!(form.stride, Natural::one() << (k + 2));
        assert_eq!(form.offset, (Natural::one() << (k + 1)) - 1u32);
    }
    for m in 0u64..=10 {
        for l in 1u64..=10 {
            let form = ResidueClass::even(m, l, 0u32).name().unwrap().to_form();
            assert_eq!(form.stride, Natural::one() << (m + l + 2));
            assert_eq!(form.offset, ((Natural::one() << l) - 1u32) << (m + 1));
        }
    }
    finish("C4", started, Duration::from_secs(1));
}

/// Transition laws over every odd and even number up to 10^5.
#[test]
fn c05_collatz_transition_laws() {
    let started = Instant::now();
    let three_x = |v: &Natural| (v * 3u32 + 1u32) >> 1u32;
    for n in (1u64..=100_000).step_by(2) {
        let class = classify(&nat(n));
        let ResidueClass::Odd { k, p } = class.clone() else {
            panic!("odd numbers classify odd")
        };
        // One-step law (k,p) -> (k-1, 3p+1), with the k = 0 case classified.
        if n > 1 {
            let Step::Next { value, op } = step(&nat(n)).unwrap() else {
                panic!("n > 1 cannot be terminal")
            };
            assert_eq!(op, StepOp::ThreeX);
            assert_eq!(classify(&value), odd_transition(&class), "n={n}");
        }
        // j-step pair formula and run parity.
        let mut value = nat(n);
        for j in 1..=k {
            value = three_x(&value);
            assert!(value.bit(0), "n={n} j={j}");
            let three_j = Natural::from(3u32).pow(u32::try_from(j).expect("j <= k <= 16"));
            let expected = ResidueClass::Odd {
                k: k - j,
                p: &three_j * &p + (&three_j - 1u32) / 2u32,
            };
            assert_eq!(classify(&value), expected, "n={n} j={j}");
        }
        // Endpoint after the (k+1)-th application.
        value = three_x(&value);
        assert!(!value.bit(0));
        assert_eq!(value, odd_run_endpoint(&class), "n={n}");
        assert!(value > nat(n));
    }
    for n in (2u64..=100_000).step_by(2) {
        let class = classify(&nat(n));
        let ResidueClass::Even { m, .. } = &class else {
            panic!("even numbers classify even")
        };
        let stripped = nat(n) >> (m + 1);
        assert!(stripped.bit(0), "n={n}");
        assert_eq!(classify(&stripped), even_strip(&class), "n={n}");
    }
    finish("C5", started, Duration::from_secs(10));
}

/// Evaluator goldens: exact squaring chain, the golden-ratio limit, the
/// Fibonacci-ratio splinter, and nesting vs repetition.
#[test]
fn c06_iteral_evaluator_goldens() {
    let started = Instant::now();
    let policy = ConvergencePolicy::default();
    let env = Env::new();
    let value = |src: &str, env: &Env| eval(&parse(src).unwrap(), env, &policy).unwrap();
    assert_eq!(
        value("I[x=2, n=0](x^2)", &env),
        IterOutcome::Value(Scalar::int(2))
    );
    assert_eq!(
        value("I[x=2, n=1](x^2)", &env),
        IterOutcome::Value(Scalar::int(4))
    );
    assert_eq!(
        value("I[x=2, n=2](x^2)", &env),
        IterOutcome::Value(Scalar::int(16))
    );

    match value("I[x=1, n=inf](1/(x+1))", &env) {
        IterOutcome::Converged { value, .. } => {
            assert!((value.to_f64().unwrap() - 2.0 / (1.0 + 5f64.sqrt())).abs() < 1e-10);
        }
        other => panic!("expected convergence, got {other:?}"),
    }

    // First six splinter terms of 1/(x+1) from 1: Fibonacci ratios.
    let orbit = iteral_core::splinter(
        |x: &Scalar| Scalar::int(1).div(&x.add(&Scalar::int(1))?),
        &Scalar::int(1),
        5,
    );
    let expected = [1.0, 1.0 / 2.0, 2.0 / 3.0, 3.0 / 5.0, 5.0 / 8.0, 8.0 / 13.0];
    assert_eq!(orbit.values.len(), expected.len());
    for (v, e) in orbit.values.iter().zip(expected) {
        assert!((v.to_f64().unwrap() - e).abs() <= 1e-12);
    }

    // Nesting is not repetition: 8p + 6 vs 8p + 4 for p0 in 0..=100.
    let nested = parse("I[p=2*p0+1, n=1](I[p=2*p+1, n=1](2*p))").unwrap();
    let repeated = parse("I[p=2*p0+1, n=2](2*p)").unwrap();
    for p0 in 0i64..=100 {
        let mut env = Env::new();
        env.bind("p0", Scalar::int(p0));
        assert_eq!(
            eval(&nested, &env, &policy).unwrap(),
            IterOutcome::Value(Scalar::int(8 * p0 + 6))
        );
        assert_eq!(
            eval(&repeated, &env, &policy).unwrap(),
            IterOutcome::Value(Scalar::int(8 * p0 + 4))
        );
    }
    finish("C6", started, Duration::from_secs(5));
}

/// Escape-time spot checks and the unit-disk oracle for Julia at c = 0.
#[test]
fn c07_fractal_spot_checks() {
    let started = Instant::now();
    let params = EscapeParams {
        max_iter: 1000,
        bailout: 2.0,
    };
    let zero = Complex64::new(0.0, 0.0);
    assert_eq!(escape_time(zero, zero, &params), None);
    assert_eq!(escape_time(Complex64::new(-1.0, 0.0), zero, &params), None);

    // Derived oracle for c = 1: walk the orbit 0, 1, 2, 5, 26, ... by hand
    // and find the first member beyond the bailout.
    let c = Complex64::new(1.0, 0.0);
    let mut orbit = vec![zero];
    for _ in 0..8 {
        let last = *orbit.last().unwrap();
        orbit.push(last * last + c);
    }
    assert_eq!(
        orbit[4],
        Complex64::new(26.0, 0.0),
        "orbit is 0,1,2,5,26,..."
    );
    let first_out = orbit.iter().position(|z| z.norm() > 2.0).unwrap() as u32 + 1;
    assert_eq!(first_out, 4);
    assert_eq!(escape_time(c, zero, &params), Some(4));

    // Julia(c=0) on a 256x256 grid matches the analytic unit disk on at
    // least 99% of pixels.
    let grid = GridSpec {
        re_min: -2.0,
        re_max: 2.0,
        im_min: -2.0,
        im_max: 2.0,
        width: 256,
        height: 256,
    };
    let image = render_grid(
        FractalKind::Julia(zero),
        &grid,
        &EscapeParams {
            max_iter: 100,
            bailout: 2.0,
        },
    );
    let mut agree = 0u32;
    for row in 0..grid.height {
        for col in 0..grid.width {
            let member = image.at(col, row).is_none();
            if member == (grid.point(col, row).norm() <= 1.0) {
                agree += 1;
            }
        }
    }
    assert!(f64::from(agree) / (256.0 * 256.0) >= 0.99);
    finish("C7", started, Duration::from_secs(5));
}

/// Classic fourth-order reference over `substeps` pieces of dt.
fn rk4(s0: &LorenzState, prm: &LorenzParams, dt: f64, substeps: u32) -> LorenzState {
    let h = dt / substeps as f64;
    let mut s = *s0;
    let at = |s: &LorenzState, k: &LorenzState, w: f64| {
        LorenzState::new(s.x + k.x * w, s.y + k.y * w, s.z + k.z * w)
    };
    for _ in 0..substeps {
        let k1 = lorenz_rhs(&s, prm);
        let k2 = lorenz_rhs(&at(&s, &k1, h / 2.0), prm);
        let k3 = lorenz_rhs(&at(&s, &k2, h / 2.0), prm);
        let k4 = lorenz_rhs(&at(&s, &k3, h), prm);
        s = LorenzState::new(
            s.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            s.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
        );
    }
    s
}

fn dist(a: &LorenzState, b: &LorenzState) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2) + (a.z - b.z).powi(2)).sqrt()
}

/// The double-approximation step: substep oracle, Heun identity, third-order
/// one-step error, and attractor confinement.
#[test]
fn c08_lorenz_double_approximation() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(31415);
    let random_state = |rng: &mut SplitMix64| {
        LorenzState::new(
            rng.next_f64() * 40.0 - 20.0,
            rng.next_f64() * 40.0 - 20.0,
            rng.next_f64() * 45.0,
        )
    };

    let prm = LorenzParams {
        dt: 0.01,
        ..LorenzParams::default()
    };
    for _ in 0..1000 {
        let s = random_state(&mut rng);
        // Independent two-stage evaluation of 0.5 (s + g(g(s))).
        let g = |p: &LorenzState| {
            let f = lorenz_rhs(p, &prm);
            LorenzState::new(p.x + f.x * prm.dt, p.y + f.y * prm.dt, p.z + f.z * prm.dt)
        };
        let gg = g(&g(&s));
        let oracle = LorenzState::new(0.5 * (s.x + gg.x), 0.5 * (s.y + gg.y), 0.5 * (s.z + gg.z));
        let stepped = lorenz_step(&s, &prm);
        assert!(dist(&stepped, &oracle) <= 1e-12, "substep oracle at {s:?}");

        // Heun algebraic form.
        let k1 = lorenz_rhs(&s, &prm);
        let mid = LorenzState::new(
            s.x + prm.dt * k1.x,
            s.y + prm.dt * k1.y,
            s.z + prm.dt * k1.z,
        );
        let k2 = lorenz_rhs(&mid, &prm);
        let heun = LorenzState::new(
            s.x + 0.5 * prm.dt * (k1.x + k2.x),
            s.y + 0.5 * prm.dt * (k1.y + k2.y),
            s.z + 0.5 * prm.dt * (k1.z + k2.z),
        );
        assert!(dist(&stepped, &heun) <= 1e-12, "Heun identity at {s:?}");
    }

    // Halving dt shrinks the one-step error by a factor of about 8 (third
    // order); the median factor over random states must land in [6, 10].
    let dt = 2e-3;
    let mut ratios = Vec::new();
    while ratios.len() < 200 {
        let s = random_state(&mut rng);
        let err = |dt: f64| {
            let p = LorenzParams {
                dt,
                ..LorenzParams::default()
            };
            dist(&lorenz_step(&s, &p), &rk4(&s, &p, dt, 100))
        };
        let (coarse, fine) = (err(dt), err(dt / 2.0));
        if coarse < 1e-13 || fine < 1e-15 {
            continue;
        }
        ratios.push(coarse / fine);
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = ratios[ratios.len() / 2];
    assert!(
        (6.0..=10.0).contains(&median),
        "median error ratio {median}"
    );

    // Classic-parameter trajectory stays inside the attractor box.
    let trajectory = lorenz_trajectory(
        &LorenzState::new(0.0, 1.0, 0.0),
        &LorenzParams::default(),
        10_000,
    );
    assert!(trajectory.truncated.is_none());
    assert_eq!(trajectory.states.len(), 10_001);
    for s in &trajectory.states {
        assert!(s.x.abs() < 100.0 && s.y.abs() < 100.0 && s.z.abs() < 100.0);
    }
    finish("C8", started, Duration::from_secs(5));
}

/// Seeded determinism, per-session monotonicity over 10^3 seeds, and the
/// degenerate-model golden series.
#[test]
fn c09_abc_process() {
    use iteral_core::abc::{simulate, CIncrement, IncrementModel, IntSampler, RealSampler, Tick};
    let started = Instant::now();

    let model = IncrementModel::default();
    let a = simulate(Tick::new(0.0, 1000), &model, 5, 2024).unwrap();
    let b = simulate(Tick::new(0.0, 1000), &model, 5, 2024).unwrap();
    assert_eq!(a, b, "same seed, same series");

    for seed in 0..1000 {
        let series = simulate(Tick::new(0.0, 0), &model, 2, seed).unwrap();
        for session in &series.sessions {
            for pair in session.windows(2) {
                assert!(pair[1].t > pair[0].t, "seed {seed}");
            }
        }
    }

    let degenerate = IncrementModel {
        wait: RealSampler::Const(1.0),
        b_inc: IntSampler::Const(0),
        c_inc: CIncrement {
            wait: RealSampler::Const(1.0),
            jump: IntSampler::Const(0),
        },
        n_ticks: IntSampler::Const(3),
    };
    let series = simulate(Tick::new(0.0, 100), &degenerate, 1, 9).unwrap();
    assert_eq!(
        series.sessions,
        vec![vec![
            Tick::new(1.0, 100),
            Tick::new(2.0, 100),
            Tick::new(3.0, 100)
        ]]
    );
    finish("C9", started, Duration::from_secs(5));
}

/// Deterministic expression generator for the round-trip scan.
fn gen_expr(rng: &mut SplitMix64, depth: u32) -> Expr {
    use iteral_core::dsl::{BinOp, Func};
    let vars = ["x", "y", "z", "p0", "rate"];
    if depth == 0 || rng.next_u64().is_multiple_of(4) {
        return match rng.next_u64() % 4 {
            0 => Expr::Num(Scalar::int((rng.next_u64() % 10_000) as i64)),
            1 => {
                // Positive dyadic rationals round-trip exactly through text.
                let mantissa = (rng.next_u64() % (1 << 20)) as f64;
                Expr::Num(Scalar::Real(mantissa / 1024.0))
            }
            2 => Expr::Num(Scalar::imaginary_unit()),
            _ => Expr::var(vars[(rng.next_u64() % vars.len() as u64) as usize]),
        };
    }
    match rng.next_u64() % 7 {
        0 => Expr::negate(gen_expr(rng, depth - 1)),
        1..=3 => {
            let ops = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow];
            let op = ops[(rng.next_u64() % 5) as usize];
            Expr::binary(op, gen_expr(rng, depth - 1), gen_expr(rng, depth - 1))
        }
        4 => {
            let func = Func::ALL[(rng.next_u64() % 5) as usize];
            Expr::call(func, gen_expr(rng, depth - 1))
        }
        _ => {
            let count = match rng.next_u64() % 5 {
                0 => IterCount::Unbounded,
                k => IterCount::Finite(k),
            };
            let var = ["x", "k", "v"][(rng.next_u64() % 3) as usize];
            Expr::iteral(
                var,
                gen_expr(rng, depth - 1),
                count,
                gen_expr(rng, depth - 1),
            )
        }
    }
}

/// Round trip over 10^4 generated trees, plus the mixed-environment check.
#[test]
fn c10_dsl_round_trip_and_mixed_expression() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(161803);
    for i in 0..10_000 {
        let expr = gen_expr(&mut rng, 5);
        let text = expr.to_string();
        let back =
            parse(&text).unwrap_or_else(|e| panic!("case {i}: `{text}` reparse failed: {e}"));
        assert_eq!(back, expr, "case {i}: `{text}`");
    }

    let quarter_pi = std::f64::consts::FRAC_PI_4;
    let mut env = Env::new();
    env.bind("x", Scalar::Real(quarter_pi));
    env.bind("y", Scalar::Real(quarter_pi));
    let out = eval(
        &parse("cos(x)^2 + I[x=y, n=2](sin(x))").unwrap(),
        &env,
        &ConvergencePolicy::default(),
    )
    .unwrap();
    let got = out.value().unwrap().to_f64().unwrap();
    let expected = 0.5 + (2f64.sqrt() / 2.0).sin();
    assert!((got - expected).abs() < 1e-12);
    finish("C10", started, Duration::from_secs(5));
}
