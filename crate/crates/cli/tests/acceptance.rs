//! Acceptance gate: one line per criterion, then a single assertion.
//!
//! Run with `cargo test -p crossnorm-cli --test acceptance -- --nocapture`
//! to see the report.

use std::process::Command;
use std::time::{Duration, Instant};

use crossnorm::oracle::{grid_injective, random_decomposition_search, svd_nuclear, svd_spectral};
use crossnorm::rng::{gaussian_matrix, gaussian_vector, seeded};
use crossnorm::verify::{
    check_prop_32_dual_bound, check_theorem_41, equivalence_ratio, ComparisonStatus,
};
use crossnorm::{
    induced_crossnorm, injective_norm, projective_norm, Budget, CrossnormTag, Direction, Exponent,
    InducedNormSpec, LpSpace, OperatorSpaces, OperatorTensor, Tensor, Verdict, Witness,
};
use crossnorm_cli::config::Format;
use crossnorm_cli::runner::{run, TrialRecord};
use crossnorm_cli::{Suite, SuiteConfig};
use ndarray::Array2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn l2(n: usize) -> LpSpace {
    LpSpace::l2(n).unwrap()
}

fn config(suite: Suite, trials: usize, seed: u64, tol: f64) -> SuiteConfig {
    SuiteConfig {
        suite,
        dims: None,
        p_values: None,
        tags: None,
        trials,
        seed,
        restarts: 32,
        max_iters: 200,
        tol,
        out: None,
        format: Format::Json,
    }
}

fn violations(records: &[TrialRecord]) -> usize {
    records
        .iter()
        .filter(|r| r.record.verdict == Verdict::Violated)
        .count()
}

fn verdict_counts(records: &[TrialRecord]) -> String {
    let count = |v| records.iter().filter(|r| r.record.verdict == v).count();
    format!(
        "holds {} slack {} inconclusive {} violated {}",
        count(Verdict::Holds),
        count(Verdict::HoldsWithSlack),
        count(Verdict::Inconclusive),
        count(Verdict::Violated)
    )
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

fn sandwich() -> Outcome {
    let start = Instant::now();
    let recs = run(&config(Suite::Sandwich, 200, 1, 1e-6)).unwrap();
    let elapsed = start.elapsed();
    let bad = violations(&recs);
    let max_dim = recs
        .iter()
        .flat_map(|r| r.record.dims.iter().copied())
        .max()
        .unwrap_or(0);
    outcome(
        recs.len() == 200 && bad == 0 && max_dim <= 4 && elapsed < Duration::from_secs(60),
        format!(
            "{} records, {}, {}",
            recs.len(),
            verdict_counts(&recs),
            secs(elapsed)
        ),
    )
}

fn uniform_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(2);
    let mut worst = 0.0f64;
    let shapes = [
        [2, 2, 2, 2],
        [2, 3, 3, 2],
        [3, 3, 3, 3],
        [4, 3, 2, 4],
        [4, 4, 4, 4],
        [1, 4, 3, 1],
    ];
    for t in 0..100 {
        let [x, y, v, w] = shapes[t % shapes.len()];
        let sp = OperatorSpaces::new(l2(x), l2(y), l2(v), l2(w));
        let a = gaussian_matrix::<f64, _>(&mut rng, v, x);
        let b = gaussian_matrix::<f64, _>(&mut rng, w, y);
        let want = svd_spectral(a.view()) * svd_spectral(b.view());
        let l = OperatorTensor::single(a, b, sp).unwrap();
        let e = induced_crossnorm(
            &l,
            InducedNormSpec::uniform(CrossnormTag::Hilbertian),
            &Budget::default(),
        )
        .unwrap();
        let err = if e.direction == Direction::Exact {
            (e.value - want).abs()
        } else {
            f64::INFINITY
        };
        worst = worst.max(err);
    }
    let elapsed = start.elapsed();
    let cli = run(&config(Suite::UniformIdentity, 100, 2, 1e-8)).unwrap();
    let cli_bad = cli
        .iter()
        .filter(|r| r.record.verdict != Verdict::Holds)
        .count();
    let elapsed_all = start.elapsed();
    outcome(
        worst <= 1e-8 && cli_bad == 0 && elapsed_all < Duration::from_secs(30),
        format!(
            "max |induced - product| {worst:.2e}, suite non-holds {cli_bad}/100, {} (+suite {})",
            secs(elapsed),
            secs(elapsed_all - elapsed)
        ),
    )
}

fn random_operator(
    rng: &mut crossnorm::rng::SeededRng,
    terms: usize,
    sp: OperatorSpaces,
) -> OperatorTensor<f64> {
    let (a, b) = (sp.a_shape(), sp.b_shape());
    let t = (0..terms)
        .map(|_| {
            (
                gaussian_matrix(rng, a.0, a.1),
                gaussian_matrix(rng, b.0, b.1),
            )
        })
        .collect();
    OperatorTensor::new(t, sp).unwrap()
}

const OP_SHAPES: [[usize; 4]; 4] = [[2, 2, 2, 2], [2, 3, 3, 2], [3, 3, 3, 3], [1, 2, 3, 2]];

fn theorem41() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(3);
    let (mut bad, mut worst_point, mut worst_single, mut uncertified) =
        (0, f64::INFINITY, 0.0f64, 0);
    for t in 0..50 {
        let [x, y, v, w] = OP_SHAPES[t % OP_SHAPES.len()];
        let sp = OperatorSpaces::new(l2(x), l2(y), l2(v), l2(w));
        let terms = 1 + t % 3;
        let l = random_operator(&mut rng, terms, sp);
        let budget = Budget::default().with_seed(t as u64);
        let rec = check_theorem_41(&l, CrossnormTag::Hilbertian, &budget, 1e-6).unwrap();
        if rec.verdict == Verdict::Violated {
            bad += 1;
        }
        for c in &rec.comparisons {
            match c.status {
                ComparisonStatus::Certified | ComparisonStatus::CertifiedWithinTol => {
                    worst_point = worst_point.min(c.certified_slack.unwrap())
                }
                ComparisonStatus::Uncertified => uncertified += 1,
                ComparisonStatus::Violated => {}
            }
            worst_point = worst_point.min(c.slack);
        }
        if terms == 1 {
            let (a, b) = &l.terms()[0];
            let want = svd_spectral(a.view()) * svd_spectral(b.view());
            for s in &rec.sides {
                worst_single = worst_single.max((s.value - want).abs());
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad == 0 && worst_point >= -1e-6 && worst_single <= 1e-4 && elapsed < Duration::from_secs(300),
        format!(
            "violations {bad}, worst slack {worst_point:.2e}, single-term spread {worst_single:.2e}, \
             uncertified comparisons {uncertified}, {}",
            secs(elapsed)
        ),
    )
}

/// Ratio of two singular-value norms of `f` by the Jacobi oracle.
fn sv_ratio(f: &Array2<f64>, num: fn(&[f64]) -> f64, den: fn(&[f64]) -> f64) -> f64 {
    let s = crossnorm::oracle::singular_values(f.view());
    num(&s) / den(&s)
}

fn nuclear(s: &[f64]) -> f64 {
    s.iter().sum()
}

fn frobenius(s: &[f64]) -> f64 {
    s.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn spectral(s: &[f64]) -> f64 {
    s[0]
}

fn witness_matrix(e: &crossnorm::NormEstimate<f64>) -> Option<Array2<f64>> {
    match &e.witness {
        Some(Witness::Matrix(f)) => Some(f.clone()),
        _ => None,
    }
}

fn ratio_constants() -> Outcome {
    let x = l2(2);
    let b = Budget::default().with_seed(4);
    let sup = equivalence_ratio::<f64>(
        CrossnormTag::Projective,
        CrossnormTag::Hilbertian,
        &x,
        &x,
        &b,
    )
    .unwrap();
    let inv = equivalence_ratio::<f64>(
        CrossnormTag::Hilbertian,
        CrossnormTag::Injective,
        &x,
        &x,
        &b,
    )
    .unwrap();
    let inf = 1.0 / inv.value;
    let r2 = 2f64.sqrt();
    let w_sup = witness_matrix(&sup).map(|f| sv_ratio(&f, nuclear, frobenius));
    let w_inf = witness_matrix(&inv).map(|f| 1.0 / sv_ratio(&f, frobenius, spectral));
    let ok_sup =
        (sup.value - r2).abs() <= 1e-3 && w_sup.is_some_and(|w| (w - sup.value).abs() <= 1e-6);
    let ok_inf = (inf - 1.0 / r2).abs() <= 1e-3 && w_inf.is_some_and(|w| (w - inf).abs() <= 1e-6);
    let recs = run(&config(Suite::Corollary44, 50, 4, 1e-6)).unwrap();
    let certified = recs
        .iter()
        .filter(|r| matches!(r.record.verdict, Verdict::Holds | Verdict::HoldsWithSlack))
        .count();
    outcome(
        ok_sup && ok_inf && certified == recs.len(),
        format!(
            "sup(proj/hilb) {:.6} [{}], inf(inj/hilb) {:.6}, witnesses {:?}/{:?}, chain {certified}/{} certified ({})",
            sup.value,
            sup.direction,
            inf,
            w_sup.map(|w| format!("{w:.6}")),
            w_inf.map(|w| format!("{w:.6}")),
            recs.len(),
            verdict_counts(&recs)
        ),
    )
}

fn gamma() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [2usize, 3] {
        let x = l2(n);
        let e = equivalence_ratio::<f64>(
            CrossnormTag::Projective,
            CrossnormTag::Injective,
            &x,
            &x,
            &Budget::default(),
        )
        .unwrap();
        let id = sv_ratio(&Array2::eye(n), nuclear, spectral);
        let w = witness_matrix(&e).map(|f| sv_ratio(&f, nuclear, spectral));
        let ok = e.value >= n as f64 - 1e-3 && w.is_some_and(|w| (w - id).abs() <= 1e-3);
        pass &= ok;
        detail.push(format!(
            "n={n}: {:.6} witness {:?}",
            e.value,
            w.map(|w| format!("{w:.6}"))
        ));
    }
    outcome(pass, detail.join(", "))
}

/// Closed form of the injective norm when both factors are `ℓ2` or one is
/// `ℓ∞` (largest row or column norm) or `ℓ1` (largest signed row or column sum).
fn injective_closed(t: &Tensor<f64>) -> Option<f64> {
    let f = t.entries();
    let (xp, yp) = (t.x_space().p(), t.y_space().p());
    let norm = |v: ndarray::ArrayView1<f64>, p: Exponent| {
        crossnorm::vector_norm(v, &LpSpace::new(v.len(), p).unwrap()).unwrap()
    };
    let signed_sums = |m: ndarray::ArrayView2<f64>, p: Exponent| {
        (0..1usize << m.nrows())
            .map(|mask| {
                let signs = ndarray::Array1::from_shape_fn(m.nrows(), |i| {
                    if mask >> i & 1 == 1 {
                        -1.0
                    } else {
                        1.0
                    }
                });
                norm(signs.dot(&m).view(), p)
            })
            .fold(0.0, f64::max)
    };
    if xp.is_two() && yp.is_two() {
        Some(svd_spectral(f.view()))
    } else if xp == Exponent::INF {
        Some(
            f.rows()
                .into_iter()
                .map(|r| norm(r, yp))
                .fold(0.0, f64::max),
        )
    } else if yp == Exponent::INF {
        Some(
            f.columns()
                .into_iter()
                .map(|c| norm(c, xp))
                .fold(0.0, f64::max),
        )
    } else if xp == Exponent::ONE {
        Some(signed_sums(f.view(), yp))
    } else if yp == Exponent::ONE {
        Some(signed_sums(f.t(), xp))
    } else {
        None
    }
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let ps = [
        Exponent::ONE,
        Exponent::Finite(1.5),
        Exponent::TWO,
        Exponent::Finite(3.0),
        Exponent::INF,
    ];
    let mut rng = seeded(6);
    let (mut worst_grid, mut worst_closed, mut worst_proj) =
        (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut closed = 0;
    for t in 0..50usize {
        let p = ps[t % 5];
        let (n, m) = (1 + (t / 5) % 3, 1 + (t / 15 + t) % 3);
        let t_ = Tensor::new(
            gaussian_matrix::<f64, _>(&mut rng, n, m),
            LpSpace::new(n, p).unwrap(),
            LpSpace::new(m, p).unwrap(),
        )
        .unwrap();
        let b = Budget::default().with_seed(t as u64);
        let inj = injective_norm(&t_, &b);
        let grid = grid_injective(&t_, 400).unwrap().value;
        worst_grid = worst_grid.max(grid - inj.value);
        if let Some(c) = injective_closed(&t_) {
            worst_closed = worst_closed.max(inj.value - c);
            closed += 1;
        }
        let proj = projective_norm(&t_, &b);
        if proj.direction == Direction::UpperBound || proj.direction == Direction::Exact {
            let rs = random_decomposition_search(&t_, 10_000, t as u64)
                .unwrap()
                .value;
            worst_proj = worst_proj.max(proj.value - rs);
        }
    }
    outcome(
        worst_grid <= 1e-9 && worst_closed <= 1e-9 && worst_proj <= 1e-9,
        format!(
            "max(grid - inj) {worst_grid:.2e}, max(inj - closed) {worst_closed:.2e} over {closed}, \
             max(proj - search) {worst_proj:.2e}, {}",
            secs(start.elapsed())
        ),
    )
}

fn low_rank(
    rng: &mut crossnorm::rng::SeededRng,
    rank: usize,
    shape: (usize, usize),
) -> Array2<f64> {
    let mut m = Array2::zeros(shape);
    for _ in 0..rank {
        let u = gaussian_vector::<f64, _>(rng, shape.0);
        let v = gaussian_vector::<f64, _>(rng, shape.1);
        m += &Array2::from_shape_fn(shape, |(i, j)| u[i] * v[j]);
    }
    m
}

fn prop32() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded(7);
    let (mut worst, mut bad) = (f64::NEG_INFINITY, 0);
    for t in 0..50usize {
        let [x, y, v, w] = OP_SHAPES[t % OP_SHAPES.len()];
        let sp = OperatorSpaces::new(l2(x), l2(y), l2(v), l2(w));
        let phi = low_rank(&mut rng, 1 + t % 2, sp.a_shape());
        let eta = low_rank(&mut rng, 1 + t % 2, sp.b_shape());
        let bound = svd_nuclear(phi.view()) * svd_nuclear(eta.view());
        let budget = Budget::default().with_seed(t as u64);
        let rec =
            check_prop_32_dual_bound(&phi, &eta, &sp, CrossnormTag::Hilbertian, &budget, 1e-5)
                .unwrap();
        if rec.verdict == Verdict::Violated {
            bad += 1;
        }
        worst = worst.max(rec.sides[0].value - bound);
    }
    outcome(
        worst <= 1e-5 && bad == 0,
        format!(
            "max(lhs - nuclear product) {worst:.2e}, violations {bad}, {}",
            secs(start.elapsed())
        ),
    )
}

fn remark_chain() -> Outcome {
    let start = Instant::now();
    let recs = run(&config(Suite::RemarkChain, 30, 8, 1e-5)).unwrap();
    let bad = violations(&recs);
    outcome(
        bad == 0,
        format!("{}, {}", verdict_counts(&recs), secs(start.elapsed())),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("run{i}.json"));
            let status = Command::new(env!("CARGO_BIN_EXE_crossnorm"))
                .args(["--suite", "all", "--seed", "42", "--out"])
                .arg(&path)
                .output()
                .unwrap()
                .status;
            assert!(status
                .code()
                .is_some_and(|c| c == 0 || c == crossnorm_cli::EXIT_VIOLATION));
            let v: serde_json::Value =
                serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
            serde_json::to_vec(&v["records"]).unwrap()
        })
        .collect();
    outcome(
        runs[0] == runs[1] && !runs[0].is_empty(),
        format!("{} bytes of records", runs[0].len()),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 sandwich", sandwich),
        ("2 uniform identity", uniform_identity),
        ("3 operator-space chain", theorem41),
        ("4 hilbertian ratio constants", ratio_constants),
        ("5 projective/injective constant", gamma),
        ("6 oracle agreement", oracle_agreement),
        ("7 functional tensor bound", prop32),
        ("8 mixed induced chain", remark_chain),
        ("9 determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let o = f();
        println!(
            "[{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
