//! Acceptance criteria, run sequentially so the timing criterion is not
//! disturbed by concurrent work. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treeloss::bench::{bench_instance, log_log_slope, time_method};
use treeloss::greedy::threshold_descent;
use treeloss::loss::edge_ratio;
use treeloss::{
    bayes_optimal_bruteforce, bayes_optimal_fast, bayes_optimal_greedy, check_conditions, risk,
    risk_all_nodes_fast, symmetrize, tree_distance, validate_assumptions, GenSpec, Hierarchy,
    Label, Method, ProbVector, SubtreeStats, WeightMode,
};

const RISK_TOL: f64 = 1e-9;
const RATIO_TOL: f64 = 1e-12;
const CONCENTRATIONS: [f64; 3] = [0.3, 1.0, 3.0];

const T5A: &str = "\
n 5 root 1
edge 1 2 1.0 1.0
edge 1 3 1.0 1.0
edge 2 4 1.0 0.5
edge 2 5 1.0 0.5
";

const STAR3: &str = "n 3 root 1\nedge 1 2 1 1\nedge 1 3 1 1\n";

struct Instance {
    label: String,
    mode: WeightMode,
    h: Hierarchy<f64>,
    p: ProbVector<f64>,
}

/// `count` seeded instances with n in [2, 300] and k in [1, 5]. `modes` is
/// cycled; concentrations cycle every `modes.len()` instances.
fn instances(master_seed: u64, count: usize, modes: &[WeightMode]) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(2..=300);
            let k = rng.random_range(1..=5);
            let seed: u64 = rng.random();
            let mode = modes[i % modes.len()];
            let conc = CONCENTRATIONS[(i / modes.len()) % CONCENTRATIONS.len()];
            let h = treeloss::random_tree(&GenSpec::new(n, k, seed, mode)).unwrap();
            let p = treeloss::random_simplex(n, seed, conc).unwrap();
            Instance {
                label: format!("#{i} n={n} k={k} {mode} c={conc} seed={seed}"),
                mode,
                h,
                p,
            }
        })
        .collect()
}

fn mixed_set() -> Vec<Instance> {
    instances(0xACCE_0001, 500, &WeightMode::ALL)
}

fn valid_set() -> Vec<Instance> {
    instances(0xACCE_0002, 500, &[WeightMode::AsymmetricValid])
}

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < budget, || {
        format!("took {took:.1?}, budget {budget:?}")
    })
}

fn rho(h: &Hierarchy<f64>, y: Label) -> f64 {
    edge_ratio(h, y).unwrap().rho
}

// 1
fn oracle_equivalence_fast() -> Verdict {
    let start = Instant::now();
    let set = mixed_set();
    let mut worst: f64 = 0.0;
    for inst in &set {
        let oracle = bayes_optimal_bruteforce(&inst.h, &inst.p).unwrap();
        let st = SubtreeStats::compute(&inst.h, &inst.p).unwrap();
        let fast = risk_all_nodes_fast(&inst.h, &inst.p, &st).unwrap();
        for (y, (a, b)) in fast.iter().zip(oracle.risks()).enumerate() {
            let diff = (a - b).abs();
            worst = worst.max(diff);
            ensure(diff <= RISK_TOL, || {
                format!("{}: node {} fast {a} vs oracle {b}", inst.label, y + 1)
            })?;
        }
        let pred = bayes_optimal_fast(&inst.h, &inst.p).unwrap();
        ensure(oracle.contains(pred.node), || {
            format!(
                "{}: fast node {} not in {:?}",
                inst.label,
                pred.node,
                oracle.argmin_set()
            )
        })?;
    }
    within_budget(start, Duration::from_secs(30))?;
    Ok(format!("{} instances, max |diff| {worst:.2e}", set.len()))
}

// 2
fn oracle_equivalence_greedy() -> Verdict {
    let start = Instant::now();
    let set = valid_set();
    for inst in &set {
        let oracle = bayes_optimal_bruteforce(&inst.h, &inst.p).unwrap();
        let pred = bayes_optimal_greedy(&inst.h, &inst.p).unwrap();
        ensure(oracle.contains(pred.node), || {
            format!(
                "{}: greedy node {} not in {:?}",
                inst.label,
                pred.node,
                oracle.argmin_set()
            )
        })?;
        let cert = check_conditions(&inst.h, &inst.p, pred.node).unwrap();
        ensure(cert.is_valid(), || {
            format!(
                "{}: certificate invalid for {}: {cert:?}",
                inst.label, pred.node
            )
        })?;
    }
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!("{} instances", set.len()))
}

/// Nodes that must lie outside the argmin set: a non-root node whose mass is
/// below its threshold, or any node with a strict descendant above its own.
fn excluded_nodes(
    h: &Hierarchy<f64>,
    st: &SubtreeStats<f64>,
    threshold: impl Fn(Label) -> f64,
) -> Vec<bool> {
    let mut out = vec![false; h.len() + 1];
    for y in h.labels().filter(|&y| y != h.root()) {
        let t = threshold(y);
        if st.mass(y) < t - RISK_TOL {
            out[y] = true;
        }
        if st.mass(y) > t + RISK_TOL {
            for a in h.ancestors(y) {
                out[a] = true;
            }
        }
    }
    out
}

// 3
fn necessity() -> Verdict {
    let mut checked = (0usize, 0usize);
    for inst in mixed_set().iter().filter(|i| i.mode.is_symmetric()) {
        let st = SubtreeStats::compute(&inst.h, &inst.p).unwrap();
        let oracle = bayes_optimal_bruteforce(&inst.h, &inst.p).unwrap();
        let excluded = excluded_nodes(&inst.h, &st, |_| 0.5);
        for y in inst.h.labels().filter(|&y| excluded[y]) {
            checked.0 += 1;
            ensure(!oracle.contains(y), || {
                format!("{}: symmetric node {y} is optimal", inst.label)
            })?;
        }
    }
    for inst in &valid_set() {
        let st = SubtreeStats::compute(&inst.h, &inst.p).unwrap();
        let oracle = bayes_optimal_bruteforce(&inst.h, &inst.p).unwrap();
        let excluded = excluded_nodes(&inst.h, &st, |y| rho(&inst.h, y));
        for y in inst.h.labels().filter(|&y| excluded[y]) {
            checked.1 += 1;
            ensure(!oracle.contains(y), || {
                format!("{}: asymmetric node {y} is optimal", inst.label)
            })?;
        }
    }
    Ok(format!(
        "{} symmetric and {} asymmetric exclusions confirmed",
        checked.0, checked.1
    ))
}

// 4
fn recurrence_identity() -> Verdict {
    let set = mixed_set();
    for inst in &set {
        let st = SubtreeStats::compute(&inst.h, &inst.p).unwrap();
        let direct = risk(&inst.h, &inst.p, inst.h.root()).unwrap();
        let k = st.descendant_loss(inst.h.root());
        ensure((k - direct).abs() <= RISK_TOL, || {
            format!("{}: K[root] {k} vs risk(root) {direct}", inst.label)
        })?;
    }
    let small: Vec<&Instance> = set.iter().filter(|i| i.h.len() <= 200).take(50).collect();
    ensure(small.len() == 50, || {
        format!("only {} small instances", small.len())
    })?;
    for inst in &small {
        let h = &inst.h;
        let st = SubtreeStats::compute(h, &inst.p).unwrap();
        for y in h.labels() {
            let direct: f64 = h
                .labels()
                .filter(|&i| h.is_ancestor_or_self(y, i))
                .map(|i| inst.p.get(i) * tree_distance(h, i, y).unwrap())
                .sum();
            let k = st.descendant_loss(y);
            ensure((k - direct).abs() <= RISK_TOL, || {
                format!("{}: K[{y}] {k} vs direct {direct}", inst.label)
            })?;
        }
    }
    Ok(format!(
        "{} root identities, {} full K tables",
        set.len(),
        small.len()
    ))
}

// 5
fn monotone_margin() -> Verdict {
    let mut edges = 0usize;
    for inst in &valid_set() {
        let h = &inst.h;
        ensure(validate_assumptions(h).holds, || {
            format!("{}: assumptions fail", inst.label)
        })?;
        let st = SubtreeStats::compute(h, &inst.p).unwrap();
        for y in h.labels().filter(|&y| y != h.root()) {
            let r = rho(h, y);
            ensure(r >= 0.5 - RATIO_TOL, || {
                format!("{}: rho({y}) = {r} < 1/2", inst.label)
            })?;
            let parent = h.parent(y).unwrap();
            if parent != h.root() {
                edges += 1;
                let upper = st.mass(parent) - rho(h, parent);
                let lower = st.mass(y) - r;
                ensure(lower <= upper + RATIO_TOL, || {
                    format!(
                        "{}: margin rises from {upper} at {parent} to {lower} at {y}",
                        inst.label
                    )
                })?;
            }
        }
    }
    Ok(format!("{edges} parent-child margin pairs non-increasing"))
}

// 6
fn complexity_separation() -> Verdict {
    let start = Instant::now();
    let sizes: Vec<usize> = vec![1 << 10, 1 << 12, 1 << 14, 1 << 16];
    let min_sample = Duration::from_millis(5);
    let mut fast = Vec::new();
    let mut greedy = Vec::new();
    let mut brute = Vec::new();
    for &n in &sizes {
        let (h, p) = bench_instance(n, 2, 7).unwrap();
        fast.push((n as f64, time_method(&h, &p, Method::Fast, 7, min_sample)));
        greedy.push((n as f64, time_method(&h, &p, Method::Greedy, 7, min_sample)));
        if n <= 1 << 14 {
            brute.push((
                n as f64,
                time_method(&h, &p, Method::Bruteforce, 3, min_sample),
            ));
        }
    }
    let (sf, sg, sb) = (
        log_log_slope(&fast),
        log_log_slope(&greedy),
        log_log_slope(&brute),
    );
    let detail = format!(
        "slopes fast {sf:.3} (<= 1.35), greedy {sg:.3} (<= 0.5), bruteforce {sb:.3} (>= 1.7)"
    );
    ensure(sf <= 1.35 && sg <= 0.5 && sb >= 1.7, || detail.clone())?;
    within_budget(start, Duration::from_secs(120))?;
    Ok(detail)
}

// 7
fn method_separation() -> Verdict {
    let h: Hierarchy<f64> = T5A.parse().unwrap();
    let p = ProbVector::new(vec![0.0, 0.05, 0.1, 0.6, 0.25]).unwrap();
    let native = bayes_optimal_greedy(&h, &p).unwrap();
    let sym = bayes_optimal_fast(&symmetrize(&h), &p).unwrap();
    ensure(native.node == 2, || {
        format!("greedy on native picked {}", native.node)
    })?;
    ensure(sym.node == 4, || {
        format!("fast on symmetrized picked {}", sym.node)
    })?;
    let (r2, r4) = (risk(&h, &p, 2).unwrap(), risk(&h, &p, 4).unwrap());
    ensure(r4 - r2 > 0.0, || {
        format!("asymmetric risk(2) {r2} not below risk(4) {r4}")
    })?;

    let set = instances(0xACCE_0007, 200, &[WeightMode::AsymmetricValid]);
    let (mut greedy_total, mut sym_total) = (0.0, 0.0);
    for inst in &set {
        let g = bayes_optimal_greedy(&inst.h, &inst.p).unwrap();
        let s = bayes_optimal_fast(&symmetrize(&inst.h), &inst.p).unwrap();
        greedy_total += g.risk;
        sym_total += risk(&inst.h, &inst.p, s.node).unwrap();
    }
    let m = set.len() as f64;
    let (mg, ms) = (greedy_total / m, sym_total / m);
    ensure(mg <= ms, || {
        format!("mean greedy risk {mg} > mean symmetrized risk {ms}")
    })?;
    Ok(format!(
        "fixture margin risk(4) - risk(2) = {:.4}; mean asymmetric risk greedy {mg:.4} vs symmetrized {ms:.4}",
        r4 - r2
    ))
}

// 8
fn tie_semantics() -> Verdict {
    let h: Hierarchy<f64> = STAR3.parse().unwrap();
    let p = ProbVector::new(vec![0.2, 0.5, 0.3]).unwrap();
    let oracle = bayes_optimal_bruteforce(&h, &p).unwrap();
    ensure(oracle.argmin_set() == [1, 2], || {
        format!("argmin set {:?}", oracle.argmin_set())
    })?;
    ensure((oracle.min_risk() - 0.8).abs() <= RISK_TOL, || {
        format!("min risk {}", oracle.min_risk())
    })?;
    let fast = bayes_optimal_fast(&h, &p).unwrap();
    ensure(fast.node == 1, || format!("fast picked {}", fast.node))?;
    let st = SubtreeStats::compute(&h, &p).unwrap();
    let descent = threshold_descent(&h, &st, &mut ()).node;
    ensure(descent == 2, || {
        format!("threshold descent picked {descent}")
    })?;
    for y in [fast.node, descent] {
        ensure(oracle.contains(y), || format!("{y} not in argmin set"))?;
        ensure(check_conditions(&h, &p, y).unwrap().is_valid(), || {
            format!("{y} not certified")
        })?;
    }
    Ok("argmin {1, 2} at 0.8; fast -> 1, descent -> 2, both certified".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence, fast", oracle_equivalence_fast),
        ("oracle equivalence, greedy", oracle_equivalence_greedy),
        ("necessity suite", necessity),
        ("recurrence identity", recurrence_identity),
        ("monotone margin", monotone_margin),
        ("complexity separation", complexity_separation),
        ("method separation", method_separation),
        ("tie semantics", tie_semantics),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = panic::catch_unwind(check)
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>())));
        let took = start.elapsed();
        match verdict {
            Ok(detail) => println!("PASS  {}. {name}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
