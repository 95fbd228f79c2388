//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails or runs over its time budget.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fairdiv_cli::run;
use fairdiv_core::allocate::{ef1_identical, ratio_order, round_robin, two_agent_split, AgentOrder};
use fairdiv_core::hardness::{check_equivalence, random_bounded_graph};
use fairdiv_core::matching::{
    alpha_round, build_bucketed_graph, copy_preference_violations, ef1_po_alpha, ef1_po_restricted_detailed,
    max_weight_perfect_matching, Alpha, BucketedGraph,
};
use fairdiv_core::model::{
    brute_force_min_payments, brute_force_po_check, random_allocation, random_instance, InstanceParams,
};
use fairdiv_core::pram::{bitonic_sort, par_reduce, transitive_closure, BoolMatrix, Sum};
use fairdiv_core::subsidy::{constrained_payments, envy_eliminating_payments, PaymentOutcome};
use fairdiv_core::verify::{check_ef, check_ef1, check_efx};
use fairdiv_core::{Allocation, Instance, PaymentConstraint, PaymentVector, ValuationClass};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tempfile::TempDir;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("worked example payments", 1, worked_example),
        ("checkers agree with definitions", 30, checker_equivalence),
        ("restricted matching guarantees", 120, restricted_guarantees),
        ("matching optimality", 30, matching_optimality),
        ("alpha rounding", 60, alpha_rounding),
        ("constrained payments minimality", 60, constrained_minimality),
        ("LFMM reduction equivalence", 30, reduction_equivalence),
        ("two-agent EF1 prefix split", 30, two_agent),
        ("identical agents", 30, identical_agents),
        ("depth claims", 30, depth_claims),
        ("thread-count determinism", 120, determinism),
    ];
    // Panics are reported on the criterion's own line.
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(budget) => Err(format!("took {elapsed:.2?}, budget {budget}s")),
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({elapsed:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn worked_example() -> Outcome {
    let inst = Instance::new(ValuationClass::Additive, vec![vec![1, 3, 2], vec![0, 1, 0], vec![2, 0, 2]]).unwrap();
    let alloc = Allocation::for_instance(vec![vec![2], vec![1], vec![0]], &inst).unwrap();
    let expected = PaymentVector(vec![1, 0, 1]);
    let fast = envy_eliminating_payments(&inst, &alloc).map_err(|e| e.to_string())?;
    ensure!(fast == expected, "envy_eliminating_payments gave {:?}", fast);
    let grid = constrained_payments(&inst, &alloc, &[]).map_err(|e| e.to_string())?;
    ensure!(grid == PaymentOutcome::Satisfied(expected), "constrained_payments gave {:?}", grid);
    Ok("q = (1,0,1) from both".into())
}

// Naive definitions, kept independent of the library's checkers.

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j)
}

fn without(inst: &Instance, agent: usize, bundle: &[usize], item: usize) -> u64 {
    bundle.iter().filter(|&&g| g != item).map(|&g| inst.value(agent, g)).sum()
}

fn naive(inst: &Instance, alloc: &Allocation) -> [bool; 3] {
    let own = |i: usize| inst.bundle_value(i, alloc.bundle(i));
    let ef = pairs(inst.n()).all(|(i, j)| own(i) >= inst.bundle_value(i, alloc.bundle(j)));
    let ef1 = pairs(inst.n()).all(|(i, j)| {
        let b = alloc.bundle(j);
        b.is_empty() || b.iter().any(|&g| own(i) >= without(inst, i, b, g))
    });
    let efx = pairs(inst.n()).all(|(i, j)| {
        let b = alloc.bundle(j);
        b.iter().all(|&g| own(i) >= without(inst, i, b, g))
    });
    [ef, ef1, efx]
}

fn fast(inst: &Instance, alloc: &Allocation) -> [bool; 3] {
    [
        check_ef(inst, alloc).unwrap().holds,
        check_ef1(inst, alloc).unwrap().holds,
        check_efx(inst, alloc).unwrap().holds,
    ]
}

fn additive(n: usize, m: usize, max: u64, seed: u64) -> Instance {
    random_instance(&InstanceParams::new(n, m, ValuationClass::Additive).value_range(0, max), seed).unwrap()
}

fn restricted(n: usize, m: usize, max: u64, t: usize, density: f64, seed: u64) -> Instance {
    let params = InstanceParams::new(n, m, ValuationClass::RestrictedAdditive)
        .value_range(1, max)
        .distinct_values(t)
        .density(density);
    random_instance(&params, seed).unwrap()
}

fn checker_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    for seed in 0..1000u64 {
        let (n, m) = (rng.gen_range(1..=5), rng.gen_range(0..=8));
        let inst = additive(n, m, rng.gen_range(0..=6), seed);
        let alloc = random_allocation(n, m, seed ^ 0xa11);
        ensure!(fast(&inst, &alloc) == naive(&inst, &alloc), "seed {seed}: {:?} disagree", inst.rows());
    }
    let mut exhaustive = 0;
    for n in [2usize, 3] {
        for m in 0..=4usize {
            for seed in 0..3 {
                let inst = additive(n, m, 4, seed);
                for code in 0..n.pow(m as u32) {
                    let owners: Vec<Option<usize>> = (0..m).map(|j| Some(code / n.pow(j as u32) % n)).collect();
                    let alloc = Allocation::from_owners(&owners, n).unwrap();
                    ensure!(fast(&inst, &alloc) == naive(&inst, &alloc), "n={n} m={m} owners {owners:?}");
                    exhaustive += 1;
                }
            }
        }
    }
    Ok(format!("1000 random + {exhaustive} exhaustive pairs agree"))
}

fn restricted_guarantees() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut po_checked = 0;
    for seed in 0..1000u64 {
        let (n, m, t) = (rng.gen_range(1..=5), rng.gen_range(0..=8), rng.gen_range(1..=3));
        let inst = restricted(n, m, 20, t, rng.gen_range(0.3..=1.0), seed);
        let out = ef1_po_restricted_detailed(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        let alloc = &out.allocation;
        ensure!(check_ef1(&inst, alloc).unwrap().holds, "seed {seed}: not EF1");
        let owners = alloc.owners();
        for (j, owner) in owners.iter().enumerate() {
            if inst.is_valued_by_anyone(j) {
                ensure!(owner.is_some_and(|i| inst.value(i, j) > 0), "seed {seed}: item {j} misplaced");
            }
        }
        let bad = copy_preference_violations(&inst, &out);
        ensure!(bad.is_empty(), "seed {seed}: copy inequality fails at {:?}", bad[0]);
        if (n as u128).pow(m as u32) <= 10_000 {
            ensure!(brute_force_po_check(&inst, alloc).unwrap(), "seed {seed}: not PO");
            po_checked += 1;
        }
    }
    Ok(format!("1000 instances, {po_checked} brute-force PO checks"))
}

/// Best perfect matching by trying every permutation.
fn brute_matching(g: &BucketedGraph) -> Option<i128> {
    fn go(g: &BucketedGraph, row: usize, used: &mut [bool], acc: i128, best: &mut Option<i128>) {
        if row == g.size() {
            *best = Some(best.map_or(acc, |b| b.max(acc)));
            return;
        }
        for col in 0..g.size() {
            if let (false, Some(w)) = (used[col], g.weight(row, col)) {
                used[col] = true;
                go(g, row + 1, used, acc + w, best);
                used[col] = false;
            }
        }
    }
    let mut best = None;
    go(g, 0, &mut vec![false; g.size()], 0, &mut best);
    best
}

fn matching_optimality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    for seed in 0..200u64 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(0..=8 / n);
        let inst = restricted(n, m, 9, rng.gen_range(1..=3), rng.gen_range(0.3..=1.0), seed);
        let g = build_bucketed_graph(&inst).unwrap();
        let got = max_weight_perfect_matching(&g).unwrap().total_weight;
        ensure!(Some(got) == brute_matching(&g), "seed {seed}: {got} vs {:?}", brute_matching(&g));
    }
    Ok("200 graphs match enumeration".into())
}

fn alpha_rounding() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    for (num, den) in [(1u64, 2u64), (2, 3)] {
        let alpha = Alpha::new(num, den).unwrap();
        for seed in 0..200u64 {
            let (n, m) = (rng.gen_range(1..=4), rng.gen_range(1..=7));
            let v_max = rng.gen_range(1..=16);
            let t = rng.gen_range(1..=m.min(v_max as usize));
            let inst = restricted(n, m, v_max, t, rng.gen_range(0.4..=1.0), seed);
            let r = alpha_round(&inst, alpha).unwrap();
            let d = u128::from(r.denominator);
            for i in 0..n {
                for j in 0..m {
                    let (v, s) = (u128::from(inst.value(i, j)), u128::from(r.instance.value(i, j)));
                    ensure!(s <= v * d && u128::from(num) * v * d <= u128::from(den) * s, "{num}/{den} seed {seed}: {v} -> {s}/{d}");
                }
            }
            // least L with (den/num)^L >= V + 1
            let bound = (0..).find(|&l| den.pow(l) >= (v_max + 1) * num.pow(l)).unwrap() as usize;
            let distinct = r.instance.inherent_values().len();
            ensure!(distinct <= bound, "{num}/{den} seed {seed}: {distinct} values > {bound}");

            let alloc = ef1_po_alpha(&inst, alpha).unwrap();
            for (i, j) in pairs(n) {
                let own = u128::from(inst.bundle_value(i, alloc.bundle(i)));
                let b = alloc.bundle(j);
                let ok = b.is_empty()
                    || b.iter().any(|&g| u128::from(den) * own >= u128::from(num) * u128::from(without(&inst, i, b, g)));
                ensure!(ok, "{num}/{den} seed {seed}: agent {i} alpha-envies {j}");
            }
        }
    }
    Ok("400 instances within bounds and alpha-EF1".into())
}

fn constrained_minimality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut infeasible = 0;
    for seed in 0..500u64 {
        let (n, m) = (rng.gen_range(1..=3), rng.gen_range(0..=3));
        let inst = additive(n, m, rng.gen_range(0..=3), seed);
        let alloc = random_allocation(n, m, seed ^ 0xc0);
        let top = m as u64 * inst.delta();
        let constraints: Vec<PaymentConstraint> = (0..rng.gen_range(0..=3))
            .map(|_| {
                PaymentConstraint::new(rng.gen_range(0..n), rng.gen_range(0..=top), rng.gen_range(0..n), rng.gen_range(0..=top))
            })
            .collect();
        let oracle = brute_force_min_payments(&inst, &alloc, &constraints, None).unwrap();
        let got = constrained_payments(&inst, &alloc, &constraints).unwrap();
        ensure!(got.payments() == oracle.as_ref(), "seed {seed}: {got:?} vs {oracle:?}");
        infeasible += usize::from(oracle.is_none());
    }
    Ok(format!("500 cases equal, {infeasible} with no satisfying vector"))
}

fn reduction_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for seed in 0..1000u64 {
        let left = rng.gen_range(1..=12);
        let right = rng.gen_range(0..=left);
        let g = random_bounded_graph(left, right, 3, rng.gen_range(0.2..=1.0), seed).unwrap();
        ensure!(g.max_degree() <= 3, "seed {seed}: degree {}", g.max_degree());
        ensure!(check_equivalence(&g).unwrap(), "seed {seed}: mismatch on {:?}", g.edges());
    }
    Ok("1000 graphs equivalent".into())
}

fn two_agent() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    for seed in 0..1000u64 {
        let m = rng.gen_range(0..=10);
        let inst = additive(2, m, rng.gen_range(1..=9), seed);
        let split = two_agent_split(&inst).unwrap();
        ensure!(check_ef1(&inst, &split.allocation).unwrap().holds, "seed {seed}: not EF1");
        ensure!(split.order == ratio_order(&inst).unwrap(), "seed {seed}: order differs from ratio order");
        let (v1, v2) = (inst.row(0), inst.row(1));
        for w in split.order.windows(2) {
            let (a, b) = (w[0], w[1]);
            ensure!(v1[a] * v2[b] >= v1[b] * v2[a], "seed {seed}: order not by ratio at {a},{b}");
        }
        let mut head = split.order[..split.cut].to_vec();
        let mut tail = split.order[split.cut..].to_vec();
        head.sort_unstable();
        tail.sort_unstable();
        ensure!(split.allocation.bundles() == [head, tail], "seed {seed}: not a prefix split");
    }
    Ok("1000 instances EF1 with prefix splits".into())
}

fn identical_agents() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    for seed in 0..500u64 {
        let (n, m) = (rng.gen_range(1..=5), rng.gen_range(0..=10));
        let params = InstanceParams::new(n, m, ValuationClass::Identical).value_range(0, rng.gen_range(1..=9));
        let inst = random_instance(&params, seed).unwrap();
        let mut sigma: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(sigma.as_mut_slice(), &mut rng);
        let order = AgentOrder::new(sigma, n).unwrap();
        let striped = ef1_identical(&inst, &order).unwrap();
        ensure!(striped == round_robin(&inst, &order).unwrap(), "seed {seed}: differs from Round-Robin");
        ensure!(check_ef1(&inst, &striped).unwrap().holds, "seed {seed}: not EF1");
    }
    Ok("500 instances equal Round-Robin and EF1".into())
}

fn depth_claims() -> Outcome {
    let log2_ceil = |k: usize| (0u32..).find(|&d| (1usize << d) >= k).unwrap();
    for k in 1..=1024usize {
        let xs: Vec<u64> = (0..k as u64).collect();
        let out = par_reduce(&xs, &Sum);
        ensure!(out.value == xs.iter().sum::<u64>(), "reduce k={k}: wrong sum");
        ensure!(out.cost.depth == u64::from(log2_ceil(k)), "reduce k={k}: depth {}", out.cost.depth);
    }
    let mut rng = StdRng::seed_from_u64(10);
    for p in 1..=10u64 {
        let keys: Vec<u32> = (0..1usize << p).map(|_| rng.gen()).collect();
        let out = bitonic_sort(&keys);
        ensure!(out.value.sorted.windows(2).all(|w| w[0] <= w[1]), "sort K=2^{p}: unsorted");
        ensure!(out.cost.depth == p * (p + 1) / 2, "sort K=2^{p}: {} stages", out.cost.depth);
    }
    for order in 1..=256usize {
        // A path needs every round; a random graph adds shortcuts.
        let path: Vec<Vec<bool>> = (0..order).map(|u| (0..order).map(|v| v == u + 1).collect()).collect();
        let random: Vec<Vec<bool>> = (0..order).map(|_| (0..order).map(|_| rng.gen_bool(0.02)).collect()).collect();
        for (k, adj) in [path, random].into_iter().enumerate() {
            let out = transitive_closure(&BoolMatrix::from_rows(adj).unwrap());
            ensure!(out.value.rounds <= log2_ceil(order), "closure order {order}: {} rounds", out.value.rounds);
            if k == 0 {
                let closed = (0..order).all(|v| out.value.matrix.get(0, v) == (v > 0));
                ensure!(closed, "closure order {order}: path not closed");
            }
        }
    }
    Ok("reduce k<=1024, sort K<=1024, closure order<=256".into())
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut stdout = Vec::new();
    let code = run(std::iter::once("fairdiv").chain(args.iter().copied()), &mut stdout, &mut std::io::sink());
    (code, stdout)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn determinism() -> Outcome {
    let dir = TempDir::new().unwrap();
    let mut runs: Vec<Vec<String>> = Vec::new();
    for seed in 0..30u64 {
        let seed_s = seed.to_string();
        let n = 2 + seed as usize % 4;
        let m = 3 + seed as usize % 6;
        let gens: [(&str, usize, &[&str], &[&str]); 4] = [
            ("add", n, &["--class", "additive", "--max", "6"], &["rr", "welfare-max"]),
            ("two", 2, &["--class", "additive", "--max", "9"], &["rr", "two-agent", "welfare-max"]),
            ("id", n, &["--class", "identical", "--max", "9"], &["rr", "identical"]),
            ("ra", n, &["--class", "restricted-additive", "--min", "1", "--max", "16", "--distinct", "3", "--density", "0.6"], &["rr", "matching"]),
        ];
        for (tag, agents, extra, methods) in gens {
            let inst = dir.path().join(format!("{tag}{seed}.json"));
            let (n_s, m_s) = (agents.to_string(), m.to_string());
            let mut args = vec!["gen", "--seed", &seed_s, "--n", &n_s, "--m", &m_s, "-o", s(&inst)];
            args.extend_from_slice(extra);
            let (code, _) = cli(&args);
            ensure!(code == 0, "gen {tag} seed {seed} failed");
            for method in methods {
                runs.push(["allocate", "--instance", s(&inst), "--method", method].map(String::from).to_vec());
            }
            if tag == "ra" {
                for alpha in ["1/2", "2/3"] {
                    let args = ["allocate", "--instance", s(&inst), "--method", "matching", "--alpha", alpha];
                    runs.push(args.map(String::from).to_vec());
                }
            }
            // Subsidize the Round-Robin and welfare-maximising outcomes, with
            // and without constraints.
            for method in ["rr", "welfare-max"] {
                let alloc = dir.path().join(format!("{tag}{seed}-{method}.json"));
                let (code, _) = cli(&["allocate", "--instance", s(&inst), "--method", method, "-o", s(&alloc)]);
                ensure!(code == 0, "allocate {method} {tag} seed {seed} failed");
                runs.push(["subsidize", "--instance", s(&inst), "--allocation", s(&alloc)].map(String::from).to_vec());
                let cs = dir.path().join(format!("{tag}{seed}-{method}-c.json"));
                fs::write(&cs, format!(r#"[{{"i":1,"x":0,"j":{agents},"y":{}}}]"#, seed % 3)).unwrap();
                let args = ["subsidize", "--instance", s(&inst), "--allocation", s(&alloc), "--constraints", s(&cs)];
                runs.push(args.map(String::from).to_vec());
            }
        }
    }
    for args in &runs {
        let outputs: Vec<(i32, Vec<u8>)> = ["1", "2", "8"]
            .iter()
            .map(|k| {
                let mut full = vec!["--threads", k];
                full.extend(args.iter().map(String::as_str));
                cli(&full)
            })
            .collect();
        ensure!(outputs[0].0 != 2, "{args:?} failed with input error");
        ensure!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?} differs across thread counts");
    }
    Ok(format!("{} allocate/subsidize runs identical at 1, 2 and 8 workers", runs.len()))
}
