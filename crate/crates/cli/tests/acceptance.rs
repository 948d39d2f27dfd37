//! Acceptance battery: one line per criterion, then a single assertion.

use std::time::{Duration, Instant};

use injstab_cli::suite::{
    check_suite, criterion_1, criterion_10, criterion_11, criterion_2, criterion_3, criterion_4,
    criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, sample_pairs, Check,
};

const SEED: u64 = 42;
const RANDOM_PAIRS: usize = 25;
const PAIR_DIM: usize = 5;
const SES_PER_ALGEBRA: usize = 10;
const FP_PER_ALGEBRA: usize = 25;
const Z_MATRICES: usize = 50;
const EW_FUNCTORS: usize = 10;

struct Line {
    id: usize,
    check: Check,
    budget: Option<(Duration, Duration)>,
}

impl Line {
    fn pass(&self) -> bool {
        self.check.pass && self.budget.is_none_or(|(took, max)| took < max)
    }

    fn print(&self) {
        let time = match self.budget {
            Some((took, max)) => format!(" time={:.3}s budget={}s", took.as_secs_f64(), max.as_secs()),
            None => String::new(),
        };
        println!(
            "criterion {:>2}: {}  {}  samples={} failures={}{}",
            self.id,
            if self.pass() { "PASS" } else { "FAIL" },
            self.check.name,
            self.check.samples,
            self.check.failures,
            time
        );
        if let Some(ce) = &self.check.counterexample {
            println!("    counterexample: {ce}");
        }
    }
}

fn timed(id: usize, max_secs: Option<u64>, f: impl FnOnce() -> Check) -> Line {
    let start = Instant::now();
    let check = f();
    let took = start.elapsed();
    Line {
        id,
        check,
        budget: max_secs.map(|s| (took, Duration::from_secs(s))),
    }
}

#[test]
fn acceptance_criteria() {
    let pairs = sample_pairs(SEED, RANDOM_PAIRS, PAIR_DIM);
    let lines = vec![
        timed(1, Some(1), criterion_1),
        timed(2, Some(60), || criterion_2(&pairs)),
        timed(3, None, || criterion_3(&pairs)),
        timed(4, None, || criterion_4(SEED, SES_PER_ALGEBRA, PAIR_DIM)),
        timed(5, None, || criterion_5(SEED, FP_PER_ALGEBRA, PAIR_DIM)),
        timed(6, Some(10), || criterion_6(SEED, Z_MATRICES)),
        timed(7, None, || criterion_7(&pairs)),
        timed(8, None, || criterion_8(&pairs)),
        timed(9, None, || criterion_9(SEED, PAIR_DIM)),
        timed(10, None, || criterion_10(SEED, EW_FUNCTORS, PAIR_DIM)),
        timed(11, None, || criterion_11(SEED, 25, 4)),
    ];
    for l in &lines {
        l.print();
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.pass()).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn check_suite_guards() {
    assert!(check_suite(SEED, 0, 4).is_err());
    assert!(check_suite(SEED, 1, 50).is_err());
    assert!(check_suite(SEED, 1, 0).is_err());
}

#[test]
fn check_suite_default_run_passes() {
    let r = check_suite(SEED, 25, 4).unwrap();
    let failing: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    assert!(failing.is_empty(), "{failing:?}");
}
