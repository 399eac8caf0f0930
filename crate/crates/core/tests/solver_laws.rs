use std::collections::HashMap;

use majority_game::solver::{solve_with, SolverOptions};
use majority_game::{solve_exact, Mode, MemoStore, Problem, SearchLimits};

const MAX_N: u32 = 14;

fn values(mode: Mode) -> HashMap<(u32, u32), u32> {
    let mut out = HashMap::new();
    for p in 0..MAX_N.div_ceil(2) {
        let memo = MemoStore::new(p, mode);
        for n in 2 * p + 1..=MAX_N {
            let r = solve_exact(Problem::new(n, p, mode).unwrap(), SearchLimits::default(), &memo).unwrap();
            assert!(r.exact);
            assert!(!r.contradicts_bounds(), "{r:?}");
            out.insert((n, p), r.q);
        }
    }
    out
}

#[test]
fn at_most_growth_laws() {
    let q = values(Mode::AtMostP);
    for (&(n, p), &v) in &q {
        if let Some(&next) = q.get(&(n + 1, p)) {
            assert!(v <= next && next <= v + 1, "n={n} p={p}");
        }
        if let Some(&up) = q.get(&(n + 1, p + 1)) {
            assert!(up >= v + 1, "n={n} p={p}");
        }
        if let Some(&more) = q.get(&(n, p + 1)) {
            assert!(more >= v, "n={n} p={p}");
        }
    }
}

#[test]
fn peeling_and_pivot_laws() {
    for mode in Mode::ALL {
        let q = values(mode);
        for (&(n, p), &v) in &q {
            if p >= 1 {
                assert!(v >= 2 + q[&(n - 2, p - 1)], "{mode} n={n} p={p}");
            }
            if 3 * p + 1 < n {
                assert!(v <= p + q[&(n - p - 1, p)], "{mode} n={n} p={p}");
            }
        }
    }
}

#[test]
fn deficit_residue_band() {
    let q = values(Mode::AtMostP);
    for (&(n, p), &v) in &q {
        let b = Problem::le(n, p).unwrap().bounds();
        assert!(v + 1 >= b.q_plus, "n={n} p={p}");
        if v + 1 == b.q_plus {
            let r = n % (p + 1);
            assert!((p + 1).div_ceil(2) <= r && r < p, "n={n} p={p} r={r}");
        }
    }
}

#[test]
fn thread_count_does_not_change_values() {
    for mode in Mode::ALL {
        for n in 5..=13u32 {
            for p in 1..n.div_ceil(2) {
                let problem = Problem::new(n, p, mode).unwrap();
                let a = solve_exact(problem, SearchLimits::threads(1), &MemoStore::new(p, mode)).unwrap();
                let b = solve_exact(problem, SearchLimits::threads(4), &MemoStore::new(p, mode)).unwrap();
                assert_eq!(a.q, b.q, "{problem}");
            }
        }
    }
}

#[test]
fn search_switches_preserve_values() {
    let variants = [
        SolverOptions { skip_forced_moves: true, reduce_patterns: true },
        SolverOptions { skip_forced_moves: false, reduce_patterns: false },
        SolverOptions { skip_forced_moves: true, reduce_patterns: false },
    ];
    for mode in Mode::ALL {
        for n in 1..=10u32 {
            for p in 0..n.div_ceil(2) {
                let problem = Problem::new(n, p, mode).unwrap();
                let base = solve_exact(problem, SearchLimits::default(), &MemoStore::new(p, mode)).unwrap().q;
                for opts in variants {
                    let memo = MemoStore::new(p, mode);
                    let v = solve_with(problem, SearchLimits::default(), opts, &memo).unwrap().q;
                    assert_eq!(v, base, "{problem} {opts:?}");
                }
            }
        }
    }
}

#[test]
fn warm_memo_searches_less() {
    for (n, p, mode) in [(12, 3, Mode::AtMostP), (14, 4, Mode::ExactlyP), (11, 2, Mode::ExactlyP)] {
        let problem = Problem::new(n, p, mode).unwrap();
        let memo = MemoStore::new(p, mode);
        let cold = solve_exact(problem, SearchLimits::default(), &memo).unwrap();
        let warm = solve_exact(problem, SearchLimits::default(), &memo).unwrap();
        assert_eq!(cold.q, warm.q);
        assert!(warm.nodes < cold.nodes, "{problem}: {} vs {}", warm.nodes, cold.nodes);
    }
}

#[test]
fn documented_values() {
    let q = |n, p, mode| {
        solve_exact(Problem::new(n, p, mode).unwrap(), SearchLimits::default(), &MemoStore::new(p, mode))
            .unwrap()
            .q
    };
    assert_eq!(q(3, 1, Mode::ExactlyP), 2);
    assert_eq!(q(7, 3, Mode::AtMostP), 6);
    assert_eq!(q(5, 2, Mode::AtMostP), 4);
    assert_eq!(q(6, 2, Mode::ExactlyP), 4);
    assert_eq!(q(8, 2, Mode::ExactlyP), 5);
}
