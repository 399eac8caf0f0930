use majority_game::bounds::{podium_bound, q_plus_le};
use majority_game::strategies::podium::{podium_units, subroutine_s};
use majority_game::strategies::towers::fit_box_counts;
use majority_game::strategies::{
    explore, majority_bound, majority_find_red, theorem1_identify, towers_identify_eq, worst_case_of_strategy,
    HiddenColoring, LabState, MajorityBreaker, RandomBreaker, Session, Strategy, StrategyError, Transcript,
    TowersPlan,
};
use majority_game::{Mode, Problem};

#[test]
fn chain_counts() {
    for (problem, expect) in [(Problem::le(4, 1), 3), (Problem::eq(3, 1), 2), (Problem::le(9, 4), 8)] {
        let r = worst_case_of_strategy(&Strategy::Chain, problem.unwrap()).unwrap();
        assert_eq!(r.worst, expect);
    }
}

#[test]
fn pivot_recursion_examples() {
    let w = |n, p| worst_case_of_strategy(&Strategy::Theorem1, Problem::le(n, p).unwrap()).unwrap().worst as u32;
    assert!(w(7, 3) <= 6);
    assert!(w(10, 2) <= 8);
    assert_eq!(w(9, 0), 0);
    assert_eq!(q_plus_le(10, 2), 8);
}

#[test]
fn lab_subroutine_examples() {
    let problem = Problem::eq(4, 1).unwrap();
    let s0 = explore(
        problem,
        |s| {
            let mut st = LabState::new(&s.board().live_ids(), 1);
            subroutine_s(s, &mut st, 0)
        },
        |_, _| Ok(()),
    )
    .unwrap();
    assert_eq!(s0.worst, 0);

    let s1 = explore(
        problem,
        |s| {
            let mut st = LabState::new(&s.board().live_ids(), 1);
            subroutine_s(s, &mut st, 1)
        },
        |s, &id| {
            let b = s.board().get(id).unwrap();
            assert!(b.is_monocolored() && b.size() == 2);
            Ok(())
        },
    )
    .unwrap();
    assert!(s1.worst <= 3);

    let s2 = explore(
        Problem::eq(7, 1).unwrap(),
        |s| {
            let mut st = LabState::new(&s.board().live_ids(), 1);
            let id = subroutine_s(s, &mut st, 2)?;
            Ok((id, st))
        },
        |s, (id, st)| {
            let b = s.board().get(*id).unwrap();
            assert!(b.is_monocolored() && b.size() == 4);
            assert!(st.reserve.iter().all(|&r| s.shape(r).unwrap().is_balanced()));
            assert!(st.overage >= 5 - 4);
            Ok(())
        },
    )
    .unwrap();
    assert!(s2.leaves > 1);

    let mut br = MajorityBreaker;
    let mut s = Session::new(Problem::eq(5, 2).unwrap(), &mut br);
    let mut st = LabState::new(&s.board().live_ids(), 2);
    assert!(matches!(subroutine_s(&mut s, &mut st, 1), Err(StrategyError::Precondition(_))));
}

#[test]
fn podium_examples() {
    let w = |n, p, nu| {
        worst_case_of_strategy(&Strategy::Podium { nu: Some(nu) }, Problem::eq(n, p).unwrap()).unwrap().worst as u32
    };
    assert!(w(8, 2, 2) <= 5);
    assert_eq!(podium_bound(8, 2, 2), 5);
    assert!(w(12, 1, 1) <= 6);
}

#[test]
fn podium_height_zero_is_pivot_recursion() {
    let (n, p) = (11u32, 3u32);
    for mask in (0u64..1 << n).filter(|m| m.count_ones() == p).step_by(7) {
        let problem = Problem::eq(n, p).unwrap();
        let mut a = HiddenColoring::from_mask(n, mask);
        let mut sa = Session::new(problem, &mut a);
        let ids = sa.board().live_ids();
        podium_units(&mut sa, &ids, p, 0).unwrap();
        let mut b = HiddenColoring::from_mask(n, mask);
        let mut sb = Session::new(problem, &mut b);
        theorem1_identify(&mut sb).unwrap();
        assert_eq!(sa.transcript(), sb.transcript());
    }
}

#[test]
fn majority_box_is_red_in_every_compatible_coloring() {
    for n in 1..=10u32 {
        let problem = Problem::le(n, (n - 1) / 2).unwrap();
        let stats = explore(
            problem,
            |s| majority_find_red(s),
            |s, &id| {
                let ball = s.board().get(id).unwrap().big()[0];
                for m in s.board().compatible_masks(problem.p, Mode::AtMostP) {
                    assert_eq!((m >> ball) & 1, 0, "n={n}");
                }
                Ok(())
            },
        )
        .unwrap();
        assert!(stats.worst as u32 <= majority_bound(n));
    }
}

#[test]
fn transcripts_round_trip_and_are_sound() {
    for seed in 0..10 {
        let mut br = RandomBreaker::new(seed);
        let problem = Problem::eq(20, 3).unwrap();
        let mut s = Session::new(problem, &mut br);
        towers_identify_eq(&mut s, &TowersPlan::default_p3()).unwrap();
        assert_eq!(s.count(), 1);
        let t = s.transcript();
        let text = t.to_string();
        assert_eq!(text.lines().count(), s.comparisons() + 1);
        assert_eq!(text.parse::<Transcript>().unwrap(), t);
        assert_eq!(s.board().compatible_masks(3, Mode::ExactlyP).len(), 1);
    }
}

#[test]
fn opening_box_can_settle_everything() {
    let n = 20;
    let mut hc = HiddenColoring::from_mask(n, 0b111);
    let mut s = Session::new(Problem::eq(n, 3).unwrap(), &mut hc);
    let out = towers_identify_eq(&mut s, &TowersPlan::default_p3()).unwrap();
    assert_eq!(out.x, 3);
    assert_eq!(out.green_per_tower, vec![0, 0]);
    assert_eq!(s.count(), 1);
}

#[test]
fn towers_box_counts_grow_linearly() {
    let plan = TowersPlan::default_p3();
    let mut points = Vec::new();
    for n in 20..=80u32 {
        let mut br = MajorityBreaker;
        let mut s = Session::new(Problem::eq(n, 3).unwrap(), &mut br);
        let out = towers_identify_eq(&mut s, &plan).unwrap();
        points.push((n, out.final_boxes));
        let floor = (3 * n / 10) as usize;
        assert!(out.final_boxes + 5 >= floor, "n={n}");
    }
    let (slope, _) = fit_box_counts(&points).unwrap();
    assert!((slope - 0.3).abs() < 0.05, "slope {slope}");
}

#[test]
fn towers_with_larger_budget() {
    // plans derived from the coefficient solver for p = 4 and 5
    for p in [4u32, 5] {
        let plan = TowersPlan::from_coefficient(&majority_game::towers_opt::compute_ct(p).unwrap()).unwrap();
        for seed in 0..40 {
            let n = plan.min_units(p) as u32 + 10 + seed as u32 % 7;
            let mut br = RandomBreaker::new(seed);
            let mut s = Session::new(Problem::eq(n, p).unwrap(), &mut br);
            towers_identify_eq(&mut s, &plan).unwrap();
            assert_eq!(s.count(), 1, "p={p} n={n} seed={seed}");
        }
    }
}
