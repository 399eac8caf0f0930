use majority_game::solver::MemoError;
use majority_game::{solve_exact, BoxShape, Mode, MemoStore, Pattern, Problem, SearchLimits};
use proptest::prelude::*;

fn entry() -> impl Strategy<Value = (Pattern, u32)> {
    let shape = (0u16..15, 1u16..25).prop_map(|(a, b)| BoxShape::from_sides(a, b).unwrap());
    (prop::collection::vec(shape, 1..4), 0u32..300).prop_map(|(v, q)| (Pattern::canonicalize(v).unwrap(), q))
}

proptest! {
    #[test]
    fn bytes_round_trip(entries in prop::collection::vec(entry(), 0..20), p in 0u32..200, le in any::<bool>()) {
        let mode = if le { Mode::AtMostP } else { Mode::ExactlyP };
        let m = MemoStore::new(p, mode);
        for (pat, v) in entries {
            if m.get(&pat).is_none() {
                m.insert(pat, v).unwrap();
            }
        }
        let back = MemoStore::from_bytes(&m.to_bytes()).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_bytes(), m.to_bytes());
    }
}

#[test]
fn file_round_trip_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.bin");

    let empty = MemoStore::new(4, Mode::AtMostP);
    empty.save(&path).unwrap();
    assert_eq!(MemoStore::load(&path).unwrap(), empty);

    let memo = MemoStore::new(1, Mode::ExactlyP);
    solve_exact(Problem::eq(3, 1).unwrap(), SearchLimits::default(), &memo).unwrap();
    memo.save(&path).unwrap();
    assert_eq!(MemoStore::load(&path).unwrap(), memo);
    assert_eq!(MemoStore::load_for(&path, 1, Mode::ExactlyP).unwrap(), memo);
    assert!(matches!(
        MemoStore::load_for(&path, 2, Mode::ExactlyP),
        Err(MemoError::Metadata { .. })
    ));
    assert!(matches!(
        MemoStore::load_for(&path, 1, Mode::AtMostP),
        Err(MemoError::Metadata { .. })
    ));
    std::fs::write(&path, b"MAJID\x07").unwrap();
    assert!(MemoStore::load(&path).is_err());
}

#[test]
fn loaded_memo_reproduces_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.bin");
    let problem = Problem::le(13, 4).unwrap();
    let memo = MemoStore::new(4, Mode::AtMostP);
    let cold = solve_exact(problem, SearchLimits::default(), &memo).unwrap();
    memo.save(&path).unwrap();
    let loaded = MemoStore::load_for(&path, 4, Mode::AtMostP).unwrap();
    let warm = solve_exact(problem, SearchLimits::default(), &loaded).unwrap();
    assert_eq!((cold.q, warm.q), (11, 11));
    assert!(warm.nodes < cold.nodes);
}
