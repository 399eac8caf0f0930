use majority_game::{BoxShape, Mode, Pattern};
use proptest::prelude::*;

fn shape() -> impl Strategy<Value = BoxShape> {
    (0u16..4, 1u16..5).prop_map(|(a, b)| BoxShape::from_sides(a, b).unwrap())
}

fn pattern() -> impl Strategy<Value = Pattern> {
    prop::collection::vec(shape(), 2..7).prop_map(|v| Pattern::canonicalize(v).unwrap())
}

proptest! {
    #[test]
    fn merge_splits_colorings(pat in pattern(), p in 0u32..8, i in 0usize..6, j in 0usize..6) {
        let (i, j) = (i % pat.len(), j % pat.len());
        prop_assume!(i != j);
        let kids = pat.merge_outcomes(i, j).unwrap();
        for mode in Mode::ALL {
            prop_assert_eq!(
                pat.count_colorings(p, mode),
                kids.aligned.count_colorings(p, mode) + kids.crossed.count_colorings(p, mode)
            );
        }
    }

    #[test]
    fn total_mass_is_two_to_the_boxes(pat in pattern()) {
        let total: u128 = (0..=pat.total()).map(|g| pat.count_colorings(g, Mode::ExactlyP)).sum();
        prop_assert_eq!(total, 1u128 << pat.len());
        prop_assert_eq!(pat.count_colorings(pat.total(), Mode::AtMostP), 1u128 << pat.len());
    }

    #[test]
    fn at_most_is_sum_of_exact(pat in pattern(), p in 0u32..10) {
        let sum: u128 = (0..=p).map(|g| pat.count_colorings(g, Mode::ExactlyP)).sum();
        prop_assert_eq!(pat.count_colorings(p, Mode::AtMostP), sum);
    }

    #[test]
    fn canonical_form_is_stable(mut shapes in prop::collection::vec(shape(), 1..8), seed in any::<u64>()) {
        let a = Pattern::canonicalize(shapes.clone()).unwrap();
        let k = shapes.len();
        shapes.rotate_left((seed as usize) % k);
        shapes.reverse();
        let b = Pattern::canonicalize(shapes).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(Pattern::canonicalize(a.shapes().iter().copied()).unwrap(), a.clone());
        prop_assert_eq!(a.to_string().parse::<Pattern>().unwrap(), a);
    }
}

#[test]
fn known_counts() {
    let p = Pattern::from_pairs(&[(1, 1), (2, 2), (0, 4), (0, 4)]).unwrap();
    assert_eq!(p.count_colorings(3, Mode::AtMostP), 4);
    assert_eq!(Pattern::initial(127).unwrap().count_colorings(63, Mode::AtMostP), 1u128 << 126);
    assert_eq!(
        "(1,5)^1(0,4)^2".parse::<Pattern>().unwrap(),
        Pattern::from_pairs(&[(0, 4), (0, 4), (1, 5)]).unwrap()
    );
}
