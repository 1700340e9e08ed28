use gridpursuit::lattice::{
    box_size, count_above, count_below, count_level, level_closed_form, level_counts,
    min_large_component_bound, special_form, special_form_oracle, FormCase, Quantity, Reading,
};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

/// Level histogram by walking every point of the box.
fn enumerate(dims: &[usize]) -> Vec<u64> {
    let top: usize = dims.iter().map(|n| n - 1).sum();
    let mut hist = vec![0u64; top + 1];
    let mut point = vec![0usize; dims.len()];
    loop {
        hist[point.iter().sum::<usize>()] += 1;
        let mut axis = 0;
        loop {
            if axis == dims.len() {
                return hist;
            }
            point[axis] += 1;
            if point[axis] < dims[axis] {
                break;
            }
            point[axis] = 0;
            axis += 1;
        }
    }
}

fn at(hist: &[u64], m: i64) -> u64 {
    if m < 0 {
        0
    } else {
        hist.get(m as usize).copied().unwrap_or(0)
    }
}

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=6, 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn counts_match_enumeration(dims in dims(), m in -2i64..=22) {
        let hist = enumerate(&dims);
        let below: u64 = (0..m.max(0)).map(|j| at(&hist, j)).sum();
        let above: u64 = hist.iter().sum::<u64>() - below - at(&hist, m);
        prop_assert_eq!(count_level(&dims, m), BigUint::from(at(&hist, m)));
        prop_assert_eq!(count_below(&dims, m), BigUint::from(below));
        prop_assert_eq!(count_above(&dims, m), BigUint::from(above));
    }

    #[test]
    fn levels_partition_the_box(dims in dims(), m in -2i64..=22) {
        let c = level_counts(&dims, m);
        prop_assert_eq!(c.c + c.s + c.l, box_size(&dims));
    }

    #[test]
    fn levels_are_symmetric_about_the_middle(dims in dims(), m in 0i64..=20) {
        let top: i64 = dims.iter().map(|&n| n as i64 - 1).sum();
        prop_assert_eq!(count_level(&dims, m), count_level(&dims, top - m));
        prop_assert_eq!(count_below(&dims, m), count_above(&dims, top - m));
    }

    #[test]
    fn counts_ignore_axis_order(mut dims in dims(), m in 0i64..=20, rot in 0usize..4) {
        let before = level_counts(&dims, m);
        let r = rot % dims.len();
        dims.rotate_left(r);
        dims.reverse();
        prop_assert_eq!(level_counts(&dims, m), before);
    }

    #[test]
    fn closed_form_holds_while_truncation_is_harmless(
        (a, n, b) in (1usize..=5, 1usize..=7)
            .prop_flat_map(|(a, n)| (Just(a), Just(n), 0..((a / 2 + 1) * n) as i64)),
    ) {
        let expected = BigInt::from(count_level(&vec![n; a], b));
        prop_assert_eq!(level_closed_form(a, b, n), expected);
    }

    #[test]
    fn large_component_bound_is_the_best_level(dims in prop::collection::vec(1usize..=5, 1..=3), c in 0usize..=12) {
        let hist = enumerate(&dims);
        let total: u64 = hist.iter().sum();
        let mut best: Option<(i64, u64)> = None;
        if c > 0 {
            for m in 1..hist.len() as i64 {
                let above = total - (0..=m).map(|j| at(&hist, j)).sum::<u64>();
                if at(&hist, m) >= c as u64 && best.is_none_or(|(_, b)| above > b) {
                    best = Some((m, above));
                }
            }
        }
        let got = min_large_component_bound(c, &dims);
        match best {
            _ if c == 0 => prop_assert_eq!(got.bound, BigUint::from(total)),
            Some((_, b)) => prop_assert_eq!(got.bound, BigUint::from(b)),
            None => prop_assert!(got.best_m.is_none()),
        }
    }
}

#[test]
fn special_forms_a_c_d_match_counting() {
    for case in [FormCase::A, FormCase::C, FormCase::D] {
        for n in 2..=24 {
            let Some(range) = case.level_range(n) else {
                continue;
            };
            for m in range {
                for q in [Quantity::Level, Quantity::Below] {
                    for r in [Reading::AtMost, Reading::Strict] {
                        let got = special_form(case, q, r, n, m).unwrap();
                        let want = BigInt::from(special_form_oracle(case, q, r, n, m));
                        assert_eq!(got, want, "{case:?} {q:?} {r:?} n={n} m={m}");
                    }
                }
            }
        }
    }
}

#[test]
fn special_form_b_level_is_off_only_near_the_top() {
    // The binomial expression for the two short sides drops the add-back term
    // where both short coordinates saturate, which matters once m >= n - 2.
    for n in (6..=24).step_by(2) {
        for m in n as i64 / 2..=n as i64 - 1 {
            let got = special_form(FormCase::B, Quantity::Level, Reading::Strict, n, m).unwrap();
            let want = BigInt::from(special_form_oracle(
                FormCase::B,
                Quantity::Level,
                Reading::Strict,
                n,
                m,
            ));
            let add_back = gridpursuit::lattice::binomial(m - n as i64 + 4, 2);
            assert_eq!(got + add_back, want, "n={n} m={m}");
        }
    }
}

#[test]
fn special_forms_reject_levels_out_of_range() {
    assert!(special_form(FormCase::A, Quantity::Level, Reading::Strict, 5, 5).is_err());
    assert!(special_form(FormCase::B, Quantity::Level, Reading::Strict, 7, 4).is_err());
    assert!(special_form(FormCase::D, Quantity::Below, Reading::Strict, 1, 1).is_err());
}
