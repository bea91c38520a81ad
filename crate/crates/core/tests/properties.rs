use std::collections::BTreeSet;

use bia_core::linalg::{exact_rank, to_big};
use bia_core::verify::measure_census;
use bia_core::{
    draw_channel, received_basis, transmit_exact, zero_force_decode_exact, Construction, ConstructionMode,
    Representation, SchemeParams, Subset,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Any feasible (K, r, mode) with K ≤ 7.
fn feasible() -> impl Strategy<Value = SchemeParams> {
    (1usize..=7, 1usize..=7, any::<bool>()).prop_filter_map("infeasible", |(k, r, padded)| {
        let mode = if padded {
            ConstructionMode::Padded
        } else {
            ConstructionMode::PaperExact
        };
        SchemeParams::derive(k, Some(1 + (r - 1) % k), mode).ok()
    })
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Plain Gaussian elimination over the rationals.
fn rational_rank(columns: &[Vec<i64>]) -> usize {
    let Some(n) = columns.first().map(Vec::len) else {
        return 0;
    };
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            columns
                .iter()
                .map(|c| BigRational::from_integer(BigInt::from(c[i])))
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..columns.len() {
        let Some(pivot) = (rank..n).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = BigRational::one() / rows[rank][col].clone();
        let pivot_row: Vec<BigRational> = rows[rank].iter().map(|v| v * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_shape(p in feasible()) {
        let c = Construction::new(p).unwrap();
        let (k, r) = (p.users(), p.order());
        let s = c.basis.entries();
        prop_assert_eq!((s.rows(), s.cols()), (p.slots(), k));
        for row in 0..(r - 1) * k {
            for col in 0..k {
                prop_assert_eq!(s.get(row, col), u8::from(col != row % k));
            }
        }
        let b = c.basis.b_block().to_rows();
        let distinct: BTreeSet<_> = b.iter().collect();
        prop_assert_eq!(distinct.len(), b.len());
        for row in &b {
            prop_assert_eq!(row.iter().map(|&v| v as usize).sum::<usize>(), k - r);
        }
    }

    #[test]
    fn precoders_are_hadamard_products(p in feasible()) {
        let c = Construction::new(p).unwrap();
        let (k, r, n) = (p.users(), p.order(), p.slots());
        let s = c.basis.entries();
        for q in 0..k {
            prop_assert_eq!(c.precoders.streams(q), binom(k - 1, r - 1));
            let cols: BTreeSet<Vec<u8>> = (0..c.precoders.streams(q)).map(|d| c.precoders.column(q, d)).collect();
            prop_assert_eq!(cols.len(), c.precoders.streams(q));
            for (d, owner) in c.precoders.column_subsets(q).iter().enumerate() {
                prop_assert!(owner.contains(q));
                let factors: Vec<usize> = (0..k).filter(|i| !owner.contains(*i)).collect();
                prop_assert_eq!(factors.len(), k - r);
                let expected: Vec<u8> = (0..n).map(|i| factors.iter().map(|&f| s.get(i, f)).product()).collect();
                prop_assert_eq!(c.precoders.column(q, d), expected);
            }
        }
    }

    #[test]
    fn one_shared_vector_per_subset(p in feasible()) {
        let c = Construction::new(p).unwrap();
        let (k, r) = (p.users(), p.order());
        prop_assert_eq!(c.precoders.shared_index().len(), binom(k, r));
        for (subset, shared) in c.precoders.shared_index() {
            let holders: Vec<usize> = (0..k)
                .filter(|&q| (0..c.precoders.streams(q)).any(|d| c.precoders.column(q, d) == shared.vector))
                .collect();
            prop_assert_eq!(&holders, subset.members());
        }
    }

    #[test]
    fn switching_alphabet_and_b_copy(p in feasible()) {
        let c = Construction::new(p).unwrap();
        let sw = c.switching.to_rows();
        let alphabet: BTreeSet<u8> = sw.iter().flatten().copied().collect();
        prop_assert!(alphabet.iter().all(|&m| (m as usize) < p.order()));
        if p.order() > 1 {
            prop_assert_eq!(alphabet.len(), p.order());
            prop_assert_eq!(&sw[p.a_rows()..], &c.basis.b_block().to_rows()[..]);
        }
    }

    #[test]
    fn bareiss_agrees_with_rational_elimination(
        cols in prop::collection::vec(prop::collection::vec(-4i64..=4, 6), 0..8)
    ) {
        prop_assert_eq!(exact_rank(&to_big(&cols)).unwrap(), rational_rank(&cols));
    }

    #[test]
    fn census_never_exceeds_slots(p in feasible(), seed in any::<u64>()) {
        prop_assume!(p.users() <= 6);
        let c = Construction::new(p).unwrap();
        let ch = draw_channel(&p, seed, Representation::ExactRational);
        let rb = received_basis(&ch, &c.switching, &c.precoders).unwrap();
        for j in 0..p.users() {
            let census = measure_census(&rb, &c.precoders, j).unwrap();
            prop_assert!(census.total_occupied <= p.slots());
            prop_assert!(census.desired_dims <= p.streams_per_user());
        }
    }

    #[test]
    fn channel_draws_are_deterministic(p in feasible(), seed in any::<u64>()) {
        for repr in [Representation::ExactRational, Representation::Floating] {
            prop_assert_eq!(draw_channel(&p, seed, repr), draw_channel(&p, seed, repr));
        }
    }
}

/// Cases where every receiver separates its streams.
fn decodable() -> impl Strategy<Value = SchemeParams> {
    (1usize..=5).prop_map(|k| {
        let r = k.min(2);
        SchemeParams::derive(k, Some(r), ConstructionMode::Padded).unwrap()
    })
}

fn symbols(p: &SchemeParams, values: &[i64]) -> Vec<Vec<BigRational>> {
    let d = p.streams_per_user();
    (0..p.users())
        .map(|q| {
            (0..d)
                .map(|i| BigRational::from_integer(values[(q * d + i) % values.len()].into()))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn noiseless_exact_recovery(p in decodable(), seed in any::<u64>(), values in prop::collection::vec(-50i64..50, 1..20)) {
        let c = Construction::new(p).unwrap();
        let ch = draw_channel(&p, seed, Representation::ExactRational);
        let rb = received_basis(&ch, &c.switching, &c.precoders).unwrap();
        let x = symbols(&p, &values);
        let y = transmit_exact(&c.precoders, &x, &ch, &c.switching).unwrap();
        for j in 0..p.users() {
            prop_assert_eq!(&zero_force_decode_exact(&y[j], j, &rb).unwrap(), &x[j]);
        }
    }

    #[test]
    fn decoder_is_linear(
        p in decodable(),
        seed in any::<u64>(),
        u in prop::collection::vec(-9i64..9, 1..12),
        v in prop::collection::vec(-9i64..9, 1..12),
        a in -5i64..5,
        b in -5i64..5,
    ) {
        let c = Construction::new(p).unwrap();
        let ch = draw_channel(&p, seed, Representation::ExactRational);
        let rb = received_basis(&ch, &c.switching, &c.precoders).unwrap();
        let y1 = transmit_exact(&c.precoders, &symbols(&p, &u), &ch, &c.switching).unwrap();
        let y2 = transmit_exact(&c.precoders, &symbols(&p, &v), &ch, &c.switching).unwrap();
        let (a, b) = (BigRational::from_integer(a.into()), BigRational::from_integer(b.into()));
        for j in 0..p.users() {
            let mix: Vec<BigRational> = y1[j].iter().zip(&y2[j]).map(|(s, t)| &a * s + &b * t).collect();
            let lhs = zero_force_decode_exact(&mix, j, &rb).unwrap();
            let d1 = zero_force_decode_exact(&y1[j], j, &rb).unwrap();
            let d2 = zero_force_decode_exact(&y2[j], j, &rb).unwrap();
            let rhs: Vec<BigRational> = d1.iter().zip(&d2).map(|(s, t)| &a * s + &b * t).collect();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn subsets_have_one_based_display() {
    let s = Subset::from_one_based(&[2, 4]).unwrap();
    assert_eq!(s.to_string(), "{2,4}");
    assert_eq!(s.members(), &[1, 3]);
}
