//! Property-based checks for the algebraic layers.

use num_complex::Complex64;
use proptest::prelude::*;

use overcode::codes::{
    apply_pair_swaps, cross_correlation, is_hadamard, ovsf_matrix, ovsf_row, ChipSequence,
    SwapMask,
};
use overcode::phy::{
    demodulate_hard, despread, fec_decode, fec_encode, modulate, spread, FecConfig,
    ModulationScheme,
};

fn chip_sequence(len: usize) -> impl Strategy<Value = ChipSequence> {
    proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], len)
        .prop_map(|chips| ChipSequence::new(chips).unwrap())
}

/// A matrix order exponent with a non-empty, non-full set of 1-based pair
/// indices for that order.
fn order_and_mask() -> impl Strategy<Value = (u32, SwapMask)> {
    (2u32..=4).prop_flat_map(|n| {
        let half = (1usize << n) / 2;
        let mask = proptest::collection::btree_set(1..=half, 1..half)
            .prop_map(|pairs| SwapMask::new(pairs).unwrap());
        (Just(n), mask)
    })
}

proptest! {
    #[test]
    fn noiseless_chain_is_identity(
        n in 2u32..=4,
        index in 0u64..4,
        bits in proptest::collection::vec(0u8..=1, 1..=32),
        scheme_qpsk in any::<bool>(),
    ) {
        let scheme = if scheme_qpsk { ModulationScheme::Qpsk } else { ModulationScheme::Bpsk };
        let mut bits = bits;
        if bits.len() % 2 != 0 {
            bits.push(0);
        }
        let code = ovsf_row(n, index).unwrap();
        let symbols = modulate(&bits, scheme).unwrap();
        let recovered = demodulate_hard(&despread(&spread(&symbols, &code), &code).unwrap(), scheme);
        prop_assert_eq!(recovered, bits);
    }

    #[test]
    fn pair_swap_is_an_involution(n in 2u32..=5, index in 0u64..8, seed in any::<u64>()) {
        let sf = 1usize << n;
        let seq = ovsf_row(n, index % (1 << n)).unwrap();
        let mask = {
            // Derive a deterministic non-empty, non-full pair set from seed.
            let half = sf / 2;
            let bits = (seed % ((1 << half) - 2)) + 1;
            SwapMask::new((0..half).filter(|k| bits >> k & 1 == 1).map(|k| k + 1)).unwrap()
        };
        let once = apply_pair_swaps(&seq, &mask).unwrap();
        let twice = apply_pair_swaps(&once, &mask).unwrap();
        prop_assert_eq!(twice, seq);
    }

    #[test]
    fn hadamard_survives_column_pair_interchange((n, mask) in order_and_mask()) {
        // The same pair interchange applied to every row of a Hadamard
        // matrix permutes its columns, preserving row orthogonality.
        let matrix = ovsf_matrix(n).unwrap();
        let rows: Vec<ChipSequence> = matrix
            .rows()
            .iter()
            .map(|r| apply_pair_swaps(r, &mask).unwrap())
            .collect();
        prop_assert!(is_hadamard(&rows).unwrap());
    }

    #[test]
    fn correlation_symmetry_and_negation(a in chip_sequence(8), b in chip_sequence(8)) {
        let ab = cross_correlation(&a, &b).unwrap();
        prop_assert_eq!(ab, cross_correlation(&b, &a).unwrap());
        prop_assert_eq!(cross_correlation(&a.negated(), &b).unwrap(), -ab);
        prop_assert_eq!(cross_correlation(&a, &a).unwrap(), 8);
    }

    #[test]
    fn despread_is_linear(
        code in chip_sequence(8),
        x in proptest::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 16),
        y in proptest::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 16),
    ) {
        let to_signal = |v: &[(f64, f64)]| -> Vec<Complex64> {
            v.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
        };
        let (xs, ys) = (to_signal(&x), to_signal(&y));
        let sum: Vec<Complex64> = xs.iter().zip(&ys).map(|(a, b)| a + b).collect();
        let lhs = despread(&sum, &code).unwrap();
        let rhs: Vec<Complex64> = despread(&xs, &code)
            .unwrap()
            .iter()
            .zip(&despread(&ys, &code).unwrap())
            .map(|(a, b)| a + b)
            .collect();
        for (l, r) in lhs.iter().zip(&rhs) {
            prop_assert!((l - r).norm() < 1e-9);
        }
    }

    #[test]
    fn fec_round_trips(bits in proptest::collection::vec(0u8..=1, 1..=64)) {
        let coded = fec_encode(&bits, FecConfig::ConvolutionalHalfRate);
        prop_assert_eq!(coded.len(), 2 * (bits.len() + 6));
        let llrs: Vec<f64> = coded.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
        prop_assert_eq!(fec_decode(&llrs, FecConfig::ConvolutionalHalfRate).unwrap(), bits);
    }
}
