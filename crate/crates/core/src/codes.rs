//! Hadamard/OVSF matrices and partly overloaded spreading sequence sets.
//!
//! All correlation arithmetic is exact integer arithmetic; orthogonality is
//! never decided with a floating point tolerance.

use std::collections::BTreeSet;
use std::fmt;

/// Errors from code generation and correlation operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("matrix order 2^{0} exceeds the supported size")]
    SizeTooLarge(u32),
    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("swap mask must be a nonempty proper subset of the column pairs")]
    InvalidMask,
    #[error("requested {requested} extra sequences but only {available} exist")]
    CapacityExceeded { requested: usize, available: usize },
    #[error("sqrt(N) bound is only defined for even exponents, got N=2^{0}")]
    OddExponent(u32),
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("chip values must be +1 or -1")]
    InvalidChip,
    #[error("malformed code set text: {0}")]
    ParseError(String),
}

/// An antipodal chip vector of power-of-two length, the unit of spreading.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChipSequence {
    chips: Vec<i8>,
}

impl ChipSequence {
    /// Builds a sequence, checking the power-of-two length and the ±1 alphabet.
    pub fn new(chips: Vec<i8>) -> Result<Self, CodeError> {
        if chips.is_empty() || !chips.len().is_power_of_two() {
            return Err(CodeError::NotPowerOfTwo(chips.len()));
        }
        if chips.iter().any(|&c| c != 1 && c != -1) {
            return Err(CodeError::InvalidChip);
        }
        Ok(Self { chips })
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn chips(&self) -> &[i8] {
        &self.chips
    }

    pub fn negated(&self) -> Self {
        Self {
            chips: self.chips.iter().map(|&c| -c).collect(),
        }
    }

    /// Flips the sign if needed so the first chip is +1.
    pub fn canonical_sign(&self) -> Self {
        if self.chips[0] == -1 {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// Packs the sequence into a bitmask for sequences of at most 64 chips.
    /// Chip 0 occupies the most significant used bit and -1 maps to a set
    /// bit, so the numeric order of masks is the lexicographic order of chip
    /// vectors with +1 ordered before -1.
    fn bitmask(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        let mut m = 0u64;
        for &c in &self.chips {
            m = (m << 1) | u64::from(c == -1);
        }
        m
    }

    fn from_bitmask(mask: u64, len: usize) -> Self {
        let chips = (0..len)
            .map(|i| if mask >> (len - 1 - i) & 1 == 1 { -1 } else { 1 })
            .collect();
        Self { chips }
    }
}

impl fmt::Debug for ChipSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChipSequence({})", chips_to_text(&self.chips))
    }
}

fn chips_to_text(chips: &[i8]) -> String {
    chips.iter().map(|&c| if c == 1 { '+' } else { '-' }).collect()
}

fn chips_from_text(line: &str) -> Result<ChipSequence, CodeError> {
    let chips = line
        .chars()
        .map(|ch| match ch {
            '+' => Ok(1),
            '-' => Ok(-1),
            other => Err(CodeError::ParseError(format!("unexpected character {other:?}"))),
        })
        .collect::<Result<Vec<i8>, _>>()?;
    ChipSequence::new(chips)
}

/// Synchronous cross-correlation of two equal-length sequences.
pub fn cross_correlation(x: &ChipSequence, y: &ChipSequence) -> Result<i64, CodeError> {
    if x.len() != y.len() {
        return Err(CodeError::LengthMismatch(x.len(), y.len()));
    }
    Ok(x.chips
        .iter()
        .zip(&y.chips)
        .map(|(&a, &b)| i64::from(a) * i64::from(b))
        .sum())
}

/// A ±1 matrix whose rows are mutually orthogonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardMatrix {
    rows: Vec<ChipSequence>,
}

impl HadamardMatrix {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[ChipSequence] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &ChipSequence {
        &self.rows[i]
    }
}

const MAX_MATRIX_EXP: u32 = 16;

fn kronecker_with_pair(row: &ChipSequence, second: i8) -> ChipSequence {
    let mut chips = Vec::with_capacity(row.len() * 2);
    for &c in &row.chips {
        chips.push(c);
        chips.push(c * second);
    }
    ChipSequence { chips }
}

/// The 2^n x 2^n OVSF Hadamard matrix, rows in recursion order:
/// rows built with the (1,1) factor first, then rows built with (1,-1).
pub fn ovsf_matrix(n: u32) -> Result<HadamardMatrix, CodeError> {
    if n > MAX_MATRIX_EXP {
        return Err(CodeError::SizeTooLarge(n));
    }
    let mut rows = vec![ChipSequence { chips: vec![1] }];
    for _ in 0..n {
        let mut next = Vec::with_capacity(rows.len() * 2);
        next.extend(rows.iter().map(|r| kronecker_with_pair(r, 1)));
        next.extend(rows.iter().map(|r| kronecker_with_pair(r, -1)));
        rows = next;
    }
    Ok(HadamardMatrix { rows })
}

/// Row `index` of `ovsf_matrix(n)` without materializing the whole matrix.
pub fn ovsf_row(n: u32, index: u64) -> Result<ChipSequence, CodeError> {
    if n > MAX_MATRIX_EXP {
        return Err(CodeError::SizeTooLarge(n));
    }
    if index >= 1u64 << n {
        return Err(CodeError::CapacityExceeded {
            requested: index as usize,
            available: 1 << n,
        });
    }
    let mut row = ChipSequence { chips: vec![1] };
    for k in 0..n {
        let second = if index >> k & 1 == 1 { -1 } else { 1 };
        row = kronecker_with_pair(&row, second);
    }
    Ok(row)
}

/// Exact Hadamard test: M Mᵀ = N I in integer arithmetic.
pub fn is_hadamard(rows: &[ChipSequence]) -> Result<bool, CodeError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CodeError::NotSquare);
    }
    for i in 0..n {
        for j in i..n {
            let c = cross_correlation(&rows[i], &rows[j])?;
            let expected = if i == j { n as i64 } else { 0 };
            if c != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A set of column-pair indices; pair k (1-based) names columns 2k-1 and 2k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapMask {
    pairs: BTreeSet<usize>,
}

impl SwapMask {
    /// Pair indices are 1-based; the mask must be nonempty.
    pub fn new<I: IntoIterator<Item = usize>>(pairs: I) -> Result<Self, CodeError> {
        let pairs: BTreeSet<usize> = pairs.into_iter().collect();
        if pairs.is_empty() || pairs.contains(&0) {
            return Err(CodeError::InvalidMask);
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().copied()
    }
}

/// Exchanges chips 2k-1 and 2k for every pair k in the mask.
pub fn apply_pair_swaps(seq: &ChipSequence, mask: &SwapMask) -> Result<ChipSequence, CodeError> {
    let n_pairs = seq.len() / 2;
    if seq.len() < 2 {
        return Err(CodeError::LengthMismatch(seq.len(), 2));
    }
    if let Some(&max) = mask.pairs.iter().max() {
        if max > n_pairs {
            return Err(CodeError::LengthMismatch(max, n_pairs));
        }
    }
    if mask.pairs.len() == n_pairs {
        // Swapping every pair of a row with (x, -x) or (x, x) pair structure
        // only negates or preserves it; the mask must be a proper subset.
        return Err(CodeError::InvalidMask);
    }
    let mut chips = seq.chips.clone();
    for &k in &mask.pairs {
        chips.swap(2 * k - 2, 2 * k - 1);
    }
    Ok(ChipSequence { chips })
}

/// How many extra sequences to keep when generating an overloaded set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtraCount {
    All,
    Count(usize),
}

/// A partitioned sequence family: a globally orthogonal upper half, the
/// lower base half, and extra sequences that interfere only with the lower
/// half.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverloadedCodeSet {
    sf: usize,
    upper: Vec<ChipSequence>,
    lower_base: Vec<ChipSequence>,
    extras: Vec<ChipSequence>,
}

impl OverloadedCodeSet {
    pub fn sf(&self) -> usize {
        self.sf
    }

    pub fn upper(&self) -> &[ChipSequence] {
        &self.upper
    }

    pub fn lower_base(&self) -> &[ChipSequence] {
        &self.lower_base
    }

    pub fn extras(&self) -> &[ChipSequence] {
        &self.extras
    }

    /// All sequences in section order: upper, lower base, extras.
    pub fn all_sequences(&self) -> impl Iterator<Item = &ChipSequence> {
        self.upper.iter().chain(&self.lower_base).chain(&self.extras)
    }

    /// Text form: one sequence per line as '+'/'-' chips, sections separated
    /// by the lines UPPER, LOWER_BASE and EXTRA.
    pub fn to_text(&self) -> String {
        let mut out = String::from("UPPER\n");
        for s in &self.upper {
            out.push_str(&chips_to_text(&s.chips));
            out.push('\n');
        }
        out.push_str("LOWER_BASE\n");
        for s in &self.lower_base {
            out.push_str(&chips_to_text(&s.chips));
            out.push('\n');
        }
        out.push_str("EXTRA\n");
        for s in &self.extras {
            out.push_str(&chips_to_text(&s.chips));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CodeError> {
        let mut sections: [Vec<ChipSequence>; 3] = [vec![], vec![], vec![]];
        let mut current: Option<usize> = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            match line {
                "UPPER" => current = Some(0),
                "LOWER_BASE" => current = Some(1),
                "EXTRA" => current = Some(2),
                _ => {
                    let idx = current
                        .ok_or_else(|| CodeError::ParseError("sequence before section header".into()))?;
                    sections[idx].push(chips_from_text(line)?);
                }
            }
        }
        let [upper, lower_base, extras] = sections;
        if upper.is_empty() || lower_base.is_empty() {
            return Err(CodeError::ParseError("missing UPPER or LOWER_BASE section".into()));
        }
        let sf = upper[0].len();
        if upper.len() != sf / 2
            || lower_base.len() != sf / 2
            || upper
                .iter()
                .chain(&lower_base)
                .chain(&extras)
                .any(|s| s.len() != sf)
        {
            return Err(CodeError::ParseError("inconsistent section sizes".into()));
        }
        Ok(Self { sf, upper, lower_base, extras })
    }
}

/// Exhaustive pair-mask enumeration is capped at SF 32: the candidate space
/// grows as 2^(SF/2).
const MAX_OVERLOAD_EXP: u32 = 5;

/// Generates the partly overloaded set for a spreading factor `sf`.
///
/// The upper and lower base sections are the OVSF matrix rows; the extras
/// are every distinct sequence reachable by column-pair interchange of a
/// lower base row, canonicalized to a +1 first chip, with ± duplicates of
/// the base matrix removed. Extras are ordered greedily: each step picks the
/// candidate with the smallest maximum |cross-correlation| against the lower
/// base rows and the already selected extras, ties broken lexicographically
/// on the chip vector (+1 before -1).
pub fn generate_overloaded_set(sf: usize, count: ExtraCount) -> Result<OverloadedCodeSet, CodeError> {
    if !sf.is_power_of_two() {
        return Err(CodeError::NotPowerOfTwo(sf));
    }
    let n = sf.trailing_zeros();
    if !(2..=MAX_OVERLOAD_EXP).contains(&n) {
        return Err(CodeError::SizeTooLarge(n));
    }
    let matrix = ovsf_matrix(n)?;
    let half = sf / 2;
    let upper: Vec<ChipSequence> = matrix.rows()[..half].to_vec();
    let lower_base: Vec<ChipSequence> = matrix.rows()[half..].to_vec();

    // Every row starts with +1, so the rows are their own canonical form.
    let row_masks: BTreeSet<u64> = matrix.rows().iter().map(ChipSequence::bitmask).collect();

    // Lower-half rows pair up as (c, -c), so interchanging a column pair is
    // the same as complementing its two chips; the whole enumeration runs on
    // bitmasks. Chip 0 is the mask's top bit and a set bit means -1.
    let full = u64::MAX >> (64 - sf);
    let alternating = (u64::MAX / 3) & full;
    let lower_masks: Vec<u64> = lower_base.iter().map(ChipSequence::bitmask).collect();
    for &r in &lower_masks {
        debug_assert_eq!((r ^ (r >> 1)) & alternating, alternating);
    }

    let mut candidates: BTreeSet<u64> = BTreeSet::new();
    let full_mask = (1u64 << half) - 1;
    for swap_bits in 1..full_mask {
        let mut spread = 0u64;
        for k in 0..half {
            if swap_bits >> k & 1 == 1 {
                spread |= 0b11 << (sf - 2 - 2 * k);
            }
        }
        for &r in &lower_masks {
            let mut m = r ^ spread;
            if m >> (sf - 1) & 1 == 1 {
                m = !m & full;
            }
            if !row_masks.contains(&m) {
                candidates.insert(m);
            }
        }
    }

    let available = candidates.len();
    let requested = match count {
        ExtraCount::All => available,
        ExtraCount::Count(k) if k > available => {
            return Err(CodeError::CapacityExceeded { requested: k, available })
        }
        ExtraCount::Count(k) => k,
    };

    let extras = greedy_select(&candidates, &lower_base, sf, requested);
    Ok(OverloadedCodeSet { sf, upper, lower_base, extras })
}

/// Greedy minimax-correlation ordering over bitmask-encoded candidates.
fn greedy_select(
    candidates: &BTreeSet<u64>,
    lower_base: &[ChipSequence],
    sf: usize,
    take: usize,
) -> Vec<ChipSequence> {
    let corr = |a: u64, b: u64| (sf as i64 - 2 * ((a ^ b).count_ones() as i64)).abs();
    let base_masks: Vec<u64> = lower_base.iter().map(ChipSequence::bitmask).collect();

    let mut masks: Vec<u64> = candidates.iter().copied().collect();
    // Correlations are bounded by sf <= 64, so a byte per candidate keeps
    // the O(K^2) scan cache-friendly for the largest pools.
    let mut max_corr: Vec<u8> = masks
        .iter()
        .map(|&m| base_masks.iter().map(|&b| corr(m, b)).max().unwrap_or(0) as u8)
        .collect();
    let mut selected = Vec::with_capacity(take);

    // One fused pass per pick: fold the previous pick into every surviving
    // max while scanning for the next minimum. Equal maxima tie-break on
    // the numerically smallest mask, which is the lexicographic +1 < -1
    // order, so the swap-remove compaction cannot change the result.
    let mut last_pick: Option<u64> = None;
    for _ in 0..take {
        let mut best_i = 0usize;
        let mut best_val = u8::MAX;
        let mut best_mask = u64::MAX;
        for (i, (&m, mc)) in masks.iter().zip(max_corr.iter_mut()).enumerate() {
            if let Some(p) = last_pick {
                *mc = (*mc).max(corr(p, m) as u8);
            }
            if *mc < best_val || (*mc == best_val && m < best_mask) {
                best_val = *mc;
                best_mask = m;
                best_i = i;
            }
        }
        last_pick = Some(masks[best_i]);
        selected.push(ChipSequence::from_bitmask(masks[best_i], sf));
        masks.swap_remove(best_i);
        max_corr.swap_remove(best_i);
    }
    selected
}

/// Maximum |cross-correlation| between a sequence and any row of the matrix,
/// with the ± sign cover of each row folded into the absolute value.
pub fn max_cross_correlation(f: &ChipSequence, matrix: &HadamardMatrix) -> Result<i64, CodeError> {
    if f.len() != matrix.order() {
        return Err(CodeError::LengthMismatch(f.len(), matrix.order()));
    }
    let mut max = 0;
    for row in matrix.rows() {
        max = max.max(cross_correlation(f, row)?.abs());
    }
    Ok(max)
}

/// Minimum achievable maximum correlation sqrt(N) = 2^(n/2), defined only
/// for even n.
pub fn min_correlation_bound(n_chips: usize) -> Result<u64, CodeError> {
    if !n_chips.is_power_of_two() {
        return Err(CodeError::NotPowerOfTwo(n_chips));
    }
    let n = n_chips.trailing_zeros();
    if n % 2 != 0 {
        return Err(CodeError::OddExponent(n));
    }
    Ok(1u64 << (n / 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> ChipSequence {
        chips_from_text(text).unwrap()
    }

    #[test]
    fn ovsf_matrix_small_orders() {
        assert_eq!(ovsf_matrix(0).unwrap().rows(), &[seq("+")]);
        assert_eq!(ovsf_matrix(1).unwrap().rows(), &[seq("++"), seq("+-")]);
        let h4 = ovsf_matrix(2).unwrap();
        assert_eq!(
            h4.rows(),
            &[seq("++++"), seq("++--"), seq("+-+-"), seq("+--+")]
        );
    }

    #[test]
    fn ovsf_matrix_rejects_large_order() {
        assert_eq!(ovsf_matrix(17), Err(CodeError::SizeTooLarge(17)));
    }

    #[test]
    fn ovsf_row_matches_matrix() {
        for n in 0..=6 {
            let m = ovsf_matrix(n).unwrap();
            for i in 0..m.order() {
                assert_eq!(&ovsf_row(n, i as u64).unwrap(), m.row(i), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn cross_correlation_of_matrix_rows() {
        let h8 = ovsf_matrix(3).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let c = cross_correlation(h8.row(i), h8.row(j)).unwrap();
                assert_eq!(c, if i == j { 8 } else { 0 });
            }
        }
    }

    #[test]
    fn cross_correlation_hand_example() {
        let x = seq("-++-+-+-");
        let y = seq("+-+-+-+-");
        assert_eq!(cross_correlation(&x, &y).unwrap(), 4);
    }

    #[test]
    fn cross_correlation_length_mismatch() {
        let e = cross_correlation(&seq("++"), &seq("++++"));
        assert_eq!(e, Err(CodeError::LengthMismatch(2, 4)));
    }

    #[test]
    fn hadamard_check_detects_one_flipped_chip() {
        let h8 = ovsf_matrix(3).unwrap();
        assert!(is_hadamard(h8.rows()).unwrap());

        let mut rows = h8.rows().to_vec();
        let mut chips = rows[3].chips().to_vec();
        chips[5] = -chips[5];
        rows[3] = ChipSequence::new(chips).unwrap();
        assert!(!is_hadamard(&rows).unwrap());
    }

    #[test]
    fn hadamard_preserved_by_column_interchange() {
        let h8 = ovsf_matrix(3).unwrap();
        let mask = SwapMask::new([1]).unwrap();
        let swapped: Vec<ChipSequence> = h8
            .rows()
            .iter()
            .map(|r| apply_pair_swaps(r, &mask).unwrap())
            .collect();
        assert!(is_hadamard(&swapped).unwrap());
    }

    #[test]
    fn is_hadamard_rejects_non_square() {
        assert_eq!(is_hadamard(&[seq("++++")]), Err(CodeError::NotSquare));
    }

    #[test]
    fn pair_swap_examples() {
        let mask = SwapMask::new([1]).unwrap();
        assert_eq!(
            apply_pair_swaps(&seq("+-+-+-+-"), &mask).unwrap(),
            seq("-++-+-+-")
        );
        // Upper half rows have pairwise-equal neighbors: swaps are identity.
        let h8 = ovsf_matrix(3).unwrap();
        for row in &h8.rows()[..4] {
            assert_eq!(&apply_pair_swaps(row, &mask).unwrap(), row);
        }
    }

    #[test]
    fn empty_and_full_masks_are_invalid() {
        assert_eq!(SwapMask::new([]), Err(CodeError::InvalidMask));
        let full = SwapMask::new([1, 2, 3, 4]).unwrap();
        assert_eq!(
            apply_pair_swaps(&seq("+-+-+-+-"), &full),
            Err(CodeError::InvalidMask)
        );
        let oob = SwapMask::new([5]).unwrap();
        assert_eq!(
            apply_pair_swaps(&seq("+-+-+-+-"), &oob),
            Err(CodeError::LengthMismatch(5, 4))
        );
    }

    #[test]
    fn sf4_has_no_extras() {
        let set = generate_overloaded_set(4, ExtraCount::All).unwrap();
        assert!(set.extras().is_empty());
    }

    #[test]
    fn sf8_has_exactly_four_extras() {
        let set = generate_overloaded_set(8, ExtraCount::All).unwrap();
        assert_eq!(set.extras().len(), 4);
        let h8 = ovsf_matrix(3).unwrap();
        for e in set.extras() {
            for u in set.upper() {
                assert_eq!(cross_correlation(e, u).unwrap(), 0);
            }
            for l in set.lower_base() {
                assert_eq!(cross_correlation(e, l).unwrap().abs(), 4);
            }
            assert_eq!(max_cross_correlation(e, &h8).unwrap(), 4);
            assert_eq!(e.chips()[0], 1);
        }
        for (i, a) in set.extras().iter().enumerate() {
            for b in &set.extras()[i + 1..] {
                assert_eq!(cross_correlation(a, b).unwrap(), 0);
            }
        }
    }

    #[test]
    fn sf8_capacity_exceeded() {
        assert_eq!(
            generate_overloaded_set(8, ExtraCount::Count(6)),
            Err(CodeError::CapacityExceeded { requested: 6, available: 4 })
        );
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_overloaded_set(16, ExtraCount::All).unwrap();
        let b = generate_overloaded_set(16, ExtraCount::All).unwrap();
        assert_eq!(a, b);
        let prefix = generate_overloaded_set(16, ExtraCount::Count(5)).unwrap();
        assert_eq!(&a.extras()[..5], prefix.extras());
    }

    #[test]
    fn extras_never_duplicate_base_rows() {
        for n in [2u32, 3, 4] {
            let sf = 1usize << n;
            let set = generate_overloaded_set(sf, ExtraCount::All).unwrap();
            let m = ovsf_matrix(n).unwrap();
            for e in set.extras() {
                for row in m.rows() {
                    assert_ne!(e, row);
                    assert_ne!(&e.negated(), row);
                }
            }
        }
    }

    #[test]
    fn generate_rejects_unsupported_sf() {
        assert!(matches!(generate_overloaded_set(2, ExtraCount::All), Err(CodeError::SizeTooLarge(_))));
        assert!(matches!(generate_overloaded_set(64, ExtraCount::All), Err(CodeError::SizeTooLarge(_))));
        assert!(matches!(generate_overloaded_set(12, ExtraCount::All), Err(CodeError::NotPowerOfTwo(12))));
    }

    #[test]
    fn max_cross_correlation_examples() {
        let h8 = ovsf_matrix(3).unwrap();
        assert_eq!(max_cross_correlation(h8.row(2), &h8).unwrap(), 8);

        let h4 = ovsf_matrix(2).unwrap();
        let f = seq("+++-");
        assert_eq!(max_cross_correlation(&f, &h4).unwrap(), 2);
        assert_eq!(min_correlation_bound(4).unwrap(), 2);
    }

    #[test]
    fn correlation_bound_values() {
        assert_eq!(min_correlation_bound(16), Ok(4));
        assert_eq!(min_correlation_bound(4), Ok(2));
        assert_eq!(min_correlation_bound(8), Err(CodeError::OddExponent(3)));
        assert_eq!(min_correlation_bound(12), Err(CodeError::NotPowerOfTwo(12)));
    }

    #[test]
    fn text_round_trip() {
        let set = generate_overloaded_set(8, ExtraCount::All).unwrap();
        let text = set.to_text();
        assert!(text.starts_with("UPPER\n++++++++\n"));
        let parsed = OverloadedCodeSet::from_text(&text).unwrap();
        assert_eq!(parsed, set);
    }
}
