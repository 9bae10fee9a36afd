//! Greedy maximum pairing of vehicles from a merged route with vehicles of the
//! receiving segment.

/// Result of [`pair_mvs`]. Indices refer to the input lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairSet {
    /// `(route index, segment index)` pairs whose loads fit one vehicle.
    pub pairs: Vec<(usize, usize)>,
    pub unpaired_route: Vec<usize>,
    pub unpaired_segment: Vec<usize>,
}

/// Pairs route vehicles (`kr`) with segment vehicles (`ks`) so that each
/// pair's combined load is at most `capacity`, maximizing the number of pairs.
///
/// Route loads are scanned largest first against segment loads smallest
/// first: a route load that does not fit with the smallest free segment load
/// fits with none and is left unpaired.
pub fn pair_mvs(kr: &[u32], ks: &[u32], capacity: u32) -> PairSet {
    let mut r: Vec<usize> = (0..kr.len()).collect();
    r.sort_by(|&a, &b| kr[b].cmp(&kr[a]).then(a.cmp(&b)));
    let mut s: Vec<usize> = (0..ks.len()).collect();
    s.sort_by(|&a, &b| ks[a].cmp(&ks[b]).then(a.cmp(&b)));
    let mut out = PairSet::default();
    let mut j = 0;
    for &i in &r {
        if j < s.len() && kr[i] as u64 + ks[s[j]] as u64 <= capacity as u64 {
            out.pairs.push((i, s[j]));
            j += 1;
        } else {
            out.unpaired_route.push(i);
        }
    }
    out.unpaired_segment = s[j..].to_vec();
    out
}

/// Size of a maximum feasible matching, by exhaustive search.
pub fn max_pairing_exhaustive(kr: &[u32], ks: &[u32], capacity: u32) -> usize {
    fn go(i: usize, kr: &[u32], ks: &[u32], used: &mut Vec<bool>, cap: u32) -> usize {
        if i == kr.len() {
            return 0;
        }
        let mut best = go(i + 1, kr, ks, used, cap);
        for j in 0..ks.len() {
            if !used[j] && kr[i] as u64 + ks[j] as u64 <= cap as u64 {
                used[j] = true;
                best = best.max(1 + go(i + 1, kr, ks, used, cap));
                used[j] = false;
            }
        }
        best
    }
    go(0, kr, ks, &mut vec![false; ks.len()], capacity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn values(kr: &[u32], ks: &[u32], p: &PairSet) -> Vec<(u32, u32)> {
        p.pairs.iter().map(|&(i, j)| (kr[i], ks[j])).collect()
    }

    #[test]
    fn examples() {
        let p = pair_mvs(&[5], &[3], 10);
        assert_eq!(values(&[5], &[3], &p), vec![(5, 3)]);

        let (kr, ks) = ([7, 6], [2, 5]);
        let p = pair_mvs(&kr, &ks, 10);
        assert_eq!(values(&kr, &ks, &p), vec![(7, 2)]);
        assert_eq!(p.unpaired_route, vec![1]);
        assert_eq!(p.unpaired_segment, vec![1]);

        let (kr, ks) = ([4, 3], [6, 5]);
        let p = pair_mvs(&kr, &ks, 10);
        assert_eq!(values(&kr, &ks, &p), vec![(4, 5), (3, 6)]);
    }

    proptest! {
        #[test]
        fn greedy_is_maximum(
            kr in prop::collection::vec(0u32..20, 0..=6),
            ks in prop::collection::vec(0u32..20, 0..=6),
            cap in 1u32..30,
        ) {
            let p = pair_mvs(&kr, &ks, cap);
            prop_assert_eq!(p.pairs.len(), max_pairing_exhaustive(&kr, &ks, cap));
            for &(i, j) in &p.pairs {
                prop_assert!(kr[i] + ks[j] <= cap);
            }
            prop_assert_eq!(p.pairs.len() + p.unpaired_route.len(), kr.len());
            prop_assert_eq!(p.pairs.len() + p.unpaired_segment.len(), ks.len());
        }
    }
}
