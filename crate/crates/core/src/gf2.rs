//! Dense linear algebra over GF(2) on packed bit rows.

/// Rank of rows packed into single words.
pub fn rank_u64(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::with_capacity(rows.len());
    for &row in rows {
        let reduced = basis.iter().fold(row, |r, &b| r.min(r ^ b));
        if reduced != 0 {
            basis.push(reduced);
            // keep pivots (highest bit) distinct and sorted descending
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// A bit row of arbitrary width, bit `i` at word `i / 64`.
pub type Row = Vec<u64>;

pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub fn get(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
pub fn flip(row: &mut [u64], i: usize) {
    row[i / 64] ^= 1 << (i % 64);
}

#[inline]
pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub fn dot(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
}

fn lowest_set(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Incrementally built echelon basis; rows are reduced on insertion.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, Row)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis; the result is zero iff `row` lies in
    /// the span.
    pub fn reduce(&self, row: &[u64]) -> Row {
        let mut r = row.to_vec();
        for (pivot, b) in &self.rows {
            if get(&r, *pivot) {
                xor_into(&mut r, b);
            }
        }
        r
    }

    pub fn contains(&self, row: &[u64]) -> bool {
        self.reduce(row).iter().all(|&w| w == 0)
    }

    /// Adds `row`; returns false when it was already in the span.
    pub fn insert(&mut self, row: &[u64]) -> bool {
        let r = self.reduce(row);
        match lowest_set(&r) {
            None => false,
            Some(pivot) => {
                for (_, b) in self.rows.iter_mut() {
                    if get(b, pivot) {
                        xor_into(b, &r);
                    }
                }
                self.rows.push((pivot, r));
                true
            }
        }
    }
}

pub fn rank(rows: &[Row]) -> usize {
    let mut basis = EchelonBasis::new();
    rows.iter().filter(|r| basis.insert(r)).count()
}

/// Basis of `{v : dot(rows[i], v) = 0 for all i}` within `width` bits.
pub fn kernel(rows: &[Row], width: usize) -> Vec<Row> {
    let words = words_for(width);
    let mut basis = EchelonBasis::new();
    for row in rows {
        let mut r = row.clone();
        r.resize(words, 0);
        basis.insert(&r);
    }
    let pivots: Vec<usize> = basis.rows.iter().map(|(p, _)| *p).collect();
    (0..width)
        .filter(|f| !pivots.contains(f))
        .map(|f| {
            let mut v = vec![0u64; words];
            flip(&mut v, f);
            for (p, r) in &basis.rows {
                if get(r, f) {
                    flip(&mut v, *p);
                }
            }
            v
        })
        .collect()
}

/// Some `v` with `dot(rows[i], v) == rhs[i]` for every `i`, or `None` when
/// the system is inconsistent.
pub fn solve(rows: &[Row], rhs: &[bool], width: usize) -> Option<Row> {
    assert_eq!(rows.len(), rhs.len());
    let words = words_for(width);
    // augmented elimination: track rhs alongside each row
    let mut pivots: Vec<(usize, Row, bool)> = Vec::new();
    for (row, &b) in rows.iter().zip(rhs) {
        let mut r = row.clone();
        r.resize(words, 0);
        let mut b = b;
        for (p, pr, pb) in &pivots {
            if get(&r, *p) {
                xor_into(&mut r, pr);
                b ^= pb;
            }
        }
        match lowest_set(&r) {
            None if b => return None,
            None => {}
            Some(p) => {
                for (_, pr, pb) in pivots.iter_mut() {
                    if get(pr, p) {
                        xor_into(pr, &r);
                        *pb ^= b;
                    }
                }
                pivots.push((p, r, b));
            }
        }
    }
    // fully reduced: each pivot column appears in exactly one row
    let mut v = vec![0u64; words];
    for (p, _, b) in &pivots {
        if *b {
            flip(&mut v, *p);
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_small() {
        assert_eq!(rank_u64(&[0b01, 0b10, 0b11]), 2);
        assert_eq!(rank_u64(&[0, 0]), 0);
        assert_eq!(rank_u64(&[0b100, 0b110, 0b111]), 3);
        assert_eq!(rank(&[vec![1, 0], vec![0, 1], vec![1, 1]]), 2);
    }

    #[test]
    fn rank_u64_matches_multiword() {
        for mask in 0u64..4096 {
            let rows: Vec<u64> = (0..3).map(|i| mask >> (4 * i) & 0xf).collect();
            let wide: Vec<Row> = rows.iter().map(|&r| vec![r]).collect();
            assert_eq!(rank_u64(&rows), rank(&wide));
        }
    }

    #[test]
    fn membership() {
        let mut b = EchelonBasis::new();
        assert!(b.insert(&[0b0110]));
        assert!(b.insert(&[0b0011]));
        assert!(!b.insert(&[0b0101]));
        assert!(b.contains(&[0b0101]));
        assert!(!b.contains(&[0b1000]));
    }

    #[test]
    fn kernel_dimension_and_orthogonality() {
        for mask in 0u64..4096 {
            let rows: Vec<Row> = (0..3).map(|i| vec![mask >> (4 * i) & 0xf]).collect();
            let k = kernel(&rows, 4);
            assert_eq!(k.len(), 4 - rank(&rows));
            assert_eq!(rank(&k), k.len());
            for v in &k {
                assert!(rows.iter().all(|r| !dot(r, v)));
            }
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let rows = vec![vec![0b011u64], vec![0b110]];
        for target in 0..4u8 {
            let rhs = [target & 1 == 1, target & 2 == 2];
            let v = solve(&rows, &rhs, 3).unwrap();
            assert_eq!(dot(&rows[0], &v), rhs[0]);
            assert_eq!(dot(&rows[1], &v), rhs[1]);
        }
        let dependent = vec![vec![0b011u64], vec![0b011]];
        assert!(solve(&dependent, &[true, false], 3).is_none());
        assert!(solve(&dependent, &[true, true], 3).is_some());
    }
}
