//! Rank computations modulo a fixed large prime.

/// The prime used throughout (`2^61 - 1`).
pub const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

/// Reduces an integer into `0..P`.
pub fn reduce(x: i64) -> u64 {
    (x as i128).rem_euclid(P as i128) as u64
}

/// Incremental echelon basis over `F_P` for sparse vectors given as
/// `(index, value)` pairs.
#[derive(Clone, Debug, Default)]
pub struct EchelonModP {
    /// pivot index → normalized row (pivot coefficient 1)
    rows: std::collections::BTreeMap<usize, Vec<(usize, u64)>>,
}

impl EchelonModP {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut std::collections::BTreeMap<usize, u64>) {
        // eliminate pivots in increasing order; rows only touch larger indices
        let mut cursor = 0usize;
        loop {
            let Some((&i, &c)) = v.range(cursor..).next() else { break };
            cursor = i + 1;
            if let Some(row) = self.rows.get(&i) {
                for &(j, x) in row {
                    let e = v.entry(j).or_insert(0);
                    *e = (*e + P - mul(c, x)) % P;
                    if *e == 0 {
                        v.remove(&j);
                    }
                }
            }
        }
    }

    /// Inserts a vector; returns true if the rank grew.
    pub fn insert(&mut self, entries: &[(usize, i64)]) -> bool {
        let mut v = std::collections::BTreeMap::new();
        for &(i, x) in entries {
            let e = v.entry(i).or_insert(0u64);
            *e = (*e + reduce(x)) % P;
            if *e == 0 {
                v.remove(&i);
            }
        }
        self.reduce(&mut v);
        let Some((&p, &c)) = v.iter().next() else { return false };
        let ci = inv(c);
        let row: Vec<(usize, u64)> = v.iter().map(|(&j, &x)| (j, mul(x, ci))).collect();
        self.rows.insert(p, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_mod_p() {
        let mut e = EchelonModP::new();
        assert!(e.insert(&[(0, 2), (1, 4)]));
        assert!(!e.insert(&[(0, -1), (1, -2)]));
        assert!(e.insert(&[(1, 3), (2, 1)]));
        assert!(!e.insert(&[(0, 2), (1, 7), (2, 1)]));
        assert_eq!(e.rank(), 2);
    }
}
