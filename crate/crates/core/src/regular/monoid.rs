use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite monoid given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinMonoid {
    size: usize,
    table: Vec<u32>,
    identity: usize,
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct MonoidJson {
    size: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Serialize for FinMonoid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MonoidJson {
            size: self.size,
            table: self.rows(),
            identity: self.identity,
            labels: Some(self.labels.clone()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FinMonoid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MonoidJson::deserialize(d)?;
        if j.table.len() != j.size {
            return Err(serde::de::Error::custom("table size differs from size"));
        }
        let m = FinMonoid::new(j.table, j.identity).map_err(serde::de::Error::custom)?;
        match j.labels {
            Some(l) => m.with_labels(l).map_err(serde::de::Error::custom),
            None => Ok(m),
        }
    }
}

impl FinMonoid {
    /// Builds a monoid, checking closure, identity and associativity
    /// exhaustively.
    pub fn new(table: Vec<Vec<usize>>, identity: usize) -> Result<FinMonoid> {
        let m = FinMonoid::from_rows(table, identity)?;
        m.verify_laws()?;
        Ok(m)
    }

    fn from_rows(table: Vec<Vec<usize>>, identity: usize) -> Result<FinMonoid> {
        let size = table.len();
        if size == 0 || identity >= size {
            return Err(Error::InvalidMonoid("empty table or identity out of range".into()));
        }
        let mut flat = Vec::with_capacity(size * size);
        for row in &table {
            if row.len() != size {
                return Err(Error::InvalidMonoid("table is not square".into()));
            }
            for &c in row {
                if c >= size {
                    return Err(Error::InvalidMonoid(format!("entry {c} out of range")));
                }
                flat.push(c as u32);
            }
        }
        Ok(FinMonoid {
            size,
            table: flat,
            identity,
            labels: (0..size).map(|i| i.to_string()).collect(),
        })
    }

    /// Builds a monoid from a flat table known to satisfy the laws (for
    /// example a transformation monoid). [`FinMonoid::verify_laws`] remains
    /// available.
    pub(crate) fn trusted(size: usize, table: Vec<u32>, identity: usize, labels: Vec<String>) -> FinMonoid {
        debug_assert_eq!(table.len(), size * size);
        FinMonoid {
            size,
            table,
            identity,
            labels,
        }
    }

    /// Exhaustive identity and associativity check.
    pub fn verify_laws(&self) -> Result<()> {
        let n = self.size;
        for a in 0..n {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                return Err(Error::InvalidMonoid(format!("identity fails on {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidMonoid(format!(
                            "associativity fails on ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<FinMonoid> {
        if labels.len() != self.size {
            return Err(Error::InvalidMonoid("label count differs from size".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn trivial() -> FinMonoid {
        FinMonoid::trusted(1, vec![0], 0, vec!["1".into()])
    }

    /// `ℤ_q` under addition.
    pub fn cyclic(q: usize) -> Result<FinMonoid> {
        if q == 0 {
            return Err(Error::InvalidMonoid("modulus must be positive".into()));
        }
        let table = (0..q).map(|a| (0..q).map(|b| (a + b) % q).collect()).collect();
        FinMonoid::new(table, 0)
    }

    /// `{0, 1, …, t}` under addition saturating at `t`.
    pub fn saturating(t: usize) -> Result<FinMonoid> {
        let table = (0..=t)
            .map(|a| (0..=t).map(|b| (a + b).min(t)).collect())
            .collect();
        FinMonoid::new(table, 0)
    }

    /// `({0,1}, max)`.
    pub fn boolean_or() -> FinMonoid {
        FinMonoid::saturating(1).expect("valid table")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, e: usize) -> &str {
        &self.labels[e]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    pub fn product(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.identity, |acc, e| self.mul(acc, e))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|a| (0..self.size).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The absorbing element, if there is one.
    pub fn zero(&self) -> Option<usize> {
        (0..self.size).find(|&z| (0..self.size).all(|a| self.mul(z, a) == z && self.mul(a, z) == z))
    }

    /// Elements of the submonoid generated by `gens`, in BFS order from the
    /// identity.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        let mut order = vec![self.identity];
        seen[self.identity] = true;
        let mut i = 0;
        while i < order.len() {
            for &g in gens {
                let p = self.mul(order[i], g);
                if !seen[p] {
                    seen[p] = true;
                    order.push(p);
                }
            }
            i += 1;
        }
        order
    }

    /// The submonoid on `elems` (which must be closed and contain the
    /// identity), renumbered in the given order.
    pub fn restrict(&self, elems: &[usize]) -> Result<FinMonoid> {
        let mut pos = vec![usize::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        if pos[self.identity] == usize::MAX {
            return Err(Error::InvalidMonoid("submonoid lacks the identity".into()));
        }
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in elems {
            for &b in elems {
                let p = pos[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(Error::InvalidMonoid("subset is not closed".into()));
                }
                table.push(p as u32);
            }
        }
        Ok(FinMonoid::trusted(
            n,
            table,
            pos[self.identity],
            elems.iter().map(|&e| self.labels[e].clone()).collect(),
        ))
    }

    /// Direct product, pairs `(a, b)` numbered `a * other.size + b`.
    pub fn direct_product(&self, other: &FinMonoid) -> FinMonoid {
        let n = self.size * other.size;
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / other.size, a % other.size);
                let (b1, b2) = (b / other.size, b % other.size);
                table.push((self.mul(a1, b1) * other.size + other.mul(a2, b2)) as u32);
            }
        }
        let labels = (0..n)
            .map(|a| format!("({},{})", self.labels[a / other.size], other.labels[a % other.size]))
            .collect();
        FinMonoid::trusted(n, table, self.identity * other.size + other.identity, labels)
    }

    /// Whether `f` (a table on elements) is a monoid morphism into `other`.
    pub fn is_morphism_to(&self, other: &FinMonoid, f: &[usize]) -> bool {
        f.len() == self.size
            && f[self.identity] == other.identity
            && (0..self.size).all(|a| {
                (0..self.size).all(|b| f[self.mul(a, b)] == other.mul(f[a], f[b]))
            })
    }

    /// An isomorphism onto `other`, found by backtracking search.
    pub fn isomorphism_to(&self, other: &FinMonoid) -> Option<Vec<usize>> {
        if self.size != other.size {
            return None;
        }
        let n = self.size;
        let mut f = vec![usize::MAX; n];
        let mut used = vec![false; n];
        f[self.identity] = other.identity;
        used[other.identity] = true;
        fn consistent(m: &FinMonoid, o: &FinMonoid, f: &[usize]) -> bool {
            let n = m.size;
            (0..n).all(|a| {
                (0..n).all(|b| {
                    let (fa, fb, fab) = (f[a], f[b], f[m.mul(a, b)]);
                    fa == usize::MAX || fb == usize::MAX || fab == usize::MAX || o.mul(fa, fb) == fab
                })
            })
        }
        fn go(m: &FinMonoid, o: &FinMonoid, f: &mut [usize], used: &mut [bool], i: usize) -> bool {
            if i == m.size {
                return true;
            }
            if f[i] != usize::MAX {
                return go(m, o, f, used, i + 1);
            }
            for t in 0..o.size {
                if used[t] {
                    continue;
                }
                f[i] = t;
                used[t] = true;
                if consistent(m, o, f) && go(m, o, f, used, i + 1) {
                    return true;
                }
                f[i] = usize::MAX;
                used[t] = false;
            }
            false
        }
        go(self, other, &mut f, &mut used, 0).then_some(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_associative() {
        // x·y = x + 1 mod 2 style table: no identity
        assert!(FinMonoid::new(vec![vec![1, 0], vec![1, 0]], 0).is_err());
        // left-zero-ish table with identity forced but non-associative
        let bad = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 0]];
        assert!(FinMonoid::new(bad, 0).is_err());
    }

    #[test]
    fn standard_monoids() {
        let z3 = FinMonoid::cyclic(3).unwrap();
        assert!(z3.is_commutative());
        assert_eq!(z3.zero(), None);
        let b = FinMonoid::boolean_or();
        assert_eq!(b.zero(), Some(1));
        let s = FinMonoid::saturating(2).unwrap();
        assert_eq!(s.mul(1, 1), 2);
        assert_eq!(s.generated(&[1]), vec![0, 1, 2]);
        let p = z3.direct_product(&b);
        p.verify_laws().unwrap();
        assert_eq!(p.size(), 6);
    }

    #[test]
    fn isomorphism_search() {
        let z2 = FinMonoid::cyclic(2).unwrap();
        let b = FinMonoid::boolean_or();
        assert!(z2.isomorphism_to(&b).is_none());
        let swapped = FinMonoid::new(vec![vec![0, 1], vec![1, 1]], 0).unwrap();
        assert_eq!(b.isomorphism_to(&swapped), Some(vec![0, 1]));
    }

    #[test]
    fn json_round_trip() {
        let m = FinMonoid::cyclic(2).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: FinMonoid = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"size":2,"table":[[0,1],[1,1]],"identity":1}"#;
        assert!(serde_json::from_str::<FinMonoid>(bad).is_err());
    }
}
