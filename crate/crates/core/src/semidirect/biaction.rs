use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regular::FinMonoid;

/// Commuting left and right actions of a finite monoid `M` on a finite set
/// `S = {0..n}`.
///
/// `lambda[m][s]` is `m·s` and `rho[m][s]` is `s·m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Biaction {
    #[serde(rename = "M")]
    monoid: FinMonoid,
    #[serde(skip)]
    n_s: usize,
    lambda: Vec<Vec<usize>>,
    rho: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct BiactionJson {
    #[serde(rename = "M")]
    monoid: FinMonoid,
    lambda: Vec<Vec<usize>>,
    rho: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for Biaction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = BiactionJson::deserialize(d)?;
        let n_s = j.lambda.first().map_or(0, Vec::len);
        Biaction::new(j.monoid, n_s, j.lambda, j.rho).map_err(serde::de::Error::custom)
    }
}

impl Biaction {
    /// Builds the biaction and checks the action and commutation laws
    /// exhaustively.
    pub fn new(
        monoid: FinMonoid,
        n_s: usize,
        lambda: Vec<Vec<usize>>,
        rho: Vec<Vec<usize>>,
    ) -> Result<Biaction> {
        let nm = monoid.size();
        for t in [&lambda, &rho] {
            if t.len() != nm || t.iter().any(|row| row.len() != n_s || row.iter().any(|&s| s >= n_s)) {
                return Err(Error::InvalidMonoid("action table has the wrong shape".into()));
            }
        }
        let b = Biaction {
            monoid,
            n_s,
            lambda,
            rho,
        };
        b.verify_laws()?;
        Ok(b)
    }

    /// Both actions trivial.
    pub fn trivial(monoid: FinMonoid, n_s: usize) -> Biaction {
        let id: Vec<usize> = (0..n_s).collect();
        Biaction {
            lambda: vec![id.clone(); monoid.size()],
            rho: vec![id; monoid.size()],
            monoid,
            n_s,
        }
    }

    pub fn monoid(&self) -> &FinMonoid {
        &self.monoid
    }

    pub fn set_size(&self) -> usize {
        self.n_s
    }

    pub fn left(&self, m: usize, s: usize) -> usize {
        self.lambda[m][s]
    }

    pub fn right(&self, s: usize, m: usize) -> usize {
        self.rho[m][s]
    }

    pub fn verify_laws(&self) -> Result<()> {
        let m = &self.monoid;
        let e = m.identity();
        let bad = |what: &str, detail: String| Err(Error::InvalidMonoid(format!("{what} fails at {detail}")));
        for s in 0..self.n_s {
            if self.lambda[e][s] != s {
                return bad("λ_1 = id", format!("s={s}"));
            }
            if self.rho[e][s] != s {
                return bad("ρ_1 = id", format!("s={s}"));
            }
        }
        for a in 0..m.size() {
            for b in 0..m.size() {
                let ab = m.mul(a, b);
                for s in 0..self.n_s {
                    if self.lambda[a][self.lambda[b][s]] != self.lambda[ab][s] {
                        return bad("λ_m∘λ_m' = λ_mm'", format!("m={a}, m'={b}, s={s}"));
                    }
                    if self.rho[b][self.rho[a][s]] != self.rho[ab][s] {
                        return bad("ρ_m'∘ρ_m = ρ_mm'", format!("m={a}, m'={b}, s={s}"));
                    }
                    if self.lambda[a][self.rho[b][s]] != self.rho[b][self.lambda[a][s]] {
                        return bad("λ_m∘ρ_m' = ρ_m'∘λ_m", format!("m={a}, m'={b}, s={s}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// When `S` carries a monoid structure: every `λ_m` and `ρ_m` is a monoid
    /// endomorphism of `S`.
    pub fn verify_monoid_laws(&self, s: &FinMonoid) -> Result<()> {
        if s.size() != self.n_s {
            return Err(Error::InvalidMonoid("acted-on monoid has the wrong size".into()));
        }
        for m in 0..self.monoid.size() {
            for (name, t) in [("λ", &self.lambda[m]), ("ρ", &self.rho[m])] {
                if t[s.identity()] != s.identity() {
                    return Err(Error::InvalidMonoid(format!("{name}_{m} does not fix the unit")));
                }
                for a in 0..self.n_s {
                    for b in 0..self.n_s {
                        if t[s.mul(a, b)] != s.mul(t[a], t[b]) {
                            return Err(Error::InvalidMonoid(format!(
                                "{name}_{m} is not additive at ({a},{b})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The two-sided semidirect product `S ** M`, with pairs `(s, m)` numbered
/// `s * |M| + m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdpMonoid {
    s: FinMonoid,
    biaction: Biaction,
    product: FinMonoid,
}

impl Serialize for SdpMonoid {
    fn serialize<Ser: serde::Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(rename = "S")]
            s: &'a FinMonoid,
            #[serde(rename = "M")]
            m: &'a FinMonoid,
            lambda: &'a [Vec<usize>],
            rho: &'a [Vec<usize>],
            table: Vec<Vec<usize>>,
            identity: usize,
        }
        Out {
            s: &self.s,
            m: &self.biaction.monoid,
            lambda: &self.biaction.lambda,
            rho: &self.biaction.rho,
            table: self.product.rows(),
            identity: self.product.identity(),
        }
        .serialize(ser)
    }
}

/// `(s1,m1)(s2,m2) = (s1·m2 + m1·s2, m1m2)`, with every law checked.
pub fn sdp(s: &FinMonoid, biaction: &Biaction) -> Result<SdpMonoid> {
    biaction.verify_monoid_laws(s)?;
    let m = &biaction.monoid;
    let nm = m.size();
    let n = s.size() * nm;
    let table = (0..n)
        .map(|x| {
            let (s1, m1) = (x / nm, x % nm);
            (0..n)
                .map(|y| {
                    let (s2, m2) = (y / nm, y % nm);
                    s.mul(biaction.rho[m2][s1], biaction.lambda[m1][s2]) * nm + m.mul(m1, m2)
                })
                .collect()
        })
        .collect();
    let labels = (0..n)
        .map(|x| format!("({},{})", s.label(x / nm), m.label(x % nm)))
        .collect();
    let product = FinMonoid::new(table, s.identity() * nm + m.identity())?.with_labels(labels)?;
    Ok(SdpMonoid {
        s: s.clone(),
        biaction: biaction.clone(),
        product,
    })
}

impl SdpMonoid {
    pub fn monoid(&self) -> &FinMonoid {
        &self.product
    }

    pub fn left_factor(&self) -> &FinMonoid {
        &self.s
    }

    pub fn right_factor(&self) -> &FinMonoid {
        &self.biaction.monoid
    }

    pub fn biaction(&self) -> &Biaction {
        &self.biaction
    }

    pub fn pair(&self, x: usize) -> (usize, usize) {
        let nm = self.biaction.monoid.size();
        (x / nm, x % nm)
    }

    pub fn index(&self, s: usize, m: usize) -> usize {
        s * self.biaction.monoid.size() + m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> FinMonoid {
        FinMonoid::cyclic(2).unwrap()
    }

    #[test]
    fn trivial_factors() {
        let s = FinMonoid::saturating(2).unwrap();
        let p = sdp(&s, &Biaction::trivial(FinMonoid::trivial(), s.size())).unwrap();
        assert!(p.monoid().isomorphism_to(&s).is_some());
        let m = FinMonoid::cyclic(3).unwrap();
        let q = sdp(&FinMonoid::trivial(), &Biaction::trivial(m.clone(), 1)).unwrap();
        assert!(q.monoid().isomorphism_to(&m).is_some());
    }

    #[test]
    fn trivial_actions_give_the_direct_product() {
        let p = sdp(&z2(), &Biaction::trivial(z2(), 2)).unwrap();
        assert_eq!(p.monoid().rows(), z2().direct_product(&z2()).rows());
    }

    #[test]
    fn swap_action() {
        // ℤ2 acting on ℤ2×ℤ2 by swapping coordinates on the left only
        let s = z2().direct_product(&z2());
        let swap = vec![0, 2, 1, 3];
        let b = Biaction::new(z2(), 4, vec![(0..4).collect(), swap], vec![(0..4).collect(); 2]).unwrap();
        let p = sdp(&s, &b).unwrap();
        assert_eq!(p.monoid().size(), 8);
        assert!(!p.monoid().is_commutative());
        let (x, g) = (p.index(1, 0), p.index(0, 1));
        assert_eq!(p.monoid().mul(g, x), p.index(2, 1));
        assert_eq!(p.monoid().mul(x, g), p.index(1, 1));
    }

    #[test]
    fn laws_are_enforced() {
        let id: Vec<usize> = (0..2).collect();
        let broken = Biaction::new(z2(), 2, vec![vec![1, 0], id.clone()], vec![id.clone(), id.clone()]);
        assert!(broken.is_err());
        // a set map that is an action but not additive on ℤ3
        let z3 = FinMonoid::cyclic(3).unwrap();
        let fix0 = vec![0, 2, 1];
        let b = Biaction::new(z2(), 3, vec![(0..3).collect(), fix0], vec![(0..3).collect(); 2]).unwrap();
        assert!(b.verify_monoid_laws(&z3).is_ok());
        let bad = vec![1, 0, 2];
        let b = Biaction::new(z2(), 3, vec![(0..3).collect(), bad], vec![(0..3).collect(); 2]).unwrap();
        assert!(sdp(&z3, &b).is_err());
    }

    #[test]
    fn json_round_trip() {
        let b = Biaction::trivial(z2(), 3);
        let text = serde_json::to_string(&b).unwrap();
        let back: Biaction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
        let p = sdp(&FinMonoid::cyclic(3).unwrap(), &b).unwrap();
        let v = serde_json::to_value(&p).unwrap();
        for k in ["S", "M", "lambda", "rho", "table"] {
            assert!(v.get(k).is_some(), "{k}");
        }
    }
}
