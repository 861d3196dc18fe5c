//! Intersection lattice of a ruled surface blown up at finitely many points.
//!
//! Basis X₀, f, E₁, …, E_k with X₀² = −e, X₀·f = 1, f² = 0, E_i² = −1 and the
//! E_i orthogonal to everything pulled back. Multiplicities are supplied by
//! the caller; nothing here knows where the centers are.

use crate::surface::{intersect_num, NumClass};
use serde::Serialize;
use std::ops::{Add, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeClass {
    /// coefficient of X₀
    pub a: i64,
    /// coefficient of f
    pub b: i64,
    /// coefficients of E₁…E_k
    pub ex: Vec<i64>,
}

impl LatticeClass {
    fn zip(&self, o: &LatticeClass, f: impl Fn(i64, i64) -> i64) -> LatticeClass {
        assert_eq!(self.ex.len(), o.ex.len(), "classes from different lattices");
        LatticeClass {
            a: f(self.a, o.a),
            b: f(self.b, o.b),
            ex: self.ex.iter().zip(&o.ex).map(|(x, y)| f(*x, *y)).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> LatticeClass {
        LatticeClass {
            a: self.a * k,
            b: self.b * k,
            ex: self.ex.iter().map(|x| x * k).collect(),
        }
    }
}

impl Add for &LatticeClass {
    type Output = LatticeClass;
    fn add(self, o: &LatticeClass) -> LatticeClass {
        self.zip(o, |x, y| x + y)
    }
}

impl Sub for &LatticeClass {
    type Output = LatticeClass;
    fn sub(self, o: &LatticeClass) -> LatticeClass {
        self.zip(o, |x, y| x - y)
    }
}

impl Neg for &LatticeClass {
    type Output = LatticeClass;
    fn neg(self) -> LatticeClass {
        self.scale(-1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupLattice {
    e: i64,
    centers: usize,
}

impl BlowupLattice {
    pub fn new(e: i64, centers: usize) -> Self {
        BlowupLattice { e, centers }
    }

    pub fn e(&self) -> i64 {
        self.e
    }

    pub fn centers(&self) -> usize {
        self.centers
    }

    pub fn zero(&self) -> LatticeClass {
        LatticeClass {
            a: 0,
            b: 0,
            ex: vec![0; self.centers],
        }
    }

    /// ε*C.
    pub fn pullback(&self, c: NumClass) -> LatticeClass {
        LatticeClass {
            a: c.m,
            b: c.b_deg,
            ..self.zero()
        }
    }

    pub fn exceptional(&self, i: usize) -> LatticeClass {
        assert!(i < self.centers, "no center {i}");
        let mut z = self.zero();
        z.ex[i] = 1;
        z
    }

    /// Strict transform ε*C − Σ μ_i E_i for the given multiplicities at the centers.
    pub fn strict_transform(&self, c: NumClass, mus: &[(usize, i64)]) -> LatticeClass {
        let mut out = self.pullback(c);
        for &(i, mu) in mus {
            assert!(i < self.centers, "no center {i}");
            out.ex[i] -= mu;
        }
        out
    }

    /// ε_* forgets the exceptional part.
    pub fn pushforward(&self, d: &LatticeClass) -> NumClass {
        NumClass::new(d.a, d.b)
    }

    pub fn intersect(&self, x: &LatticeClass, y: &LatticeClass) -> i64 {
        assert_eq!(x.ex.len(), self.centers);
        assert_eq!(y.ex.len(), self.centers);
        let base = intersect_num(self.e, NumClass::new(x.a, x.b), NumClass::new(y.a, y.b));
        base - x.ex.iter().zip(&y.ex).map(|(p, q)| p * q).sum::<i64>()
    }

    /// ε*(C)·D = C·ε_*(D).
    pub fn projection_formula_check(&self, c: NumClass, d: &LatticeClass) -> bool {
        self.intersect(&self.pullback(c), d) == intersect_num(self.e, c, self.pushforward(d))
    }

    /// σ*σ_*Z for the contraction σ of a (−1)-class F: Z + (Z·F)F.
    pub fn contract_then_pull_back(&self, z: &LatticeClass, f: &LatticeClass) -> LatticeClass {
        assert_eq!(self.intersect(f, f), -1, "contracted class must be a (-1)-class");
        z + &f.scale(self.intersect(z, f))
    }
}

/// C′·D′ after an elementary transformation, computed by blowing up and
/// contracting rather than by the closed form.
///
/// An auxiliary center realizes an arbitrary C·D: on e = 0 take
/// C = nX₀ − E_aux and D = mX₀ + cd·E_aux, so C·D = cd. The transformation
/// center x lies on the fiber Pf, with strict transform P̃f = f − E_x.
pub fn elm_via_lattice(cd: i64, n: i64, m: i64, mu_c: i64, mu_d: i64) -> i64 {
    const AUX: usize = 0;
    const X: usize = 1;
    let lat = BlowupLattice::new(0, 2);
    let c = &lat.pullback(NumClass::new(n, 0)) - &lat.exceptional(AUX);
    let d = &lat.pullback(NumClass::new(m, 0)) + &lat.exceptional(AUX).scale(cd);
    debug_assert_eq!(lat.intersect(&c, &d), cd);
    let c_strict = &c - &lat.exceptional(X).scale(mu_c);
    let d_strict = &d - &lat.exceptional(X).scale(mu_d);
    let fiber_strict = &lat.pullback(NumClass::new(0, 1)) - &lat.exceptional(X);
    // C′·D′ = σ*σ_*C̃ · σ*σ_*D̃ = σ*σ_*C̃ · D̃
    let c_back = lat.contract_then_pull_back(&c_strict, &fiber_strict);
    lat.intersect(&c_back, &d_strict)
}
