//! Primitive binary quadratic forms `ax² + bxy + cy²` of a fixed
//! discriminant: reduction, Dirichlet composition and enumeration of
//! reduced representatives, for both signs of the discriminant.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BinaryQuadraticForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn overflow() -> Error {
    Error::UnsupportedField("discriminant too large for 128-bit form arithmetic".into())
}

/// `⌊√n⌋` for `n ≥ 0`.
pub fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn is_squarefree(mut m: i128) -> bool {
    m = m.abs();
    let mut p = 2i128;
    while p * p <= m {
        if m % (p * p) == 0 {
            return false;
        }
        if m % p == 0 {
            m /= p;
        }
        p += 1;
    }
    true
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental_discriminant(d: i128) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m)
        }
        _ => false,
    }
}

/// `a·x + b·y = g` with `g = gcd(a, b) ≥ 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl BinaryQuadraticForm {
    pub fn new(a: i128, b: i128, c: i128) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: i128) -> Result<Self> {
        let b = d.rem_euclid(2);
        let form = if d < 0 {
            Self::new(1, b, (b * b - d) / 4)
        } else {
            // the reduced principal form (1, b, c) with b maximal below √d
            let r = isqrt(d);
            let b = if (r - d).rem_euclid(2) == 0 { r } else { r - 1 };
            Self::new(1, b, (b * b - d) / 4)
        };
        if form.discriminant() != d {
            return Err(Error::Discriminant(d.to_string(), "not a discriminant".into()));
        }
        Ok(form)
    }

    /// `(a, -b, c)`, the inverse class.
    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c)
    }

    /// `f(x + k y, y)`.
    fn translate(&self, k: i128) -> Self {
        Self::new(
            self.a,
            self.b + 2 * k * self.a,
            self.a * k * k + self.b * k + self.c,
        )
    }

    /// Reduced for a negative discriminant: `|b| ≤ a ≤ c`, `b ≥ 0` on the
    /// boundary.
    pub fn is_reduced_definite(&self) -> bool {
        self.a > 0
            && self.b.abs() <= self.a
            && self.a <= self.c
            && !((self.b.abs() == self.a || self.a == self.c) && self.b < 0)
    }

    /// Reduced for a positive discriminant: `0 < b < √D` and
    /// `√D - b < 2|a| < √D + b`.
    pub fn is_reduced_indefinite(&self) -> bool {
        let d = self.discriminant();
        let r = (d as f64).sqrt();
        let b = self.b as f64;
        let a2 = 2.0 * self.a.abs() as f64;
        self.b > 0 && b < r && r - b < a2 && a2 < r + b
    }

    /// The reduced form properly equivalent to a positive definite form.
    pub fn reduce_definite(self) -> Self {
        let mut f = self;
        loop {
            // b into (-a, a]
            let k = (f.a - f.b).div_euclid(2 * f.a);
            f = f.translate(k);
            if f.a > f.c {
                f = Self::new(f.c, -f.b, f.a);
                continue;
            }
            if f.a == f.c && f.b < 0 {
                f.b = -f.b;
            }
            return f;
        }
    }

    /// One step of the indefinite reduction operator
    /// `(a, b, c) ↦ (c, b', ·)` with `b' ≡ -b (mod 2c)`.
    pub fn rho(&self) -> Self {
        let d = self.discriminant();
        let r = isqrt(d);
        let c = self.c;
        let m = 2 * c.abs();
        // b' ≡ -b (mod 2|c|), in (-|c|, |c|] or else in (√D - 2|c|, √D)
        let top = if c.abs() > r { c.abs() } else { r };
        let bp = top - (top + self.b).rem_euclid(m);
        Self::new(c, bp, (bp * bp - d) / (4 * c))
    }

    /// A reduced form properly equivalent to an indefinite form.
    pub fn reduce_indefinite(self) -> Self {
        let mut f = self;
        let mut guard = 0;
        while !f.is_reduced_indefinite() {
            f = f.rho();
            guard += 1;
            if guard > 10_000 {
                break;
            }
        }
        f
    }

    /// Reduction appropriate to the sign of the discriminant.
    pub fn reduce(self) -> Self {
        if self.discriminant() < 0 {
            self.reduce_definite()
        } else {
            self.reduce_indefinite()
        }
    }

    /// Dirichlet composition of two primitive forms of the same
    /// discriminant with `a > 0`; the result is not reduced.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let d = self.discriminant();
        if other.discriminant() != d {
            return Err(Error::domain("compose", "discriminants differ"));
        }
        if self.a <= 0 || other.a <= 0 {
            return Err(Error::domain("compose", "leading coefficients must be positive"));
        }
        let (a1, b1, a2, b2) = (self.a, self.b, other.a, other.b);
        let half = (b1 + b2) / 2;
        let (g1, x1, y1) = ext_gcd(a1, a2);
        let (e, x2, y2) = ext_gcd(g1, half);
        // e = p a1 + q a2 + r (b1 + b2)/2
        let (p, q, r) = (x2 * x1, x2 * y1, y2);
        let a3 = (a1 / e).checked_mul(a2 / e).ok_or_else(overflow)?;
        let num = p
            .checked_mul(a1)
            .and_then(|t| t.checked_mul(b2))
            .and_then(|t| t.checked_add(q.checked_mul(a2)?.checked_mul(b1)?))
            .and_then(|t| t.checked_add(r.checked_mul((b1 * b2 + d) / 2)?))
            .ok_or_else(overflow)?;
        let b3 = (num / e).rem_euclid(2 * a3);
        let c3 = (b3 * b3 - d) / (4 * a3);
        let out = Self::new(a3, b3, c3);
        if out.discriminant() != d {
            return Err(Error::Invariant {
                check: "composition",
                detail: format!("{self} * {other} gave {out}"),
            });
        }
        Ok(out)
    }
}

/// Every reduced primitive form of a negative discriminant, principal form
/// first, then ordered by `(a, |b|, -b)`.
pub fn reduced_definite_forms(d: i128) -> Vec<BinaryQuadraticForm> {
    let mut out = Vec::new();
    let mut a = 1i128;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let f = BinaryQuadraticForm::new(a, b, (b * b - d) / (4 * a));
            if f.is_reduced_definite() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), -f.b));
    out
}

/// Every reduced primitive form of a positive non-square discriminant.
pub fn reduced_indefinite_forms(d: i128) -> Vec<BinaryQuadraticForm> {
    let r = isqrt(d);
    let mut out = Vec::new();
    for b in 1..=r {
        if (b * b - d).rem_euclid(4) != 0 {
            continue;
        }
        let ac = (b * b - d) / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let f = BinaryQuadraticForm::new(sa, b, ac / sa);
                if f.is_reduced_indefinite() && f.is_primitive() {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The `ρ`-cycles of reduced indefinite forms: the proper equivalence
/// classes. Each cycle is listed from its smallest positive-`a` form.
pub fn indefinite_cycles(d: i128) -> Vec<Vec<BinaryQuadraticForm>> {
    let forms = reduced_indefinite_forms(d);
    let mut seen = std::collections::HashSet::new();
    let mut cycles = Vec::new();
    for f in &forms {
        if seen.contains(f) {
            continue;
        }
        let mut cycle = vec![*f];
        seen.insert(*f);
        let mut g = f.rho();
        while g != *f {
            seen.insert(g);
            cycle.push(g);
            g = g.rho();
            if cycle.len() > forms.len() {
                break;
            }
        }
        let start = cycle
            .iter()
            .enumerate()
            .filter(|(_, f)| f.a > 0)
            .min_by_key(|(_, f)| (f.a, f.b))
            .map(|(i, _)| i)
            .unwrap_or(0);
        cycle.rotate_left(start);
        cycles.push(cycle);
    }
    cycles.sort_by_key(|c| (c[0].a, c[0].b));
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i128, b: i128, c: i128) -> BinaryQuadraticForm {
        BinaryQuadraticForm::new(a, b, c)
    }

    #[test]
    fn fundamental_discriminants() {
        let good = [-3, -4, -7, -8, -23, -163, 5, 8, 12, 13, 29, -20];
        let bad = [0, 1, -1, -2, 4, -12, -16, 9, 25, -27, 20, 2];
        for d in good {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in bad {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
        // 62 fundamental discriminants in [-200, -3]
        let count = (3..=200).filter(|&k| is_fundamental_discriminant(-k)).count();
        assert_eq!(count, 62);
    }

    #[test]
    fn small_class_numbers() {
        assert_eq!(reduced_definite_forms(-4), vec![f(1, 0, 1)]);
        assert_eq!(reduced_definite_forms(-3), vec![f(1, 1, 1)]);
        assert_eq!(
            reduced_definite_forms(-23),
            vec![f(1, 1, 6), f(2, 1, 3), f(2, -1, 3)]
        );
        assert_eq!(reduced_definite_forms(-163).len(), 1);
        assert_eq!(reduced_definite_forms(-20).len(), 2);
        assert_eq!(reduced_definite_forms(-56).len(), 4);
    }

    // class numbers h(D) by counting solutions without any reduction theory:
    // all (a, b, c) with b² - 4ac = D, |b| ≤ a ≤ c, boundary sign rule
    fn brute_class_number(d: i128) -> usize {
        let mut n = 0;
        for a in 1..=(-d) {
            for b in -a..=a {
                for c in a..=(-d) {
                    if b * b - 4 * a * c == d
                        && !((b.abs() == a || a == c) && b < 0)
                        && a.gcd(&b).gcd(&c) == 1
                    {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn class_numbers_match_brute_force() {
        let ds: Vec<i128> = (3..400)
            .map(|k| -(k as i128))
            .filter(|&d| is_fundamental_discriminant(d))
            .take(50)
            .collect();
        assert_eq!(ds.len(), 50);
        for d in ds {
            assert_eq!(reduced_definite_forms(d).len(), brute_class_number(d), "D = {d}");
        }
    }

    #[test]
    fn reduction_is_idempotent_and_preserves_discriminant() {
        let g = f(7, 23, 19);
        let d = g.discriminant();
        assert!(d < 0);
        let r = g.reduce();
        assert_eq!(r.discriminant(), d);
        assert!(r.is_reduced_definite());
        assert_eq!(r.reduce(), r);
    }

    #[test]
    fn composition_table_is_a_group() {
        for k in 3..=2000i128 {
            let d = -k;
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let forms = reduced_definite_forms(d);
            let e = BinaryQuadraticForm::principal(d).unwrap();
            assert_eq!(forms[0], e);
            let idx: std::collections::HashMap<_, _> =
                forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
            let h = forms.len();
            let mul = |x: usize, y: usize| -> usize {
                idx[&forms[x].compose(&forms[y]).unwrap().reduce()]
            };
            let table: Vec<Vec<usize>> =
                (0..h).map(|x| (0..h).map(|y| mul(x, y)).collect()).collect();
            for x in 0..h {
                assert_eq!(table[0][x], x);
                assert_eq!(table[x][idx[&forms[x].inverse().reduce()]], 0);
                for y in 0..h {
                    assert_eq!(table[x][y], table[y][x]);
                }
            }
            if h <= 12 {
                for x in 0..h {
                    for y in 0..h {
                        for z in 0..h {
                            assert_eq!(table[table[x][y]][z], table[x][table[y][z]], "D = {d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn indefinite_cycles_small() {
        assert_eq!(indefinite_cycles(5).len(), 1);
        assert_eq!(indefinite_cycles(13).len(), 1);
        assert_eq!(indefinite_cycles(29).len(), 1);
        // narrow class number 2 for D = 12 (no unit of norm -1)
        assert_eq!(indefinite_cycles(12).len(), 2);
        // h⁺(229) = 3
        assert_eq!(indefinite_cycles(229).len(), 3);
        for d in [5, 13, 29, 12, 229] {
            for cycle in indefinite_cycles(d) {
                for g in cycle {
                    assert!(g.is_reduced_indefinite());
                    assert_eq!(g.discriminant(), d);
                }
            }
        }
    }

    #[test]
    fn indefinite_reduction_lands_on_a_cycle() {
        let d = 229;
        let cycles = indefinite_cycles(d);
        let all: Vec<_> = cycles.iter().flatten().copied().collect();
        let p = BinaryQuadraticForm::principal(d).unwrap();
        assert!(p.is_reduced_indefinite());
        for k in -20..20 {
            let g = p.translate(k).reduce();
            assert!(all.contains(&g));
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..2000i128 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn composition_is_a_group_law(d in 3i128..3000, i in 0usize..64, j in 0usize..64, k in 0usize..64) {
            let d = -d;
            proptest::prop_assume!(is_fundamental_discriminant(d));
            let forms = reduced_definite_forms(d);
            let (x, y, z) = (forms[i % forms.len()], forms[j % forms.len()], forms[k % forms.len()]);
            let xy = x.compose(&y).unwrap().reduce();
            proptest::prop_assert_eq!(xy.discriminant(), d);
            proptest::prop_assert!(xy.is_reduced_definite());
            proptest::prop_assert_eq!(xy, y.compose(&x).unwrap().reduce());
            let left = xy.compose(&z).unwrap().reduce();
            let right = x.compose(&y.compose(&z).unwrap().reduce()).unwrap().reduce();
            proptest::prop_assert_eq!(left, right);
            let one = BinaryQuadraticForm::principal(d).unwrap();
            proptest::prop_assert_eq!(x.compose(&x.inverse()).unwrap().reduce(), one);
        }
    }
}
