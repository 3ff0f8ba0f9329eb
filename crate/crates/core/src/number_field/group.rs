//! Structure of a finite abelian group given by its multiplication on
//! element indices: a basis of cyclic factors and the coordinates of every
//! element in that basis.

use std::collections::HashMap;

use crate::{Error, Result};

/// `G ≅ ⊕ ℤ/dᵢ` with `d₁ | d₂ | …`; `coords[x]` are the exponents of the
/// generators that produce element `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianDecomposition {
    pub cyclic_orders: Vec<u64>,
    pub generators: Vec<usize>,
    pub coords: Vec<Vec<u64>>,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

struct Group<F: Fn(usize, usize) -> usize> {
    size: usize,
    mul: F,
}

impl<F: Fn(usize, usize) -> usize> Group<F> {
    fn pow(&self, x: usize, k: u64) -> usize {
        let mut acc = 0;
        let mut base = x;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = (self.mul)(acc, base);
            }
            base = (self.mul)(base, base);
            k >>= 1;
        }
        acc
    }

    fn order(&self, x: usize) -> u64 {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = (self.mul)(y, x);
            k += 1;
            if k > self.size as u64 {
                return 0;
            }
        }
        k
    }
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Decompose a finite abelian group of order `h` whose identity is index 0.
pub fn decompose<F>(h: usize, mul: F) -> Result<AbelianDecomposition>
where
    F: Fn(usize, usize) -> usize,
{
    if h == 0 {
        return Err(Error::domain("decompose", "empty group"));
    }
    if h == 1 {
        return Ok(AbelianDecomposition {
            cyclic_orders: vec![1],
            generators: vec![0],
            coords: vec![vec![0]],
        });
    }
    let g = Group { size: h, mul };
    let orders: Vec<u64> = (0..h).map(|x| g.order(x)).collect();
    if orders.iter().any(|&o| o == 0) {
        return Err(Error::Invariant {
            check: "group_order",
            detail: "an element has no finite order within the group size".into(),
        });
    }

    // p-primary bases, each as (generator, order), largest order first
    let mut primary: Vec<Vec<(usize, u64)>> = Vec::new();
    for p in prime_factors(h as u64) {
        let sylow: Vec<usize> = (0..h).filter(|&x| is_power_of(orders[x], p)).collect();
        let mut gens: Vec<(usize, u64)> = Vec::new();
        let mut sub: HashMap<usize, Vec<u64>> = HashMap::from([(0, vec![])]);
        while sub.len() < sylow.len() {
            // element of largest order modulo the current subgroup
            let mut best = (0usize, 0u64);
            for &x in &sylow {
                let mut m = 1u64;
                let mut y = x;
                while !sub.contains_key(&y) {
                    y = g.pow(y, p);
                    m *= p;
                }
                if m > best.1 {
                    best = (x, m);
                }
            }
            let (x, m) = best;
            let k = sub[&g.pow(x, m)].clone();
            let mut lifted = x;
            for (kj, &(gj, oj)) in k.iter().zip(&gens) {
                if kj % m != 0 {
                    return Err(Error::Invariant {
                        check: "group_decomposition",
                        detail: format!("lift exponent {kj} not divisible by {m}"),
                    });
                }
                let e = (oj - (kj / m) % oj) % oj;
                lifted = (g.mul)(lifted, g.pow(gj, e));
            }
            let mut next = HashMap::with_capacity(sub.len() * m as usize);
            for (y, c) in &sub {
                let mut z = *y;
                for i in 0..m {
                    let mut cz = c.clone();
                    cz.push(i);
                    next.insert(z, cz);
                    z = (g.mul)(z, lifted);
                }
            }
            sub = next;
            gens.push((lifted, m));
        }
        gens.sort_by(|a, b| b.1.cmp(&a.1));
        primary.push(gens);
    }

    // invariant factors: combine the i-th largest p-parts over all p
    let depth = primary.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<(usize, u64)> = (0..depth)
        .map(|i| {
            primary
                .iter()
                .filter_map(|gens| gens.get(i))
                .fold((0usize, 1u64), |(x, o), &(gx, ox)| ((g.mul)(x, gx), o * ox))
        })
        .collect();
    factors.reverse();
    let cyclic_orders: Vec<u64> = factors.iter().map(|f| f.1).collect();
    let generators: Vec<usize> = factors.iter().map(|f| f.0).collect();

    let mut coords: Vec<Option<Vec<u64>>> = vec![None; h];
    let mut c = vec![0u64; factors.len()];
    loop {
        let x = c
            .iter()
            .zip(&generators)
            .fold(0, |acc, (&e, &gen)| (g.mul)(acc, g.pow(gen, e)));
        if coords[x].is_some() {
            return Err(Error::Invariant {
                check: "group_decomposition",
                detail: "generator coordinates are not a bijection".into(),
            });
        }
        coords[x] = Some(c.clone());
        let mut i = 0;
        loop {
            if i == c.len() {
                let coords = coords
                    .into_iter()
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::Invariant {
                        check: "group_decomposition",
                        detail: "generators do not cover the group".into(),
                    })?;
                return Ok(AbelianDecomposition {
                    cyclic_orders,
                    generators,
                    coords,
                });
            }
            c[i] += 1;
            if c[i] < cyclic_orders[i] {
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // ℤ/a × ℤ/b × … with elements indexed in mixed radix
    fn product_group(orders: &[usize]) -> (usize, impl Fn(usize, usize) -> usize) {
        let h: usize = orders.iter().product();
        let orders = orders.to_vec();
        let mul = move |x: usize, y: usize| {
            let (mut x, mut y) = (x, y);
            let mut out = 0;
            let mut scale = 1;
            for &o in &orders {
                out += ((x % o + y % o) % o) * scale;
                x /= o;
                y /= o;
                scale *= o;
            }
            out
        };
        (h, mul)
    }

    #[test]
    fn invariant_factors() {
        let cases: [(&[usize], &[u64]); 6] = [
            (&[6], &[6]),
            (&[2, 3], &[6]),
            (&[2, 2], &[2, 2]),
            (&[4, 2], &[2, 4]),
            (&[2, 6, 4], &[2, 2, 12]),
            (&[9, 3, 5], &[3, 45]),
        ];
        for (input, expected) in cases {
            let (h, mul) = product_group(input);
            let dec = decompose(h, &mul).unwrap();
            assert_eq!(dec.cyclic_orders, expected, "{input:?}");
            // coordinates are a homomorphism
            for x in 0..h {
                for y in 0..h {
                    let z = mul(x, y);
                    for (i, &o) in dec.cyclic_orders.iter().enumerate() {
                        assert_eq!((dec.coords[x][i] + dec.coords[y][i]) % o, dec.coords[z][i]);
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_group() {
        let dec = decompose(1, |_, _| 0).unwrap();
        assert_eq!(dec.cyclic_orders, vec![1]);
        assert_eq!(dec.coords, vec![vec![0]]);
    }
}
