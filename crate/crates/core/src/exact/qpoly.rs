//! Algorithms specific to polynomials over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{ExactError, Field, Polynomial, QPoly, Rational};

/// Monic greatest common divisor; `gcd(f, 0) = monic(f)`.
pub fn poly_gcd<K: Field>(f: &Polynomial<K>, g: &Polynomial<K>) -> Polynomial<K> {
    f.gcd(g)
}

/// Square root in `Q[t]`, leading coefficient positive, if `f` is a perfect square.
pub fn poly_square_root(f: &QPoly) -> Option<QPoly> {
    let Some(n) = f.degree() else {
        return Some(QPoly::zero());
    };
    if n % 2 == 1 {
        return None;
    }
    let m = n / 2;
    let lead = f.leading()?.sqrt()?;
    let two_lead = &lead + &lead;
    let mut g = vec![Rational::zero(); m + 1];
    g[m] = lead;
    // match coefficients of t^(2m-k) from the top down
    for k in 1..=m {
        let mut acc = f.coeff(n - k);
        for i in (m - k + 1)..=m {
            let j = n - k - i;
            if j > m - k && j <= m {
                acc = acc - &g[i] * &g[j];
            }
        }
        g[m - k] = acc / &two_lead;
    }
    let g = QPoly::new(g);
    (&g * &g == *f).then_some(g)
}

/// A root of a binary form on the projective line.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProjectiveRoot {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for ProjectiveRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectiveRoot::Finite(r) => write!(f, "{r}"),
            ProjectiveRoot::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for ProjectiveRoot {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Square-free part and multiplicity data of a nonzero polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeDecomposition {
    /// `f / gcd(f, f')`, monic.
    pub part: QPoly,
    /// Monic factors with multiplicity. Rational linear factors are split
    /// out individually; any remaining factor of a given multiplicity is
    /// listed as one block and need not be irreducible.
    pub factors: Vec<(QPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }
}

/// Yun's square-free decomposition, refined by rational roots.
pub fn squarefree_part(f: &QPoly) -> Result<SquarefreeDecomposition, ExactError> {
    if f.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let f = f.monic();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let part = f.exact_div(&a0).expect("gcd divides");
    let mut factors = Vec::new();
    if f.degree() == Some(0) {
        return Ok(SquarefreeDecomposition { part, factors });
    }
    let mut b = part.clone();
    let mut d = &fp.exact_div(&a0).expect("gcd divides") - &b.derivative();
    let mut i = 1u32;
    while !b.is_constant() {
        let a = b.gcd(&d);
        let next_b = b.exact_div(&a).expect("gcd divides");
        let c = d.exact_div(&a).expect("gcd divides");
        if !a.is_constant() {
            factors.push((a, i));
        }
        d = &c - &next_b.derivative();
        b = next_b;
        i += 1;
    }
    let mut refined = Vec::new();
    for (block, m) in factors {
        let mut rest = block;
        for (r, _) in rational_roots(&rest) {
            let lin = QPoly::linear_root(r);
            rest = rest.exact_div(&lin).expect("root divides");
            refined.push((lin, m));
        }
        if !rest.is_constant() {
            refined.push((rest, m));
        }
    }
    Ok(SquarefreeDecomposition { part, factors: refined })
}

/// True iff `f` (degree at most 2) has no rational root.
pub fn quad_irreducible(f: &QPoly) -> Result<bool, ExactError> {
    match f.degree() {
        None => Ok(false),
        Some(0) => Ok(true),
        Some(1) => Ok(false),
        Some(2) => {
            let (c, b, a) = (f.coeff(0), f.coeff(1), f.coeff(2));
            let disc = &b * &b - Rational::from(4) * a * c;
            Ok(!disc.is_square())
        }
        Some(n) => Err(ExactError::DegreeTooLarge(n)),
    }
}

fn primitive_integer_coeffs(f: &QPoly) -> Vec<BigInt> {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut m = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= m {
        let mut e = 0;
        while m.is_multiple_of(&p) {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1u32;
    }
    if m > BigInt::one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

/// Rational roots with multiplicity, in increasing order; empty for the
/// zero polynomial.
///
/// Candidates come from the rational root theorem applied to a primitive
/// integer model of the square-free part, so coefficient sizes should stay
/// within trial-division range.
pub fn rational_roots(f: &QPoly) -> Vec<(Rational, u32)> {
    if f.is_constant() {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let mut g = f.clone();
    let zero_mult = g.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult as u32));
        g = QPoly::new(g.coeffs()[zero_mult..].to_vec());
    }
    if !g.is_constant() {
        let sf = g.exact_div(&g.gcd(&g.derivative())).expect("gcd divides");
        let ints = primitive_integer_coeffs(&sf);
        let (c0, cn) = (&ints[0], ints.last().unwrap());
        let ps = divisors(c0);
        let qs = divisors(cn);
        let mut candidates: Vec<Rational> = Vec::new();
        for p in &ps {
            for q in &qs {
                for r in [Rational::new(p.clone(), q.clone()), Rational::new(-p, q.clone())] {
                    if !candidates.contains(&r) && sf.eval(&r).is_zero() {
                        candidates.push(r);
                    }
                }
            }
        }
        for r in candidates {
            let lin = QPoly::linear_root(r.clone());
            let mut m = 0;
            while let Some(q) = g.exact_div(&lin) {
                g = q;
                m += 1;
            }
            roots.push((r, m));
        }
    }
    roots.sort();
    roots
}

/// Rational roots of `f` viewed as a binary form of degree `form_degree`,
/// including the root at infinity of multiplicity `form_degree - deg f`.
///
/// Returns `None` for the zero form, which vanishes everywhere.
pub fn projective_roots(f: &QPoly, form_degree: usize) -> Option<Vec<(ProjectiveRoot, u32)>> {
    let deg = f.degree()?;
    let mut out: Vec<(ProjectiveRoot, u32)> =
        rational_roots(f).into_iter().map(|(r, m)| (ProjectiveRoot::Finite(r), m)).collect();
    if deg < form_degree {
        out.push((ProjectiveRoot::Infinity, (form_degree - deg) as u32));
    }
    Some(out)
}
