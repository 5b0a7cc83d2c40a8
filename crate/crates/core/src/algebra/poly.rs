//! Sparse multivariate polynomials over a weighted polynomial ring.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::scalar::{Field, Scalar};

pub type Mono = SmallVec<[u16; 6]>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum MonoOrder {
    #[default]
    GRevLex,
    DegLex,
    Lex,
}

impl fmt::Display for MonoOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MonoOrder::GRevLex => "grevlex",
            MonoOrder::DegLex => "deglex",
            MonoOrder::Lex => "lex",
        };
        f.write_str(s)
    }
}

/// Ambient polynomial ring `k[x_1, ..., x_n]` with positive integer variable weights.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    pub field: Field,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub order: MonoOrder,
}

impl PolyRing {
    pub fn new(field: Field, vars: Vec<(String, u32)>, order: MonoOrder) -> Arc<PolyRing> {
        let (names, weights) = vars.into_iter().unzip();
        Arc::new(PolyRing { field, vars: names, weights, order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn one_mono(&self) -> Mono {
        SmallVec::from_elem(0, self.nvars())
    }

    pub fn mono_degree(&self, m: &Mono) -> i64 {
        m.iter().zip(&self.weights).map(|(&e, &w)| e as i64 * w as i64).sum()
    }

    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        match self.order {
            MonoOrder::Lex => a.cmp(b),
            MonoOrder::DegLex => self.mono_degree(a).cmp(&self.mono_degree(b)).then_with(|| a.cmp(b)),
            MonoOrder::GRevLex => self.mono_degree(a).cmp(&self.mono_degree(b)).then_with(|| {
                for i in (0..a.len()).rev() {
                    if a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    /// A copy of this ring with one more variable appended.
    pub fn with_extra_var(&self, name: &str, weight: u32) -> Arc<PolyRing> {
        let mut vars = self.vars.clone();
        let mut weights = self.weights.clone();
        vars.push(name.to_string());
        weights.push(weight);
        Arc::new(PolyRing { field: self.field, vars, weights, order: self.order })
    }
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_divides(a: &Mono, b: &Mono) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_div(b: &Mono, a: &Mono) -> Mono {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

pub fn mono_lcm(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Polynomial with terms sorted strictly descending in the ring's monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<(Mono, Scalar)>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Poly {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Scalar) -> Poly {
        Self::monomial(ring, ring.one_mono(), c)
    }

    pub fn one(ring: &Arc<PolyRing>) -> Poly {
        Self::constant(ring, ring.field.one())
    }

    pub fn from_i64(ring: &Arc<PolyRing>, c: i64) -> Poly {
        Self::constant(ring, ring.field.from_i64(c))
    }

    pub fn from_fraction_const(ring: &Arc<PolyRing>, num: &num_bigint::BigInt, den: &num_bigint::BigInt) -> Option<Poly> {
        ring.field.from_fraction(num, den).map(|c| Self::constant(ring, c))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Poly {
        let mut m = ring.one_mono();
        m[i] = 1;
        Self::monomial(ring, m, ring.field.one())
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Mono, c: Scalar) -> Poly {
        if c.is_zero() {
            Self::zero(ring)
        } else {
            Poly { ring: ring.clone(), terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing>, mut terms: Vec<(Mono, Scalar)>) -> Poly {
        terms.sort_by(|a, b| ring.cmp_mono(&b.0, &a.0));
        let mut out: Vec<(Mono, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
            if out.last().map(|t| t.1.is_zero()).unwrap_or(false) {
                out.pop();
            }
        }
        out.retain(|t| !t.1.is_zero());
        Poly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Mono, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.iter().all(|&e| e == 0))
    }

    pub fn lead(&self) -> Option<&(Mono, Scalar)> {
        self.terms.first()
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(m, _)| m.iter().all(|&e| e == 0))
            .map(|t| t.1.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Weighted degree when homogeneous; `None` for the zero polynomial or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(|(m, _)| self.ring.mono_degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.iter().map(|(m, _)| self.ring.mono_degree(m)).max()
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let r = &self.ring;
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match r.cmp_mono(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), b[j].1.signed(negate)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), c.signed(negate))));
        Poly { ring: r.clone(), terms: out }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.merge(o, true)
    }

    pub fn neg(&self) -> Poly {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect() }
    }

    /// Multiply by `c * m`; monomial orders are multiplicative so sortedness is preserved.
    pub fn mul_term(&self, m: &Mono, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(n, d)| (mono_mul(n, m), d.mul(c))).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.ring);
        // multiply by the shorter side term-wise
        let (small, big) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        for (m, c) in &small.terms {
            acc = acc.add(&big.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(&self.ring);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Reinterpret in a ring with the same leading variables (e.g. after `with_extra_var`).
    pub fn embed(&self, target: &Arc<PolyRing>) -> Poly {
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut mm: Mono = m.clone();
                mm.resize(n, 0);
                (mm, c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    pub fn ring_eq(&self, other: &Arc<PolyRing>) -> bool {
        Arc::ptr_eq(&self.ring, other) || *self.ring == **other
    }
}

fn fmt_mono(ring: &PolyRing, m: &Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.vars[i].clone()),
            _ => parts.push(format!("{}^{}", ring.vars[i], e)),
        }
    }
    parts.join("*")
}

/// Canonical text: terms in descending monomial order, explicit `*` and `^`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let ms = fmt_mono(&self.ring, m);
            let neg = c.is_negative_literal();
            let mag = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if ms.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&ms)?;
            } else {
                write!(f, "{mag}*{ms}")?;
            }
        }
        Ok(())
    }
}
