use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::PolyError;
use crate::algebra::{Field, Scalar};
use crate::geometry::{directions_independent, Point, Vector};

pub type Exponent = Vec<u32>;

/// Sparse polynomial in `nvars` variables; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Polynomial {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `c · x^e`.
    pub fn monomial(c: Scalar, e: Exponent) -> Self {
        let mut p = Self::zero(c.field(), e.len());
        p.add_term(e, c);
        p
    }

    /// The variable `x_i`.
    pub fn variable(field: Field, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field.one(), e)
    }

    pub fn from_terms(field: Field, nvars: usize, terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length must equal variable count");
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn coefficient(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let sum = &*old + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        Polynomial::from_terms(self.field, self.nvars, self.terms.iter().map(|(e, x)| (e.clone(), x * c)))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.field.one(), self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn evaluate(&self, x: &[Scalar]) -> Scalar {
        self.terms.iter().fold(self.field.zero(), |acc, (e, c)| {
            let term = e.iter().zip(x).fold(c.clone(), |t, (&k, xi)| &t * &xi.pow(k));
            &acc + &term
        })
    }

    /// `g(p + Σ_i y_i dirs_i)` as a polynomial in `y`.
    pub fn substitute_affine(&self, p: &Point, dirs: &[Vector]) -> Polynomial {
        let k = dirs.len();
        // x_j = p_j + Σ_i dirs_i[j] y_i
        let forms: Vec<Polynomial> = (0..self.nvars)
            .map(|j| {
                let mut f = Polynomial::constant(p.coords()[j].clone(), k);
                for (i, v) in dirs.iter().enumerate() {
                    f = f.add(&Polynomial::variable(self.field, k, i).scale(&v[j]));
                }
                f
            })
            .collect();
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(self.field, k);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone(), k);
            for (j, &ej) in e.iter().enumerate() {
                if ej == 0 {
                    continue;
                }
                let pw = powers.entry((j, ej)).or_insert_with(|| forms[j].pow(ej));
                term = term.mul(pw);
            }
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|&(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// All exponent vectors in `nvars` variables of total degree `< n`, ordered
/// by degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    nvars: usize,
    n: u32,
    monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, n: u32) -> Self {
        let mut monomials = Vec::new();
        for deg in 0..n {
            let mut cur = vec![0; nvars];
            push_compositions(nvars, deg, 0, &mut cur, &mut monomials);
        }
        let index = monomials.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialBasis {
            nvars,
            n,
            monomials,
            index,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Exclusive degree bound.
    pub fn degree_bound(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Exponent] {
        &self.monomials
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Polynomial with the given coefficient vector.
    pub fn polynomial(&self, field: Field, coeffs: &[Scalar]) -> Polynomial {
        Polynomial::from_terms(field, self.nvars, self.monomials.iter().cloned().zip(coeffs.iter().cloned()))
    }

    /// Coefficient vector of `g`, or `None` if `g` has a term of degree `≥ n`.
    pub fn coefficients(&self, g: &Polynomial) -> Option<Vec<Scalar>> {
        let mut out = vec![g.field().zero(); self.len()];
        for (e, c) in g.terms() {
            out[self.index_of(e)?] = c.clone();
        }
        Some(out)
    }
}

/// Appends, in lexicographically decreasing order, all exponents with
/// entries from `pos` on summing to `remaining`.
fn push_compositions(nvars: usize, remaining: u32, pos: usize, cur: &mut Exponent, out: &mut Vec<Exponent>) {
    if nvars == 0 {
        if remaining == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == nvars - 1 {
        cur[pos] = remaining;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    for k in (0..=remaining).rev() {
        cur[pos] = k;
        push_compositions(nvars, remaining - k, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

/// A downward-closed set of exponents with dense indexing.
#[derive(Clone, Debug)]
pub(crate) struct ExponentBox {
    pub members: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl ExponentBox {
    /// All exponents accepted by `keep`, which must be downward closed and
    /// reject everything of total degree `≥ n`.
    pub fn new(nvars: usize, n: u32, keep: impl Fn(&[u32]) -> bool) -> Self {
        let members: Vec<Exponent> = MonomialBasis::new(nvars, n)
            .monomials
            .into_iter()
            .filter(|e| keep(e))
            .collect();
        let index = members.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        ExponentBox { members, index }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// `T[e][w]` = coefficient of `y^w` in `(p + Σ y_i dirs_i)^e`, for each basis
/// monomial `e` and each `w` in `keep`.
pub(crate) fn transfer_table(
    field: Field,
    basis: &MonomialBasis,
    p: &Point,
    dirs: &[Vector],
    keep: &ExponentBox,
) -> Vec<Vec<Scalar>> {
    let k = dirs.len();
    let size = keep.len();
    // predecessor index of w - u_i, per member and direction
    let shifts: Vec<Vec<Option<usize>>> = keep
        .members
        .iter()
        .map(|w| {
            (0..k)
                .map(|i| {
                    if w[i] == 0 {
                        None
                    } else {
                        let mut v = w.clone();
                        v[i] -= 1;
                        keep.index_of(&v)
                    }
                })
                .collect()
        })
        .collect();
    let zero_exp = vec![0u32; k];
    let mut table: Vec<Vec<Scalar>> = Vec::with_capacity(basis.len());
    for e in basis.monomials() {
        let row = match e.iter().position(|&x| x > 0) {
            None => {
                let mut r = vec![field.zero(); size];
                if let Some(i) = keep.index_of(&zero_exp) {
                    r[i] = field.one();
                }
                r
            }
            Some(j) => {
                let mut prev = e.clone();
                prev[j] -= 1;
                let src = &table[basis.index_of(&prev).expect("basis is downward closed")];
                // multiply by x_j = p_j + Σ_i dirs_i[j] y_i
                (0..size)
                    .map(|w| {
                        let mut acc = &src[w] * &p.coords()[j];
                        for (i, s) in shifts[w].iter().enumerate() {
                            if let Some(s) = s {
                                let c = &dirs[i][j];
                                if !c.is_zero() && !src[*s].is_zero() {
                                    acc = &acc + &(&src[*s] * c);
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            }
        };
        table.push(row);
    }
    table
}

/// Local coefficients of `g` at `p` along `dirs`: `g(p + Σ y_i dirs_i)`.
pub fn expand_at(g: &Polynomial, p: &Point, dirs: &[Vector]) -> Result<Polynomial, PolyError> {
    let d = g.nvars();
    if p.dim() != d || dirs.len() != d || dirs.iter().any(|v| v.len() != d) {
        return Err(PolyError::Shape(format!("expected a point and {d} directions in dimension {d}")));
    }
    if !directions_independent(dirs) {
        return Err(PolyError::DependentDirections);
    }
    Ok(g.substitute_affine(p, dirs))
}

/// True iff every coefficient of `y^w` with `w_i < orders_i` in
/// `g(p + Σ y_i dirs_i)` vanishes.
pub fn vanishes_to_order(g: &Polynomial, p: &Point, dirs: &[Vector], orders: &[u64]) -> Result<bool, PolyError> {
    if orders.len() != g.nvars() {
        return Err(PolyError::Shape(format!("expected {} orders", g.nvars())));
    }
    let local = expand_at(g, p, dirs)?;
    Ok(local
        .terms()
        .keys()
        .all(|w| w.iter().zip(orders).any(|(&wi, &b)| u64::from(wi) >= b)))
}
