//! Exact multivariate Laurent polynomials and rational functions over the
//! integers, plus fraction-free determinants and simultaneous substitution.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use ibig::ops::Abs;
use ibig::IBig;
use thiserror::Error;

pub type Int = IBig;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("no binding for variable {0}")]
    MissingBinding(Var),
}

/// A variable: `A_i`, `X_i`, or `Y_S` where `S` is a nonempty vertex set
/// stored as a bitmask (bit `i` set for vertex `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    A(u32),
    X(u32),
    Y(u64),
}

impl Var {
    fn rank(&self) -> u8 {
        match self {
            Var::A(_) => 0,
            Var::X(_) => 1,
            Var::Y(_) => 2,
        }
    }

    /// Sorted vertex list of a `Y` variable; empty for `A`/`X`.
    pub fn y_vertices(&self) -> Vec<u32> {
        match self {
            Var::Y(mask) => mask_vertices(*mask),
            _ => Vec::new(),
        }
    }
}

pub(crate) fn mask_vertices(mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros());
        m &= m - 1;
    }
    out
}

/// Lexicographic comparison of the sorted vertex lists of two bitmasks.
fn cmp_vertex_lists(a: u64, b: u64) -> Ordering {
    let (mut a, mut b) = (a, b);
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la.cmp(&lb);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Var::A(i), Var::A(j)) | (Var::X(i), Var::X(j)) => i.cmp(j),
            (Var::Y(s), Var::Y(t)) => cmp_vertex_lists(*s, *t),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::A(i) => write!(f, "A{i}"),
            Var::X(i) => write!(f, "X{i}"),
            Var::Y(mask) => {
                let parts: Vec<String> = mask_vertices(*mask).iter().map(|v| v.to_string()).collect();
                write!(f, "Y{{{}}}", parts.join(","))
            }
        }
    }
}

/// A Laurent monomial: variables with nonzero integer exponents, sorted by
/// the variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Var, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, i32)>) -> Self {
        let mut acc: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in factors {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial { factors: acc.into_iter().filter(|&(_, e)| e != 0).collect() }
    }

    pub fn factors(&self) -> &[(Var, i32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|&(_, e)| e as i64).sum()
    }

    pub fn exponent(&self, v: &Var) -> i32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    fn merge(&self, other: &Self, sign: i32) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0, sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[j].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(v, e)| (v, sign * e)));
        Monomial { factors: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.merge(other, 1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.merge(other, -1)
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { factors: self.factors.iter().map(|&(v, e)| (v, e * k)).collect() }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    /// Componentwise minimum of exponents (absent variables count as 0).
    pub fn gcd(&self, other: &Self) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, e) = match (a.get(i), b.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        i += 1;
                        (va, ea.min(0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (vb, eb.min(0))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (va, ea.min(eb))
                    }
                },
                (Some(&(va, ea)), None) => {
                    i += 1;
                    (va, ea.min(0))
                }
                (None, Some(&(vb, eb))) => {
                    j += 1;
                    (vb, eb.min(0))
                }
                (None, None) => unreachable!(),
            };
            if e != 0 {
                out.push((v, e));
            }
        }
        Monomial { factors: out }
    }

    /// Split into (positive part, negative part as a positive monomial).
    pub fn split_signs(&self) -> (Monomial, Monomial) {
        let pos = self.factors.iter().filter(|f| f.1 > 0).copied().collect();
        let neg = self.factors.iter().filter(|f| f.1 < 0).map(|&(v, e)| (v, -e)).collect();
        (Monomial { factors: pos }, Monomial { factors: neg })
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.iter().all(|f| f.1 > 0)
    }

    /// True if every exponent of `other` is at most the matching exponent here.
    pub fn is_divisible_by(&self, other: &Self) -> bool {
        other.factors.iter().all(|&(v, e)| self.exponent(&v) >= e)
    }

    fn cmp_lex(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, e))) => return 0.cmp(&e),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

/// Graded lexicographic order; earlier variables in the variable order are
/// more significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.cmp_lex(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A Laurent polynomial with integer coefficients. Terms are kept sorted in
/// descending monomial order with no zero coefficients, so equal polynomials
/// have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, Int)>,
}

fn int_gcd(a: &Int, b: &Int) -> Int {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != Int::from(0) {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::term(Monomial::one(), c.into())
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Int::from(1))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Int::from(1))
    }

    pub fn term(m: Monomial, c: Int) -> Self {
        if c == Int::from(0) {
            return Self::zero();
        }
        LaurentPoly { terms: vec![(m, c)] }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Int)>) -> Self {
        let mut acc: HashMap<Monomial, Int> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(|| Int::from(0)) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Int>) -> Self {
        let zero = Int::from(0);
        let mut terms: Vec<(Monomial, Int)> = acc.into_iter().filter(|(_, c)| *c != zero).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1 == Int::from(1)
    }

    /// The single monomial if this is `c * m` for one term.
    pub fn as_term(&self) -> Option<(&Monomial, &Int)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Int)> {
        self.terms.first()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (a, b) = (&self.terms, &other.terms);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 + &b[j].1;
                    if c != Int::from(0) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly { terms: out }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Int> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(|| Int::from(0)) += ca * cb;
            }
        }
        Self::from_map(acc)
    }

    /// Multiply by `c * m`; monomial multiplication preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Int) -> Self {
        if *c == Int::from(0) {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        self.mul_term(m, &Int::from(1))
    }

    pub fn scale(&self, c: &Int) -> Self {
        self.mul_term(&Monomial::one(), c)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Nonnegative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> Int {
        let mut g = Int::from(0);
        for (_, c) in &self.terms {
            g = int_gcd(&g, c);
            if g == Int::from(1) {
                break;
            }
        }
        g
    }

    /// Greatest common monomial divisor of all terms (exponentwise minimum).
    pub fn monomial_gcd(&self) -> Monomial {
        let mut it = self.terms.iter();
        let first = match it.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |g, (m, _)| g.gcd(m))
    }

    pub fn div_scalar_exact(&self, c: &Int) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(m, cc)| (m.clone(), cc / c)).collect() }
    }

    /// Exact quotient in the Laurent ring, or `None` if `divisor` does not
    /// divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = divisor.as_term() {
            if self.terms.iter().all(|(_, cc)| (cc % c) == Int::from(0)) {
                let inv = m.inv();
                return Some(LaurentPoly {
                    terms: self.terms.iter().map(|(mm, cc)| (mm.mul(&inv), cc / c)).collect(),
                });
            }
            return None;
        }
        // Shift both to polynomials with no monomial factor, divide, shift back.
        let ga = self.monomial_gcd();
        let gb = divisor.monomial_gcd();
        let a = self.mul_monomial(&ga.inv());
        let b = divisor.mul_monomial(&gb.inv());
        let q = poly_div_exact(&a, &b)?;
        Some(q.mul_monomial(&ga.div(&gb)))
    }

    /// Evaluate all variables through `bindings`; variables without a binding
    /// are kept when `keep_free` says so, otherwise reported as missing.
    pub fn substitute(
        &self,
        bindings: &dyn Fn(&Var) -> Option<RationalFn>,
        keep_free: &dyn Fn(&Var) -> bool,
    ) -> Result<RationalFn, AlgebraError> {
        // For each variable collect the binding n/d and the extreme exponents;
        // multiplying through by prod d^maxpos * n^maxneg keeps every piece
        // polynomial.
        let mut vars: BTreeMap<Var, (RationalFn, i32, i32)> = BTreeMap::new();
        for (m, _) in &self.terms {
            for &(v, e) in m.factors() {
                if let Some(entry) = vars.get_mut(&v) {
                    entry.1 = entry.1.max(e);
                    entry.2 = entry.2.max(-e);
                    continue;
                }
                let b = match bindings(&v) {
                    Some(b) => b,
                    None if keep_free(&v) => RationalFn::from_poly(LaurentPoly::var(v)),
                    None => return Err(AlgebraError::MissingBinding(v)),
                };
                if b.is_zero() && e < 0 {
                    return Err(AlgebraError::DivisionByZero);
                }
                vars.insert(v, (b, e.max(0), (-e).max(0)));
            }
        }
        let mut pow_cache: HashMap<(Var, bool, u32), LaurentPoly> = HashMap::new();
        let mut power = |v: Var, numer: bool, k: u32, vars: &BTreeMap<Var, (RationalFn, i32, i32)>| -> LaurentPoly {
            if k == 0 {
                return LaurentPoly::one();
            }
            pow_cache
                .entry((v, numer, k))
                .or_insert_with(|| {
                    let (b, _, _) = &vars[&v];
                    if numer { b.num.pow(k) } else { b.den.pow(k) }
                })
                .clone()
        };
        let mut total = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = LaurentPoly::constant(c.clone());
            for (&v, &(_, maxpos, maxneg)) in vars.iter() {
                let e = m.exponent(&v);
                let num_k = (e + maxneg) as u32;
                let den_k = (maxpos - e) as u32;
                if num_k > 0 {
                    acc = acc.mul(&power(v, true, num_k, &vars));
                }
                if den_k > 0 {
                    acc = acc.mul(&power(v, false, den_k, &vars));
                }
            }
            total = total.add(&acc);
        }
        let mut common = LaurentPoly::one();
        for (&v, &(_, maxpos, maxneg)) in vars.iter() {
            if maxpos > 0 {
                common = common.mul(&power(v, false, maxpos as u32, &vars));
            }
            if maxneg > 0 {
                common = common.mul(&power(v, true, maxneg as u32, &vars));
            }
        }
        RationalFn::new(total, common)
    }

    pub fn is_positive(&self) -> bool {
        self.terms.iter().all(|(_, c)| *c > Int::from(0))
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.iter().flat_map(|(m, _)| m.factors().iter().map(|f| f.0)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn canonical_string(&self) -> String {
        self.to_string()
    }
}

/// Exact division of polynomials (nonnegative exponents) by leading terms.
fn poly_div_exact(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    let (lm, lc) = b.leading()?.clone();
    let mut rem = a.clone();
    let mut quotient: Vec<(Monomial, Int)> = Vec::new();
    while let Some((rm, rc)) = rem.leading().cloned() {
        if !rm.is_divisible_by(&lm) || (&rc % &lc) != Int::from(0) {
            return None;
        }
        let qm = rm.div(&lm);
        let qc = &rc / &lc;
        rem = rem.sub(&b.mul_term(&qm, &qc));
        quotient.push((qm, qc));
    }
    Some(LaurentPoly::from_terms(quotient))
}

fn write_int(f: &mut fmt::Formatter<'_>, c: &Int) -> fmt::Result {
    write!(f, "{c}")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let one = Int::from(1);
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = *c < Int::from(0);
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            if m.is_one() {
                write_int(f, &abs)?;
            } else if abs == one {
                write!(f, "{m}")?;
            } else {
                write_int(f, &abs)?;
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

/// A quotient of Laurent polynomials. Normalized so that numerator and
/// denominator are honest polynomials sharing no monomial factor and no
/// integer content, with a positive leading denominator coefficient. When the
/// denominator divides the numerator exactly the quotient is stored with
/// denominator 1.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::normalize(p, LaurentPoly::one())
    }

    pub fn zero() -> Self {
        RationalFn { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        RationalFn { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(LaurentPoly::var(v))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let gn = num.monomial_gcd();
        let gd = den.monomial_gcd();
        let (pos, neg) = gn.div(&gd).split_signs();
        let mut num = num.mul_monomial(&gn.inv().mul(&pos));
        let mut den = den.mul_monomial(&gd.inv().mul(&neg));
        let g = int_gcd(&num.content(), &den.content());
        if g != Int::from(1) {
            num = num.div_scalar_exact(&g);
            den = den.div_scalar_exact(&g);
        }
        if den.leading().map(|(_, c)| *c < Int::from(0)).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        if den.as_term().is_none() {
            if let Some(q) = num.div_exact(&den) {
                return Self::normalize(q, LaurentPoly::one());
            }
        }
        RationalFn { num, den }
    }

    /// The value as a Laurent polynomial when the denominator is a single
    /// term with unit coefficient.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        let (m, c) = self.den.as_term()?;
        if c.abs() != Int::from(1) {
            return None;
        }
        Some(self.num.mul_term(&m.inv(), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        if let (Some((ma, ca)), Some((mb, cb))) = (self.den.as_term(), other.den.as_term()) {
            if ca == cb {
                // Both denominators are c*m: bring to the monomial lcm.
                let l = ma.mul(mb).div(&ma.gcd(mb));
                let a = self.num.mul_monomial(&l.div(ma));
                let b = other.num.mul_monomial(&l.div(mb));
                return Self::normalize(a.add(&b), LaurentPoly::term(l, ca.clone()));
            }
        }
        Self::normalize(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        RationalFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        if other.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalize(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    pub fn pow(&self, k: i32) -> Result<Self, AlgebraError> {
        if k >= 0 {
            Ok(Self::normalize(self.num.pow(k as u32), self.den.pow(k as u32)))
        } else {
            Self::one().div(&self.pow(-k)?)
        }
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Simultaneous substitution. Every `Y` variable must be bound; unbound
    /// `A` and `X` variables stay free.
    pub fn substitute(&self, bindings: &BTreeMap<Var, RationalFn>) -> Result<RationalFn, AlgebraError> {
        let lookup = |v: &Var| bindings.get(v).cloned();
        let keep = |v: &Var| !matches!(v, Var::Y(_));
        let n = self.num.substitute(&lookup, &keep)?;
        let d = self.den.substitute(&lookup, &keep)?;
        n.div(&d)
    }

    pub fn canonical_string(&self) -> String {
        self.to_string()
    }
}

/// Value equality, so it agrees with [`RationalFn::equals`] even when the
/// stored fractions are not in lowest terms.
impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for RationalFn {}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Operation selector for [`poly_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn poly_arith(a: &RationalFn, b: &RationalFn, op: ArithOp) -> Result<RationalFn, AlgebraError> {
    match op {
        ArithOp::Add => Ok(a.add(b)),
        ArithOp::Sub => Ok(a.sub(b)),
        ArithOp::Mul => Ok(a.mul(b)),
        ArithOp::Div => a.div(b),
    }
}

pub fn substitute(f: &RationalFn, bindings: &BTreeMap<Var, RationalFn>) -> Result<RationalFn, AlgebraError> {
    f.substitute(bindings)
}

pub fn is_positive(f: &LaurentPoly) -> bool {
    f.is_positive()
}

/// Determinant of a square matrix of rational functions.
///
/// Each row is scaled by a common multiple of its denominators, the resulting
/// polynomial matrix is reduced by Bareiss elimination (every division is
/// exact), and the scaling is divided back out.
pub fn det_fraction_free(m: &[Vec<RationalFn>]) -> RationalFn {
    let n = m.len();
    if n == 0 {
        return RationalFn::one();
    }
    let mut scale = LaurentPoly::one();
    let mut rows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(n);
    for row in m {
        assert_eq!(row.len(), n, "matrix must be square");
        let mut common = LaurentPoly::one();
        for entry in row {
            if entry.is_zero() || common.div_exact(entry.den()).is_some() {
                continue;
            }
            common = match (common.as_term(), entry.den().as_term()) {
                (Some((ma, ca)), Some((mb, cb))) if ca.abs() == Int::from(1) && cb.abs() == Int::from(1) => {
                    LaurentPoly::monomial(ma.mul(mb).div(&ma.gcd(mb)))
                }
                _ => common.mul(entry.den()),
            };
        }
        let cleared: Vec<LaurentPoly> = row
            .iter()
            .map(|e| {
                if e.is_zero() {
                    LaurentPoly::zero()
                } else {
                    let k = common.div_exact(e.den()).expect("row multiple divisible by entry denominator");
                    e.num().mul(&k)
                }
            })
            .collect();
        scale = scale.mul(&common);
        rows.push(cleared);
    }
    let mut sign = 1i32;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        if rows[k][k].is_zero() {
            match (k + 1..n).find(|&r| !rows[r][k].is_zero()) {
                Some(r) => {
                    rows.swap(k, r);
                    sign = -sign;
                }
                None => return RationalFn::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = rows[k][k].mul(&rows[i][j]).sub(&rows[i][k].mul(&rows[k][j]));
                rows[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
            }
            rows[i][k] = LaurentPoly::zero();
        }
        prev = rows[k][k].clone();
    }
    let det = if sign < 0 { rows[n - 1][n - 1].neg() } else { rows[n - 1][n - 1].clone() };
    RationalFn::new(det, scale).expect("row scaling is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(i: u32) -> LaurentPoly {
        LaurentPoly::var(Var::A(i))
    }
    fn x(i: u32) -> LaurentPoly {
        LaurentPoly::var(Var::X(i))
    }

    #[test]
    fn variable_order() {
        assert!(Var::A(5) < Var::X(1));
        assert!(Var::X(9) < Var::Y(0b10));
        assert!(Var::Y(0b0110) < Var::Y(0b1010)); // {1,2} < {1,3}
        assert!(Var::Y(0b0110) < Var::Y(0b1110)); // {1,2} < {1,2,3}
        assert!(Var::Y(0b1110) < Var::Y(0b1000)); // {1,2,3} < {3}
    }

    #[test]
    fn difference_of_squares() {
        let p = x(1).add(&a(1)).mul(&x(1).sub(&a(1)));
        assert_eq!(p, x(1).mul(&x(1)).sub(&a(1).mul(&a(1))));
    }

    #[test]
    fn monomial_cancellation() {
        let q = RationalFn::from(x(1).mul(&x(2))).div(&RationalFn::from(x(2))).unwrap();
        assert_eq!(q, RationalFn::from(x(1)));
        assert_eq!(q.canonical_string(), "X1");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(RationalFn::one().div(&RationalFn::zero()), Err(AlgebraError::DivisionByZero));
    }

    #[test]
    fn strings() {
        assert_eq!(LaurentPoly::one().canonical_string(), "1");
        assert_eq!(LaurentPoly::zero().canonical_string(), "0");
        let m = LaurentPoly::monomial(Monomial::from_factors([(Var::X(1), 1), (Var::X(2), -1)]));
        assert_eq!(m.canonical_string(), "X1*X2^-1");
        let y = LaurentPoly::var(Var::Y(0b101000)).pow(2).sub(&LaurentPoly::constant(3));
        assert_eq!(y.canonical_string(), "Y{3,5}^2 - 3");
        assert_eq!(x(1).neg().canonical_string(), "-X1");
    }

    #[test]
    fn exact_division_of_laurent_polys() {
        let p = x(1).add(&a(2)).mul(&x(3).sub(&LaurentPoly::monomial(Monomial::from_factors([(Var::X(2), -1)]))));
        let d = x(1).add(&a(2));
        let q = p.div_exact(&d).unwrap();
        assert_eq!(q.mul(&d), p);
        assert!(x(1).add(&LaurentPoly::one()).div_exact(&x(1).sub(&LaurentPoly::one())).is_none());
    }

    #[test]
    fn normalization_strips_content_and_monomials() {
        let num = x(1).mul(&x(2)).scale(&Int::from(6)).add(&x(1).scale(&Int::from(4)));
        let den = x(1).mul(&x(3)).scale(&Int::from(-2));
        let r = RationalFn::new(num, den).unwrap();
        assert_eq!(r.num(), &x(2).scale(&Int::from(-3)).sub(&LaurentPoly::constant(2)));
        assert_eq!(r.den(), &x(3));
    }

    #[test]
    fn positivity() {
        let p = x(1).add(&LaurentPoly::monomial(Monomial::from_factors([(Var::A(2), 1), (Var::X(3), -1)])));
        assert!(is_positive(&p));
        assert!(!is_positive(&x(1).sub(&a(1))));
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_fraction_free(&[]), RationalFn::one());
        let e = RationalFn::new(a(1).add(&x(2)), x(1)).unwrap();
        assert_eq!(det_fraction_free(&[vec![e.clone()]]), e);
    }

    #[test]
    fn substitution_basics() {
        let y2 = Var::Y(0b100);
        let y12 = Var::Y(0b110);
        let b2 = RationalFn::new(a(2).add(&x(1)), x(2)).unwrap();
        let mut bind = BTreeMap::new();
        bind.insert(y2, b2.clone());
        assert_eq!(RationalFn::var(y2).substitute(&bind).unwrap(), b2);
        assert_eq!(RationalFn::one().substitute(&bind).unwrap(), RationalFn::one());
        let f = RationalFn::var(y12);
        assert_eq!(f.substitute(&bind), Err(AlgebraError::MissingBinding(y12)));
    }
}
