//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A polynomial carries its own ordered variable list; terms map exponent
//! vectors (one entry per variable) to nonzero `BigRational` coefficients.
//! Zero coefficients are dropped eagerly so structural equality (`==`) is
//! semantic equality over a fixed variable list.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, Integer, Signed, Zero};
use num_traits::ToPrimitive;

use crate::error::AlgebraError;

/// Exact coefficient type used throughout the symbolic layer.
pub type Coeff = BigRational;

/// Sparse polynomial over an ordered list of named variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl Polynomial {
    /// Zero polynomial over the given variables.
    pub fn zero(vars: &[impl AsRef<str>]) -> Self {
        Polynomial {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    /// Constant polynomial `c` over the given variables.
    pub fn constant(vars: &[impl AsRef<str>], c: Coeff) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// The single variable `name` (exponent 1, coefficient 1).
    pub fn var(vars: &[impl AsRef<str>], name: &str) -> Result<Self, AlgebraError> {
        let mut p = Self::zero(vars);
        let idx = p.var_index(name)?;
        let mut e = vec![0; p.vars.len()];
        e[idx] = 1;
        p.terms.insert(e, Coeff::from_integer(1.into()));
        Ok(p)
    }

    /// Univariate polynomial `Σ c_k v^k` from `(degree, coefficient)` pairs.
    pub fn univariate(name: &str, coeffs: &[(u32, Coeff)]) -> Self {
        let mut p = Self::zero(&[name]);
        for (deg, c) in coeffs {
            p.add_term(vec![*deg], c.clone());
        }
        p
    }

    /// Build from raw `(exponents, coefficient)` pairs over `vars`.
    pub fn from_terms(
        vars: &[impl AsRef<str>],
        terms: impl IntoIterator<Item = (Vec<u32>, Coeff)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Iterate `(exponents, coefficient)` pairs in the storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no variable appears with a positive exponent.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Names of variables that actually occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        let mut used = vec![false; self.vars.len()];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    used[i] = true;
                }
            }
        }
        self.vars
            .iter()
            .zip(used)
            .filter_map(|(v, u)| u.then(|| v.clone()))
            .collect()
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, other.vars, "variable lists must match for add");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, other.vars, "variable lists must match for mul");
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut out = Self::constant(&self.vars, Coeff::from_integer(1.into()));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative `∂p/∂name`. The result keeps the same variable list.
    pub fn derivative(&self, name: &str) -> Result<Polynomial, AlgebraError> {
        let idx = self.var_index(name)?;
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut en = e.clone();
            en[idx] -= 1;
            out.add_term(en, c * Coeff::from_integer(e[idx].into()));
        }
        Ok(out)
    }

    /// Substitute every variable by a polynomial over a *new* variable list.
    /// `images[i]` replaces `self.vars[i]`; all images must share `new_vars`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let new_vars: Vec<String> = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        // Memoize powers of each image: substitution cost is dominated by
        // repeated small-exponent powers.
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::constant(&new_vars, Coeff::from_integer(1.into())), p.clone()])
            .collect();
        let mut out = Polynomial::zero(&new_vars);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(&new_vars, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                while powers[i].len() <= exp as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][exp as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Re-express over `new_vars` (a superset of the *used* variables).
    pub fn embed(&self, new_vars: &[impl AsRef<str>]) -> Result<Polynomial, AlgebraError> {
        let mut out = Polynomial::zero(new_vars);
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| out.vars.iter().position(|w| w == v))
            .collect();
        for (e, c) in &self.terms {
            let mut en = vec![0u32; out.vars.len()];
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => en[j] = x,
                    None => return Err(AlgebraError::UnknownVariable(self.vars[i].clone())),
                }
            }
            out.add_term(en, c.clone());
        }
        Ok(out)
    }

    /// Drop variables that never occur; keeps relative order.
    pub fn compact(&self) -> Polynomial {
        let used: Vec<String> = self.used_vars();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let keep: Vec<usize> = self
            .vars
            .iter()
            .enumerate()
            .filter_map(|(i, v)| used.contains(v).then_some(i))
            .collect();
        let mut out = Polynomial::zero(&used);
        for (e, c) in &self.terms {
            let en: Vec<u32> = keep.iter().map(|&i| e[i]).collect();
            out.add_term(en, c.clone());
        }
        out
    }

    /// Evaluate at a point given in the polynomial's own variable order.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.vars.len(), "one value per variable");
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = c.to_f64().expect("rational out of f64 range");
            for (i, &exp) in e.iter().enumerate() {
                m *= point[i].powi(exp as i32);
            }
            acc += m;
        }
        acc
    }

    /// Content/primitive split: `p = content · prim` with `prim` having
    /// coprime integer coefficients and a positive leading (graded-lex)
    /// coefficient. The zero polynomial returns content 0 and itself.
    pub fn primitive(&self) -> (Coeff, Polynomial) {
        if self.is_zero() {
            return (Coeff::zero(), self.clone());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::from(1);
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Coeff::new(num_gcd, den_lcm);
        // Sign convention: leading graded-lex monomial gets a positive sign.
        let lead = self
            .terms
            .iter()
            .max_by(|(ea, _), (eb, _)| graded_lex(ea, eb))
            .map(|(_, c)| c.clone())
            .unwrap();
        if lead.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        let prim = Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * &inv))
                .collect(),
        };
        (content, prim)
    }

    /// Canonical display form: graded-lex descending monomials, exact
    /// rational coefficients and `*`/`^` separators. Stable across runs.
    pub fn canonical_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| graded_lex(b, a));
        let mut out = String::new();
        for (i, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.monomial_text(e);
            let one = mag == Coeff::from_integer(1.into());
            match (mono.is_empty(), one) {
                (true, _) => out.push_str(&coeff_text(&mag)),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&coeff_text(&mag));
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    fn monomial_text(&self, e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (i, &x) in e.iter().enumerate() {
            match x {
                0 => {}
                1 => parts.push(self.vars[i].clone()),
                _ => parts.push(format!("{}^{}", self.vars[i], x)),
            }
        }
        parts.join("*")
    }
}

pub(crate) fn coeff_text(c: &Coeff) -> String {
    if c.denom() == &BigInt::from(1) {
        format!("{}", c.numer())
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

/// Graded lexicographic monomial order: total degree first, then exponent
/// vector lexicographically.
pub(crate) fn graded_lex(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Free-function form of [`Polynomial::derivative`].
pub fn poly_derivative(p: &Polynomial, var: &str) -> Result<Polynomial, AlgebraError> {
    p.derivative(var)
}
