//! Provenance polynomials: coefficient-weighted monomials over interned
//! variables, grouped into multisets.
//!
//! Plus is numeric addition and times is numeric multiplication. A monomial's
//! identity is its variable multiset; the coefficient never takes part in it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Interned variable handle. Only meaningful together with the [`Symbols`]
/// table that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(index: usize) -> Self {
        VarId(index as u32)
    }
}

/// Name <-> id table. Ids are handed out in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Symbols {
    names: Vec<String>,
    ids: HashMap<String, VarId>,
}

impl Symbols {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = VarId(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<VarId> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: VarId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Sorted `(variable, exponent)` pairs; the identity of a monomial.
pub type VarKey = SmallVec<[(VarId, u32); 4]>;

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    vars: VarKey,
}

impl Monomial {
    /// Builds a monomial, folding repeated variables into one exponent.
    pub fn new(coef: f64, vars: impl IntoIterator<Item = (VarId, u32)>) -> Result<Self> {
        if !coef.is_finite() {
            return Err(Error::InvalidCoefficient(coef));
        }
        let mut key: VarKey = vars.into_iter().collect();
        if let Some(&(v, _)) = key.iter().find(|(_, e)| *e == 0) {
            return Err(Error::InvalidExponent(format!("#{}", v.index())));
        }
        Ok(Self {
            coef,
            vars: canonical_key(&mut key),
        })
    }

    pub fn key(&self) -> &[(VarId, u32)] {
        &self.vars
    }

    pub fn exponent(&self, var: VarId) -> Option<u32> {
        self.vars
            .binary_search_by_key(&var, |&(v, _)| v)
            .ok()
            .map(|i| self.vars[i].1)
    }

    pub fn variables(&self) -> impl Iterator<Item = VarId> + '_ {
        self.vars.iter().map(|&(v, _)| v)
    }

    /// Applies `map` to every variable and re-canonicalizes the key.
    pub fn substitute(&self, mut map: impl FnMut(VarId) -> VarId) -> Monomial {
        let mut key: VarKey = self.vars.iter().map(|&(v, e)| (map(v), e)).collect();
        Monomial {
            coef: self.coef,
            vars: canonical_key(&mut key),
        }
    }
}

/// Sorts by variable and merges repeated entries by adding exponents.
pub(crate) fn canonical_key(key: &mut VarKey) -> VarKey {
    key.sort_unstable_by_key(|&(v, _)| v);
    let mut out = VarKey::with_capacity(key.len());
    for &(v, e) in key.iter() {
        match out.last_mut() {
            Some((last, exp)) if *last == v => *exp += e,
            _ => out.push((v, e)),
        }
    }
    out
}

/// A normalized polynomial: at most one monomial per variable multiset,
/// no zero coefficients, monomials sorted by key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    monomials: Vec<Monomial>,
}

impl Polynomial {
    /// Merges monomials with equal variable multisets and drops exact zeros.
    pub fn normalize(raw: Vec<Monomial>) -> Result<Self> {
        if let Some(m) = raw.iter().find(|m| !m.coef.is_finite()) {
            return Err(Error::InvalidCoefficient(m.coef));
        }
        let mut raw = raw;
        // stable, so merged coefficients are summed in input order
        raw.sort_by(|a, b| a.vars.cmp(&b.vars));
        let mut monomials: Vec<Monomial> = Vec::with_capacity(raw.len());
        for m in raw {
            match monomials.last_mut() {
                Some(last) if last.vars == m.vars => last.coef += m.coef,
                _ => monomials.push(m),
            }
        }
        if let Some(m) = monomials.iter().find(|m| !m.coef.is_finite()) {
            return Err(Error::InvalidCoefficient(m.coef));
        }
        monomials.retain(|m| m.coef != 0.0);
        Ok(Self { monomials })
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn num_m(&self) -> usize {
        self.monomials.len()
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.monomials.iter().flat_map(|m| m.variables()).collect()
    }

    pub fn substitute(&self, mut map: impl FnMut(VarId) -> VarId) -> Polynomial {
        let raw = self.monomials.iter().map(|m| m.substitute(&mut map)).collect();
        Polynomial::normalize(raw).expect("coefficients stay finite under substitution")
    }

    /// Sum of coefficient times the product of powered values.
    pub fn evaluate_with(&self, mut value: impl FnMut(VarId) -> Option<f64>) -> Result<f64, VarId> {
        let mut total = 0.0;
        for m in &self.monomials {
            let mut term = m.coef;
            for &(v, e) in m.key() {
                let x = value(v).ok_or(v)?;
                term *= x.powi(e as i32);
            }
            total += term;
        }
        Ok(total)
    }
}

/// A multiset of polynomials sharing one symbol table.
#[derive(Clone, Debug, Default)]
pub struct PolySet {
    symbols: Symbols,
    polys: Vec<Polynomial>,
}

impl PolySet {
    pub fn new(symbols: Symbols, polys: Vec<Polynomial>) -> Self {
        Self { symbols, polys }
    }

    pub fn symbols(&self) -> &Symbols {
        &self.symbols
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Total number of monomials, counting duplicated polynomials.
    pub fn num_m(&self) -> usize {
        self.polys.iter().map(Polynomial::num_m).sum()
    }

    /// Distinct variables across all polynomials.
    pub fn variables(&self) -> BTreeSet<VarId> {
        self.polys.iter().flat_map(|p| p.variables()).collect()
    }

    pub fn num_v(&self) -> usize {
        self.variables().len()
    }

    pub fn variable_names(&self) -> BTreeSet<&str> {
        self.variables().into_iter().map(|v| self.symbols.name(v)).collect()
    }

    /// Rebuilds every polynomial after renaming variables through `map`.
    /// New ids must already exist in `symbols`.
    pub fn substitute(&self, symbols: Symbols, map: impl Fn(VarId) -> VarId) -> PolySet {
        let polys = self.polys.iter().map(|p| p.substitute(&map)).collect();
        PolySet { symbols, polys }
    }

    pub fn evaluate(&self, index: usize, valuation: &Valuation) -> Result<f64> {
        self.polys[index]
            .evaluate_with(|v| valuation.get(self.symbols.name(v)))
            .map_err(|v| Error::UnboundVariable(self.symbols.name(v).to_owned()))
    }

    pub fn evaluate_all(&self, valuation: &Valuation) -> Result<Vec<f64>> {
        (0..self.polys.len()).map(|i| self.evaluate(i, valuation)).collect()
    }

    /// Builds a set from textual polynomials such as `"3*x*y^2 + 4*z"`.
    ///
    /// Terms are separated by `+` or `-`, factors by `*`. Every factor is a
    /// number or a variable name with an optional `^exponent`.
    pub fn from_text<S: AsRef<str>>(polys: &[S]) -> Result<Self> {
        let mut symbols = Symbols::new();
        let mut out = Vec::with_capacity(polys.len());
        for (line, text) in polys.iter().enumerate() {
            let raw = parse_text_polynomial(text.as_ref(), line + 1, &mut symbols)?;
            out.push(Polynomial::normalize(raw)?);
        }
        Ok(Self::new(symbols, out))
    }

    /// Same monomials in the same polynomials, coefficients equal up to a
    /// relative tolerance.
    pub fn approx_eq(&self, other: &PolySet, rel_tol: f64) -> bool {
        let (a, b) = (self.canonical(), other.canonical());
        a.len() == b.len()
            && a.iter().zip(&b).all(|(p, q)| {
                p.len() == q.len()
                    && p.iter()
                        .zip(q)
                        .all(|((ka, ca), (kb, cb))| ka == kb && (ca - cb).abs() <= rel_tol * ca.abs().max(cb.abs()))
            })
    }

    fn canonical(&self) -> Vec<Vec<(Vec<(&str, u32)>, f64)>> {
        self.polys
            .iter()
            .map(|p| {
                let mut ms: Vec<_> = p
                    .monomials()
                    .iter()
                    .map(|m| (named_key(&self.symbols, m), m.coef))
                    .collect();
                ms.sort_by(|a, b| a.0.cmp(&b.0));
                ms
            })
            .collect()
    }

    /// Writes the JSON interchange document. Monomials appear in canonical
    /// order (lexicographic over sorted `(name, exponent)` pairs).
    pub fn to_json(&self) -> String {
        let variables: Vec<&str> = self.variable_names().into_iter().collect();
        let polynomials = self
            .canonical()
            .into_iter()
            .map(|ms| PolyDoc {
                monomials: ms
                    .into_iter()
                    .map(|(key, coef)| MonoDoc {
                        coef,
                        vars: VarsDoc(key.into_iter().map(|(n, e)| (n.to_owned(), e)).collect()),
                    })
                    .collect(),
            })
            .collect();
        let doc = PolySetDoc {
            variables: variables.into_iter().map(str::to_owned).collect(),
            polynomials,
        };
        serde_json::to_string_pretty(&doc).expect("polyset serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolySetDoc = serde_json::from_str(text).map_err(parse_error)?;
        let mut symbols = Symbols::new();
        let mut seen = BTreeSet::new();
        for name in &doc.variables {
            if !seen.insert(name.as_str()) {
                return Err(schema_error(format!("variable `{name}` listed twice")));
            }
            symbols.intern(name);
        }
        let mut polys = Vec::with_capacity(doc.polynomials.len());
        for (pi, p) in doc.polynomials.into_iter().enumerate() {
            let mut raw = Vec::with_capacity(p.monomials.len());
            for (mi, m) in p.monomials.into_iter().enumerate() {
                let mut vars = Vec::with_capacity(m.vars.0.len());
                for (name, exp) in m.vars.0 {
                    let id = symbols.get(&name).ok_or_else(|| {
                        schema_error(format!(
                            "polynomials[{pi}].monomials[{mi}]: variable `{name}` is not declared"
                        ))
                    })?;
                    if exp == 0 {
                        return Err(schema_error(format!(
                            "polynomials[{pi}].monomials[{mi}]: exponent of `{name}` must be >= 1"
                        )));
                    }
                    vars.push((id, exp));
                }
                raw.push(Monomial::new(m.coef, vars)?);
            }
            polys.push(Polynomial::normalize(raw)?);
        }
        Ok(Self::new(symbols, polys))
    }
}

impl PartialEq for PolySet {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

fn named_key<'a>(symbols: &'a Symbols, m: &Monomial) -> Vec<(&'a str, u32)> {
    let mut key: Vec<_> = m.key().iter().map(|&(v, e)| (symbols.name(v), e)).collect();
    key.sort();
    key
}

impl fmt::Display for PolySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ms) in self.canonical().into_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            if ms.is_empty() {
                write!(f, "0")?;
            }
            for (j, (key, coef)) in ms.into_iter().enumerate() {
                if j > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "{coef}")?;
                for (name, e) in key {
                    if e == 1 {
                        write!(f, "*{name}")?;
                    } else {
                        write!(f, "*{name}^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Values assigned to variables for one hypothetical scenario.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation {
    pub assignments: BTreeMap<String, f64>,
}

impl Valuation {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.assignments.get(name).copied()
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.assignments.insert(name.into(), value);
    }

    /// Assigns `value` to every variable occurring in `set`.
    pub fn constant(set: &PolySet, value: f64) -> Self {
        Self {
            assignments: set
                .variable_names()
                .into_iter()
                .map(|n| (n.to_owned(), value))
                .collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolySetDoc {
    variables: Vec<String>,
    polynomials: Vec<PolyDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyDoc {
    monomials: Vec<MonoDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoDoc {
    coef: f64,
    vars: VarsDoc,
}

/// `{"name": exponent, ...}` kept in document order; duplicate keys rejected.
struct VarsDoc(Vec<(String, u32)>);

impl Serialize for VarsDoc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for VarsDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = VarsDoc;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from variable name to exponent")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<VarsDoc, A::Error> {
                let mut out: Vec<(String, u32)> = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, u32>()? {
                    if out.iter().any(|(name, _)| *name == k) {
                        return Err(de::Error::custom(format!("duplicate variable `{k}` in monomial")));
                    }
                    out.push((k, v));
                }
                Ok(VarsDoc(out))
            }
        }
        d.deserialize_map(V)
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn schema_error(message: String) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message,
    }
}

fn parse_text_polynomial(text: &str, line: usize, symbols: &mut Symbols) -> Result<Vec<Monomial>> {
    let err = |column: usize, message: String| Error::Parse { line, column, message };
    let mut terms: Vec<(usize, bool, &str)> = Vec::new();
    let mut start = 0;
    let mut negative = false;
    for (i, c) in text.char_indices() {
        if c == '+' || c == '-' {
            // a sign right after `^` or `e` belongs to a number
            let prev = text[..i].trim_end().chars().last();
            if matches!(prev, Some('^')) || is_exponent_sign(&text[..i]) {
                continue;
            }
            terms.push((start, negative, &text[start..i]));
            negative = c == '-';
            start = i + 1;
        }
    }
    terms.push((start, negative, &text[start..]));

    let mut out = Vec::new();
    for (column, negative, term) in terms {
        let term = term.trim();
        if term.is_empty() {
            if column == 0 {
                continue;
            }
            return Err(err(column + 1, "empty term".into()));
        }
        let mut coef = if negative { -1.0 } else { 1.0 };
        let mut vars = Vec::new();
        for factor in term.split('*').map(str::trim) {
            if factor.is_empty() {
                return Err(err(column + 1, format!("empty factor in `{term}`")));
            }
            if let Ok(x) = factor.parse::<f64>() {
                coef *= x;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| err(column + 1, format!("bad exponent in `{factor}`")))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            if name.is_empty() || exp == 0 {
                return Err(err(column + 1, format!("bad factor `{factor}`")));
            }
            vars.push((symbols.intern(name), exp));
        }
        out.push(Monomial::new(coef, vars)?);
    }
    Ok(out)
}

fn is_exponent_sign(before: &str) -> bool {
    // `1.5e-3`: preceded by `e`/`E` which itself follows a digit
    let mut it = before.chars().rev();
    matches!(it.next(), Some('e' | 'E')) && matches!(it.next(), Some(c) if c.is_ascii_digit())
}
