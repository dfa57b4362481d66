use std::collections::BTreeMap;

use rand::Rng;

use super::{grouped_tree, numbered, rng};
use crate::abstraction::{AbstractionForest, AbstractionTree};
use crate::error::{Error, Result};
use crate::polynomial::{Monomial, PolySet, Polynomial, Symbols};

const SUPPLIERS: u64 = 10_000;
const PARTS: u64 = 200_000;
const NATIONS: u64 = 25;

/// Variable standing for supplier `key`.
pub fn supplier_var(key: u64, modulus: u64) -> String {
    format!("s{}", key % modulus)
}

/// Variable standing for part `key`.
pub fn part_var(key: u64, modulus: u64) -> String {
    format!("p{}", key % modulus)
}

#[derive(Clone, Debug)]
pub struct TpchInstance {
    pub set: PolySet,
    pub suppliers: AbstractionTree,
    pub parts: AbstractionTree,
}

impl TpchInstance {
    pub fn forest(&self) -> AbstractionForest {
        AbstractionForest::new(vec![self.suppliers.clone(), self.parts.clone()])
    }
}

/// Discounted revenue of `num_keys` line items grouped by supplier nation.
/// Each term is `price * quantity * discount` times the supplier and part
/// variables of the item's keys modulo `modulus`.
pub fn gen_tpch_like(num_keys: usize, modulus: u64, seed: u64) -> Result<TpchInstance> {
    if modulus == 0 {
        return Err(Error::InvalidSpec("modulus must be at least 1".into()));
    }
    let mut items = rng(seed, 0);
    let mut symbols = Symbols::new();
    let supp: Vec<_> = (0..modulus)
        .map(|i| symbols.intern(&supplier_var(i, modulus)))
        .collect();
    let part: Vec<_> = (0..modulus).map(|i| symbols.intern(&part_var(i, modulus))).collect();
    let mut by_nation: BTreeMap<u64, Vec<Monomial>> = BTreeMap::new();
    for _ in 0..num_keys {
        let s = items.random_range(1..=SUPPLIERS);
        let p = items.random_range(1..=PARTS);
        let quantity = items.random_range(1..=50u32);
        let cents = items.random_range(90_000..=10_500_000u32);
        let discount = items.random_range(1..=10u32);
        let coef = f64::from(cents) / 100.0 * f64::from(quantity) * f64::from(discount) / 100.0;
        let m = Monomial::new(
            coef,
            [(supp[(s % modulus) as usize], 1), (part[(p % modulus) as usize], 1)],
        )?;
        by_nation.entry(s % NATIONS).or_default().push(m);
    }
    let polys = by_nation
        .into_values()
        .map(Polynomial::normalize)
        .collect::<Result<Vec<_>>>()?;
    let count = modulus as usize;
    Ok(TpchInstance {
        set: PolySet::new(symbols, polys),
        suppliers: grouped_tree("Supp", &numbered("s", 0, count), 16),
        parts: grouped_tree("Part", &numbered("p", 0, count), 16),
    })
}
