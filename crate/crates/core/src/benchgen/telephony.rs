use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{grouped_tree, numbered, rng};
use crate::abstraction::AbstractionForest;
use crate::error::{Error, Result};
use crate::fixtures::months_tree;
use crate::polynomial::{Monomial, PolySet, Polynomial, Symbols};

/// Customers, their plans and monthly call minutes for the revenue-per-zip
/// query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelephonySpec {
    pub num_customers: usize,
    pub num_plans: usize,
    pub num_months: usize,
    pub seed: u64,
}

impl TelephonySpec {
    pub fn new(num_customers: usize, seed: u64) -> Self {
        Self {
            num_customers,
            num_plans: 128,
            num_months: 12,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_plans == 0 {
            return Err(Error::InvalidSpec("num_plans must be at least 1".into()));
        }
        if !(1..=12).contains(&self.num_months) {
            return Err(Error::InvalidSpec(format!(
                "num_months {} not in 1..=12",
                self.num_months
            )));
        }
        Ok(())
    }
}

/// Price per minute of a plan (1-based), from a fixed table of 128 prices
/// between 0.05 and 0.50.
pub fn plan_price(plan: usize) -> f64 {
    let slot = ((plan.saturating_sub(1) % 128) * 37) % 128;
    let cents = 5.0 + 45.0 * slot as f64 / 127.0;
    (cents * 10.0).round() / 1000.0
}

/// One polynomial per zip code (in zip order) summing `minutes * price`
/// over customers and months, each term tagged with its plan variable `p<i>`
/// and month variable `m<j>`. The forest holds the plan tree (groups of 16
/// under `Plans`) and the quarter tree under `Year`.
pub fn gen_telephony(spec: &TelephonySpec) -> Result<(PolySet, AbstractionForest)> {
    spec.validate()?;
    let mut customers = rng(spec.seed, 0);
    let mut calls = rng(spec.seed, 1);
    let mut by_zip: BTreeMap<u32, Vec<(usize, usize, u32)>> = BTreeMap::new();
    for _ in 0..spec.num_customers {
        let zip = customers.random_range(0..100_000u32);
        let plan = customers.random_range(1..=spec.num_plans);
        for month in 1..=spec.num_months {
            let minutes = calls.random_range(50..=1200u32);
            by_zip.entry(zip).or_default().push((plan, month, minutes));
        }
    }

    let mut symbols = Symbols::new();
    let plans: Vec<_> = (1..=spec.num_plans).map(|p| symbols.intern(&format!("p{p}"))).collect();
    let months: Vec<_> = (1..=spec.num_months)
        .map(|m| symbols.intern(&format!("m{m}")))
        .collect();
    let mut polys = Vec::with_capacity(by_zip.len());
    for rows in by_zip.values() {
        let raw = rows
            .iter()
            .map(|&(plan, month, minutes)| {
                let coef = f64::from(minutes) * plan_price(plan);
                Monomial::new(coef, [(plans[plan - 1], 1), (months[month - 1], 1)])
            })
            .collect::<Result<Vec<_>>>()?;
        polys.push(Polynomial::normalize(raw)?);
    }
    let set = PolySet::new(symbols, polys);

    let plan_tree = grouped_tree("Plans", &numbered("p", 1, spec.num_plans), 16);
    let forest = AbstractionForest::new(vec![plan_tree, months_tree(spec.num_months)]);
    Ok((set, forest))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{check_compatibility, validate_forest};

    #[test]
    fn prices_stay_in_range() {
        for p in 1..=300 {
            let x = plan_price(p);
            assert!((0.05..=0.5).contains(&x), "{p}: {x}");
        }
        assert_eq!(plan_price(1), 0.05);
        assert_eq!(plan_price(129), plan_price(1));
    }

    #[test]
    fn one_customer_one_month() {
        let spec = TelephonySpec {
            num_customers: 1,
            num_plans: 128,
            num_months: 1,
            seed: 7,
        };
        let (set, forest) = gen_telephony(&spec).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.num_m(), 1);
        assert!(validate_forest(&forest).is_empty());
    }

    #[test]
    fn monomials_hold_one_plan_and_one_month() {
        let (set, forest) = gen_telephony(&TelephonySpec::new(300, 3)).unwrap();
        assert!(check_compatibility(&set, &forest).is_empty());
        for p in set.polys() {
            for m in p.monomials() {
                assert!(m.coef > 0.0);
                let names: Vec<&str> = m.variables().map(|v| set.symbols().name(v)).collect();
                assert_eq!(names.len(), 2);
                assert_eq!(names.iter().filter(|n| n.starts_with('p')).count(), 1);
                assert_eq!(names.iter().filter(|n| n.starts_with('m')).count(), 1);
            }
        }
        assert_eq!(forest.trees[0].leaves().count(), 128);
        assert_eq!(forest.trees[0].children(0).len(), 8);
    }

    #[test]
    fn same_spec_same_output() {
        let spec = TelephonySpec::new(50, 11);
        let (a, fa) = gen_telephony(&spec).unwrap();
        let (b, fb) = gen_telephony(&spec).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(fa.to_json(), fb.to_json());
        let (c, _) = gen_telephony(&TelephonySpec::new(50, 12)).unwrap();
        assert_ne!(a.to_json(), c.to_json());
    }

    #[test]
    fn rejects_bad_spec() {
        let mut spec = TelephonySpec::new(1, 0);
        spec.num_months = 13;
        assert!(matches!(gen_telephony(&spec), Err(Error::InvalidSpec(_))));
        spec.num_months = 12;
        spec.num_plans = 0;
        assert!(matches!(gen_telephony(&spec), Err(Error::InvalidSpec(_))));
    }
}
