//! Tensor products of measures on max-metric products.

use crate::ultra::Product;
use crate::{Budgets, Error, Measure, Result, Weighted};

/// `mu (x) nu` on `X x Y`: weights combine by `min` (max-min) or `+`
/// (max-plus), so each marginal of the product is the original factor.
pub fn tensor(mu: &Measure, nu: &Measure, budgets: &Budgets) -> Result<(Product, Measure)> {
    tensor_all(&[mu.clone(), nu.clone()], budgets)
}

/// k-fold tensor product.
pub fn tensor_all(factors: &[Measure], budgets: &Budgets) -> Result<(Product, Measure)> {
    let first = factors.first().ok_or(Error::NoAtoms)?;
    if factors.iter().any(|m| m.kind() != first.kind()) {
        return Err(Error::MixedKinds);
    }
    let spaces: Vec<_> = factors.iter().map(|m| m.space().clone()).collect();
    let product = Product::new(&spaces, budgets.product_points)?;
    let weights: Vec<Weighted<usize>> = factors.iter().map(|m| m.weights().clone()).collect();
    let joint = Weighted::tensor_all(&weights)?.map(|coords| product.index_of(coords));
    let measure = Measure::from_weighted(product.space().clone(), joint)?;
    Ok((product, measure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ExtReal, FinUltrametricSpace, MeasureKind::*};
    use std::sync::Arc;

    #[test]
    fn maxmin_tensor_example() {
        let x = Arc::new(FinUltrametricSpace::discrete(["a", "b"]).unwrap());
        let y = Arc::new(FinUltrametricSpace::discrete(["u"]).unwrap());
        let mu = Measure::from_labels(MaxMin, x, [("a", ExtReal::PosInf), ("b", ExtReal::int(2))])
            .unwrap();
        let nu = Measure::dirac_label(MaxMin, y, "u").unwrap();
        let (_, t) = tensor(&mu, &nu, &Budgets::default()).unwrap();
        assert_eq!(
            t.labelled_atoms(),
            vec![
                ("(a,u)".into(), ExtReal::PosInf),
                ("(b,u)".into(), ExtReal::int(2))
            ]
        );
    }

    #[test]
    fn diracs_tensor_to_dirac() {
        let x = Arc::new(FinUltrametricSpace::discrete(["a", "b"]).unwrap());
        for kind in [MaxMin, MaxPlus] {
            let da = Measure::dirac_label(kind, x.clone(), "a").unwrap();
            let db = Measure::dirac_label(kind, x.clone(), "b").unwrap();
            let (p, t) = tensor(&da, &db, &Budgets::default()).unwrap();
            let ab = p.index_of(&[0, 1]);
            assert_eq!(t, Measure::dirac(kind, p.space().clone(), ab).unwrap());
        }
    }

    #[test]
    fn maxplus_tensor_adds() {
        let x = Arc::new(FinUltrametricSpace::discrete(["a", "b"]).unwrap());
        let mu = Measure::from_labels(
            MaxPlus,
            x.clone(),
            [("a", ExtReal::int(0)), ("b", ExtReal::int(-1))],
        )
        .unwrap();
        let (_, t) = tensor(&mu, &mu, &Budgets::default()).unwrap();
        assert_eq!(t.labelled_atoms()[3], ("(b,b)".into(), ExtReal::int(-2)));
    }

    #[test]
    fn tensor_errors() {
        let x = Arc::new(FinUltrametricSpace::discrete(["a", "b", "c"]).unwrap());
        let a = Measure::dirac_label(MaxMin, x.clone(), "a").unwrap();
        let b = Measure::dirac_label(MaxPlus, x.clone(), "a").unwrap();
        assert_eq!(
            tensor(&a, &b, &Budgets::default()).unwrap_err(),
            Error::MixedKinds
        );
        let tight = Budgets {
            product_points: 8,
            ..Budgets::default()
        };
        assert!(matches!(
            tensor(&a, &a, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
