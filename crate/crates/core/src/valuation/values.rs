use super::{BipartiteHoldings, DependencyMatrix, ValuationError};

const CONSERVATION_TOLERANCE: f64 = 1e-6;

/// Book values `v = (I - C)^{-1} W 1` and outside values `v̇ = A W 1 = Ĉ v`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueVector {
    pub book: Vec<f64>,
    pub outside: Vec<f64>,
}

impl ValueVector {
    pub fn total_outside(&self) -> f64 {
        self.outside.iter().sum()
    }
}

pub fn market_values(
    a: &DependencyMatrix,
    bh: &BipartiteHoldings,
) -> Result<ValueVector, ValuationError> {
    if bh.fund_count() != a.n() {
        return Err(ValuationError::DimensionMismatch { expected: a.n(), got: bh.fund_count() });
    }
    let primitive = bh.fund_asset_values();
    let book = a.book_values(&primitive)?;
    let outside: Vec<f64> = book.iter().zip(a.outside_shares()).map(|(v, c)| c * v).collect();
    let total: f64 = primitive.iter().sum();
    let got: f64 = outside.iter().sum();
    if (got - total).abs() > CONSERVATION_TOLERANCE * total.abs().max(f64::MIN_POSITIVE) {
        return Err(ValuationError::ConservationViolated { outside: got, primitive: total });
    }
    Ok(ValueVector { book, outside })
}
