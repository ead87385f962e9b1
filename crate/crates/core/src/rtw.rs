// SPDX-License-Identifier: Apache-2.0

//! Random-telegraph-wave gates and the multiplicative hyperspace.
//!
//! With logic H carried by a reference wave `H` (chips `±1`) and logic L by
//! the zero signal, the inverter is `H - X` and the AND gate is `X1 * X2 * H`,
//! both chipwise. Because `H * H = 1` on every chip, products of references
//! form a group in which multiplying by `H_k` toggles that component.

use std::collections::BTreeSet;

use crate::error::{check_len, Error, Result};
use crate::gate::{GateAlgebra, GateKind};
use crate::reference::ReferenceSystem;
use crate::signal::{zero_signal, RtwSignal};

/// `H - X`, chipwise.
pub fn not_gate(x: &RtwSignal, h: &RtwSignal) -> Result<RtwSignal> {
    h.sub(x)
}

/// `X1 * X2 * H`, chipwise.
pub fn and_gate(x1: &RtwSignal, x2: &RtwSignal, h: &RtwSignal) -> Result<RtwSignal> {
    check_len(x1.len(), x2.len())?;
    x1.mul(x2)?.mul(h)
}

/// Two-input derived gate composed from [`not_gate`] and [`and_gate`].
pub fn derived_gate(kind: GateKind, x1: &RtwSignal, x2: &RtwSignal, h: &RtwSignal) -> Result<RtwSignal> {
    if kind.arity() != 2 {
        return Err(Error::InvalidArgument(format!("{kind} is not a two-input gate")));
    }
    check_len(x1.len(), h.len())?;
    RtwAlgebra::new(h.clone()).gate(kind, &[x1, x2])
}

/// RTW gate set over a shared reference wave.
#[derive(Debug, Clone)]
pub struct RtwAlgebra {
    h: RtwSignal,
    zero: RtwSignal,
}

impl RtwAlgebra {
    pub fn new(h: RtwSignal) -> Self {
        let zero = zero_signal(h.len()).expect("reference is non-empty");
        RtwAlgebra { h, zero }
    }
}

impl GateAlgebra for RtwAlgebra {
    type Signal = RtwSignal;

    fn reference(&self) -> &RtwSignal {
        &self.h
    }

    fn low(&self) -> RtwSignal {
        self.zero.clone()
    }

    fn not(&self, x: &RtwSignal) -> Result<RtwSignal> {
        not_gate(x, &self.h)
    }

    fn and(&self, x1: &RtwSignal, x2: &RtwSignal) -> Result<RtwSignal> {
        and_gate(x1, x2, &self.h)
    }
}

/// Non-empty set of reference indices naming one hyperspace element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperIndexSet(BTreeSet<usize>);

impl HyperIndexSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidArgument("hyperspace index set is empty".into()));
        }
        Ok(HyperIndexSet(set))
    }

    /// Decode the non-zero bitmask `mask` (bit `i` selects reference `i`).
    pub fn from_mask(mask: u64) -> Result<Self> {
        Self::new((0..64).filter(|i| (mask >> i) & 1 == 1))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Chipwise product of the selected references.
pub fn hyperspace_product(sys: &ReferenceSystem, idx: &HyperIndexSet) -> Result<RtwSignal> {
    let refs = sys.rtw_refs()?;
    let mut product: Option<RtwSignal> = None;
    for i in idx.iter() {
        let h = refs.get(i).ok_or_else(|| {
            Error::InvalidArgument(format!("reference index {i} outside 0..{}", refs.len()))
        })?;
        product = Some(match product {
            None => h.clone(),
            Some(p) => p.mul(h)?,
        });
    }
    Ok(product.expect("index set is non-empty"))
}

/// Multiply `z` by `h_k`: removes `H_k` from the product if present, inserts
/// it otherwise. Both operands must be hyperspace elements (no zero chips).
pub fn toggle_component(z: &RtwSignal, h_k: &RtwSignal) -> Result<RtwSignal> {
    check_len(z.len(), h_k.len())?;
    if let Some(i) = z.first_zero().or_else(|| h_k.first_zero()) {
        return Err(Error::ZeroChip(i));
    }
    z.mul(h_k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{classify, LogicClass};

    fn rtw(chips: &[i32]) -> RtwSignal {
        RtwSignal::from_chips(chips.to_vec()).unwrap()
    }

    #[test]
    fn not_gate_examples() {
        let h = rtw(&[1, -1, -1, 1]);
        let zero = zero_signal(4).unwrap();
        assert_eq!(not_gate(&zero, &h).unwrap(), h);
        assert_eq!(not_gate(&h, &h).unwrap(), zero);

        let h2 = rtw(&[1, 1]);
        let bad = not_gate(&rtw(&[1, -1]), &h2).unwrap();
        assert_eq!(bad.chips(), &[0, 2]);
        assert_eq!(classify(&bad, &h2).unwrap(), LogicClass::Invalid);
        assert!(not_gate(&h2, &h).is_err());
    }

    #[test]
    fn and_gate_examples() {
        let h = rtw(&[1, -1, -1, 1]);
        let zero = zero_signal(4).unwrap();
        assert_eq!(and_gate(&h, &h, &h).unwrap(), h);
        assert_eq!(and_gate(&h, &zero, &h).unwrap(), zero);
        assert_eq!(and_gate(&zero, &zero, &h).unwrap(), zero);
        assert!(and_gate(&h, &rtw(&[1]), &h).is_err());
    }

    #[test]
    fn derived_gate_examples() {
        let h = rtw(&[1, -1, 1, 1, -1]);
        let zero = zero_signal(5).unwrap();
        assert_eq!(derived_gate(GateKind::Or, &h, &zero, &h).unwrap(), h);
        assert_eq!(derived_gate(GateKind::Xor, &h, &h, &h).unwrap(), zero);
        assert_eq!(derived_gate(GateKind::Nand, &h, &h, &h).unwrap(), zero);
        assert_eq!(derived_gate(GateKind::Nand, &zero, &zero, &h).unwrap(), h);
        assert!(derived_gate(GateKind::Not, &h, &h, &h).is_err());
    }

    #[test]
    fn hyperspace_examples() {
        let sys = ReferenceSystem::rtw(3, 3, 32).unwrap();
        let refs = sys.rtw_refs().unwrap();
        assert_eq!(hyperspace_product(&sys, &HyperIndexSet::new([1]).unwrap()).unwrap(), refs[1]);
        let z = hyperspace_product(&sys, &HyperIndexSet::new([0, 1]).unwrap()).unwrap();
        assert!(z.is_reference_like());
        assert_eq!(toggle_component(&z, &refs[0]).unwrap(), refs[1]);
        let back = toggle_component(&toggle_component(&z, &refs[2]).unwrap(), &refs[2]).unwrap();
        assert_eq!(back, z);
        assert_eq!(toggle_component(&refs[0], &refs[1]).unwrap(), z);

        assert!(HyperIndexSet::new([]).is_err());
        assert!(hyperspace_product(&sys, &HyperIndexSet::new([3]).unwrap()).is_err());
        let spikes = ReferenceSystem::spike(3, 2, 32, 0.1).unwrap();
        assert!(hyperspace_product(&spikes, &HyperIndexSet::new([0]).unwrap()).is_err());
    }

    #[test]
    fn two_chip_product() {
        let a = rtw(&[1, -1]);
        let b = rtw(&[-1, -1]);
        assert_eq!(toggle_component(&a, &b).unwrap().chips(), &[-1, 1]);
    }

    #[test]
    fn toggle_rejects_zero_chips() {
        let h = rtw(&[1, -1, 1]);
        assert!(matches!(toggle_component(&rtw(&[1, 0, 1]), &h), Err(Error::ZeroChip(1))));
        assert!(matches!(toggle_component(&h, &rtw(&[0, 1, 1])), Err(Error::ZeroChip(0))));
    }
}
