//! Slot-addressed operations on labeled kets.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Ket, Real, C};
use crate::states::LabeledBasis;

fn positions(basis: &LabeledBasis, slots: &[&str]) -> Result<Vec<usize>> {
    let pos = slots.iter().map(|s| basis.require_slot(s)).collect::<Result<Vec<_>>>()?;
    for (k, p) in pos.iter().enumerate() {
        if pos[..k].contains(p) {
            return Err(Error::SlotMismatch(format!("slot `{}` named twice", slots[k])));
        }
    }
    Ok(pos)
}

/// Flat indices grouped by the values of the slots at `pos`: every group
/// shares the other digits and is ordered by the sub-index of `pos`.
fn groups(basis: &LabeledBasis, pos: &[usize]) -> Vec<Vec<usize>> {
    let strides = basis.strides();
    let dims: Vec<usize> = pos.iter().map(|&p| basis.slots()[p].dim()).collect();
    let sub_dim: usize = dims.iter().product();
    let offsets: Vec<usize> = (0..sub_dim)
        .map(|mut s| {
            let mut offset = 0;
            for k in (0..pos.len()).rev() {
                offset += (s % dims[k]) * strides[pos[k]];
                s /= dims[k];
            }
            offset
        })
        .collect();
    (0..basis.dim())
        .filter(|idx| pos.iter().zip(&dims).all(|(&p, &d)| (idx / strides[p]).is_multiple_of(d)))
        .map(|idx| offsets.iter().map(|o| idx + o).collect())
        .collect()
}

fn apply_filtered<T: Real>(
    ket: &Ket<T>,
    slots: &[&str],
    u: &ComplexMatrix<T>,
    condition: Option<(&str, usize)>,
) -> Result<Ket<T>> {
    let basis = ket.basis();
    let pos = positions(basis, slots)?;
    let sub_dim: usize = pos.iter().map(|&p| basis.slots()[p].dim()).product();
    if u.rows() != sub_dim || u.cols() != sub_dim {
        return Err(Error::DimensionMismatch { expected: sub_dim, found: u.rows() });
    }
    let control = match condition {
        Some((name, level)) => {
            let p = basis.require_slot(name)?;
            let (stride, dim) = (basis.strides()[p], basis.slots()[p].dim());
            if pos.contains(&p) {
                return Err(Error::SlotMismatch(format!("control `{name}` is also a target")));
            }
            if level >= basis.slots()[p].dim() {
                return Err(Error::SlotMismatch(format!("slot `{name}` has no level {level}")));
            }
            Some((stride, dim, level))
        }
        None => None,
    };
    let src = ket.amplitudes();
    let mut amps = src.to_vec();
    let mut buf = vec![C::new(T::zero(), T::zero()); sub_dim];
    for group in groups(basis, &pos) {
        if let Some((stride, dim, level)) = control {
            if (group[0] / stride) % dim != level {
                continue;
            }
        }
        for (b, &g) in buf.iter_mut().zip(&group) {
            *b = src[g];
        }
        for (r, &g) in group.iter().enumerate() {
            amps[g] = u.row(r).iter().zip(&buf).fold(C::new(T::zero(), T::zero()), |s, (x, y)| s + *x * *y);
        }
    }
    Ket::unnormalized(amps, basis.clone())
}

/// Applies `u` to the named slots (first name most significant) and the
/// identity elsewhere.
pub fn apply_on_slots<T: Real>(ket: &Ket<T>, slots: &[&str], u: &ComplexMatrix<T>) -> Result<Ket<T>> {
    apply_filtered(ket, slots, u, None)
}

/// Applies `u` to the named slots only on the component where `control`
/// sits at `level`.
pub fn apply_controlled<T: Real>(
    ket: &Ket<T>,
    control: (&str, usize),
    slots: &[&str],
    u: &ComplexMatrix<T>,
) -> Result<Ket<T>> {
    apply_filtered(ket, slots, u, Some(control))
}

/// `(<bra| ⊗ I) |ket>` over the named slots; the slots are removed and the
/// result is left unnormalized.
pub fn contract<T: Real>(ket: &Ket<T>, slots: &[&str], bra: &[C<T>]) -> Result<Ket<T>> {
    let basis = ket.basis();
    let pos = positions(basis, slots)?;
    let sub_dim: usize = pos.iter().map(|&p| basis.slots()[p].dim()).product();
    if bra.len() != sub_dim {
        return Err(Error::DimensionMismatch { expected: sub_dim, found: bra.len() });
    }
    let mut rest = basis.clone();
    let mut sorted = pos.clone();
    sorted.sort_unstable();
    for &p in sorted.iter().rev() {
        rest = rest.without(p);
    }
    let src = ket.amplitudes();
    let amps = groups(basis, &pos)
        .into_iter()
        .map(|g| g.iter().zip(bra).fold(C::new(T::zero(), T::zero()), |s, (&i, b)| s + b.conj() * src[i]))
        .collect();
    Ket::unnormalized(amps, rest)
}

/// `|ket> ⊗ |other>`; slot names must not collide.
pub fn append<T: Real>(ket: &Ket<T>, other: &Ket<T>) -> Result<Ket<T>> {
    for s in other.basis().slots() {
        if ket.basis().slot_position(&s.name).is_some() {
            return Err(Error::SlotMismatch(format!("slot `{}` already present", s.name)));
        }
    }
    let mut amps = Vec::with_capacity(ket.dim() * other.dim());
    for a in ket.amplitudes() {
        for b in other.amplitudes() {
            amps.push(*a * *b);
        }
    }
    Ket::unnormalized(amps, ket.basis().concat(other.basis()))
}

/// Reorders the slots; `order` must name every slot exactly once.
pub fn reorder<T: Real>(ket: &Ket<T>, order: &[&str]) -> Result<Ket<T>> {
    let basis = ket.basis();
    if order.len() != basis.slots().len() {
        return Err(Error::SlotMismatch(format!("reorder names {} of {} slots", order.len(), basis.slots().len())));
    }
    let pos = positions(basis, order)?;
    let target = basis.permuted(&pos);
    let mut amps = vec![C::new(T::zero(), T::zero()); ket.dim()];
    for (idx, &a) in ket.amplitudes().iter().enumerate() {
        let digits = basis.digits(idx);
        let new_digits: Vec<usize> = pos.iter().map(|&p| digits[p]).collect();
        amps[target.index_of(&new_digits)] = a;
    }
    Ket::unnormalized(amps, target)
}

/// Squared norm of the component with `slot` at `level`.
pub fn level_weight<T: Real>(ket: &Ket<T>, slot: &str, level: usize) -> Result<T> {
    let basis = ket.basis();
    let p = basis.require_slot(slot)?;
    Ok(ket
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| basis.digits(*i)[p] == level)
        .fold(T::zero(), |s, (_, a)| s + a.norm_sqr()))
}
