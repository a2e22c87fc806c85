use crate::error::{Error, Result};

/// One tensor factor of a basis: a name and the labels of its levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slot {
    pub name: String,
    pub values: Vec<String>,
}

impl Slot {
    pub fn new(name: impl Into<String>, values: &[&str]) -> Self {
        Self { name: name.into(), values: values.iter().map(|v| v.to_string()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.values.iter().position(|v| v == value)
    }
}

/// Ordered product basis. Index order is left-major: the first slot varies
/// slowest. A label is the slot values joined with `|`, e.g. `"1_D|0_A|V"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledBasis {
    slots: Vec<Slot>,
}

impl LabeledBasis {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        for (i, s) in slots.iter().enumerate() {
            if s.values.is_empty() {
                return Err(Error::SlotMismatch(format!("slot `{}` has no levels", s.name)));
            }
            if slots[..i].iter().any(|o| o.name == s.name) {
                return Err(Error::SlotMismatch(format!("duplicate slot `{}`", s.name)));
            }
            for (k, v) in s.values.iter().enumerate() {
                if s.values[..k].contains(v) {
                    return Err(Error::SlotMismatch(format!("duplicate level `{v}` in slot `{}`", s.name)));
                }
            }
        }
        Ok(Self { slots })
    }

    /// Empty product (dimension one).
    pub fn scalar() -> Self {
        Self { slots: Vec::new() }
    }

    /// Two-level slot with custom level names, e.g. `0_A`/`1_A`.
    pub fn qubit(name: &str, zero: &str, one: &str) -> Self {
        Self { slots: vec![Slot::new(name, &[zero, one])] }
    }

    /// Polarization slot with levels `H`, `V`.
    pub fn polarization(name: &str) -> Self {
        Self::qubit(name, "H", "V")
    }

    /// Single slot `m` with levels `0..dim`.
    pub fn anonymous(dim: usize) -> Self {
        let values: Vec<String> = (0..dim).map(|i| i.to_string()).collect();
        Self { slots: vec![Slot { name: "m".into(), values }] }
    }

    /// Canonical 8-rail basis: slots `D` (`0_D`,`1_D`), `A` (`0_A`,`1_A`),
    /// `B` (`H`,`V`); index `4d + 2a + p`.
    pub fn rail() -> Self {
        Self {
            slots: vec![Slot::new("D", &["0_D", "1_D"]), Slot::new("A", &["0_A", "1_A"]), Slot::new("B", &["H", "V"])],
        }
    }

    /// Three polarization photons `1`, `2`, `3`.
    pub fn triple_photon() -> Self {
        Self::polarization("1").concat(&Self::polarization("2")).concat(&Self::polarization("3"))
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn dim(&self) -> usize {
        self.slots.iter().map(Slot::dim).product()
    }

    pub fn slot_position(&self, name: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.name == name)
    }

    pub fn require_slot(&self, name: &str) -> Result<usize> {
        self.slot_position(name).ok_or_else(|| Error::SlotMismatch(format!("no slot named `{name}`")))
    }

    /// Index stride of each slot.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.slots.len()];
        for k in (0..self.slots.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.slots[k + 1].dim();
        }
        strides
    }

    /// Per-slot level indices of a flat index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.slots.len()];
        for k in (0..self.slots.len()).rev() {
            let d = self.slots[k].dim();
            out[k] = index % d;
            index /= d;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(self.strides()).map(|(d, s)| d * s).sum()
    }

    pub fn label(&self, index: usize) -> String {
        self.digits(index)
            .iter()
            .zip(&self.slots)
            .map(|(&d, s)| s.values[d].as_str())
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.label(i)).collect()
    }

    /// Left-major concatenation. Slot names already present get a `'`
    /// appended until unique.
    pub fn concat(&self, other: &Self) -> Self {
        let mut slots = self.slots.clone();
        for s in &other.slots {
            let mut s = s.clone();
            while slots.iter().any(|o| o.name == s.name) {
                s.name.push('\'');
            }
            slots.push(s);
        }
        Self { slots }
    }

    /// Basis with the slot at `position` removed.
    pub fn without(&self, position: usize) -> Self {
        let mut slots = self.slots.clone();
        slots.remove(position);
        Self { slots }
    }

    /// Basis with slots in the order given by `positions`.
    pub fn permuted(&self, positions: &[usize]) -> Self {
        Self { slots: positions.iter().map(|&p| self.slots[p].clone()).collect() }
    }
}

/// Track name of a rail: `(d, a)` sits on `B_{a+1,d+1}`.
pub fn rail_track_name(d: usize, a: usize) -> String {
    format!("B_{{{},{}}}", a + 1, d + 1)
}
