use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Real, C};

/// Entries below this modulus are treated as already eliminated.
const NEGLIGIBLE: f64 = 1e-14;

/// One optical element.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Element<T: Real = f64> {
    /// Acts on modes `(i, j)` as `[[e^{i phi} cos theta, -sin theta], [e^{i phi} sin theta, cos theta]]`.
    BeamSplitter { i: usize, j: usize, theta: T, phi: T },
    /// Multiplies mode `i` by `e^{i phi}`.
    PhaseShifter { i: usize, phi: T },
}

impl<T: Real> Element<T> {
    fn check(&self, modes: usize) -> Result<()> {
        let bad = |index| Err(Error::BadModeIndex { index, modes });
        match *self {
            Element::BeamSplitter { i, j, .. } => {
                if i >= modes {
                    return bad(i);
                }
                if j >= modes || j == i {
                    return bad(j);
                }
                Ok(())
            }
            Element::PhaseShifter { i, .. } => if i >= modes { bad(i) } else { Ok(()) },
        }
    }

    /// `modes x modes` matrix of this element.
    pub fn matrix(&self, modes: usize) -> Result<ComplexMatrix<T>> {
        self.check(modes)?;
        let mut m = ComplexMatrix::identity(modes);
        match *self {
            Element::BeamSplitter { i, j, theta, phi } => {
                let e = C::from_polar(T::one(), phi);
                let (c, s) = (theta.cos(), theta.sin());
                m[(i, i)] = e * c;
                m[(i, j)] = C::new(-s, T::zero());
                m[(j, i)] = e * s;
                m[(j, j)] = C::new(c, T::zero());
            }
            Element::PhaseShifter { i, phi } => m[(i, i)] = C::from_polar(T::one(), phi),
        }
        Ok(m)
    }

    /// Applies the element to the rows of `m` in place.
    fn left_apply(&self, m: &mut ComplexMatrix<T>) {
        match *self {
            Element::BeamSplitter { i, j, theta, phi } => {
                let e = C::from_polar(T::one(), phi);
                let (c, s) = (theta.cos(), theta.sin());
                for col in 0..m.cols() {
                    let (a, b) = (m[(i, col)], m[(j, col)]);
                    m[(i, col)] = e * a * c - b * s;
                    m[(j, col)] = e * a * s + b * c;
                }
            }
            Element::PhaseShifter { i, phi } => {
                let e = C::from_polar(T::one(), phi);
                for col in 0..m.cols() {
                    m[(i, col)] *= e;
                }
            }
        }
    }
}

/// Beam splitters and phase shifters in the order light meets them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterNetwork<T: Real = f64> {
    pub modes: usize,
    pub elements: Vec<Element<T>>,
}

impl<T: Real> BeamSplitterNetwork<T> {
    pub fn new(modes: usize, elements: Vec<Element<T>>) -> Result<Self> {
        for e in &elements {
            e.check(modes)?;
        }
        Ok(Self { modes, elements })
    }

    pub fn splitter_count(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, Element::BeamSplitter { .. })).count()
    }

    pub fn phase_count(&self) -> usize {
        self.elements.len() - self.splitter_count()
    }

    /// Netlist text: `modes,<N>` then one `bs,...` or `ps,...` line per
    /// element.
    pub fn to_csv(&self) -> String {
        let mut out = format!("modes,{}\n", self.modes);
        for e in &self.elements {
            match *e {
                Element::BeamSplitter { i, j, theta, phi } => writeln!(out, "bs,{i},{j},{theta},{phi}"),
                Element::PhaseShifter { i, phi } => writeln!(out, "ps,{i},{phi}"),
            }
            .expect("writing to a string");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty netlist".into()))?;
        let modes = match header.split(',').collect::<Vec<_>>()[..] {
            ["modes", n] => parse_index(n)?,
            _ => return Err(Error::Parse(format!("bad netlist header `{header}`"))),
        };
        let mut elements = Vec::new();
        for line in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let e = match fields[..] {
                ["bs", i, j, theta, phi] => Element::BeamSplitter {
                    i: parse_index(i)?,
                    j: parse_index(j)?,
                    theta: parse_real(theta)?,
                    phi: parse_real(phi)?,
                },
                ["ps", i, phi] => Element::PhaseShifter { i: parse_index(i)?, phi: parse_real(phi)? },
                _ => return Err(Error::Parse(format!("bad netlist line `{line}`"))),
            };
            elements.push(e);
        }
        Self::new(modes, elements)
    }
}

/// Maps `-pi` onto `pi` so every phase lies in `(-pi, pi]`.
fn canonical_phase<T: Real>(phi: T) -> T {
    if phi <= -T::PI() {
        phi + T::PI() + T::PI()
    } else {
        phi
    }
}

fn parse_index(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse(format!("`{s}` is not a mode index")))
}

fn parse_real<T: Real>(s: &str) -> Result<T> {
    let x: f64 = s.parse().map_err(|_| Error::Parse(format!("`{s}` is not a number")))?;
    if !x.is_finite() {
        return Err(Error::Parse(format!("`{s}` is not finite")));
    }
    Ok(T::lit(x))
}

/// Triangular elimination of `u` into nearest-neighbour splitters followed
/// by one layer of output phases. Columns are cleared left to right, rows
/// bottom up; mixing angles lie in `[0, pi/2]`, phases in `(-pi, pi]`.
pub fn reck_decompose<T: Real>(u: &ComplexMatrix<T>, tol: T) -> Result<BeamSplitterNetwork<T>> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch { expected: u.rows(), found: u.cols() });
    }
    let residual = u.unitary_residual();
    if !(residual <= tol) {
        return Err(Error::NotUnitary { residual: residual.as_f64() });
    }
    let n = u.rows();
    let negligible = T::lit(NEGLIGIBLE);
    let mut w = u.adjoint();
    let mut elements = Vec::new();
    for col in 0..n.saturating_sub(1) {
        for row in (col + 1..n).rev() {
            let (lower, upper) = (w[(row, col)], w[(row - 1, col)]);
            if lower.norm() < negligible {
                continue;
            }
            let (theta, phi) = if upper.norm() < negligible {
                (T::FRAC_PI_2(), T::zero())
            } else {
                ((lower.norm() / upper.norm()).atan(), canonical_phase((-lower / upper).arg()))
            };
            let e = Element::BeamSplitter { i: row - 1, j: row, theta, phi };
            e.left_apply(&mut w);
            w[(row, col)] = C::new(T::zero(), T::zero());
            elements.push(e);
        }
    }
    for k in 0..n {
        let phi = canonical_phase(w[(k, k)].conj().arg());
        if phi.abs() > T::zero() {
            elements.push(Element::PhaseShifter { i: k, phi });
        }
    }
    Ok(BeamSplitterNetwork { modes: n, elements })
}

/// Product of the element matrices, last element leftmost.
pub fn reck_reconstruct<T: Real>(net: &BeamSplitterNetwork<T>) -> Result<ComplexMatrix<T>> {
    let mut m = ComplexMatrix::identity(net.modes);
    for e in &net.elements {
        e.check(net.modes)?;
        e.left_apply(&mut m);
    }
    Ok(m)
}
