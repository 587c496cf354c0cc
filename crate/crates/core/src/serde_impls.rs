//! JSON-friendly encodings: complex numbers as `[re, im]`, algebra elements
//! as row lists, operators as block matrices of elements, families as lists
//! of operators.

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::AlgebraElement;
use crate::gframe::GFrameFamily;
use crate::hmodule::{AdjointableOp, ModuleVector};
use crate::linalg::FlatMatrix;
use crate::sums::ScalarWeights;

fn rows_of(m: &FlatMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect()
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rows_of(self.entries()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for r in &rows {
            if r.len() != dim {
                return Err(D::Error::custom("algebra element must be a square matrix"));
            }
            data.extend(r.iter().map(|[re, im]| Complex64::new(*re, *im)));
        }
        let m = FlatMatrix::from_vec(dim, dim, data).map_err(D::Error::custom)?;
        AlgebraElement::new(m).map_err(D::Error::custom)
    }
}

impl Serialize for AdjointableOp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdjointableOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let blocks: Vec<Vec<AlgebraElement>> = Vec::deserialize(d)?;
        AdjointableOp::from_blocks(&blocks).map_err(D::Error::custom)
    }
}

impl Serialize for ModuleVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.components().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuleVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts: Vec<AlgebraElement> = Vec::deserialize(d)?;
        ModuleVector::new(&parts).map_err(D::Error::custom)
    }
}

impl Serialize for GFrameFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.members().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GFrameFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let members: Vec<AdjointableOp> = Vec::deserialize(d)?;
        GFrameFamily::new(members).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct WeightsRepr {
    thetas: Vec<AlgebraElement>,
    deltas: Vec<AlgebraElement>,
    a_w: f64,
    b_w: f64,
}

impl Serialize for ScalarWeights {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightsRepr { thetas: self.thetas.clone(), deltas: self.deltas.clone(), a_w: self.a_w, b_w: self.b_w }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarWeights {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = WeightsRepr::deserialize(d)?;
        ScalarWeights::new(r.thetas, r.deltas, r.a_w, r.b_w).map_err(D::Error::custom)
    }
}
