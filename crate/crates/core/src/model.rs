//! Interpretations of the free symbols, and the model family that separates
//! the two sides of the running interpolation problem.

use alloc::{
    collections::BTreeMap,
    string::{String, ToString},
    vec::Vec,
};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::array::FinArray;

/// Assignment of integer constants and array constants. `diff` is not
/// assignable; it is always interpreted by [`FinArray::diff`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    ints: BTreeMap<String, BigInt>,
    arrays: BTreeMap<String, FinArray>,
}

impl Model {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_int(mut self, name: &str, v: impl Into<BigInt>) -> Self {
        self.set_int(name, v);
        self
    }

    pub fn with_array(mut self, name: &str, a: FinArray) -> Self {
        self.set_array(name, a);
        self
    }

    pub fn set_int(&mut self, name: &str, v: impl Into<BigInt>) {
        self.ints.insert(name.to_string(), v.into());
    }

    pub fn set_array(&mut self, name: &str, a: FinArray) {
        self.arrays.insert(name.to_string(), a);
    }

    pub fn int(&self, name: &str) -> Option<&BigInt> {
        self.ints.get(name)
    }

    pub fn array(&self, name: &str) -> Option<&FinArray> {
        self.arrays.get(name)
    }

    pub fn ints(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.ints.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn arrays(&self) -> impl Iterator<Item = (&str, &FinArray)> {
        self.arrays.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// `M_i`: `k = l = i`,
///
/// ```text
/// a(j) = 0            j <= 0        b(j) = 1              j <= 0
///        ceil(j/2)    0 < j <= i           floor(j/2) + 1  0 < j <= i
///        ceil(i/2)    i < j                floor(i/2) + 1  i < j
/// ```
///
/// The arrays keep the window `[1, i]` exactly as written above (not
/// trimmed), so instantiation points and model files follow that
/// presentation. Even `i` satisfy `forall i. a[i] < b[k]`; odd `i` satisfy
/// `forall j. not (a[l] < b[j])`.
pub fn paper_model(i: u64) -> Model {
    let ceil_half = |j: u64| BigInt::from(j.div_ceil(2));
    let floor_half_plus_one = |j: u64| BigInt::from(j / 2 + 1);
    let a = FinArray::from_parts(0, 1, (1..=i).map(ceil_half).collect(), ceil_half(i));
    let b = FinArray::from_parts(1, 1, (1..=i).map(floor_half_plus_one).collect(), floor_half_plus_one(i));
    Model::new()
        .with_int("k", i)
        .with_int("l", i)
        .with_array("a", a)
        .with_array("b", b)
}

/// `M_0 ..= M_max`, built once.
#[derive(Clone, Debug)]
pub struct PaperFamily {
    models: Vec<Model>,
}

impl PaperFamily {
    pub fn new(max_i: u64) -> Self {
        PaperFamily {
            models: (0..=max_i).map(paper_model).collect(),
        }
    }

    pub fn max_index(&self) -> u64 {
        self.models.len() as u64 - 1
    }

    /// `M_i`; built on the fly past the cached range.
    pub fn get(&self, i: u64) -> ModelRef<'_> {
        match self.models.get(i as usize) {
            Some(m) => ModelRef::Cached(m),
            None => ModelRef::Fresh(paper_model(i)),
        }
    }
}

/// A cached or freshly built family member.
pub enum ModelRef<'f> {
    Cached(&'f Model),
    Fresh(Model),
}

impl core::ops::Deref for ModelRef<'_> {
    type Target = Model;

    fn deref(&self) -> &Model {
        match self {
            ModelRef::Cached(m) => m,
            ModelRef::Fresh(m) => m,
        }
    }
}

/// `true` iff `i` is even, i.e. `M_i` is a model of the A side.
pub fn is_a_side(i: u64) -> bool {
    i.is_even()
}
