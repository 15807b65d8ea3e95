use std::ops::Deref;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An ordered, labelled list of points. Positions are the identity of the
/// elements, so duplicates may be stored; operations that need distinct
/// points check for them.
#[derive(Debug, Clone, PartialEq)]
pub struct VarSet<S> {
    label: String,
    elems: Vec<S>,
}

impl<S: Scalar> VarSet<S> {
    pub fn new(label: impl Into<String>, elems: Vec<S>) -> Self {
        VarSet {
            label: label.into(),
            elems,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn as_slice(&self) -> &[S] {
        &self.elems
    }

    pub fn into_vec(self) -> Vec<S> {
        self.elems
    }

    pub fn select(&self, idx: &[usize]) -> Vec<S> {
        select(&self.elems, idx)
    }

    pub fn check_distinct(&self) -> Result<()> {
        check_distinct(&self.elems, &self.label)
    }
}

impl<S> Deref for VarSet<S> {
    type Target = [S];
    fn deref(&self) -> &[S] {
        &self.elems
    }
}

pub fn select<S: Clone>(xs: &[S], idx: &[usize]) -> Vec<S> {
    idx.iter().map(|&i| xs[i].clone()).collect()
}

pub fn concat<S: Clone>(parts: &[&[S]]) -> Vec<S> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

pub fn check_distinct<S: Scalar>(xs: &[S], label: &str) -> Result<()> {
    for j in 0..xs.len() {
        for k in 0..j {
            if xs[j].coincides(&xs[k]) {
                return Err(Error::Pole(format!(
                    "{label}: elements {k} and {j} coincide"
                )));
            }
        }
    }
    Ok(())
}
