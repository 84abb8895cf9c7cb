use std::ops::Range;

use crate::fsm::ClassId;

use super::{HmmError, Inventory};

/// A class sequence cut at its unambiguous classes.
///
/// `initial` is `c_a* c_u`; each middle is `c_u c_a* c_u` and shares its
/// first class with the end of the previous piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarrierSplit {
    pub initial: Vec<ClassId>,
    pub middles: Vec<Vec<ClassId>>,
}

impl BarrierSplit {
    /// Positions of the original sequence each piece decides: the whole
    /// initial, then each middle without its shared first class.
    pub fn ranges(&self) -> Vec<Range<usize>> {
        let mut out = vec![0..self.initial.len()];
        let mut at = self.initial.len();
        for m in &self.middles {
            out.push(at..at + m.len() - 1);
            at += m.len() - 1;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.initial.len() + self.middles.iter().map(|m| m.len() - 1).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.initial.is_empty()
    }
}

pub fn split_at_barriers(inv: &Inventory, classes: &[ClassId]) -> Result<BarrierSplit, HmmError> {
    match classes.last() {
        Some(&c) if inv.is_unambiguous(c) => {}
        _ => return Err(HmmError::NoTerminalBarrier),
    }
    let mut barriers = classes
        .iter()
        .enumerate()
        .filter(|(_, &c)| inv.is_unambiguous(c))
        .map(|(i, _)| i);
    let first = barriers.next().expect("last class is a barrier");
    let initial = classes[..=first].to_vec();
    let mut middles = Vec::new();
    let mut start = first;
    for b in barriers {
        middles.push(classes[start..=b].to_vec());
        start = b;
    }
    Ok(BarrierSplit { initial, middles })
}
