//! Class-algebra structure constants.

use crate::exec::Execution;
use crate::groups::{ClassData, GroupTable};

/// `a[i][j][k] = #{(u, v) in C_i x C_j : u v = g_k}` for the fixed
/// representative `g_k` of `C_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    k: usize,
    data: Vec<u64>,
}

impl StructureConstants {
    pub fn class_count(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.data[(i * self.k + j) * self.k + k]
    }
}

pub fn structure_constants(g: &GroupTable, c: &ClassData) -> StructureConstants {
    structure_constants_with(g, c, Execution::default())
}

/// Accumulates each `(i, k)` column by walking `u in C_i` and classifying
/// `u^-1 g_k`.
pub fn structure_constants_with(
    g: &GroupTable,
    c: &ClassData,
    exec: Execution,
) -> StructureConstants {
    let k = c.count();
    let columns = exec.map(k * k, |ik| {
        let (i, kk) = (ik / k, ik % k);
        let target = c.representatives[kk];
        let mut col = vec![0u64; k];
        for &u in &c.members[i] {
            let v = g.mul_idx(g.inv_idx(u), target);
            col[c.class_of(v)] += 1;
        }
        col
    });
    let mut data = vec![0u64; k * k * k];
    for (ik, col) in columns.into_iter().enumerate() {
        let (i, kk) = (ik / k, ik % k);
        for (j, v) in col.into_iter().enumerate() {
            data[(i * k + j) * k + kk] = v;
        }
    }
    StructureConstants { k, data }
}
