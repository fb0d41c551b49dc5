//! Explicit finite groups, their character tables, and experiments on
//! class-product distributions and interleaved products.

pub mod characters;
pub mod error;
pub mod exec;
pub mod groups;
pub mod interleave;
pub mod mixing;
pub mod numtheory;
pub mod rng;

pub use error::{Error, Result};
pub use exec::Execution;

use characters::{dixon_char_table, structure_constants, CharacterTable, StructureConstants};
use groups::{conj_classes, group_build, ClassData, GroupSpec, GroupTable};

/// A group together with its classes, class-algebra constants and
/// character table.
#[derive(Debug)]
pub struct GroupData {
    pub group: GroupTable,
    pub classes: ClassData,
    pub constants: StructureConstants,
    pub table: CharacterTable,
}

impl GroupData {
    pub fn build(spec: &GroupSpec) -> Result<Self> {
        let group = group_build(spec)?;
        let classes = conj_classes(&group);
        let constants = structure_constants(&group, &classes);
        let table = dixon_char_table(group.label(), &classes, &constants)?;
        Ok(GroupData {
            group,
            classes,
            constants,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}
