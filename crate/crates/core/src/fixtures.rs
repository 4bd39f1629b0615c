//! Bundled case-study data: the aircraft fuel distribution system tree and
//! the published comparison table.

use crate::error::Result;
use crate::report::{read_reference, ReferenceRow};
use crate::tree::{parse_tree, FaultTree};

/// Tree document for the aircraft fuel distribution system.
pub const AFDS: &str = include_str!("../fixtures/afds.ft");

/// Published comparison table: `t,petri_net,bayesian_network,proposed`.
pub const AFDS_REFERENCE: &str = include_str!("../fixtures/afds_reference.csv");

pub fn afds() -> Result<FaultTree> {
    let mut tree = parse_tree(AFDS)?;
    tree.source = Some("fixtures/afds.ft".into());
    Ok(tree)
}

pub fn afds_reference() -> Result<Vec<ReferenceRow>> {
    read_reference(AFDS_REFERENCE)
}
