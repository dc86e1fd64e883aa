use super::{UseCase, Validator};
use crate::content::{AdjacencyConfig, Alphabet, FactorKind, FunctionalFactor, Pattern, Rule, Ruleset, Symbol};
use crate::error::Result;
use crate::topology::{OrderSpec, PartitionSpec, Topology};

pub const ABSENT: usize = 0;
pub const PRESENT: usize = 1;
const BELOW: usize = 1;

pub fn voxel_alphabet() -> Alphabet {
    Alphabet::new(vec![
        Symbol::new("absent", '.', [255, 255, 255]),
        Symbol::new("present", '#', [90, 90, 110]),
    ])
    .expect("distinct names")
}

/// Present on present, absent on anything, and present on the ground layer.
pub fn voxel_ruleset(topology: &Topology) -> Result<Ruleset> {
    let (layers, height) = topology.layers()?;
    let below = |v| Pattern::new(vec![(BELOW, v)]).expect("one direction");
    Ruleset::new(vec![
        Rule::new(PRESENT, 1.0, below(PRESENT)),
        Rule::new(ABSENT, 1.0, below(PRESENT)),
        Rule::new(ABSENT, 1.0, below(ABSENT)),
        Rule::functional(
            PRESENT,
            FunctionalFactor::new(FactorKind::BottomRowsOnly { rows: 1 }, 1.0, &layers, height)?,
            Pattern::empty(),
        ),
    ])
}

/// Layer-by-layer from the ground up, one partition per vertical column.
pub fn voxel_skyline_usecase(width: usize, depth: usize, height: usize) -> UseCase {
    let topology = Topology::Columns {
        width,
        depth,
        height,
    };
    UseCase {
        name: "voxel".into(),
        ruleset: voxel_ruleset(&topology).expect("column topologies have layers"),
        topology,
        alphabet: voxel_alphabet(),
        order: OrderSpec::Raster,
        partition: PartitionSpec::Columns(width * depth),
        validator: Validator::Voxel,
    }
}

pub(super) fn violations(adjacency: &AdjacencyConfig, values: &[usize]) -> Vec<String> {
    adjacency
        .edges(BELOW)
        .filter(|&(i, j)| values[i] == PRESENT && values[j] != PRESENT)
        .map(|(i, j)| format!("segment {i} floats above empty segment {j}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floating_voxels_are_caught() {
        let uc = voxel_skyline_usecase(1, 1, 3);
        assert!(uc.validate(&[1, 1, 0]).is_empty());
        assert!(uc.validate(&[0, 0, 0]).is_empty());
        assert_eq!(uc.validate(&[0, 1, 1]).len(), 1);
        assert_eq!(uc.ruleset.len(), 4);
    }
}
