use super::{UseCase, Validator};
use crate::content::{Alphabet, FactorKind, FunctionalFactor, Pattern, Rule, Ruleset, Symbol};
use crate::error::Result;
use crate::topology::{OrderSpec, PartitionSpec, Topology};

pub const GROUND: usize = 0;
pub const GRASS: usize = 1;
pub const MUSHROOM: usize = 2;
pub const BLOCK: usize = 3;
pub const AIR: usize = 4;
pub const TREE_BOTTOM: usize = 5;
pub const TREE_MID: usize = 6;
pub const TREE_TOP: usize = 7;

const ABOVE: usize = 0;
const BELOW: usize = 1;

pub fn platformer_alphabet() -> Alphabet {
    Alphabet::new(vec![
        Symbol::new("ground", '=', [120, 72, 30]),
        Symbol::new("grass", ',', [90, 190, 60]),
        Symbol::new("mushroom", 'm', [210, 40, 40]),
        Symbol::new("block", '#', [200, 150, 40]),
        Symbol::new("air", '.', [170, 210, 250]),
        Symbol::new("tree-bottom", 'I', [100, 60, 20]),
        Symbol::new("tree-mid", '|', [110, 70, 25]),
        Symbol::new("tree-top", 'Y', [30, 120, 30]),
    ])
    .expect("distinct names")
}

/// `(below, above)` pairs that may be stacked.
const STACKING: [(usize, usize); 12] = [
    (GROUND, GROUND),
    (GROUND, GRASS),
    (GROUND, MUSHROOM),
    (GRASS, TREE_BOTTOM),
    (GRASS, AIR),
    (MUSHROOM, AIR),
    (AIR, AIR),
    (AIR, BLOCK),
    (BLOCK, AIR),
    (TREE_BOTTOM, TREE_MID),
    (TREE_MID, TREE_TOP),
    (TREE_TOP, AIR),
];

/// Fifteen rules over the above/below directions.
///
/// Ground is the only tile with a constant weight; every other rule carries a
/// band factor that vanishes on the bottom row, so the bottom row is ground.
/// Blocks, tree bottoms and tree middles also vanish near the top, where the
/// tile they require above could not fit.
pub fn platformer_ruleset(topology: &Topology) -> Result<Ruleset> {
    let (layers, height) = topology.layers()?;
    let band = |u, top| FunctionalFactor::new(FactorKind::Band { bottom: 1, top }, u, &layers, height);
    let p = |pairs: Vec<(usize, usize)>| Pattern::new(pairs).expect("distinct directions");
    let mut rules = Vec::with_capacity(15);
    for above in [GROUND, GRASS, MUSHROOM] {
        rules.push(Rule::new(GROUND, 1.0, p(vec![(ABOVE, above), (BELOW, GROUND)])));
    }
    for above in [TREE_BOTTOM, AIR] {
        rules.push(Rule::functional(GRASS, band(1.0, 0)?, p(vec![(ABOVE, above), (BELOW, GROUND)])));
    }
    rules.push(Rule::functional(MUSHROOM, band(1.0, 0)?, p(vec![(ABOVE, AIR), (BELOW, GROUND)])));
    rules.push(Rule::functional(BLOCK, band(0.1, 1)?, p(vec![(ABOVE, AIR), (BELOW, AIR)])));
    rules.push(Rule::functional(TREE_BOTTOM, band(1.0, 2)?, p(vec![(ABOVE, TREE_MID), (BELOW, GRASS)])));
    rules.push(Rule::functional(TREE_MID, band(1.0, 1)?, p(vec![(ABOVE, TREE_TOP), (BELOW, TREE_BOTTOM)])));
    rules.push(Rule::functional(TREE_TOP, band(1.0, 0)?, p(vec![(ABOVE, AIR), (BELOW, TREE_MID)])));
    for below in [GRASS, MUSHROOM, AIR, BLOCK, TREE_TOP] {
        rules.push(Rule::functional(AIR, band(1.0, 0)?, p(vec![(BELOW, below)])));
    }
    Ruleset::new(rules)
}

/// Side-on level built bottom row first; two partitions per row.
pub fn platformer_usecase(width: usize, height: usize) -> UseCase {
    let topology = Topology::Columns {
        width,
        depth: 1,
        height,
    };
    UseCase {
        name: "platformer".into(),
        ruleset: platformer_ruleset(&topology).expect("column topologies have layers"),
        topology,
        alphabet: platformer_alphabet(),
        order: OrderSpec::Raster,
        partition: PartitionSpec::Layers(2 * height),
        validator: Validator::Platformer,
    }
}

pub(super) fn violations(topology: &Topology, values: &[usize]) -> Vec<String> {
    let Topology::Columns {
        width,
        depth: 1,
        height,
    } = *topology
    else {
        return vec![format!("platformer levels need a one-deep column topology, got {}", topology.kind_name())];
    };
    let at = |x: usize, z: usize| values[z * width + x];
    let mut out = Vec::new();
    for x in 0..width {
        if at(x, 0) != GROUND {
            out.push(format!("column {x}: bottom tile is not ground"));
        }
        for z in 1..height {
            let (below, above) = (at(x, z - 1), at(x, z));
            if !STACKING.contains(&(below, above)) {
                out.push(format!("column {x}, row {z}: value {above} may not sit on value {below}"));
            }
        }
        let top = height - 1;
        if matches!(at(x, top), BLOCK | TREE_BOTTOM | TREE_MID) {
            out.push(format!("column {x}: unfinished block or tree in the top row"));
        }
        if height >= 2 && at(x, top - 1) == TREE_BOTTOM {
            out.push(format!("column {x}: tree too tall for the level"));
        }
    }
    out
}
