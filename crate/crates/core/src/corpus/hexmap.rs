use super::{full_neighbourhood_rules, UseCase, Validator};
use crate::content::{Alphabet, Ruleset, Symbol};
use crate::topology::{OrderSpec, PartitionSpec, Topology};

pub const DEFAULT_BLUE_WEIGHT: f64 = 5.0;

/// Terrains along the chain blue, yellow, green, gray.
pub fn hexmap_alphabet() -> Alphabet {
    Alphabet::new(vec![
        Symbol::new("blue", '~', [40, 90, 200]),
        Symbol::new("yellow", ':', [230, 200, 80]),
        Symbol::new("green", '"', [60, 160, 60]),
        Symbol::new("gray", '^', [130, 130, 130]),
    ])
    .expect("distinct names")
}

/// Full 6-neighbourhood rules in which each neighbour equals the centre or
/// is next to it in the chain. Blue rules weigh `u_blue`.
pub fn generate_hexmap_ruleset(u_blue: f64) -> Ruleset {
    let rules = full_neighbourhood_rules(
        4,
        6,
        |center, _| (center.saturating_sub(1)..=(center + 1).min(3)).collect(),
        |center| if center == 0 { u_blue } else { 1.0 },
    );
    Ruleset::new(rules).expect("nonempty")
}

/// Raster order, one partition per row.
pub fn hexmap_usecase(radius: usize, u_blue: f64) -> UseCase {
    UseCase {
        name: "hexmap".into(),
        topology: Topology::Hex { radius },
        alphabet: hexmap_alphabet(),
        ruleset: generate_hexmap_ruleset(u_blue),
        order: OrderSpec::Raster,
        partition: PartitionSpec::Rows(2 * radius + 1),
        validator: Validator::Hexmap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blue_never_meets_green() {
        let rules = generate_hexmap_ruleset(DEFAULT_BLUE_WEIGHT);
        for r in rules.rules() {
            for &(_, v) in r.pattern.pairs() {
                assert!(r.value.abs_diff(v) <= 1);
            }
        }
    }

    #[test]
    fn blue_rules_carry_the_blue_weight() {
        use crate::content::Weight;
        let rules = generate_hexmap_ruleset(2.5);
        for r in rules.rules() {
            let want = if r.value == 0 { 2.5 } else { 1.0 };
            assert_eq!(r.weight, Weight::Constant(want));
        }
    }
}
