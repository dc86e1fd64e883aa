use super::{full_neighbourhood_rules, UseCase, Validator};
use crate::content::{AdjacencyConfig, Alphabet, Ruleset, Symbol};
use crate::topology::{OrderSpec, PartitionSpec, Topology};

const RIGHT: u8 = 1;
const UP: u8 = 2;
const LEFT: u8 = 4;
const DOWN: u8 = 8;

/// Port masks indexed by value; bit `d` is the port facing grid direction `d`.
pub const PIPE_PORTS: [u8; 8] = [
    0,
    LEFT | RIGHT,
    UP | DOWN,
    RIGHT | DOWN,
    LEFT | DOWN,
    RIGHT | UP,
    LEFT | UP,
    LEFT | RIGHT | UP | DOWN,
];

fn has_port(tile: usize, direction: usize) -> bool {
    PIPE_PORTS[tile] & (1 << direction) != 0
}

fn opposite(direction: usize) -> usize {
    (direction + 2) % 4
}

pub fn pipes_alphabet() -> Alphabet {
    let names = ["blank", "horizontal", "vertical", "down-right", "down-left", "up-right", "up-left", "cross"];
    let glyphs = [' ', '─', '│', '┌', '┐', '└', '┘', '┼'];
    let symbols = (0..8)
        .map(|v| {
            let shade = if v == 0 { 250 } else { 40 };
            Symbol::new(names[v], glyphs[v], [shade, shade, if v == 0 { 250 } else { 120 }])
        })
        .collect();
    Alphabet::new(symbols).expect("distinct names")
}

/// Full 4-neighbourhood rules whose facing ports all agree with the centre.
pub fn generate_pipes_ruleset() -> Ruleset {
    let rules = full_neighbourhood_rules(
        8,
        4,
        |center, d| {
            (0..8)
                .filter(|&t| has_port(t, opposite(d)) == has_port(center, d))
                .collect()
        },
        |_| 1.0,
    );
    Ruleset::new(rules).expect("nonempty")
}

/// Raster order, one partition per column.
pub fn pipes_usecase(width: usize, height: usize) -> UseCase {
    UseCase {
        name: "pipes".into(),
        topology: Topology::Grid2d { width, height },
        alphabet: pipes_alphabet(),
        ruleset: generate_pipes_ruleset(),
        order: OrderSpec::Raster,
        partition: PartitionSpec::Columns(width),
        validator: Validator::Pipes,
    }
}

pub(super) fn violations(adjacency: &AdjacencyConfig, values: &[usize]) -> Vec<String> {
    let mut out = Vec::new();
    for d in [0, 3] {
        for (i, j) in adjacency.edges(d) {
            if values[i] >= 8 || values[j] >= 8 {
                out.push(format!("segments {i} and {j}: not a pipe tile"));
            } else if has_port(values[i], d) != has_port(values[j], opposite(d)) {
                out.push(format!("segments {i} and {j}: ports do not meet"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blank_centres_have_portless_neighbourhoods() {
        let rules = generate_pipes_ruleset();
        let blank: Vec<_> = rules.rules().iter().filter(|r| r.value == 0).collect();
        assert_eq!(blank.len(), 256);
        for r in blank {
            for &(d, v) in r.pattern.pairs() {
                assert!(!has_port(v, opposite(d)));
            }
        }
    }

    #[test]
    fn each_side_admits_four_tiles() {
        for d in 0..4 {
            assert_eq!((0..8).filter(|&t| has_port(t, d)).count(), 4);
        }
    }

    #[test]
    fn validator_checks_facing_ports() {
        let uc = pipes_usecase(2, 1);
        // horizontal next to horizontal connects
        assert!(uc.validate(&[1, 1]).is_empty());
        // horizontal next to vertical leaves a dangling port
        assert_eq!(uc.validate(&[1, 2]).len(), 1);
    }
}
