use super::{UseCase, Validator};
use crate::content::{Alphabet, Pattern, Rule, Ruleset, Symbol};
use crate::topology::{OrderSpec, PartitionSpec, Topology};

pub const WHITE: usize = 0;
pub const BLACK: usize = 1;

/// Black wherever every neighbour is white and vice versa; boustrophedon
/// order, one partition per row.
pub fn checkerboard_usecase(width: usize, height: usize) -> UseCase {
    let all = |v| Pattern::new((0..4).map(|d| (d, v)).collect()).expect("distinct directions");
    UseCase {
        name: "checkerboard".into(),
        topology: Topology::Grid2d { width, height },
        alphabet: Alphabet::new(vec![
            Symbol::new("white", '.', [255, 255, 255]),
            Symbol::new("black", '#', [0, 0, 0]),
        ])
        .expect("two distinct symbols"),
        ruleset: Ruleset::new(vec![
            Rule::new(BLACK, 1.0, all(WHITE)),
            Rule::new(WHITE, 1.0, all(BLACK)),
        ])
        .expect("nonempty"),
        order: OrderSpec::Snake,
        partition: PartitionSpec::Rows(height),
        validator: Validator::Checkerboard,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validator_accepts_alternation_only() {
        let uc = checkerboard_usecase(3, 3);
        assert!(uc.validate(&[0, 1, 0, 1, 0, 1, 0, 1, 0]).is_empty());
        assert_eq!(uc.validate(&[0, 0, 0, 1, 0, 1, 0, 1, 0]).len(), 3);
        assert_eq!(uc.order().unwrap(), vec![0, 1, 2, 5, 4, 3, 6, 7, 8]);
        assert_eq!(uc.partitioning().unwrap().parts(), &[vec![0, 1, 2], vec![5, 4, 3], vec![6, 7, 8]]);
    }
}
