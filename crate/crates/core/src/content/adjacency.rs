use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::topology::{hex_cells, HEX_DIRECTIONS};

/// `D` directed graphs over `N` segments.
///
/// `neighbors(d, i)` lists every `j` with an edge `i -> j` in direction `d`,
/// i.e. the segments a pattern entry `(d, v)` on segment `i` looks at.
/// Segments and directions are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyConfig {
    segments: usize,
    neighbors: Vec<Vec<Vec<usize>>>,
}

impl AdjacencyConfig {
    /// An adjacency without any edges.
    pub fn empty(segments: usize, directions: usize) -> Self {
        Self {
            segments,
            neighbors: vec![vec![Vec::new(); segments]; directions],
        }
    }

    /// Builds an adjacency from one edge list per direction. Duplicate edges collapse.
    pub fn from_edges(segments: usize, edges: &[Vec<(usize, usize)>]) -> Result<Self> {
        let mut adjacency = Self::empty(segments, edges.len());
        for (d, list) in edges.iter().enumerate() {
            for &(i, j) in list {
                if i >= segments || j >= segments {
                    return Err(Error::Invalid(format!(
                        "edge ({i}, {j}) in direction {d} references a segment outside 0..{segments}"
                    )));
                }
                adjacency.insert(d, i, j);
            }
        }
        Ok(adjacency)
    }

    fn insert(&mut self, d: usize, i: usize, j: usize) {
        let list = &mut self.neighbors[d][i];
        if let Err(pos) = list.binary_search(&j) {
            list.insert(pos, j);
        }
    }

    pub fn segment_count(&self) -> usize {
        self.segments
    }

    pub fn direction_count(&self) -> usize {
        self.neighbors.len()
    }

    pub fn neighbors(&self, direction: usize, segment: usize) -> &[usize] {
        &self.neighbors[direction][segment]
    }

    pub fn is_adjacent(&self, direction: usize, from: usize, to: usize) -> bool {
        self.neighbors[direction][from].binary_search(&to).is_ok()
    }

    /// All edges of one direction in ascending `(from, to)` order.
    pub fn edges(&self, direction: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.neighbors[direction]
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.direction_count()).map(|d| self.edges(d).count()).sum()
    }
}

/// Nearest-neighbour grid, row-major ids with row 0 on top.
///
/// Directions: 0 right, 1 up, 2 left, 3 down. No wraparound.
pub fn build_grid2d(width: usize, height: usize) -> AdjacencyConfig {
    let mut adjacency = AdjacencyConfig::empty(width * height, 4);
    let id = |x: usize, y: usize| y * width + x;
    for y in 0..height {
        for x in 0..width {
            let i = id(x, y);
            if x + 1 < width {
                adjacency.insert(0, i, id(x + 1, y));
            }
            if y > 0 {
                adjacency.insert(1, i, id(x, y - 1));
            }
            if x > 0 {
                adjacency.insert(2, i, id(x - 1, y));
            }
            if y + 1 < height {
                adjacency.insert(3, i, id(x, y + 1));
            }
        }
    }
    adjacency
}

/// Hexagonal disc in pointy-top axial coordinates.
///
/// Cells are numbered row by row from the top; directions run counterclockwise
/// from east (E, NE, NW, W, SW, SE).
pub fn build_hexgrid(radius: usize) -> AdjacencyConfig {
    let cells = hex_cells(radius);
    let index: HashMap<(i32, i32), usize> =
        cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut adjacency = AdjacencyConfig::empty(cells.len(), 6);
    for (i, &(q, r)) in cells.iter().enumerate() {
        for (d, (dq, dr)) in HEX_DIRECTIONS.iter().enumerate() {
            if let Some(&j) = index.get(&(q + dq, r + dr)) {
                adjacency.insert(d, i, j);
            }
        }
    }
    adjacency
}

/// Voxel columns: only vertical edges, direction 0 above and 1 below.
///
/// Ids run layer by layer from the ground up: `z * width * depth + y * width + x`.
pub fn build_grid3d_columns(width: usize, depth: usize, height: usize) -> AdjacencyConfig {
    let layer = width * depth;
    let mut adjacency = AdjacencyConfig::empty(layer * height, 2);
    for z in 0..height {
        for cell in 0..layer {
            let i = z * layer + cell;
            if z + 1 < height {
                adjacency.insert(0, i, i + layer);
            }
            if z > 0 {
                adjacency.insert(1, i, i - layer);
            }
        }
    }
    adjacency
}
