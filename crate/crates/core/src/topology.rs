//! Geometry behind the adjacency builders: segment numbering, layers,
//! segment orders and partitionings.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::content::{build_grid2d, build_grid3d_columns, build_hexgrid, AdjacencyConfig};
use crate::error::{Error, Result};
use crate::hwfc::Partitioning;

/// Axial offsets of the six hex directions, counterclockwise from east.
pub const HEX_DIRECTIONS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// Axial `(q, r)` coordinates of a hex disc, row by row from the top (`r = -radius`).
pub fn hex_cells(radius: usize) -> Vec<(i32, i32)> {
    let n = radius as i32;
    let mut cells = Vec::with_capacity(1 + 3 * radius * (radius + 1));
    for r in -n..=n {
        for q in (-n).max(-r - n)..=n.min(-r + n) {
            cells.push((q, r));
        }
    }
    cells
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    Grid2d { width: usize, height: usize },
    Hex { radius: usize },
    Columns { width: usize, depth: usize, height: usize },
    Custom {
        adjacency: AdjacencyConfig,
        direction_names: Vec<String>,
    },
}

impl Topology {
    pub fn adjacency(&self) -> AdjacencyConfig {
        match self {
            Topology::Grid2d { width, height } => build_grid2d(*width, *height),
            Topology::Hex { radius } => build_hexgrid(*radius),
            Topology::Columns {
                width,
                depth,
                height,
            } => build_grid3d_columns(*width, *depth, *height),
            Topology::Custom { adjacency, .. } => adjacency.clone(),
        }
    }

    pub fn segment_count(&self) -> usize {
        match self {
            Topology::Grid2d { width, height } => width * height,
            Topology::Hex { radius } => 1 + 3 * radius * (radius + 1),
            Topology::Columns {
                width,
                depth,
                height,
            } => width * depth * height,
            Topology::Custom { adjacency, .. } => adjacency.segment_count(),
        }
    }

    pub fn direction_names(&self) -> Vec<String> {
        let fixed: &[&str] = match self {
            Topology::Grid2d { .. } => &["right", "up", "left", "down"],
            Topology::Hex { .. } => &["e", "ne", "nw", "w", "sw", "se"],
            Topology::Columns { .. } => &["above", "below"],
            Topology::Custom {
                direction_names, ..
            } => return direction_names.clone(),
        };
        fixed.iter().map(|s| s.to_string()).collect()
    }

    pub fn direction_index(&self, name: &str) -> Option<usize> {
        self.direction_names().iter().position(|n| n == name)
    }

    /// Layer of every segment counted from the bottom, plus the layer count.
    pub fn layers(&self) -> Result<(Vec<usize>, usize)> {
        match self {
            Topology::Grid2d { width, height } => Ok((
                (0..width * height).map(|i| height - 1 - i / width).collect(),
                *height,
            )),
            Topology::Hex { radius } => {
                let r0 = *radius as i32;
                Ok((
                    hex_cells(*radius)
                        .iter()
                        .map(|&(_, r)| (r0 - r) as usize)
                        .collect(),
                    2 * radius + 1,
                ))
            }
            Topology::Columns {
                width,
                depth,
                height,
            } => {
                let layer = width * depth;
                Ok(((0..layer * height).map(|i| i / layer).collect(), *height))
            }
            Topology::Custom { .. } => Err(Error::Invalid(
                "custom topologies have no layers for functional factors".into(),
            )),
        }
    }

    pub fn order(&self, spec: &OrderSpec) -> Result<Vec<usize>> {
        let n = self.segment_count();
        let order = match (spec, self) {
            (OrderSpec::Raster, _) => (0..n).collect(),
            (OrderSpec::Snake, Topology::Grid2d { width, height }) => (0..*height)
                .flat_map(|y| {
                    let row = (0..*width).map(move |x| y * width + x);
                    if y % 2 == 0 {
                        row.collect::<Vec<_>>()
                    } else {
                        row.rev().collect()
                    }
                })
                .collect(),
            (OrderSpec::Spiral, Topology::Hex { radius }) => hex_spiral(*radius),
            (OrderSpec::Explicit(list), _) => list.clone(),
            (spec, topology) => {
                return Err(Error::Invalid(format!(
                    "order '{spec}' is not available for {}",
                    topology.kind_name()
                )))
            }
        };
        check_permutation(&order, n)?;
        Ok(order)
    }

    /// Splits `order` into partitions; each partition keeps the relative order of `order`.
    pub fn partition(&self, spec: &PartitionSpec, order: &[usize]) -> Result<Partitioning> {
        let parts = match spec {
            PartitionSpec::Explicit(parts) => parts.clone(),
            PartitionSpec::Chunks(h) => chunk(order, *h)?,
            PartitionSpec::Rows(h) | PartitionSpec::Columns(h) | PartitionSpec::Layers(h) => {
                let key = self.line_key(spec)?;
                let mut index: HashMap<usize, usize> = HashMap::new();
                let mut lines: Vec<Vec<usize>> = Vec::new();
                for &i in order {
                    let slot = *index.entry(key(i)).or_insert_with(|| {
                        lines.push(Vec::new());
                        lines.len() - 1
                    });
                    lines[slot].push(i);
                }
                split_lines(lines, *h)?
            }
        };
        Ok(Partitioning::new(parts))
    }

    fn line_key(&self, spec: &PartitionSpec) -> Result<Box<dyn Fn(usize) -> usize>> {
        let unsupported = || {
            Err(Error::Invalid(format!(
                "partition '{spec}' is not available for {}",
                self.kind_name()
            )))
        };
        match (self, spec) {
            (Topology::Grid2d { width, .. }, PartitionSpec::Rows(_)) => {
                let w = *width;
                Ok(Box::new(move |i| i / w))
            }
            (Topology::Grid2d { width, .. }, PartitionSpec::Columns(_)) => {
                let w = *width;
                Ok(Box::new(move |i| i % w))
            }
            (Topology::Hex { radius }, PartitionSpec::Rows(_)) => {
                let rows: Vec<usize> = hex_cells(*radius)
                    .iter()
                    .map(|&(_, r)| (r + *radius as i32) as usize)
                    .collect();
                Ok(Box::new(move |i| rows[i]))
            }
            (Topology::Columns { width, depth, .. }, PartitionSpec::Layers(_)) => {
                let layer = width * depth;
                Ok(Box::new(move |i| i / layer))
            }
            (Topology::Columns { width, depth: 1, .. }, PartitionSpec::Rows(_)) => {
                let layer = *width;
                Ok(Box::new(move |i| i / layer))
            }
            (Topology::Columns { width, depth, .. }, PartitionSpec::Columns(_)) => {
                let layer = width * depth;
                Ok(Box::new(move |i| i % layer))
            }
            _ => unsupported(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Topology::Grid2d { .. } => "grid2d",
            Topology::Hex { .. } => "hexgrid",
            Topology::Columns { .. } => "columns",
            Topology::Custom { .. } => "custom",
        }
    }
}

/// Centre first, then each ring counterclockwise starting from its south-west corner.
fn hex_spiral(radius: usize) -> Vec<usize> {
    let cells = hex_cells(radius);
    let index: HashMap<(i32, i32), usize> =
        cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut order = vec![index[&(0, 0)]];
    for k in 1..=radius as i32 {
        let (dq, dr) = HEX_DIRECTIONS[4];
        let mut cell = (dq * k, dr * k);
        for (sq, sr) in HEX_DIRECTIONS {
            for _ in 0..k {
                order.push(index[&cell]);
                cell = (cell.0 + sq, cell.1 + sr);
            }
        }
    }
    order
}

pub fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = HashSet::new();
    for &i in order {
        if i >= n || !seen.insert(i) {
            return Err(Error::Invalid(format!(
                "order {order:?} is not a permutation of 0..{n}"
            )));
        }
    }
    if order.len() != n {
        return Err(Error::Invalid(format!(
            "order has {} entries, expected {n}",
            order.len()
        )));
    }
    Ok(())
}

/// Near-equal contiguous chunks, the first `len % h` one element longer.
fn chunk(seq: &[usize], h: usize) -> Result<Vec<Vec<usize>>> {
    if h == 0 || h > seq.len() {
        return Err(Error::Invalid(format!(
            "cannot split {} segments into {h} nonempty partitions",
            seq.len()
        )));
    }
    let base = seq.len() / h;
    let extra = seq.len() % h;
    let mut parts = Vec::with_capacity(h);
    let mut start = 0;
    for k in 0..h {
        let len = base + usize::from(k < extra);
        parts.push(seq[start..start + len].to_vec());
        start += len;
    }
    Ok(parts)
}

fn split_lines(lines: Vec<Vec<usize>>, h: usize) -> Result<Vec<Vec<usize>>> {
    let l = lines.len();
    if h == 0 {
        return Err(Error::Invalid("partition count must be positive".into()));
    }
    if h.is_multiple_of(l) {
        let per = h / l;
        let mut parts = Vec::with_capacity(h);
        for line in &lines {
            parts.extend(chunk(line, per)?);
        }
        Ok(parts)
    } else if l.is_multiple_of(h) {
        Ok(lines.chunks(l / h).map(|group| group.concat()).collect())
    } else {
        Err(Error::Invalid(format!(
            "{h} partitions do not divide {l} lines evenly"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSpec {
    Raster,
    /// Boustrophedon rows (grid2d).
    Snake,
    /// Centre-out rings (hexgrid).
    Spiral,
    Explicit(Vec<usize>),
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderSpec::Raster => f.write_str("raster"),
            OrderSpec::Snake => f.write_str("snake"),
            OrderSpec::Spiral => f.write_str("spiral"),
            OrderSpec::Explicit(list) => write!(f, "{list:?}"),
        }
    }
}

impl FromStr for OrderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "raster" => Ok(OrderSpec::Raster),
            "snake" => Ok(OrderSpec::Snake),
            "spiral" => Ok(OrderSpec::Spiral),
            other => Err(Error::Invalid(format!("unknown order '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionSpec {
    Rows(usize),
    Columns(usize),
    Layers(usize),
    /// Contiguous chunks of the segment order.
    Chunks(usize),
    Explicit(Vec<Vec<usize>>),
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionSpec::Rows(h) => write!(f, "rows:{h}"),
            PartitionSpec::Columns(h) => write!(f, "columns:{h}"),
            PartitionSpec::Layers(h) => write!(f, "layers:{h}"),
            PartitionSpec::Chunks(h) => write!(f, "chunks:{h}"),
            PartitionSpec::Explicit(parts) => write!(f, "{parts:?}"),
        }
    }
}

impl FromStr for PartitionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("unknown partition spec '{s}'"));
        let (kind, count) = s.trim().split_once(':').ok_or_else(bad)?;
        let h: usize = count.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "rows" => Ok(PartitionSpec::Rows(h)),
            "columns" => Ok(PartitionSpec::Columns(h)),
            "layers" => Ok(PartitionSpec::Layers(h)),
            "chunks" => Ok(PartitionSpec::Chunks(h)),
            _ => Err(bad()),
        }
    }
}
