//! Text and image renderings of complete instances.

use std::fmt::Write;

use qwfc_core::content::{canonical_integer, Alphabet};
use qwfc_core::topology::{hex_cells, Topology};

use crate::config::Format;

pub fn render(
    values: &[usize],
    topology: &Topology,
    alphabet: &Alphabet,
    format: Format,
    tile: usize,
) -> Vec<u8> {
    match format {
        Format::Ascii => ascii(values, topology, alphabet).into_bytes(),
        Format::VoxelSlices => voxel_slices(values, topology, alphabet).into_bytes(),
        Format::Ppm => ppm(values, topology, alphabet, tile).into_bytes(),
        Format::Dump => dump(values, alphabet).into_bytes(),
    }
}

fn glyph(alphabet: &Alphabet, v: usize) -> char {
    alphabet.symbol(v).glyph
}

/// Grids row by row from the top, hex discs with offset rows, side-on column
/// topologies top row first; other shapes as a single line in id order.
pub fn ascii(values: &[usize], topology: &Topology, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    match *topology {
        Topology::Grid2d { width, .. } => {
            for row in values.chunks(width) {
                out.extend(row.iter().map(|&v| glyph(alphabet, v)));
                out.push('\n');
            }
        }
        Topology::Hex { radius } => {
            let cells = hex_cells(radius);
            let mut i = 0;
            while i < cells.len() {
                let r = cells[i].1;
                out.push_str(&" ".repeat(r.unsigned_abs() as usize));
                let mut first = true;
                while i < cells.len() && cells[i].1 == r {
                    if !first {
                        out.push(' ');
                    }
                    out.push(glyph(alphabet, values[i]));
                    first = false;
                    i += 1;
                }
                out.push('\n');
            }
        }
        Topology::Columns {
            width,
            depth: 1,
            height,
        } => {
            for z in (0..height).rev() {
                out.extend(values[z * width..(z + 1) * width].iter().map(|&v| glyph(alphabet, v)));
                out.push('\n');
            }
        }
        Topology::Columns { .. } => return voxel_slices(values, topology, alphabet),
        Topology::Custom { .. } => {
            out.extend(values.iter().map(|&v| glyph(alphabet, v)));
            out.push('\n');
        }
    }
    out
}

/// One block per layer, ground layer first; each block lists rows `y` of `x`.
pub fn voxel_slices(values: &[usize], topology: &Topology, alphabet: &Alphabet) -> String {
    let (width, depth, height) = match *topology {
        Topology::Columns {
            width,
            depth,
            height,
        } => (width, depth, height),
        _ => return ascii(values, topology, alphabet),
    };
    let mut out = String::new();
    for z in 0..height {
        let _ = writeln!(out, "layer {z}");
        for y in 0..depth {
            let start = z * width * depth + y * width;
            out.extend(values[start..start + width].iter().map(|&v| glyph(alphabet, v)));
            out.push('\n');
        }
    }
    out
}

/// Canonical integer followed by the per-segment values.
pub fn dump(values: &[usize], alphabet: &Alphabet) -> String {
    let n = canonical_integer(values, alphabet.bits_per_segment());
    let list: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("integer: {n}\nvalues: {}\n", list.join(" "))
}

struct Canvas {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl Canvas {
    fn new(width: usize, height: usize, background: [u8; 3]) -> Self {
        Self {
            width,
            height,
            pixels: vec![background; width * height],
        }
    }

    fn fill(&mut self, x0: usize, y0: usize, size: usize, color: [u8; 3]) {
        for y in y0..(y0 + size).min(self.height) {
            for x in x0..(x0 + size).min(self.width) {
                self.pixels[y * self.width + x] = color;
            }
        }
    }

    fn to_p3(&self) -> String {
        let mut out = format!("P3\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width.max(1)) {
            let line: Vec<String> = row
                .iter()
                .map(|p| format!("{} {} {}", p[0], p[1], p[2]))
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Plain PPM (P3); each segment is a `tile` x `tile` block of its colour.
///
/// Hex rows are shifted by half a tile per row; voxel layers are laid out left
/// to right, ground layer first, one tile apart.
pub fn ppm(values: &[usize], topology: &Topology, alphabet: &Alphabet, tile: usize) -> String {
    let color = |v: usize| alphabet.symbol(v).color;
    let s = tile;
    let canvas = match *topology {
        Topology::Grid2d { width, height } => {
            let mut c = Canvas::new(width * s, height * s, [0, 0, 0]);
            for (i, &v) in values.iter().enumerate() {
                c.fill((i % width) * s, (i / width) * s, s, color(v));
            }
            c
        }
        Topology::Hex { radius } => {
            let side = 2 * radius + 1;
            let mut c = Canvas::new(side * s, side * s, [255, 255, 255]);
            let r0 = radius as i32;
            for (i, &(q, r)) in hex_cells(radius).iter().enumerate() {
                // twice the column so half-tile offsets stay integral
                let x2 = (2 * (q + r0) + r) as usize;
                c.fill(x2 * s / 2, (r + r0) as usize * s, s, color(values[i]));
            }
            c
        }
        Topology::Columns {
            width,
            depth: 1,
            height,
        } => {
            let mut c = Canvas::new(width * s, height * s, [0, 0, 0]);
            for (i, &v) in values.iter().enumerate() {
                c.fill((i % width) * s, (height - 1 - i / width) * s, s, color(v));
            }
            c
        }
        Topology::Columns {
            width,
            depth,
            height,
        } => {
            let stride = width + 1;
            let mut c = Canvas::new((stride * height - 1) * s, depth * s, [128, 128, 128]);
            for (i, &v) in values.iter().enumerate() {
                let (z, rest) = (i / (width * depth), i % (width * depth));
                c.fill((z * stride + rest % width) * s, (rest / width) * s, s, color(v));
            }
            c
        }
        Topology::Custom { .. } => {
            let mut c = Canvas::new(values.len() * s, s, [0, 0, 0]);
            for (i, &v) in values.iter().enumerate() {
                c.fill(i * s, 0, s, color(v));
            }
            c
        }
    };
    canvas.to_p3()
}
