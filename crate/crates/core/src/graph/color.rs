use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use super::params::BrParams;
use super::Vertex;

/// Vertex color. Red layers are numbered `1..=L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Blue,
    Red(usize),
}

impl Color {
    pub fn is_blue(self) -> bool {
        matches!(self, Color::Blue)
    }

    pub fn layer(self) -> Option<usize> {
        match self {
            Color::Blue => None,
            Color::Red(i) => Some(i),
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::Blue => f.write_str("b"),
            Color::Red(i) => write!(f, "r{i}"),
        }
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "b" {
            return Ok(Color::Blue);
        }
        s.strip_prefix('r')
            .and_then(|rest| rest.parse::<usize>().ok())
            .filter(|&i| i >= 1)
            .map(Color::Red)
            .ok_or_else(|| format!("bad color token `{s}`"))
    }
}

/// Colors revealed for a subset of vertices.
pub type PartialColoring = BTreeMap<Vertex, Color>;

/// A total coloring of `0..V` together with the class membership lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<Color>,
    blue: Vec<Vertex>,
    layers: Vec<Vec<Vertex>>,
}

impl Coloring {
    /// Builds a coloring from raw colors; `layers` is the number of red layers.
    /// Class sizes are not checked here (see `validate_br`).
    pub fn from_colors(colors: Vec<Color>, layers: usize) -> Result<Self, String> {
        let mut blue = Vec::new();
        let mut by_layer = vec![Vec::new(); layers];
        for (v, c) in colors.iter().enumerate() {
            match *c {
                Color::Blue => blue.push(v),
                Color::Red(i) if (1..=layers).contains(&i) => by_layer[i - 1].push(v),
                Color::Red(i) => return Err(format!("vertex {v} has layer {i} outside 1..={layers}")),
            }
        }
        Ok(Self {
            colors,
            blue,
            layers: by_layer,
        })
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn blue(&self) -> &[Vertex] {
        &self.blue
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    /// Members of red layer `i` (1-based), in increasing vertex order.
    pub fn layer(&self, i: usize) -> &[Vertex] {
        &self.layers[i - 1]
    }

    pub fn restrict<I: IntoIterator<Item = Vertex>>(&self, vertices: I) -> PartialColoring {
        vertices.into_iter().map(|v| (v, self.colors[v])).collect()
    }
}

/// Draws a coloring uniformly among those with exactly `N` blue vertices and
/// `W` vertices in every red layer. Consumes one shuffle of `3N` elements.
pub fn gen_coloring<R: Rng + ?Sized>(params: &BrParams, rng: &mut R) -> Coloring {
    let mut colors = Vec::with_capacity(params.vertex_count());
    colors.extend(std::iter::repeat_n(Color::Blue, params.n_blue()));
    for i in 1..=params.layers() {
        colors.extend(std::iter::repeat_n(Color::Red(i), params.width()));
    }
    colors.shuffle(rng);
    Coloring::from_colors(colors, params.layers()).expect("layers in range by construction")
}
