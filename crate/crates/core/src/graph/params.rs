use thiserror::Error;

/// Outdegree used when a caller asks for default parameters.
pub const DEFAULT_OUTDEG: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("need at least 4 blue vertices, got {0}")]
    TooFewBlue(usize),
    #[error("layers * width must equal 2 * n_blue ({layers} * {width} != 2 * {n_blue})")]
    BadLayering {
        n_blue: usize,
        layers: usize,
        width: usize,
    },
    #[error("number of layers must be even and at least 2, got {0}")]
    OddLayers(usize),
    #[error("outdegree {outdeg} infeasible: need 2 <= d <= width ({width}) and d <= 2N - 1 ({pool})")]
    BadOutdeg {
        outdeg: usize,
        width: usize,
        pool: usize,
    },
    #[error("no even divisor of 2N = {two_n} within a factor 4 of (2N)^(2/9) = {target:.3}")]
    NoValidLayering { two_n: usize, target: f64 },
}

/// Shape of a layered instance: `n_blue` blue vertices, `layers` red layers of
/// `width` vertices each, and outdegree `outdeg` for every non-sink vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BrParams {
    n_blue: usize,
    layers: usize,
    width: usize,
    outdeg: usize,
}

impl BrParams {
    pub fn new(n_blue: usize, layers: usize, width: usize, outdeg: usize) -> Result<Self, ParamError> {
        if layers < 2 || !layers.is_multiple_of(2) {
            return Err(ParamError::OddLayers(layers));
        }
        if layers.checked_mul(width) != Some(2 * n_blue) {
            return Err(ParamError::BadLayering { n_blue, layers, width });
        }
        let pool = (2 * n_blue).saturating_sub(1);
        if outdeg < 2 || outdeg > width || outdeg > pool {
            return Err(ParamError::BadOutdeg { outdeg, width, pool });
        }
        Ok(Self { n_blue, layers, width, outdeg })
    }

    pub fn with_outdeg(self, outdeg: usize) -> Result<Self, ParamError> {
        Self::new(self.n_blue, self.layers, self.width, outdeg)
    }

    pub fn with_layers(self, layers: usize) -> Result<Self, ParamError> {
        if layers == 0 || !(2 * self.n_blue).is_multiple_of(layers) {
            return Err(ParamError::BadLayering {
                n_blue: self.n_blue,
                layers,
                width: 0,
            });
        }
        Self::new(self.n_blue, layers, 2 * self.n_blue / layers, self.outdeg)
    }

    pub fn n_blue(&self) -> usize {
        self.n_blue
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn outdeg(&self) -> usize {
        self.outdeg
    }

    /// `N + L*W`, which is always `3N`.
    pub fn vertex_count(&self) -> usize {
        self.n_blue + self.layers * self.width
    }

    /// Queries per epoch before a timeout closes it.
    pub fn epoch_cap(&self) -> usize {
        self.layers / 2
    }

    /// Size of the pool a blue vertex draws its out-list from: `2N - 1`.
    pub fn blue_pool(&self) -> usize {
        2 * self.n_blue - 1
    }
}

/// Picks the layering used by the lower-bound construction, `L ~ (2N)^(2/9)`
/// and `W = 2N / L`, snapped to an even divisor of `2N`.
///
/// The search starts at `round((2N)^(2/9))` and walks outward (lower candidate
/// first at each distance) until it finds an even `L` dividing `2N` with
/// `W >= 2`. Candidates further than a factor 4 from the target are rejected.
/// The outdegree is `min(DEFAULT_OUTDEG, W)`; use [`BrParams::with_outdeg`] to
/// change it.
pub fn paper_params(n_blue: usize) -> Result<BrParams, ParamError> {
    if n_blue < 4 {
        return Err(ParamError::TooFewBlue(n_blue));
    }
    let two_n = 2 * n_blue;
    let target = (two_n as f64).powf(2.0 / 9.0);
    let start = target.round().max(1.0) as usize;
    let accept = |l: usize| {
        l >= 2
            && l.is_multiple_of(2)
            && two_n.is_multiple_of(l)
            && two_n / l >= 2
            && (l as f64) <= 4.0 * target
            && (l as f64) >= target / 4.0
    };
    let max_dist = (4.0 * target).ceil() as usize + start;
    let layers = (0..=max_dist)
        .flat_map(|k| [start.checked_sub(k), Some(start + k)])
        .flatten()
        .find(|&l| accept(l))
        .ok_or(ParamError::NoValidLayering { two_n, target })?;
    let width = two_n / layers;
    BrParams::new(n_blue, layers, width, DEFAULT_OUTDEG.min(width))
}
