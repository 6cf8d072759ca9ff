use crate::error::{Error, Result};
use crate::model::{binomial, rank, unrank_subset, GameState};
use crate::scalar::Scalar;

/// Entries in layer `j` of an `n`-card table: `C(n, j)^3`.
pub fn layer_len(n: usize, j: usize) -> u64 {
    binomial(n, j).pow(3)
}

/// Subgame values for one deck size, one dense array per hand size.
///
/// Layers may be absent: the solver releases old layers unless asked to
/// keep them, and partial solves stop below `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable<S> {
    n: usize,
    layers: Vec<Option<Vec<S>>>,
}

impl<S: Scalar> ValueTable<S> {
    pub(crate) fn empty(n: usize) -> Self {
        ValueTable { n, layers: vec![None; n + 1] }
    }

    /// Assemble a table from complete layers `0..=n`.
    pub fn from_layers(n: usize, layers: Vec<Vec<S>>) -> Result<Self> {
        if layers.len() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, actual: layers.len() });
        }
        for (j, layer) in layers.iter().enumerate() {
            let want = layer_len(n, j) as usize;
            if layer.len() != want {
                return Err(Error::DimensionMismatch { expected: want, actual: layer.len() });
            }
        }
        Ok(ValueTable { n, layers: layers.into_iter().map(Some).collect() })
    }

    pub(crate) fn put_layer(&mut self, j: usize, layer: Vec<S>) {
        debug_assert_eq!(layer.len() as u64, layer_len(self.n, j));
        self.layers[j] = Some(layer);
    }

    pub(crate) fn drop_layer(&mut self, j: usize) {
        self.layers[j] = None;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layer(&self, j: usize) -> Option<&[S]> {
        self.layers.get(j).and_then(|l| l.as_deref())
    }

    /// Mutable access for repairs and fault-injection tests.
    pub fn layer_mut(&mut self, j: usize) -> Option<&mut [S]> {
        self.layers.get_mut(j).and_then(|l| l.as_deref_mut())
    }

    pub fn is_complete(&self) -> bool {
        self.layers.iter().all(Option::is_some)
    }

    /// Highest layer `L` such that layers `0..=L` are all present.
    pub fn covered_layers(&self) -> Option<usize> {
        self.layers.iter().position(Option::is_none).map_or(Some(self.n), |p| p.checked_sub(1))
    }

    pub fn check_state(&self, state: &GameState) -> Result<()> {
        if state.max_value() as usize > self.n {
            return Err(Error::TableSizeMismatch { table: self.n, requested: state.max_value() as usize });
        }
        Ok(())
    }

    /// Flat index of a state inside its layer.
    pub fn index_of(&self, state: &GameState) -> usize {
        let c = binomial(self.n, state.size()) as usize;
        ((rank(state.v()) as usize * c) + rank(state.y()) as usize) * c + rank(state.p()) as usize
    }

    /// State stored at `index` of layer `j`.
    pub fn state_at(&self, j: usize, index: usize) -> Result<GameState> {
        let c = binomial(self.n, j) as usize;
        if index >= c * c * c {
            return Err(Error::RankOutOfRange { rank: index as u64, k: j, n: self.n });
        }
        let rp = (index % c) as u64;
        let ry = ((index / c) % c) as u64;
        let rv = (index / (c * c)) as u64;
        GameState::new(
            unrank_subset(rv, j, self.n)?,
            unrank_subset(ry, j, self.n)?,
            unrank_subset(rp, j, self.n)?,
        )
    }

    /// Stored value, if the state fits this table and its layer is present.
    pub fn get(&self, state: &GameState) -> Option<S> {
        if state.max_value() as usize > self.n {
            return None;
        }
        let layer = self.layer(state.size())?;
        layer.get(self.index_of(state)).cloned()
    }

    /// Stored value with a descriptive error.
    pub fn value(&self, state: &GameState) -> Result<S> {
        self.check_state(state)?;
        self.get(state).ok_or(Error::LayerMissing { table_n: self.n, layer: state.size() })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ValueTable<T> {
        ValueTable {
            n: self.n,
            layers: self
                .layers
                .iter()
                .map(|l| l.as_ref().map(|v| v.iter().map(&f).collect()))
                .collect(),
        }
    }
}
