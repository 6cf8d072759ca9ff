//! GVT value-table files.
//!
//! Layout: `b"GVT1"`, version byte (1), `n`, arithmetic tag (0 = float64),
//! a reserved zero byte, then layers `0..=n` back to back, each `C(n, j)^3`
//! little-endian `f64` values in table index order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::MAX_CARDS;

use super::table::{layer_len, ValueTable};

pub const GVT_MAGIC: [u8; 4] = *b"GVT1";
pub const GVT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 8;
const TAG_FLOAT64: u8 = 0;

fn header(n: usize) -> [u8; HEADER_LEN] {
    [GVT_MAGIC[0], GVT_MAGIC[1], GVT_MAGIC[2], GVT_MAGIC[3], GVT_VERSION, n as u8, TAG_FLOAT64, 0]
}

/// Total file size for an `n`-card table.
pub fn file_len(n: usize) -> u64 {
    HEADER_LEN as u64 + 8 * (0..=n).map(|j| layer_len(n, j)).sum::<u64>()
}

/// Writes a table one layer at a time, so the solver never has to hold
/// more than the layers it is working on.
pub struct GvtWriter<W: Write> {
    out: W,
    n: usize,
    next_layer: usize,
}

impl<W: Write> GvtWriter<W> {
    pub fn new(mut out: W, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_CARDS {
            return Err(Error::BadDeckSize(n));
        }
        out.write_all(&header(n))?;
        Ok(GvtWriter { out, n, next_layer: 0 })
    }

    pub fn write_layer(&mut self, j: usize, values: &[f64]) -> Result<()> {
        if j != self.next_layer || j > self.n {
            return Err(Error::BadHeader(format!("layer {j} written out of order (expected {})", self.next_layer)));
        }
        let want = layer_len(self.n, j) as usize;
        if values.len() != want {
            return Err(Error::DimensionMismatch { expected: want, actual: values.len() });
        }
        let mut buf = Vec::with_capacity(8 * 4096);
        for chunk in values.chunks(4096) {
            buf.clear();
            for v in chunk {
                buf.extend_from_slice(&v.to_le_bytes());
            }
            self.out.write_all(&buf)?;
        }
        self.next_layer += 1;
        Ok(())
    }

    /// Flush and return the sink; fails unless every layer was written.
    pub fn finish(mut self) -> Result<W> {
        if self.next_layer != self.n + 1 {
            return Err(Error::LayerMissing { table_n: self.n, layer: self.next_layer });
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn write_table<W: Write>(table: &ValueTable<f64>, out: W) -> Result<W> {
    let mut w = GvtWriter::new(out, table.n())?;
    for j in 0..=table.n() {
        let layer = table.layer(j).ok_or(Error::LayerMissing { table_n: table.n(), layer: j })?;
        w.write_layer(j, layer)?;
    }
    w.finish()
}

/// Persist a complete float table.
pub fn save_table(table: &ValueTable<f64>, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    write_table(table, BufWriter::with_capacity(1 << 20, file))?;
    Ok(())
}

pub fn read_table<R: Read>(mut input: R) -> Result<ValueTable<f64>> {
    let mut head = [0u8; HEADER_LEN];
    let got = read_full(&mut input, &mut head)?;
    if got < 4 || head[..4] != GVT_MAGIC {
        let mut magic = [0u8; 4];
        magic[..got.min(4)].copy_from_slice(&head[..got.min(4)]);
        return Err(Error::BadMagic(magic));
    }
    if got < HEADER_LEN {
        return Err(Error::Truncated { expected: HEADER_LEN as u64, actual: got as u64 });
    }
    if head[4] != GVT_VERSION {
        return Err(Error::UnsupportedVersion(head[4]));
    }
    let n = head[5] as usize;
    if n == 0 || n > MAX_CARDS {
        return Err(Error::BadHeader(format!("deck size {n}")));
    }
    if head[6] != TAG_FLOAT64 {
        return Err(Error::UnsupportedArithmetic(head[6]));
    }
    if head[7] != 0 {
        return Err(Error::BadHeader(format!("reserved byte is {}", head[7])));
    }

    let expected = file_len(n);
    let mut consumed = HEADER_LEN as u64;
    let mut layers = Vec::with_capacity(n + 1);
    let mut buf = vec![0u8; 8 * 4096];
    for j in 0..=n {
        let len = layer_len(n, j) as usize;
        let mut layer = Vec::new();
        layer
            .try_reserve_exact(len)
            .map_err(|_| Error::OutOfMemory { layer: j, entries: len as u64, index: 0 })?;
        while layer.len() < len {
            let take = (len - layer.len()).min(4096);
            let bytes = &mut buf[..8 * take];
            let got = read_full(&mut input, bytes)?;
            consumed += got as u64;
            if got < bytes.len() {
                return Err(Error::Truncated { expected, actual: consumed });
            }
            layer.extend(bytes.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())));
        }
        layers.push(layer);
    }
    let extra = std::io::copy(&mut input, &mut std::io::sink())?;
    if extra > 0 {
        return Err(Error::TrailingData(extra));
    }
    ValueTable::from_layers(n, layers)
}

/// Load a float table written by [`save_table`].
pub fn load_table(path: impl AsRef<Path>) -> Result<ValueTable<f64>> {
    let file = File::open(path)?;
    read_table(BufReader::with_capacity(1 << 20, file))
}

/// Load and require a particular deck size.
pub fn load_table_for(path: impl AsRef<Path>, n: usize) -> Result<ValueTable<f64>> {
    let table = load_table(path)?;
    if table.n() != n {
        return Err(Error::TableSizeMismatch { table: table.n(), requested: n });
    }
    Ok(table)
}

fn read_full<R: Read>(input: &mut R, buf: &mut [u8]) -> Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match input.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(k) => filled += k,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(filled)
}
