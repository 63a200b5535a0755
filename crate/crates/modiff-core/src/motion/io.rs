//! Dataset file format.
//!
//! Binary container, all multi-byte values little-endian:
//!
//! ```text
//! magic   b"MDIF"
//! version u8 (= 1)
//! header  u32 J, u32 f, u32 C, u32 sequence_count
//! edges   u32 edge_count, then edge_count * (u32 parent, u32 child)
//! stats   f32 mean[x,y,z], f32 std[x,y,z], u8 applied
//! records sequence_count * ( u16 class_id,
//!                            f*J*3 f32 coords, frame-major, joint, channel )
//! ```
//!
//! Coordinates are held as f64 in memory and stored as f32, so saving rounds
//! once; loading a saved file back is bit-exact.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::Array3;

use crate::error::{Error, Result};
use crate::motion::{ActionLabel, LabeledDataset, MotionSequence, NormStats, SkeletonSpec};

const MAGIC: &[u8; 4] = b"MDIF";
const VERSION: u8 = 1;

/// Writes `dataset` to `path` in the container format.
pub fn save_dataset(dataset: &LabeledDataset, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    save_dataset_to(dataset, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Reads a dataset from `path`.
pub fn load_dataset(path: &Path) -> Result<LabeledDataset> {
    let mut input = BufReader::new(File::open(path)?);
    load_dataset_from(&mut input)
}

pub fn save_dataset_to<W: Write>(dataset: &LabeledDataset, out: &mut W) -> Result<()> {
    if dataset.class_count() > u16::MAX as usize + 1 {
        return Err(Error::InvalidConfig(format!(
            "class count {} exceeds the format limit",
            dataset.class_count()
        )));
    }
    out.write_all(MAGIC)?;
    out.write_u8(VERSION)?;
    out.write_u32::<LittleEndian>(dataset.joints() as u32)?;
    out.write_u32::<LittleEndian>(dataset.frames() as u32)?;
    out.write_u32::<LittleEndian>(dataset.class_count() as u32)?;
    out.write_u32::<LittleEndian>(dataset.len() as u32)?;
    let edges = dataset.spec().edges();
    out.write_u32::<LittleEndian>(edges.len() as u32)?;
    for &(a, b) in edges {
        out.write_u32::<LittleEndian>(a as u32)?;
        out.write_u32::<LittleEndian>(b as u32)?;
    }
    let stats = dataset.norm_stats();
    for c in 0..3 {
        out.write_f32::<LittleEndian>(stats.mean[c] as f32)?;
    }
    for c in 0..3 {
        out.write_f32::<LittleEndian>(stats.std[c] as f32)?;
    }
    out.write_u8(dataset.stats_applied() as u8)?;
    for (seq, label) in dataset.items() {
        out.write_u16::<LittleEndian>(label.index() as u16)?;
        for &v in seq.coords().iter() {
            out.write_f32::<LittleEndian>(v as f32)?;
        }
    }
    Ok(())
}

pub fn load_dataset_from<R: Read>(input: &mut R) -> Result<LabeledDataset> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic).map_err(Error::from_read)?;
    if &magic != MAGIC {
        return Err(Error::BadMagic { expected: "MDIF" });
    }
    let version = input.read_u8().map_err(Error::from_read)?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let joints = input.read_u32::<LittleEndian>().map_err(Error::from_read)? as usize;
    let frames = input.read_u32::<LittleEndian>().map_err(Error::from_read)? as usize;
    let classes = input.read_u32::<LittleEndian>().map_err(Error::from_read)? as usize;
    let count = input.read_u32::<LittleEndian>().map_err(Error::from_read)? as usize;
    let edge_count = input.read_u32::<LittleEndian>().map_err(Error::from_read)? as usize;
    let mut edges = Vec::with_capacity(edge_count);
    for _ in 0..edge_count {
        let a = input.read_u32::<LittleEndian>().map_err(Error::from_read)? as usize;
        let b = input.read_u32::<LittleEndian>().map_err(Error::from_read)? as usize;
        edges.push((a, b));
    }
    let spec = SkeletonSpec::new(joints, edges)?;
    if frames == 0 {
        return Err(Error::CorruptFile("frame count is zero".into()));
    }
    let mut mean = [0.0f64; 3];
    let mut std = [0.0f64; 3];
    for m in &mut mean {
        *m = input.read_f32::<LittleEndian>().map_err(Error::from_read)? as f64;
    }
    for (c, s) in std.iter_mut().enumerate() {
        *s = input.read_f32::<LittleEndian>().map_err(Error::from_read)? as f64;
        if !(*s > 0.0) {
            return Err(Error::CorruptFile(format!(
                "non-positive std for channel {}",
                crate::motion::CHANNEL_NAMES[c]
            )));
        }
    }
    let applied = match input.read_u8().map_err(Error::from_read)? {
        0 => false,
        1 => true,
        other => {
            return Err(Error::CorruptFile(format!(
                "invalid applied flag {other}"
            )))
        }
    };

    let mut ds = LabeledDataset::new(spec, frames, classes);
    let values_per_seq = frames * joints * 3;
    let mut buf = vec![0f32; values_per_seq];
    for _ in 0..count {
        let class = input.read_u16::<LittleEndian>().map_err(Error::from_read)? as usize;
        input
            .read_f32_into::<LittleEndian>(&mut buf)
            .map_err(Error::from_read)?;
        if buf.iter().any(|v| !v.is_finite()) {
            return Err(Error::CorruptFile("non-finite coordinate".into()));
        }
        let coords =
            Array3::from_shape_vec((frames, joints, 3), buf.iter().map(|&v| v as f64).collect())
                .expect("shape matches buffer length");
        ds.push(MotionSequence::new(coords)?, ActionLabel(class))?;
    }
    let mut trailing = [0u8; 1];
    if input.read(&mut trailing)? != 0 {
        return Err(Error::CorruptFile("trailing bytes after last record".into()));
    }
    ds.norm = NormStats { mean, std };
    ds.stats_applied = applied;
    Ok(ds)
}
