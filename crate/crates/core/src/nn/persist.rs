//! Versioned binary model files.
//!
//! Layout (all integers little-endian `u32`, all reals little-endian `f64`):
//!
//! ```text
//! magic "CATGAIN\0" | version | schema sha256 (32 bytes)
//! header length | header (UTF-8 JSON, free-form hyperparameters)
//! network count
//! per network: layer count
//!   per layer: in | out | activation tag (u8)
//!              [tag 4: block count, per block: offset | width | kind (u8)]
//!              weights (out × in, row-major) | bias (out)
//! ```

use std::io::{Read, Write};

use super::{Activation, DenseLayer, HeadBlock, HeadKind, Mlp, NnError};
use crate::linalg::Matrix;

pub const MAGIC: &[u8; 8] = b"CATGAIN\0";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub schema_hash: [u8; 32],
    pub header: String,
    pub networks: Vec<Mlp>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn put_u32<W: Write>(w: &mut W, v: usize) -> Result<(), NnError> {
    let v = u32::try_from(v).map_err(|_| NnError::Format(format!("{v} does not fit u32")))?;
    w.write_all(&v.to_le_bytes())?;
    Ok(())
}

fn get_u32<R: Read>(r: &mut R) -> Result<usize, NnError> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b) as usize)
}

fn get_u8<R: Read>(r: &mut R) -> Result<u8, NnError> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)?;
    Ok(b[0])
}

fn get_f64s<R: Read>(r: &mut R, n: usize) -> Result<Vec<f64>, NnError> {
    let mut out = Vec::with_capacity(n);
    let mut b = [0u8; 8];
    for _ in 0..n {
        r.read_exact(&mut b)?;
        out.push(f64::from_le_bytes(b));
    }
    Ok(out)
}

pub fn write_model<W: Write>(w: &mut W, model: &ModelFile) -> Result<(), NnError> {
    w.write_all(MAGIC)?;
    put_u32(w, VERSION as usize)?;
    w.write_all(&model.schema_hash)?;
    put_u32(w, model.header.len())?;
    w.write_all(model.header.as_bytes())?;
    put_u32(w, model.networks.len())?;
    for net in &model.networks {
        put_u32(w, net.layers().len())?;
        for layer in net.layers() {
            put_u32(w, layer.input_width())?;
            put_u32(w, layer.output_width())?;
            w.write_all(&[layer.activation.tag()])?;
            if let Activation::Heads(blocks) = &layer.activation {
                put_u32(w, blocks.len())?;
                for b in blocks {
                    put_u32(w, b.offset)?;
                    put_u32(w, b.width)?;
                    w.write_all(&[match b.kind {
                        HeadKind::Softmax => 0,
                        HeadKind::Sigmoid => 1,
                    }])?;
                }
            }
            for v in layer.weights.as_slice().iter().chain(&layer.bias) {
                w.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

/// Reads a model file; with `expected_schema` set, a different schema hash is
/// rejected.
pub fn read_model<R: Read>(r: &mut R, expected_schema: Option<&[u8; 32]>) -> Result<ModelFile, NnError> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(NnError::Format("not a model file (bad magic)".into()));
    }
    let version = get_u32(r)?;
    if version != VERSION as usize {
        return Err(NnError::Format(format!("unsupported version {version}")));
    }
    let mut schema_hash = [0u8; 32];
    r.read_exact(&mut schema_hash)?;
    if let Some(expected) = expected_schema {
        if expected != &schema_hash {
            return Err(NnError::SchemaMismatch {
                expected: hex(expected),
                found: hex(&schema_hash),
            });
        }
    }
    let header_len = get_u32(r)?;
    let mut header = vec![0u8; header_len];
    r.read_exact(&mut header)?;
    let header =
        String::from_utf8(header).map_err(|_| NnError::Format("header is not UTF-8".into()))?;
    let n_nets = get_u32(r)?;
    let mut networks = Vec::with_capacity(n_nets);
    for _ in 0..n_nets {
        let n_layers = get_u32(r)?;
        let mut layers = Vec::with_capacity(n_layers);
        for _ in 0..n_layers {
            let input = get_u32(r)?;
            let output = get_u32(r)?;
            let activation = match get_u8(r)? {
                0 => Activation::Linear,
                1 => Activation::Relu,
                2 => Activation::Sigmoid,
                3 => Activation::Tanh,
                4 => {
                    let n = get_u32(r)?;
                    let mut blocks = Vec::with_capacity(n);
                    for _ in 0..n {
                        let offset = get_u32(r)?;
                        let width = get_u32(r)?;
                        let kind = match get_u8(r)? {
                            0 => HeadKind::Softmax,
                            1 => HeadKind::Sigmoid,
                            k => return Err(NnError::Format(format!("bad head kind {k}"))),
                        };
                        blocks.push(HeadBlock { offset, width, kind });
                    }
                    Activation::Heads(blocks)
                }
                t => return Err(NnError::Format(format!("bad activation tag {t}"))),
            };
            let weights = Matrix::from_vec(output, input, get_f64s(r, output * input)?);
            let bias = get_f64s(r, output)?;
            layers.push(DenseLayer {
                weights,
                bias,
                activation,
            });
        }
        networks.push(Mlp::new(layers)?);
    }
    Ok(ModelFile {
        schema_hash,
        header,
        networks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn model() -> ModelFile {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let heads = Activation::Heads(vec![
            HeadBlock { offset: 0, width: 2, kind: HeadKind::Softmax },
            HeadBlock { offset: 2, width: 1, kind: HeadKind::Sigmoid },
        ]);
        ModelFile {
            schema_hash: [7; 32],
            header: r#"{"hint_rate":0.1}"#.into(),
            networks: vec![
                Mlp::glorot(&[4, 5, 3], Activation::Relu, heads, &mut rng).unwrap(),
                Mlp::glorot(&[6, 2], Activation::Relu, Activation::Sigmoid, &mut rng).unwrap(),
            ],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        let mut buf = Vec::new();
        write_model(&mut buf, &m).unwrap();
        let back = read_model(&mut buf.as_slice(), Some(&[7; 32])).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_wrong_schema_and_garbage() {
        let mut buf = Vec::new();
        write_model(&mut buf, &model()).unwrap();
        assert!(matches!(
            read_model(&mut buf.as_slice(), Some(&[8; 32])),
            Err(NnError::SchemaMismatch { .. })
        ));
        assert!(read_model(&mut &b"garbage!garbage!"[..], None).is_err());
        let truncated = &buf[..buf.len() - 3];
        assert!(read_model(&mut &truncated[..], None).is_err());
    }
}
