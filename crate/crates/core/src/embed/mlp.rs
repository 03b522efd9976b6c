use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sampling::rng_from_seed;
use crate::{Error, Matrix, Result, Scalar};

const ROW_BLOCK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    #[inline]
    fn apply<F: Scalar>(self, z: F) -> F {
        match self {
            Activation::Relu => z.max(F::zero()),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activation's output.
    #[inline]
    fn derivative_from_output<F: Scalar>(self, h: F) -> F {
        match self {
            Activation::Relu => {
                if h > F::zero() {
                    F::one()
                } else {
                    F::zero()
                }
            }
            Activation::Tanh => F::one() - h * h,
        }
    }
}

/// Fully connected network with a linear output layer, stored as one flat
/// parameter vector. Layer `l` holds an `out x in` row-major weight block
/// followed by its `out` biases.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams<F> {
    dims: Vec<usize>,
    activation: Activation,
    data: Vec<F>,
}

/// Layer outputs kept for backpropagation; entry 0 is the input.
#[derive(Debug, Clone)]
pub struct ForwardCache<F> {
    pub outputs: Vec<Matrix<F>>,
}

impl<F: Scalar> ForwardCache<F> {
    pub fn output(&self) -> &Matrix<F> {
        self.outputs.last().expect("cache holds at least the input")
    }
}

impl<F: Scalar> MlpParams<F> {
    /// Xavier-uniform weights and zero biases. `dims` lists every layer width
    /// from input to output, e.g. `[d, 128, 128, 2]`.
    pub fn xavier(dims: &[usize], activation: Activation, seed: u64) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::Invalid(format!("bad layer widths {dims:?}")));
        }
        let mut rng = rng_from_seed(seed);
        let mut data = Vec::with_capacity(Self::count(dims));
        for w in dims.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            data.extend((0..fan_in * fan_out).map(|_| F::of(rng.random_range(-limit..limit))));
            data.extend(std::iter::repeat_n(F::zero(), fan_out));
        }
        Ok(Self {
            dims: dims.to_vec(),
            activation,
            data,
        })
    }

    pub fn from_parts(dims: &[usize], activation: Activation, data: Vec<F>) -> Result<Self> {
        if dims.len() < 2 || data.len() != Self::count(dims) {
            return Err(Error::Dimension(format!(
                "widths {dims:?} need {} parameters, got {}",
                Self::count(dims),
                data.len()
            )));
        }
        Ok(Self {
            dims: dims.to_vec(),
            activation,
            data,
        })
    }

    fn count(dims: &[usize]) -> usize {
        dims.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.dims.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [F] {
        &mut self.data
    }

    fn n_layers(&self) -> usize {
        self.dims.len() - 1
    }

    /// Offset of layer `l`'s weight block.
    fn offset(&self, l: usize) -> usize {
        Self::count(&self.dims[..=l])
    }

    fn layer(&self, l: usize) -> (&[F], &[F]) {
        let (fi, fo) = (self.dims[l], self.dims[l + 1]);
        let off = self.offset(l);
        let (w, rest) = self.data[off..].split_at(fi * fo);
        (w, &rest[..fo])
    }

    pub fn forward(&self, x: &Matrix<F>) -> Result<Matrix<F>> {
        Ok(self.forward_cached(x)?.outputs.pop().unwrap())
    }

    pub fn forward_cached(&self, x: &Matrix<F>) -> Result<ForwardCache<F>> {
        if x.cols() != self.input_dim() {
            return Err(Error::Dimension(format!(
                "network expects {} input columns, got {}",
                self.input_dim(),
                x.cols()
            )));
        }
        let mut outputs = vec![x.clone()];
        for l in 0..self.n_layers() {
            let (fi, fo) = (self.dims[l], self.dims[l + 1]);
            let (w, b) = self.layer(l);
            let hidden = l + 1 < self.n_layers();
            let act = self.activation;
            let input = outputs.last().unwrap();
            let mut out = vec![F::zero(); input.rows() * fo];
            out.par_chunks_mut(fo)
                .zip(input.as_slice().par_chunks(fi.max(1)))
                .for_each(|(o, h)| {
                    for (u, slot) in o.iter_mut().enumerate() {
                        let wu = &w[u * fi..(u + 1) * fi];
                        let mut z = b[u];
                        for (a, c) in wu.iter().zip(h) {
                            z += *a * *c;
                        }
                        *slot = if hidden { act.apply(z) } else { z };
                    }
                });
            outputs.push(Matrix::new(input.rows(), fo, out)?);
        }
        Ok(ForwardCache { outputs })
    }

    /// Parameter gradient given the gradient of a scalar loss with respect
    /// to the network output. Rows are accumulated in fixed blocks and the
    /// block sums are added in order, so the result does not depend on the
    /// thread count.
    pub fn backward(&self, cache: &ForwardCache<F>, grad_out: &Matrix<F>) -> Result<Vec<F>> {
        let out = cache.output();
        if grad_out.rows() != out.rows() || grad_out.cols() != out.cols() {
            return Err(Error::Dimension(format!(
                "output gradient is {}x{}, network output is {}x{}",
                grad_out.rows(),
                grad_out.cols(),
                out.rows(),
                out.cols()
            )));
        }
        let rows = out.rows();
        let blocks: Vec<Vec<F>> = (0..rows.div_ceil(ROW_BLOCK))
            .into_par_iter()
            .map(|blk| {
                let lo = blk * ROW_BLOCK;
                let hi = (lo + ROW_BLOCK).min(rows);
                self.backward_rows(cache, grad_out, lo..hi)
            })
            .collect();
        let mut total = vec![F::zero(); self.len()];
        for g in &blocks {
            for (t, v) in total.iter_mut().zip(g) {
                *t += *v;
            }
        }
        Ok(total)
    }

    fn backward_rows(
        &self,
        cache: &ForwardCache<F>,
        grad_out: &Matrix<F>,
        rows: std::ops::Range<usize>,
    ) -> Vec<F> {
        let mut grads = vec![F::zero(); self.len()];
        let widest = *self.dims.iter().max().unwrap();
        let mut delta = vec![F::zero(); widest];
        let mut below = vec![F::zero(); widest];
        for r in rows {
            let top = self.output_dim();
            delta[..top].copy_from_slice(grad_out.row(r));
            for l in (0..self.n_layers()).rev() {
                let (fi, fo) = (self.dims[l], self.dims[l + 1]);
                let off = self.offset(l);
                let (w, _) = self.layer(l);
                let h_in = cache.outputs[l].row(r);
                let (gw, gb) = grads[off..off + fi * fo + fo].split_at_mut(fi * fo);
                below[..fi].iter_mut().for_each(|v| *v = F::zero());
                for u in 0..fo {
                    let du = delta[u];
                    if du == F::zero() {
                        continue;
                    }
                    gb[u] += du;
                    let gwu = &mut gw[u * fi..(u + 1) * fi];
                    for (g, h) in gwu.iter_mut().zip(h_in) {
                        *g += du * *h;
                    }
                    if l > 0 {
                        for (bv, wv) in below[..fi].iter_mut().zip(&w[u * fi..(u + 1) * fi]) {
                            *bv += du * *wv;
                        }
                    }
                }
                if l > 0 {
                    for (q, (bv, h)) in below[..fi].iter().zip(h_in).enumerate() {
                        delta[q] = *bv * self.activation.derivative_from_output(*h);
                    }
                }
            }
        }
        grads
    }
}
