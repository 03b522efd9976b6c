use crate::{Error, Result, Scalar};

/// Bias-corrected Adam over a flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<F> {
    pub step: u64,
    pub m: Vec<F>,
    pub v: Vec<F>,
    pub lr: F,
    pub beta1: F,
    pub beta2: F,
    pub eps: F,
}

impl<F: Scalar> AdamState<F> {
    /// Defaults `beta1 = 0.9`, `beta2 = 0.999`, `eps = 1e-8`.
    pub fn new(len: usize, lr: F) -> Self {
        Self {
            step: 0,
            m: vec![F::zero(); len],
            v: vec![F::zero(); len],
            lr,
            beta1: F::of(0.9),
            beta2: F::of(0.999),
            eps: F::of(1e-8),
        }
    }

    pub fn update(&mut self, params: &mut [F], grads: &[F]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::Dimension(format!(
                "Adam state has {} slots, got {} params and {} grads",
                self.m.len(),
                params.len(),
                grads.len()
            )));
        }
        self.step += 1;
        let one = F::one();
        let t = self.step as i32;
        let c1 = one - self.beta1.powi(t);
        let c2 = one - self.beta2.powi(t);
        for (((p, &g), m), v) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut())
            .zip(self.v.iter_mut())
        {
            *m = self.beta1 * *m + (one - self.beta1) * g;
            *v = self.beta2 * *v + (one - self.beta2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
        Ok(())
    }
}
