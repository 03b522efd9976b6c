use crate::embed::adam::AdamState;
use crate::embed::loss::{loss_and_grad_prepared, prepare_triplets, PreparedTriplet};
use crate::embed::mlp::{Activation, MlpParams};
use crate::embed::pca::random_project;
use crate::sampling::{ConstrainedSampler, DEFAULT_TRAIN_MULTIPLIER};
use crate::{Dataset, Error, Matrix, Projection, Result, Scalar, Triplet};

const DIVERGENCE_FACTOR: f64 = 10.0;
const DIVERGENCE_PATIENCE: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainMode {
    /// Optimize the weights of an MLP mapping inputs to outputs.
    Parametric,
    /// Optimize the output coordinates directly.
    Nonparametric,
}

#[derive(Debug, Clone)]
pub struct TrainConfig<F> {
    pub output_dim: usize,
    pub hidden: Vec<usize>,
    pub activation: Activation,
    pub epochs: usize,
    pub batch_size: usize,
    /// Fresh triplets drawn each epoch, as a multiple of `n`.
    pub triplet_multiplier: f64,
    pub learning_rate: f64,
    /// Coupled L2 penalty added to the gradient.
    pub weight_decay: f64,
    pub mode: TrainMode,
    pub seed: u64,
    /// Starting coordinates for non-parametric mode. Defaults to a uniform
    /// random layout in the unit cube.
    pub init: Option<Matrix<F>>,
}

impl<F: Scalar> Default for TrainConfig<F> {
    fn default() -> Self {
        Self {
            output_dim: 2,
            hidden: vec![128, 128],
            activation: Activation::Relu,
            epochs: 200,
            batch_size: 512,
            triplet_multiplier: DEFAULT_TRAIN_MULTIPLIER,
            learning_rate: 1e-3,
            weight_decay: 0.0,
            mode: TrainMode::Parametric,
            seed: 0,
            init: None,
        }
    }
}

impl<F: Scalar> TrainConfig<F> {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_mode(mut self, mode: TrainMode) -> Self {
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.output_dim == 0 {
            return Err(Error::Invalid("output dimension must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Invalid("batch size must be positive".into()));
        }
        if !(self.triplet_multiplier.is_finite() && self.triplet_multiplier > 0.0) {
            return Err(Error::Invalid(format!(
                "triplet multiplier must be positive, got {}",
                self.triplet_multiplier
            )));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Invalid(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            return Err(Error::Invalid("weight decay must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingOutput<F> {
    pub projection: Projection<F>,
    /// Mean training loss of each epoch, measured before each batch update.
    pub loss_trace: Vec<f64>,
    /// Trained network (parametric mode only).
    pub network: Option<MlpParams<F>>,
}

/// Seed for the triplets of a given epoch, decorrelated from the
/// initialization stream.
fn epoch_seed(seed: u64, epoch: usize) -> u64 {
    let mut z = seed ^ (epoch as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Trains an AngleEmbedding of `data` that minimizes sampled CADI.
pub fn angle_embedding<F: Scalar>(
    data: &Dataset<F>,
    cfg: &TrainConfig<F>,
) -> Result<EmbeddingOutput<F>> {
    cfg.validate()?;
    let x = data.points();
    let n = data.n();
    let sampler = ConstrainedSampler::new(data.partition())?;
    let per_epoch = ((cfg.triplet_multiplier * n as f64).ceil() as usize).max(1);
    let lr = F::of(cfg.learning_rate);
    let decay = F::of(cfg.weight_decay);

    let mut trainer = match cfg.mode {
        TrainMode::Parametric => {
            let mut dims = vec![data.d()];
            dims.extend_from_slice(&cfg.hidden);
            dims.push(cfg.output_dim);
            let net = MlpParams::xavier(&dims, cfg.activation, cfg.seed)?;
            Trainer::Network {
                adam: AdamState::new(net.len(), lr),
                net,
                slot: vec![usize::MAX; n],
            }
        }
        TrainMode::Nonparametric => {
            let y = match &cfg.init {
                Some(init) => {
                    if init.rows() != n || init.cols() != cfg.output_dim {
                        return Err(Error::Dimension(format!(
                            "initial layout is {}x{}, expected {}x{}",
                            init.rows(),
                            init.cols(),
                            n,
                            cfg.output_dim
                        )));
                    }
                    init.clone()
                }
                None => random_project(n, cfg.output_dim, cfg.seed)?.into_points(),
            };
            Trainer::Coordinates {
                adam: AdamState::new(y.as_slice().len(), lr),
                y,
            }
        }
    };

    let mut trace = Vec::with_capacity(cfg.epochs);
    let mut initial = None;
    let mut above = 0usize;
    for epoch in 0..cfg.epochs {
        let triplets = sampler.sample(per_epoch, epoch_seed(cfg.seed, epoch));
        let prepared = prepare_triplets(x, &triplets);
        let mut weighted = 0.0f64;
        for batch in prepared.chunks(cfg.batch_size) {
            let loss = trainer.step(x, batch, decay)?;
            weighted += loss.as_f64() * batch.len() as f64;
        }
        let loss = weighted / prepared.len() as f64;
        if !loss.is_finite() {
            return Err(Error::Numerical(format!(
                "training loss became {loss} at epoch {epoch}"
            )));
        }
        let base = *initial.get_or_insert(loss);
        if loss > DIVERGENCE_FACTOR * base {
            above += 1;
            if above >= DIVERGENCE_PATIENCE {
                return Err(Error::Numerical(format!(
                    "training diverged: loss {loss} exceeded {DIVERGENCE_FACTOR}x the initial {base} \
                     for {DIVERGENCE_PATIENCE} epochs"
                )));
            }
        } else {
            above = 0;
        }
        trace.push(loss);
    }

    let (points, network) = match trainer {
        Trainer::Network { net, .. } => (net.forward(x)?, Some(net)),
        Trainer::Coordinates { y, .. } => (y, None),
    };
    if let Some((row, column)) = points.first_non_finite() {
        return Err(Error::Numerical(format!(
            "embedding has a non-finite value at ({row}, {column})"
        )));
    }
    Ok(EmbeddingOutput {
        projection: Projection::new(points)?,
        loss_trace: trace,
        network,
    })
}

enum Trainer<F> {
    Network {
        net: MlpParams<F>,
        adam: AdamState<F>,
        /// Scratch map from dataset row to batch-local row.
        slot: Vec<usize>,
    },
    Coordinates {
        y: Matrix<F>,
        adam: AdamState<F>,
    },
}

impl<F: Scalar> Trainer<F> {
    /// One Adam update on a batch; returns the batch loss before the update.
    fn step(&mut self, x: &Matrix<F>, batch: &[PreparedTriplet<F>], decay: F) -> Result<F> {
        match self {
            Trainer::Network { net, adam, slot } => {
                let mut rows = Vec::new();
                let mut local = |g: usize, rows: &mut Vec<usize>| {
                    if slot[g] == usize::MAX {
                        slot[g] = rows.len();
                        rows.push(g);
                    }
                    slot[g]
                };
                let remapped: Vec<PreparedTriplet<F>> = batch
                    .iter()
                    .map(|p| {
                        let t = p.triplet;
                        let i = local(t.i, &mut rows);
                        let j = local(t.j, &mut rows);
                        let k = local(t.k, &mut rows);
                        PreparedTriplet {
                            triplet: Triplet { i, j, k },
                            cos_x: p.cos_x,
                        }
                    })
                    .collect();
                for &g in &rows {
                    slot[g] = usize::MAX;
                }
                let cache = net.forward_cached(&x.select_rows(&rows))?;
                let (loss, grad_y) = loss_and_grad_prepared(cache.output(), &remapped)?;
                let mut grads = net.backward(&cache, &grad_y)?;
                add_decay(&mut grads, net.as_slice(), decay);
                adam.update(net.as_mut_slice(), &grads)?;
                Ok(loss)
            }
            Trainer::Coordinates { y, adam } => {
                let (loss, grad) = loss_and_grad_prepared(y, batch)?;
                let mut grads = grad.into_vec();
                add_decay(&mut grads, y.as_slice(), decay);
                adam.update(y.as_mut_slice(), &grads)?;
                Ok(loss)
            }
        }
    }
}

fn add_decay<F: Scalar>(grads: &mut [F], params: &[F], decay: F) {
    if decay > F::zero() {
        for (g, p) in grads.iter_mut().zip(params) {
            *g += decay * *p;
        }
    }
}
