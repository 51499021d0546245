use nalgebra::{DMatrix, DVector};

use super::{Gradients, Mlp};

/// Adam with the usual defaults (`beta1 = 0.9`, `beta2 = 0.999`, `eps = 1e-8`).
#[derive(Debug, Clone)]
pub struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    t: i32,
    m: Vec<(DMatrix<f64>, DVector<f64>)>,
    v: Vec<(DMatrix<f64>, DVector<f64>)>,
}

impl Adam {
    pub fn new(net: &Mlp, lr: f64) -> Self {
        let zeros = Gradients::zeros_like(net).layers;
        Self { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, t: 0, m: zeros.clone(), v: zeros }
    }

    pub fn learning_rate(&self) -> f64 {
        self.lr
    }

    /// One descent step along `grads`.
    pub fn step(&mut self, net: &mut Mlp, grads: &Gradients) {
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t);
        let bc2 = 1.0 - self.beta2.powi(self.t);
        let (b1, b2, eps) = (self.beta1, self.beta2, self.eps);
        let step = self.lr * bc2.sqrt() / bc1;
        for (((layer, (gw, gb)), (mw, mb)), (vw, vb)) in
            net.layers.iter_mut().zip(&grads.layers).zip(&mut self.m).zip(&mut self.v)
        {
            let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
                *m = b1 * *m + (1.0 - b1) * g;
                *v = b2 * *v + (1.0 - b2) * g * g;
                *p -= step * *m / (v.sqrt() + eps);
            };
            for (((p, g), m), v) in layer.weights.iter_mut().zip(gw.iter()).zip(mw.iter_mut()).zip(vw.iter_mut()) {
                update(p, *g, m, v);
            }
            for (((p, g), m), v) in layer.bias.iter_mut().zip(gb.iter()).zip(mb.iter_mut()).zip(vb.iter_mut()) {
                update(p, *g, m, v);
            }
        }
    }
}
