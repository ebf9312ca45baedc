//! Fully connected ReLU network over a flat parameter vector.
//!
//! Layout per layer: weight matrix `out × in` in row-major order, then the
//! `out` biases. Layers follow `input_dim, hidden_layers.., output_dim`.

use super::ArchSignature;

/// `(fan_in, fan_out)` for every layer.
pub fn layer_shapes(sig: &ArchSignature) -> Vec<(usize, usize)> {
    let mut dims = Vec::with_capacity(sig.hidden_layers.len() + 2);
    dims.push(sig.input_dim);
    dims.extend_from_slice(&sig.hidden_layers);
    dims.push(sig.output_dim);
    dims.windows(2).map(|w| (w[0], w[1])).collect()
}

pub fn num_params(sig: &ArchSignature) -> usize {
    layer_shapes(sig).iter().map(|&(i, o)| i * o + o).sum()
}

/// Forward pass keeping every layer's post-activation output. `acts[0]` is
/// the input and the last entry is the raw output.
pub fn forward_cached(sig: &ArchSignature, theta: &[f64], x: &[f64], acts: &mut Vec<Vec<f64>>) {
    debug_assert_eq!(x.len(), sig.input_dim);
    let shapes = layer_shapes(sig);
    acts.resize(shapes.len() + 1, Vec::new());
    acts[0].clear();
    acts[0].extend_from_slice(x);
    let mut offset = 0;
    let last = shapes.len() - 1;
    for (l, &(fan_in, fan_out)) in shapes.iter().enumerate() {
        let (w, rest) = theta[offset..].split_at(fan_in * fan_out);
        let b = &rest[..fan_out];
        offset += fan_in * fan_out + fan_out;
        let (prev, next) = acts.split_at_mut(l + 1);
        let input = &prev[l];
        let out = &mut next[0];
        out.clear();
        for o in 0..fan_out {
            let row = &w[o * fan_in..(o + 1) * fan_in];
            let mut z = b[o];
            for (wi, xi) in row.iter().zip(input) {
                z += wi * xi;
            }
            out.push(if l < last { z.max(0.0) } else { z });
        }
    }
}

pub fn forward(sig: &ArchSignature, theta: &[f64], x: &[f64]) -> Vec<f64> {
    let mut acts = Vec::new();
    forward_cached(sig, theta, x, &mut acts);
    acts.pop().unwrap_or_default()
}

/// Accumulates `∂(dout · output)/∂θ` into `grad`, given the activations of
/// the matching forward pass.
pub fn backward(sig: &ArchSignature, theta: &[f64], acts: &[Vec<f64>], dout: &[f64], grad: &mut [f64]) {
    let shapes = layer_shapes(sig);
    let mut offsets = Vec::with_capacity(shapes.len());
    let mut offset = 0;
    for &(i, o) in &shapes {
        offsets.push(offset);
        offset += i * o + o;
    }
    let mut delta = dout.to_vec();
    for l in (0..shapes.len()).rev() {
        let (fan_in, fan_out) = shapes[l];
        let off = offsets[l];
        let input = &acts[l];
        {
            let (gw, gb) = grad[off..off + fan_in * fan_out + fan_out].split_at_mut(fan_in * fan_out);
            for o in 0..fan_out {
                let d = delta[o];
                if d == 0.0 {
                    continue;
                }
                gb[o] += d;
                for (g, xi) in gw[o * fan_in..(o + 1) * fan_in].iter_mut().zip(input) {
                    *g += d * xi;
                }
            }
        }
        if l == 0 {
            break;
        }
        let w = &theta[off..off + fan_in * fan_out];
        let mut prev = vec![0.0; fan_in];
        for o in 0..fan_out {
            let d = delta[o];
            if d == 0.0 {
                continue;
            }
            for (p, wi) in prev.iter_mut().zip(&w[o * fan_in..(o + 1) * fan_in]) {
                *p += d * wi;
            }
        }
        for (p, a) in prev.iter_mut().zip(input) {
            if *a <= 0.0 {
                *p = 0.0;
            }
        }
        delta = prev;
    }
}
