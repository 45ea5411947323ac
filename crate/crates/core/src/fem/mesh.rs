use crate::error::{Error, Result};
use crate::problem::Partition;

/// Which piece of the partition a macro-interval is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    /// `(s_i, t_{i+1}]`, `0 <= i <= N`.
    Ode(usize),
    /// `(t_i, s_i]`, `1 <= i <= N`.
    Impulse(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MacroInterval {
    pub segment: Segment,
    /// Node index of the left endpoint.
    pub first: usize,
    /// Node index of the right endpoint.
    pub last: usize,
}

impl MacroInterval {
    pub fn elements(&self) -> std::ops::Range<usize> {
        self.first..self.last
    }
}

/// Nodes of a piecewise-linear mesh on `[0, T]` in which every `t_i` and
/// `s_i` is a node.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    partition: Partition,
    macros: Vec<MacroInterval>,
    refinement: usize,
}

impl Mesh {
    /// Splits every macro-interval into `refinement` equal elements.
    pub fn build(partition: &Partition, refinement: usize) -> Result<Self> {
        if refinement == 0 {
            return Err(Error::BadOption("mesh refinement must be positive".into()));
        }
        let bps = partition.breakpoints();
        let mut nodes = Vec::with_capacity((bps.len() - 1) * refinement + 1);
        let mut macros = Vec::with_capacity(bps.len() - 1);
        nodes.push(0.0);
        for (k, w) in bps.windows(2).enumerate() {
            let (a, b) = (w[0], w[1]);
            let first = nodes.len() - 1;
            for j in 1..refinement {
                nodes.push(a + (b - a) * j as f64 / refinement as f64);
            }
            nodes.push(b);
            let segment = if k % 2 == 0 {
                Segment::Ode(k / 2)
            } else {
                Segment::Impulse(k / 2 + 1)
            };
            macros.push(MacroInterval {
                segment,
                first,
                last: nodes.len() - 1,
            });
        }
        Ok(Self {
            nodes,
            partition: partition.clone(),
            macros,
            refinement,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn element_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn interior_count(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }

    pub fn horizon(&self) -> f64 {
        self.partition.horizon
    }

    pub fn refinement(&self) -> usize {
        self.refinement
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn macros(&self) -> &[MacroInterval] {
        &self.macros
    }

    pub fn element_len(&self, e: usize) -> f64 {
        self.nodes[e + 1] - self.nodes[e]
    }

    /// ODE interval `i` as a node range.
    pub fn ode_interval(&self, i: usize) -> MacroInterval {
        self.macros[2 * i]
    }

    /// Impulse interval `i` (1-based) as a node range.
    pub fn impulse_interval(&self, i: usize) -> MacroInterval {
        self.macros[2 * i - 1]
    }

    /// Node index of `t_i` (`1 <= i <= N + 1`, where `t_{N+1} = T`).
    pub fn node_of_t(&self, i: usize) -> usize {
        self.ode_interval(i - 1).last
    }

    /// Node index of `s_i` (`0 <= i <= N`, where `s_0 = 0`).
    pub fn node_of_s(&self, i: usize) -> usize {
        self.ode_interval(i).first
    }

    /// Node whose coordinate equals `t` exactly.
    pub fn node_at(&self, t: f64) -> Option<usize> {
        let k = self.nodes.partition_point(|&x| x < t);
        (k < self.nodes.len() && self.nodes[k] == t).then_some(k)
    }

    /// Element containing `t` (the left one at a node).
    pub fn locate(&self, t: f64) -> usize {
        self.nodes
            .partition_point(|&x| x < t)
            .saturating_sub(1)
            .min(self.element_count() - 1)
    }

    pub fn is_interior(&self, node: usize) -> bool {
        node > 0 && node + 1 < self.nodes.len()
    }
}
