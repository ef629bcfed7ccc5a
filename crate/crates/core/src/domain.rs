//! The domain `Omega`: finite unions of axis-aligned boxes and/or a grid mask,
//! with its measure and midpoint quadrature.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Axis-aligned box `[lower, upper]` in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl AxisBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidArgument("box dimension must be positive".into()));
        }
        for (axis, (l, u)) in lower.iter().zip(&upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::DegenerateBox { axis });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn interval(lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower], vec![upper])
    }

    pub fn unit_cube(dimension: usize) -> Self {
        Self {
            lower: vec![0.0; dimension],
            upper: vec![1.0; dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (l + u)).collect()
    }

    fn interiors_overlap(&self, other: &AxisBox) -> bool {
        (0..self.dimension()).all(|j| self.lower[j] < other.upper[j] && other.lower[j] < self.upper[j])
    }

    fn scaled(&self, factor: f64) -> AxisBox {
        AxisBox {
            lower: self.lower.iter().map(|x| x * factor).collect(),
            upper: self.upper.iter().map(|x| x * factor).collect(),
        }
    }
}

/// Regular grid of cells with an inclusion flag per cell.
///
/// Cells are indexed lexicographically by multi-index, first axis slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMask {
    origin: Vec<f64>,
    counts: Vec<usize>,
    widths: Vec<f64>,
    included: Vec<bool>,
}

impl GridMask {
    pub fn new(origin: Vec<f64>, counts: Vec<usize>, widths: Vec<f64>, included: Vec<bool>) -> Result<Self> {
        let d = origin.len();
        if d == 0 {
            return Err(Error::InvalidMask("dimension must be positive".into()));
        }
        if counts.len() != d || widths.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if counts.len() != d { counts.len() } else { widths.len() },
            });
        }
        if counts.iter().any(|&c| c == 0) {
            return Err(Error::InvalidMask("every axis needs at least one cell".into()));
        }
        if widths.iter().any(|w| !(w.is_finite() && *w > 0.0)) || origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidMask("cell widths must be positive and finite".into()));
        }
        let cells: usize = counts.iter().product();
        if included.len() != cells {
            return Err(Error::InvalidMask(alloc::format!(
                "{} inclusion flags for {cells} cells",
                included.len()
            )));
        }
        if !included.iter().any(|&b| b) {
            return Err(Error::EmptyDomain);
        }
        Ok(Self {
            origin,
            counts,
            widths,
            included,
        })
    }

    pub fn dimension(&self) -> usize {
        self.origin.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn included(&self) -> &[bool] {
        &self.included
    }

    pub fn cell_volume(&self) -> f64 {
        self.widths.iter().product()
    }

    pub fn measure(&self) -> f64 {
        self.included.iter().filter(|&&b| b).count() as f64 * self.cell_volume()
    }

    /// Boxes of the included cells, in cell order.
    pub fn included_cells(&self) -> Vec<AxisBox> {
        let d = self.dimension();
        let mut out = Vec::new();
        let mut index = vec![0usize; d];
        for flag in &self.included {
            if *flag {
                let lower: Vec<f64> = (0..d)
                    .map(|j| self.origin[j] + index[j] as f64 * self.widths[j])
                    .collect();
                let upper: Vec<f64> = (0..d).map(|j| lower[j] + self.widths[j]).collect();
                out.push(AxisBox { lower, upper });
            }
            advance(&mut index, &self.counts);
        }
        out
    }

    fn scaled(&self, factor: f64) -> GridMask {
        GridMask {
            origin: self.origin.iter().map(|x| x * factor).collect(),
            counts: self.counts.clone(),
            widths: self.widths.iter().map(|x| x * factor).collect(),
            included: self.included.clone(),
        }
    }
}

/// Increments a lexicographic multi-index (last axis fastest).
fn advance(index: &mut [usize], counts: &[usize]) {
    for j in (0..index.len()).rev() {
        index[j] += 1;
        if index[j] < counts[j] {
            return;
        }
        index[j] = 0;
    }
}

/// `Omega`, a subset of `R^d` with positive finite measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    dimension: usize,
    boxes: Vec<AxisBox>,
    mask: Option<GridMask>,
    measure: f64,
}

/// Box and mask measures must agree to this relative tolerance.
const REPRESENTATION_AGREEMENT: f64 = 1e-10;

impl Domain {
    /// Union of boxes with pairwise disjoint interiors.
    pub fn from_boxes(boxes: Vec<AxisBox>) -> Result<Self> {
        let first = boxes.first().ok_or(Error::EmptyDomain)?;
        let dimension = first.dimension();
        for b in &boxes {
            if b.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: b.dimension(),
                });
            }
        }
        for i in 0..boxes.len() {
            for j in (i + 1)..boxes.len() {
                if boxes[i].interiors_overlap(&boxes[j]) {
                    return Err(Error::OverlappingBoxes { first: i, second: j });
                }
            }
        }
        let measure = boxes.iter().map(AxisBox::volume).sum();
        Ok(Self {
            dimension,
            boxes,
            mask: None,
            measure,
        })
    }

    pub fn from_mask(mask: GridMask) -> Self {
        Self {
            dimension: mask.dimension(),
            boxes: Vec::new(),
            measure: mask.measure(),
            mask: Some(mask),
        }
    }

    /// Attaches a mask describing the same set as the boxes.
    pub fn with_mask(mut self, mask: GridMask) -> Result<Self> {
        if mask.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: mask.dimension(),
            });
        }
        let m = mask.measure();
        if (m - self.measure).abs() > REPRESENTATION_AGREEMENT * self.measure {
            return Err(Error::MeasureMismatch {
                boxes: self.measure,
                mask: m,
            });
        }
        self.mask = Some(mask);
        Ok(self)
    }

    pub fn unit_interval_centered() -> Self {
        Self::from_boxes(vec![AxisBox {
            lower: vec![-0.5],
            upper: vec![0.5],
        }])
        .expect("valid interval")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn mask(&self) -> Option<&GridMask> {
        self.mask.as_ref()
    }

    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn has_boxes(&self) -> bool {
        !self.boxes.is_empty()
    }

    /// Boxes covering `Omega`: the explicit boxes if present, otherwise the
    /// included mask cells.
    pub fn covering_boxes(&self) -> Vec<AxisBox> {
        if self.has_boxes() {
            self.boxes.clone()
        } else {
            self.mask.as_ref().map(GridMask::included_cells).unwrap_or_default()
        }
    }

    /// Isotropic rescaling about the origin so that `|Omega| = 1`.
    pub fn normalize(&self) -> Domain {
        let factor = libm::pow(self.measure, -1.0 / self.dimension as f64);
        let boxes: Vec<AxisBox> = self.boxes.iter().map(|b| b.scaled(factor)).collect();
        let mask = self.mask.as_ref().map(|m| m.scaled(factor));
        let measure = if !boxes.is_empty() {
            boxes.iter().map(AxisBox::volume).sum()
        } else {
            mask.as_ref().map(GridMask::measure).unwrap_or(0.0)
        };
        Domain {
            dimension: self.dimension,
            boxes,
            mask,
            measure,
        }
    }

    /// Midpoint rule with `nodes_per_axis` nodes per axis in every box (or
    /// included mask cell), ordered by box index then lexicographic
    /// multi-index.
    pub fn quadrature(&self, nodes_per_axis: usize) -> Result<QuadratureRule> {
        if nodes_per_axis == 0 {
            return Err(Error::InvalidArgument("nodes_per_axis must be positive".into()));
        }
        let d = self.dimension;
        let per_box = nodes_per_axis.pow(d as u32);
        let boxes = self.covering_boxes();
        let mut nodes = Vec::with_capacity(boxes.len() * per_box * d);
        let mut weights = Vec::with_capacity(boxes.len() * per_box);
        let counts = vec![nodes_per_axis; d];
        for b in &boxes {
            let h: Vec<f64> = (0..d).map(|j| (b.upper[j] - b.lower[j]) / nodes_per_axis as f64).collect();
            let w: f64 = h.iter().product();
            let mut index = vec![0usize; d];
            for _ in 0..per_box {
                for j in 0..d {
                    nodes.push(b.lower[j] + (index[j] as f64 + 0.5) * h[j]);
                }
                weights.push(w);
                advance(&mut index, &counts);
            }
        }
        Ok(QuadratureRule {
            dimension: d,
            nodes,
            weights,
        })
    }
}

/// Convenience wrapper for [`Domain::from_boxes`].
pub fn make_domain(boxes: Vec<AxisBox>) -> Result<Domain> {
    Domain::from_boxes(boxes)
}

/// Convenience wrapper for a mask-only [`Domain`].
pub fn make_mask_domain(
    origin: Vec<f64>,
    counts: Vec<usize>,
    widths: Vec<f64>,
    included: Vec<bool>,
) -> Result<Domain> {
    GridMask::new(origin, counts, widths, included).map(Domain::from_mask)
}

/// Nodes and positive weights; nodes are stored flat with stride `dimension`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    dimension: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dimension..(i + 1) * self.dimension]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        (0..self.len()).map(|i| self.weights[i] * f(self.node(i))).sum()
    }
}
