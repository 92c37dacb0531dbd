//! Rectangular 8-node brick geometry.
//!
//! The element is an axis-aligned box with full edge lengths `a x b x c`,
//! centred at the origin. Natural coordinates (xi, eta, mu) live in [-1, 1]^3
//! and map to physical coordinates by x = xi a/2, y = eta b/2, z = mu c/2.
//! Corner numbering follows the sign table (nodes stored 0-based, so node 1
//! of the traditional 1-based numbering is index 0):
//!
//! ```text
//! node (1-based):  1  2  3  4  5  6  7  8
//! xi:              -  +  +  -  -  +  +  -
//! eta:             -  -  +  +  -  -  +  +
//! mu:              -  -  -  -  +  +  +  +
//! ```

use crate::error::GeometryError;

pub const NODE_COUNT: usize = 8;
pub const DOF_COUNT: usize = 24;

/// Corner signs (xi_i, eta_i, mu_i), one row per node.
#[rustfmt::skip]
pub const NODE_SIGNS: [[f64; 3]; NODE_COUNT] = [
    [-1.0, -1.0, -1.0],
    [ 1.0, -1.0, -1.0],
    [ 1.0,  1.0, -1.0],
    [-1.0,  1.0, -1.0],
    [-1.0, -1.0,  1.0],
    [ 1.0, -1.0,  1.0],
    [ 1.0,  1.0,  1.0],
    [-1.0,  1.0,  1.0],
];

/// Axis-aligned brick with full edge lengths along x, y, z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrickGeometry {
    a: f64,
    b: f64,
    c: f64,
}

impl BrickGeometry {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeometryError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(a) && ok(b) && ok(c) {
            Ok(Self { a, b, c })
        } else {
            Err(GeometryError::InvalidEdgeLengths { a, b, c })
        }
    }

    pub fn unit_cube() -> Self {
        Self {
            a: 1.0,
            b: 1.0,
            c: 1.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Edge length along axis 0, 1 or 2.
    pub fn edge(&self, axis: usize) -> f64 {
        [self.a, self.b, self.c][axis]
    }

    /// Geometry with one edge replaced, used by aspect-ratio sweeps.
    pub fn with_edge(&self, axis: usize, length: f64) -> Result<Self, GeometryError> {
        let mut e = [self.a, self.b, self.c];
        e[axis] = length;
        Self::new(e[0], e[1], e[2])
    }

    pub fn volume(&self) -> f64 {
        self.a * self.b * self.c
    }

    /// Physical coordinates of a corner node.
    pub fn node_coords(&self, node: usize) -> [f64; 3] {
        assert!(node < NODE_COUNT, "node index {node} out of range");
        let s = NODE_SIGNS[node];
        [
            s[0] * self.a / 2.0,
            s[1] * self.b / 2.0,
            s[2] * self.c / 2.0,
        ]
    }
}

/// Point in the natural coordinate cube [-1, 1]^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalPoint {
    pub xi: f64,
    pub eta: f64,
    pub mu: f64,
}

impl NaturalPoint {
    pub fn new(xi: f64, eta: f64, mu: f64) -> Result<Self, GeometryError> {
        let ok = |v: f64| (-1.0..=1.0).contains(&v);
        if ok(xi) && ok(eta) && ok(mu) {
            Ok(Self { xi, eta, mu })
        } else {
            Err(GeometryError::NaturalPointOutOfRange { xi, eta, mu })
        }
    }

    pub fn center() -> Self {
        Self {
            xi: 0.0,
            eta: 0.0,
            mu: 0.0,
        }
    }

    /// Natural coordinates of a corner node.
    pub fn corner(node: usize) -> Self {
        assert!(node < NODE_COUNT, "node index {node} out of range");
        let s = NODE_SIGNS[node];
        Self {
            xi: s[0],
            eta: s[1],
            mu: s[2],
        }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.xi, self.eta, self.mu]
    }
}

/// Trilinear shape function of one node: N_i = (1 + xi_i xi)(1 + eta_i eta)(1 + mu_i mu)/8.
pub fn shape_function(node: usize, p: NaturalPoint) -> f64 {
    assert!(node < NODE_COUNT, "node index {node} out of range");
    let s = NODE_SIGNS[node];
    (1.0 + s[0] * p.xi) * (1.0 + s[1] * p.eta) * (1.0 + s[2] * p.mu) / 8.0
}

/// All eight shape functions at a point. They form a partition of unity.
pub fn shape_functions(p: NaturalPoint) -> [f64; NODE_COUNT] {
    core::array::from_fn(|i| shape_function(i, p))
}

/// One of the six brick faces, named by its fixed natural axis and sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceId {
    XiPlus,
    XiMinus,
    EtaPlus,
    EtaMinus,
    MuPlus,
    MuMinus,
}

impl FaceId {
    pub const ALL: [FaceId; 6] = [
        FaceId::XiPlus,
        FaceId::XiMinus,
        FaceId::EtaPlus,
        FaceId::EtaMinus,
        FaceId::MuPlus,
        FaceId::MuMinus,
    ];

    /// Index of the natural axis held fixed on this face.
    pub fn normal_axis(&self) -> usize {
        match self {
            FaceId::XiPlus | FaceId::XiMinus => 0,
            FaceId::EtaPlus | FaceId::EtaMinus => 1,
            FaceId::MuPlus | FaceId::MuMinus => 2,
        }
    }

    /// Sign of the fixed coordinate; equals the outward normal direction.
    pub fn normal_sign(&self) -> f64 {
        match self {
            FaceId::XiPlus | FaceId::EtaPlus | FaceId::MuPlus => 1.0,
            _ => -1.0,
        }
    }

    /// The two in-plane axes in cyclic order after the normal axis.
    pub fn in_plane_axes(&self) -> [usize; 2] {
        let k = self.normal_axis();
        [(k + 1) % 3, (k + 2) % 3]
    }

    /// Corner nodes of the face, counterclockwise around the in-plane axes
    /// starting from the corner where both in-plane signs are negative.
    pub fn nodes(&self) -> [usize; 4] {
        let k = self.normal_axis();
        let s = self.normal_sign();
        let [p, q] = self.in_plane_axes();
        // corner order (-,-), (+,-), (+,+), (-,+) in the (p, q) plane
        const CORNERS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        CORNERS.map(|pq| {
            let mut signs = [0.0; 3];
            signs[k] = s;
            signs[p] = pq[0];
            signs[q] = pq[1];
            NODE_SIGNS
                .iter()
                .position(|n| *n == signs)
                .expect("every sign triple names a corner")
        })
    }

    /// Outward unit normal in physical coordinates.
    pub fn outward_normal(&self) -> [f64; 3] {
        let mut n = [0.0; 3];
        n[self.normal_axis()] = self.normal_sign();
        n
    }

    /// Constant surface Jacobian dA/(ds dt): a quarter of the face area.
    pub fn jacobian(&self, g: &BrickGeometry) -> f64 {
        let [p, q] = self.in_plane_axes();
        g.edge(p) * g.edge(q) / 4.0
    }

    /// Face area in physical units.
    pub fn area(&self, g: &BrickGeometry) -> f64 {
        4.0 * self.jacobian(g)
    }
}
