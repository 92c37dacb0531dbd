//! Exact rational oracles for the acceptance suite.
//!
//! Everything here is rebuilt from first principles in `Ratio<i64>`
//! arithmetic: face force entries come from symbolic integration of
//! polynomial products, the flexibility matrix from closed-form monomial
//! moments, and the mode matrices from their defining tables evaluated at
//! rational corner coordinates. None of it calls into the library's
//! floating-point construction, so agreement is evidence, not tautology.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

pub type R = Ratio<i64>;

pub fn rat(n: i64, d: i64) -> R {
    Ratio::new(n, d)
}

pub fn to_f64(v: R) -> f64 {
    v.to_f64().expect("rational fits in f64")
}

/// Corner signs in the library's node order.
#[rustfmt::skip]
pub const NODE_SIGNS: [[i64; 3]; 8] = [
    [-1, -1, -1],
    [ 1, -1, -1],
    [ 1,  1, -1],
    [-1,  1, -1],
    [-1, -1,  1],
    [ 1, -1,  1],
    [ 1,  1,  1],
    [-1,  1,  1],
];

/// (stress row, natural exponents) for the 18 amplitude columns, in the
/// library's column order.
#[rustfmt::skip]
pub const STRESS_COLUMNS: [(usize, [u32; 3]); 18] = [
    (0, [0, 0, 0]), (0, [0, 1, 0]), (0, [0, 0, 1]), (0, [0, 1, 1]),
    (1, [0, 0, 0]), (1, [1, 0, 0]), (1, [0, 0, 1]), (1, [1, 0, 1]),
    (2, [0, 0, 0]), (2, [1, 0, 0]), (2, [0, 1, 0]), (2, [1, 1, 0]),
    (3, [0, 0, 0]), (3, [0, 0, 1]),
    (4, [0, 0, 0]), (4, [1, 0, 0]),
    (5, [0, 0, 0]), (5, [0, 1, 0]),
];

pub fn voigt_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (1, 2) => 4,
        (0, 2) => 5,
        _ => unreachable!("axes run over 0..3"),
    }
}

/// integral of t^k over [-1, 1]: zero for odd k, 2/(k+1) for even k.
pub fn monomial_integral(k: u32) -> R {
    if k % 2 == 1 {
        R::zero()
    } else {
        rat(2, k as i64 + 1)
    }
}

/// integral of (1 + s t)/2 * t^e over [-1, 1], by expanding the product.
pub fn shape_moment(e: u32, s: i64) -> R {
    (monomial_integral(e) + R::from_integer(s) * monomial_integral(e + 1)) / 2
}

/// Dense rational matrix with naive operations; sizes here are tiny.
#[derive(Clone, PartialEq)]
pub struct RMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<R>,
}

impl RMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            data: vec![R::zero(); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> R {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &RMatrix) -> RMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = R::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}

/// Rational edge lengths (full lengths along x, y, z).
#[derive(Clone, Copy)]
pub struct REdges(pub [R; 3]);

impl REdges {
    pub fn of_integers(a: i64, b: i64, c: i64) -> Self {
        REdges([R::from_integer(a), R::from_integer(b), R::from_integer(c)])
    }
}

/// Work-equivalent nodal forces of the unit stress amplitudes on one face,
/// from symbolic integration: rows are (node in `nodes` order) x 3 force
/// components, columns the 18 amplitudes.
pub fn face_block(
    normal_axis: usize,
    normal_sign: i64,
    in_plane: [usize; 2],
    nodes: [usize; 4],
    edges: REdges,
) -> RMatrix {
    let [p, q] = in_plane;
    let jac = edges.0[p] * edges.0[q] / 4;
    let mut block = RMatrix::zeros(12, 18);
    for (fi, &node) in nodes.iter().enumerate() {
        let signs = NODE_SIGNS[node];
        for (col, &(row, exps)) in STRESS_COLUMNS.iter().enumerate() {
            let Some(d) = (0..3).find(|&d| voigt_index(d, normal_axis) == row) else {
                continue;
            };
            // the normal coordinate is pinned to the face sign
            let pinned = R::from_integer(normal_sign.pow(exps[normal_axis]));
            let v = R::from_integer(normal_sign)
                * pinned
                * jac
                * shape_moment(exps[p], signs[p])
                * shape_moment(exps[q], signs[q]);
            block.set(3 * fi + d, col, v);
        }
    }
    block
}

/// 12x24 higher-order projector at rational corner coordinates.
pub fn projector(edges: REdges) -> RMatrix {
    let [a, b, c] = edges.0;
    let (ab, ac, bc, abc) = (a * b / 4, a * c / 4, b * c / 4, a * b * c / 8);
    let mut h = RMatrix::zeros(12, 24);
    for (node, s) in NODE_SIGNS.iter().enumerate() {
        let (sx, sy, sz) = (s[0], s[1], s[2]);
        let pab = R::from_integer(sx * sy) * ab;
        let pac = R::from_integer(sx * sz) * ac;
        let pbc = R::from_integer(sy * sz) * bc;
        let t = R::from_integer(sx * sy * sz) * abc;
        for (row, v) in [(0, -pab), (1, -pac), (6, pbc), (9, t)] {
            h.set(row, 3 * node, v);
        }
        for (row, v) in [(2, -pab), (3, -pbc), (7, pac), (10, t)] {
            h.set(row, 3 * node + 1, v);
        }
        for (row, v) in [(4, -pac), (5, -pbc), (8, pab), (11, t)] {
            h.set(row, 3 * node + 2, v);
        }
    }
    h
}

/// 24x12 rigid and constant-strain modes at rational corner coordinates.
pub fn basic_modes(edges: REdges) -> RMatrix {
    let mut g = RMatrix::zeros(24, 12);
    for (node, s) in NODE_SIGNS.iter().enumerate() {
        let x = R::from_integer(s[0]) * edges.0[0] / 2;
        let y = R::from_integer(s[1]) * edges.0[1] / 2;
        let z = R::from_integer(s[2]) * edges.0[2] / 2;
        let zero = R::zero();
        let one = R::from_integer(1);
        #[rustfmt::skip]
        let patterns: [[R; 3]; 12] = [
            [one, zero, zero],
            [zero, one, zero],
            [zero, zero, one],
            [zero, -z, y],
            [z, zero, -x],
            [-y, x, zero],
            [x, zero, zero],
            [zero, y, zero],
            [zero, zero, z],
            [y / 2, x / 2, zero],
            [zero, z / 2, y / 2],
            [z / 2, zero, x / 2],
        ];
        for (col, pat) in patterns.iter().enumerate() {
            for (d, value) in pat.iter().enumerate() {
                g.set(3 * node + d, col, *value);
            }
        }
    }
    g
}

/// Rational compliance matrix for unit Young's modulus and rational nu.
pub fn compliance(nu: R) -> RMatrix {
    let one = R::from_integer(1);
    let mut c = RMatrix::zeros(6, 6);
    for i in 0..3 {
        for j in 0..3 {
            c.set(i, j, if i == j { one } else { -nu });
        }
    }
    for i in 3..6 {
        c.set(i, i, (one + nu) * 2);
    }
    c
}

/// 18x18 flexibility for unit Young's modulus by exact monomial moments:
/// F_ij = C_{v_i v_j} (V/8) prod_axis integral of t^(e_i + e_j).
pub fn flexibility(edges: REdges, nu: R) -> RMatrix {
    let c = compliance(nu);
    let [a, b, evc] = edges.0;
    let v8 = a * b * evc / 8;
    let mut f = RMatrix::zeros(18, 18);
    for (i, &(ri, ei)) in STRESS_COLUMNS.iter().enumerate() {
        for (j, &(rj, ej)) in STRESS_COLUMNS.iter().enumerate() {
            let mut moment = v8;
            for ax in 0..3 {
                moment *= monomial_integral(ei[ax] + ej[ax]);
            }
            f.set(i, j, c.get(ri, rj) * moment);
        }
    }
    f
}
