use ndarray::{Array1, Array2, ArrayView1, ArrayViewD, ArrayViewMut1, ArrayViewMutD};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dense::{Activation, Dense, Mlp};
use crate::encode::Quadruplet;
use crate::error::{Error, Result};
use crate::vectorize::Mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    Sum,
    /// Sum divided by the number of pooled messages; an empty set pools to
    /// zero.
    MaskedMean,
}

/// Weights of one layer.
///
/// Widths: node features `f`, edge features `f_e`, embedding `ω`, member
/// message `h_nd`, edge message `h_ed`.
///
/// * `phi_nd`:     `[x_v, x_u, Emb(u|v)]` (`2f + 3ω`) -> `h_nd`
/// * `phi_ed`:     `[x_v, e_ab, x_a * x_b, Emb(a,b|v)]` (`2f + f_e + 3ω`) -> `h_ed`
/// * `phi_nd_out`: `[x_v, pooled nd, pooled ed]` (`f + h_nd [+ h_ed]`) -> `f`
/// * `phi_ed_out`: pooled edge messages (`h_ed`) -> `f_e`
///
/// Node-centric parameters carry no edge tables and no edge maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EleneLParams {
    pub omega: usize,
    pub rho: usize,
    pub k: usize,
    pub mode: Mode,
    pub pooling: Pooling,
    /// Three `S x ω` tables, `S = (ρ + 1)(k + 1)`, indexed by
    /// `l (ρ + 1) + degree` for `d⁻¹`, `d` and `d⁺¹` respectively.
    pub w_nd: [Array2<f64>; 3],
    /// Three `3S x ω` tables indexed by `δ S + l (ρ + 1) + degree`.
    pub w_ed: Option<[Array2<f64>; 3]>,
    pub phi_nd: Mlp,
    pub phi_ed: Option<Mlp>,
    pub phi_nd_out: Mlp,
    pub phi_ed_out: Option<Mlp>,
    pub gamma_nd: f64,
    pub gamma_ed: f64,
}

/// Shape and initialisation choices for [`EleneLParams::random`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerConfig {
    pub node_width: usize,
    pub edge_width: usize,
    pub omega: usize,
    pub rho: usize,
    pub k: usize,
    pub mode: Mode,
    pub pooling: Pooling,
    pub hidden: usize,
    pub activation: Activation,
}

fn check_delta(l_a: u32, l_b: u32) -> Result<usize> {
    let delta = l_a as i64 - l_b as i64 + 1;
    if !(0..=2).contains(&delta) {
        return Err(Error::InvalidDelta(delta - 1));
    }
    Ok(delta as usize)
}

impl EleneLParams {
    /// Table rows `S = (ρ + 1)(k + 1)`.
    pub fn table_rows(&self) -> usize {
        (self.rho + 1) * (self.k + 1)
    }

    pub fn node_width(&self) -> usize {
        self.phi_nd_out.out_dim()
    }

    pub fn edge_width(&self) -> usize {
        self.phi_ed_out.as_ref().map_or(0, Mlp::out_dim)
    }

    pub fn random(cfg: &LayerConfig, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = (cfg.rho + 1) * (cfg.k + 1);
        let (f, fe, w, h) = (cfg.node_width, cfg.edge_width, cfg.omega, cfg.hidden);
        let table = |rows: usize, rng: &mut ChaCha8Rng| {
            Array2::from_shape_fn((rows, w), |_| rng.gen_range(-0.5..0.5))
        };
        let w_nd = [table(s, &mut rng), table(s, &mut rng), table(s, &mut rng)];
        let dense = |i: usize, o: usize, rng: &mut ChaCha8Rng| {
            Mlp::single(Dense::random(i, o, cfg.activation, rng))
        };
        let phi_nd = dense(2 * f + 3 * w, h, &mut rng);
        let (w_ed, phi_ed, phi_ed_out, out_in) = match cfg.mode {
            Mode::Nd => (None, None, None, f + h),
            Mode::Ed => (
                Some([
                    table(3 * s, &mut rng),
                    table(3 * s, &mut rng),
                    table(3 * s, &mut rng),
                ]),
                Some(dense(2 * f + fe + 3 * w, h, &mut rng)),
                Some(dense(h, fe, &mut rng)),
                f + 2 * h,
            ),
        };
        let phi_nd_out = dense(out_in, f, &mut rng);
        let p = Self {
            omega: w,
            rho: cfg.rho,
            k: cfg.k,
            mode: cfg.mode,
            pooling: cfg.pooling,
            w_nd,
            w_ed,
            phi_nd,
            phi_ed,
            phi_nd_out,
            phi_ed_out,
            gamma_nd: rng.gen_range(0.25..1.0),
            gamma_ed: rng.gen_range(0.25..1.0),
        };
        p.validate()?;
        Ok(p)
    }

    /// Checks table shapes and that every map's widths agree with the
    /// concatenations it consumes.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ShapeMismatch(msg));
        let s = self.table_rows();
        for t in &self.w_nd {
            if t.dim() != (s, self.omega) {
                return bad(format!("node table {:?}, expected {:?}", t.dim(), (s, self.omega)));
            }
        }
        let f = self.node_width();
        let h_nd = self.phi_nd.out_dim();
        if self.phi_nd.in_dim() != 2 * f + 3 * self.omega {
            return bad(format!("phi_nd takes {} inputs", self.phi_nd.in_dim()));
        }
        let mut out_in = f + h_nd;
        match (self.mode, &self.w_ed, &self.phi_ed, &self.phi_ed_out) {
            (Mode::Nd, None, None, None) => {}
            (Mode::Ed, Some(tables), Some(phi_ed), Some(phi_ed_out)) => {
                for t in tables {
                    if t.dim() != (3 * s, self.omega) {
                        return bad(format!("edge table {:?}", t.dim()));
                    }
                }
                let fe = phi_ed_out.out_dim();
                if phi_ed.in_dim() != 2 * f + fe + 3 * self.omega {
                    return bad(format!("phi_ed takes {} inputs", phi_ed.in_dim()));
                }
                if phi_ed_out.in_dim() != phi_ed.out_dim() {
                    return bad("phi_ed_out does not consume phi_ed's output".into());
                }
                out_in += phi_ed.out_dim();
            }
            (Mode::Nd, ..) => return bad("node-centric parameters carry edge maps".into()),
            (Mode::Ed, ..) => return bad("edge-centric parameters lack edge maps".into()),
        }
        if self.phi_nd_out.in_dim() != out_in {
            return bad(format!(
                "phi_nd_out takes {} inputs, expected {out_in}",
                self.phi_nd_out.in_dim()
            ));
        }
        Ok(())
    }

    fn cell(&self, l: u32, deg: u32) -> Result<usize> {
        let (l, deg) = (l as usize, deg as usize);
        if l > self.k || deg > self.rho {
            return Err(Error::OutOfLayout {
                l,
                deg,
                k: self.k,
                d_max: self.rho,
            });
        }
        Ok(l * (self.rho + 1) + deg)
    }

    /// Table rows of `q` for the `d⁻¹`, `d` and `d⁺¹` tables.
    pub(crate) fn node_rows(&self, q: &Quadruplet) -> Result<[usize; 3]> {
        Ok([
            self.cell(q.l, q.d_minus)?,
            self.cell(q.l, q.d)?,
            self.cell(q.l, q.d_plus)?,
        ])
    }

    /// Edge-table rows of both endpoints of an ego-network edge.
    pub(crate) fn edge_rows(&self, qa: &Quadruplet, qb: &Quadruplet) -> Result<[[usize; 3]; 2]> {
        let s = self.table_rows();
        let (dab, dba) = (check_delta(qa.l, qb.l)?, check_delta(qb.l, qa.l)?);
        let ra = self.node_rows(qa)?.map(|r| dab * s + r);
        let rb = self.node_rows(qb)?.map(|r| dba * s + r);
        Ok([ra, rb])
    }

    pub(crate) fn write_node_embedding(&self, rows: &[usize; 3], mut out: ArrayViewMut1<f64>) {
        let w = self.omega;
        for j in 0..3 {
            out.slice_mut(ndarray::s![j * w..(j + 1) * w])
                .assign(&self.w_nd[j].row(rows[j]));
        }
    }

    pub(crate) fn write_edge_embedding(&self, rows: &[[usize; 3]; 2], mut out: ArrayViewMut1<f64>) {
        let w = self.omega;
        let tables = self.w_ed.as_ref().expect("edge tables");
        for j in 0..3 {
            let mut dst = out.slice_mut(ndarray::s![j * w..(j + 1) * w]);
            dst.assign(&tables[j].row(rows[0][j]));
            dst += &tables[j].row(rows[1][j]);
        }
    }

    /// `[W¹[l, d⁻¹], W²[l, d], W³[l, d⁺¹]]`, length `3ω`.
    pub fn embed_node(&self, q: &Quadruplet) -> Result<Array1<f64>> {
        let rows = self.node_rows(q)?;
        let mut out = Array1::zeros(3 * self.omega);
        self.write_node_embedding(&rows, out.view_mut());
        Ok(out)
    }

    /// Symmetric embedding of an ego-network edge between members with
    /// quadruplets `qa` and `qb`.
    pub fn embed_edge(&self, qa: &Quadruplet, qb: &Quadruplet) -> Result<Array1<f64>> {
        if self.w_ed.is_none() {
            return Err(Error::ShapeMismatch("node-centric parameters have no edge tables".into()));
        }
        let rows = self.edge_rows(qa, qb)?;
        let mut out = Array1::zeros(3 * self.omega);
        self.write_edge_embedding(&rows, out.view_mut());
        Ok(out)
    }

    fn mlps(&self) -> impl Iterator<Item = &Mlp> {
        [Some(&self.phi_nd), self.phi_ed.as_ref(), Some(&self.phi_nd_out), self.phi_ed_out.as_ref()]
            .into_iter()
            .flatten()
    }

    fn mlps_mut(&mut self) -> impl Iterator<Item = &mut Mlp> {
        [
            Some(&mut self.phi_nd),
            self.phi_ed.as_mut(),
            Some(&mut self.phi_nd_out),
            self.phi_ed_out.as_mut(),
        ]
        .into_iter()
        .flatten()
    }

    /// Visits every trainable tensor in a fixed order: node tables, edge
    /// tables, each map's layers (weight then bias), `gamma_nd`, `gamma_ed`.
    pub fn visit(&self, f: &mut dyn FnMut(ArrayViewD<f64>)) {
        for t in self.w_nd.iter().chain(self.w_ed.iter().flatten()) {
            f(t.view().into_dyn());
        }
        for m in self.mlps() {
            for l in &m.layers {
                f(l.weight.view().into_dyn());
                f(l.bias.view().into_dyn());
            }
        }
        f(ArrayView1::from(std::slice::from_ref(&self.gamma_nd)).into_dyn());
        f(ArrayView1::from(std::slice::from_ref(&self.gamma_ed)).into_dyn());
    }

    pub fn visit_mut(&mut self, f: &mut dyn FnMut(ArrayViewMutD<f64>)) {
        for t in self.w_nd.iter_mut().chain(self.w_ed.iter_mut().flatten()) {
            f(t.view_mut().into_dyn());
        }
        for m in self.mlps_mut() {
            for l in &mut m.layers {
                f(l.weight.view_mut().into_dyn());
                f(l.bias.view_mut().into_dyn());
            }
        }
        f(ArrayViewMut1::from(std::slice::from_mut(&mut self.gamma_nd)).into_dyn());
        f(ArrayViewMut1::from(std::slice::from_mut(&mut self.gamma_ed)).into_dyn());
    }

    /// All trainable values in [`visit`](Self::visit) order.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.visit(&mut |t| out.extend(t.iter().copied()));
        out
    }

    pub fn set_values(&mut self, values: &[f64]) -> Result<()> {
        let expected = self.values().len();
        if values.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {expected} parameters",
                values.len()
            )));
        }
        let mut it = values.iter();
        self.visit_mut(&mut |mut t| {
            for x in t.iter_mut() {
                *x = *it.next().expect("length checked");
            }
        });
        Ok(())
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        z.visit_mut(&mut |mut t| t.fill(0.0));
        z
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        let vals = other.values();
        let mut it = vals.iter();
        self.visit_mut(&mut |mut t| {
            for x in t.iter_mut() {
                *x += it.next().expect("same shapes");
            }
        });
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        p.validate()?;
        Ok(p)
    }
}
