//! Device models and their MNA stamps.

use nalgebra::{DMatrix, DVector};

use crate::circuit::source::Waveform;

/// Node handle; `None` is ground (row and column eliminated).
pub type Node = Option<usize>;

/// Default diode saturation current in amperes.
pub const DIODE_IS_DEFAULT: f64 = 1e-14;
/// Default thermal voltage in volts.
pub const DIODE_VT_DEFAULT: f64 = 0.02585;
/// Default square-law transconductance in A/V^2.
pub const MOS_K_DEFAULT: f64 = 1e-3;
/// Default threshold voltage in volts.
pub const MOS_VT0_DEFAULT: f64 = 0.5;
/// Default rise/fall fraction of a pulse cycle.
pub const PULSE_RISE_DEFAULT: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub enum Device {
    Resistor {
        name: String,
        np: Node,
        nm: Node,
        value: f64,
    },
    Capacitor {
        name: String,
        np: Node,
        nm: Node,
        value: f64,
    },
    Inductor {
        name: String,
        np: Node,
        nm: Node,
        value: f64,
        branch: usize,
    },
    Diode {
        name: String,
        np: Node,
        nm: Node,
        i_sat: f64,
        v_thermal: f64,
    },
    /// Square-law NMOS (drain, gate, source); symmetric in drain/source.
    Mosfet {
        name: String,
        nd: Node,
        ng: Node,
        ns: Node,
        k: f64,
        vt0: f64,
    },
    VSource {
        name: String,
        np: Node,
        nm: Node,
        branch: usize,
        wave: Waveform,
    },
    ISource {
        name: String,
        np: Node,
        nm: Node,
        wave: Waveform,
    },
}

impl Device {
    pub fn name(&self) -> &str {
        match self {
            Device::Resistor { name, .. }
            | Device::Capacitor { name, .. }
            | Device::Inductor { name, .. }
            | Device::Diode { name, .. }
            | Device::Mosfet { name, .. }
            | Device::VSource { name, .. }
            | Device::ISource { name, .. } => name,
        }
    }

    pub fn wave(&self) -> Option<&Waveform> {
        match self {
            Device::VSource { wave, .. } | Device::ISource { wave, .. } => Some(wave),
            _ => None,
        }
    }
}

/// Exponential with a linear continuation above `u = 80` so diode Newton
/// iterates stay finite; C^1 at the switch point.
pub(crate) fn exp_limited(u: f64) -> (f64, f64) {
    const CAP: f64 = 80.0;
    if u <= CAP {
        let e = u.exp();
        (e, e)
    } else {
        let e = CAP.exp();
        (e * (1.0 + (u - CAP)), e)
    }
}

/// Workspace holding `q`, `g` and their Jacobians `C = dq/dx`, `G = dg/dx`.
#[derive(Debug, Clone)]
pub struct StampBuffer {
    pub q: DVector<f64>,
    pub g: DVector<f64>,
    pub c: DMatrix<f64>,
    pub gm: DMatrix<f64>,
}

impl StampBuffer {
    pub fn new(n: usize) -> Self {
        Self {
            q: DVector::zeros(n),
            g: DVector::zeros(n),
            c: DMatrix::zeros(n, n),
            gm: DMatrix::zeros(n, n),
        }
    }

    pub fn clear(&mut self) {
        self.q.fill(0.0);
        self.g.fill(0.0);
        self.c.fill(0.0);
        self.gm.fill(0.0);
    }
}

fn add_vec(v: &mut DVector<f64>, node: Node, val: f64) {
    if let Some(i) = node {
        v[i] += val;
    }
}

fn add_mat(m: &mut DMatrix<f64>, row: Node, col: Node, val: f64) {
    if let (Some(i), Some(j)) = (row, col) {
        m[(i, j)] += val;
    }
}

fn add_mat_idx(m: &mut DMatrix<f64>, row: Node, col: usize, val: f64) {
    if let Some(i) = row {
        m[(i, col)] += val;
    }
}

fn voltage(x: &DVector<f64>, node: Node) -> f64 {
    node.map_or(0.0, |i| x[i])
}

/// Stamp the conductance pattern `val * (v_p - v_m)` between two nodes.
fn stamp_two_node(
    vec: &mut DVector<f64>,
    mat: &mut DMatrix<f64>,
    np: Node,
    nm: Node,
    flow: f64,
    deriv: f64,
) {
    add_vec(vec, np, flow);
    add_vec(vec, nm, -flow);
    add_mat(mat, np, np, deriv);
    add_mat(mat, np, nm, -deriv);
    add_mat(mat, nm, np, -deriv);
    add_mat(mat, nm, nm, deriv);
}

impl Device {
    /// Accumulate the state-dependent parts `q`, `g`, `C`, `G` at `x`.
    /// `n_nodes` converts branch indices into matrix positions.
    pub(crate) fn stamp(&self, x: &DVector<f64>, n_nodes: usize, buf: &mut StampBuffer) {
        match *self {
            Device::Resistor { np, nm, value, .. } => {
                let v = voltage(x, np) - voltage(x, nm);
                stamp_two_node(&mut buf.g, &mut buf.gm, np, nm, v / value, 1.0 / value);
            }
            Device::Capacitor { np, nm, value, .. } => {
                let v = voltage(x, np) - voltage(x, nm);
                stamp_two_node(&mut buf.q, &mut buf.c, np, nm, value * v, value);
            }
            Device::Inductor {
                np, nm, value, branch, ..
            } => {
                let row = n_nodes + branch;
                let i_br = x[row];
                // node rows carry the branch current
                add_vec(&mut buf.g, np, i_br);
                add_vec(&mut buf.g, nm, -i_br);
                add_mat_idx(&mut buf.gm, np, row, 1.0);
                add_mat_idx(&mut buf.gm, nm, row, -1.0);
                // branch row: d/dt (L i) - (v_p - v_m) = 0
                buf.q[row] += value * i_br;
                buf.c[(row, row)] += value;
                buf.g[row] += voltage(x, nm) - voltage(x, np);
                if let Some(i) = np {
                    buf.gm[(row, i)] -= 1.0;
                }
                if let Some(i) = nm {
                    buf.gm[(row, i)] += 1.0;
                }
            }
            Device::Diode {
                np,
                nm,
                i_sat,
                v_thermal,
                ..
            } => {
                let v = voltage(x, np) - voltage(x, nm);
                let (e, de) = exp_limited(v / v_thermal);
                let current = i_sat * (e - 1.0);
                let conductance = i_sat * de / v_thermal;
                stamp_two_node(&mut buf.g, &mut buf.gm, np, nm, current, conductance);
            }
            Device::Mosfet {
                nd, ng, ns, k, vt0, ..
            } => {
                // symmetric square-law: swap terminals for negative vds
                let vds_raw = voltage(x, nd) - voltage(x, ns);
                let (d_eff, s_eff, sign) = if vds_raw >= 0.0 {
                    (nd, ns, 1.0)
                } else {
                    (ns, nd, -1.0)
                };
                let vgs = voltage(x, ng) - voltage(x, s_eff);
                let vds = voltage(x, d_eff) - voltage(x, s_eff);
                let vov = vgs - vt0;
                let (id, gm_t, gds) = if vov <= 0.0 {
                    (0.0, 0.0, 0.0)
                } else if vds < vov {
                    (k * (vov * vds - 0.5 * vds * vds), k * vds, k * (vov - vds))
                } else {
                    (0.5 * k * vov * vov, k * vov, 0.0)
                };
                let _ = sign;
                // current id flows d_eff -> s_eff
                add_vec(&mut buf.g, d_eff, id);
                add_vec(&mut buf.g, s_eff, -id);
                // d id/d vd = gds, d id/d vg = gm, d id/d vs = -(gds + gm)
                add_mat(&mut buf.gm, d_eff, d_eff, gds);
                add_mat(&mut buf.gm, d_eff, ng, gm_t);
                add_mat(&mut buf.gm, d_eff, s_eff, -(gds + gm_t));
                add_mat(&mut buf.gm, s_eff, d_eff, -gds);
                add_mat(&mut buf.gm, s_eff, ng, -gm_t);
                add_mat(&mut buf.gm, s_eff, s_eff, gds + gm_t);
            }
            Device::VSource { np, nm, branch, .. } => {
                let row = n_nodes + branch;
                let i_br = x[row];
                // positive branch current flows from n+ through the source to n-
                add_vec(&mut buf.g, np, i_br);
                add_vec(&mut buf.g, nm, -i_br);
                add_mat_idx(&mut buf.gm, np, row, 1.0);
                add_mat_idx(&mut buf.gm, nm, row, -1.0);
                // branch row: v_p - v_m - v_src(t) = 0; the waveform enters
                // through the source vector
                buf.g[row] += voltage(x, np) - voltage(x, nm);
                if let Some(i) = np {
                    buf.gm[(row, i)] += 1.0;
                }
                if let Some(i) = nm {
                    buf.gm[(row, i)] -= 1.0;
                }
            }
            Device::ISource { .. } => {}
        }
    }

    /// Accumulate this device's contribution to the source vector, with the
    /// waveform evaluated to `value`.
    pub(crate) fn stamp_source(&self, value: f64, n_nodes: usize, s: &mut DVector<f64>) {
        match *self {
            Device::VSource { branch, .. } => {
                s[n_nodes + branch] -= value;
            }
            Device::ISource { np, nm, .. } => {
                add_vec(s, np, value);
                add_vec(s, nm, -value);
            }
            _ => {}
        }
    }
}
