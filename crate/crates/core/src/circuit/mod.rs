//! Netlist parsing, device stamps and MNA assembly.
//!
//! The state vector `x` holds the non-ground node voltages in first
//! appearance order followed by one branch current per voltage source and
//! inductor. The charge/flux-oriented equations are
//! `d/dt q(x) + g(x) + s(t) = 0`.

mod device;
mod parse;
mod source;

pub use device::{Device, Node, StampBuffer};
pub use parse::parse_netlist;
pub use source::{MultiRateContext, SourceRole, Waveform};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Parsed circuit with deterministic variable ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    node_names: Vec<String>,
    devices: Vec<Device>,
    n_branches: usize,
    /// Small conductance from every node to ground; regularizes floating
    /// nodes the way any MNA simulator does. Zero disables it.
    gmin: f64,
}

impl Circuit {
    /// System dimension: node voltages plus branch currents.
    pub fn dim(&self) -> usize {
        self.node_names.len() + self.n_branches
    }

    pub fn num_nodes(&self) -> usize {
        self.node_names.len()
    }

    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    pub fn gmin(&self) -> f64 {
        self.gmin
    }

    pub fn set_gmin(&mut self, gmin: f64) {
        self.gmin = gmin;
    }

    /// Index of a named node voltage variable.
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.node_names.iter().position(|n| n == name)
    }

    /// Human-readable name per state variable: `v(node)` then `i(device)`.
    pub fn variable_names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.node_names.iter().map(|n| format!("v({n})")).collect();
        for d in &self.devices {
            match d {
                Device::VSource { name, .. } | Device::Inductor { name, .. } => {
                    out.push(format!("i({name})"));
                }
                _ => {}
            }
        }
        out
    }

    /// Resolve an export name (`node` or `v(node)` / `i(dev)`) to a state index.
    pub fn variable_index(&self, name: &str) -> Result<usize> {
        if let Some(i) = self.node_index(name) {
            return Ok(i);
        }
        let names = self.variable_names();
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Accumulate `q`, `g`, `C`, `G` at state `x` into `buf`.
    pub fn stamp_into(&self, x: &DVector<f64>, buf: &mut StampBuffer) -> Result<()> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite state vector".into()));
        }
        buf.clear();
        let n_nodes = self.num_nodes();
        for d in &self.devices {
            d.stamp(x, n_nodes, buf);
        }
        if self.gmin > 0.0 {
            for i in 0..n_nodes {
                buf.g[i] += self.gmin * x[i];
                buf.gm[(i, i)] += self.gmin;
            }
        }
        Ok(())
    }

    /// Source vector of the univariate equations at absolute time `t`.
    pub fn source_univariate_into(&self, t: f64, s: &mut DVector<f64>) {
        s.fill(0.0);
        let n_nodes = self.num_nodes();
        for d in &self.devices {
            if let Some(w) = d.wave() {
                d.stamp_source(w.univariate(t), n_nodes, s);
            }
        }
    }

    /// Bivariate source vector and (optionally) its fast-time derivative.
    pub fn source_bivariate_into(
        &self,
        ctx: &MultiRateContext,
        tau: f64,
        t_fast: f64,
        s: &mut DVector<f64>,
        mut ds_dt: Option<&mut DVector<f64>>,
    ) {
        s.fill(0.0);
        if let Some(d) = ds_dt.as_deref_mut() {
            d.fill(0.0);
        }
        let n_nodes = self.num_nodes();
        for dev in &self.devices {
            if let Some(w) = dev.wave() {
                let (v, dv) = w.bivariate(ctx, tau, t_fast);
                dev.stamp_source(v, n_nodes, s);
                if let Some(d) = ds_dt.as_deref_mut() {
                    dev.stamp_source(dv, n_nodes, d);
                }
            }
        }
    }

    /// Bivariate source vector at a shifted fast time `t + sigma`.
    pub fn source_shifted_into(
        &self,
        ctx: &MultiRateContext,
        tau: f64,
        t_fast: f64,
        sigma: f64,
        s: &mut DVector<f64>,
    ) {
        self.source_bivariate_into(ctx, tau, t_fast + sigma, s, None);
    }

    /// One-call assembly of all five quantities at `(x, t)`.
    #[allow(clippy::type_complexity)]
    pub fn assemble(
        &self,
        x: &DVector<f64>,
        t: f64,
    ) -> Result<(DVector<f64>, DVector<f64>, DVector<f64>, DMatrix<f64>, DMatrix<f64>)> {
        let mut buf = StampBuffer::new(self.dim());
        self.stamp_into(x, &mut buf)?;
        let mut s = DVector::zeros(self.dim());
        self.source_univariate_into(t, &mut s);
        Ok((buf.q, buf.g, s, buf.c, buf.gm))
    }

    /// Carrier frequency of the first fast source, if any (used to default
    /// the fast period).
    pub fn fast_carrier_freq(&self) -> Option<f64> {
        self.devices.iter().find_map(|d| d.wave().and_then(|w| w.fast_freq()))
    }

    /// Canonical netlist text; parsing it back yields an identical circuit.
    pub fn unparse(&self) -> String {
        let name = |n: Node| -> String {
            match n {
                None => "0".to_string(),
                Some(i) => self.node_names[i].clone(),
            }
        };
        let role = |r: SourceRole| match r {
            SourceRole::Fast => "fast",
            SourceRole::Slow => "slow",
        };
        let wave_text = |w: &Waveform| -> String {
            match w {
                Waveform::Dc { value } => format!("DC {value}"),
                Waveform::Sin {
                    offset,
                    amplitude,
                    freq,
                    role: r,
                } => format!("SIN({offset} {amplitude} {freq} {})", role(*r)),
                Waveform::FmSin {
                    offset,
                    amplitude,
                    f_center,
                    f_dev,
                    f_mod,
                } => format!("FMSIN({offset} {amplitude} {f_center} {f_dev} {f_mod})"),
                Waveform::Pulse {
                    low,
                    high,
                    freq,
                    rise_frac,
                    role: r,
                } => format!("PULSE({low} {high} {freq} {rise_frac} {})", role(*r)),
                Waveform::AmProduct { .. } => {
                    // not expressible in the grammar; placeholder comment
                    "DC 0".to_string()
                }
            }
        };
        let mut out = String::new();
        for d in &self.devices {
            let line = match d {
                Device::Resistor { name: n, np, nm, value } => {
                    format!("{n} {} {} {value}", name(*np), name(*nm))
                }
                Device::Capacitor { name: n, np, nm, value } => {
                    format!("{n} {} {} {value}", name(*np), name(*nm))
                }
                Device::Inductor { name: n, np, nm, value, .. } => {
                    format!("{n} {} {} {value}", name(*np), name(*nm))
                }
                Device::Diode {
                    name: n,
                    np,
                    nm,
                    i_sat,
                    v_thermal,
                } => format!("{n} {} {} IS={i_sat} VT={v_thermal}", name(*np), name(*nm)),
                Device::Mosfet {
                    name: n,
                    nd,
                    ng,
                    ns,
                    k,
                    vt0,
                } => format!("{n} {} {} {} K={k} VT0={vt0}", name(*nd), name(*ng), name(*ns)),
                Device::VSource { name: n, np, nm, wave, .. }
                | Device::ISource { name: n, np, nm, wave } => {
                    format!("{n} {} {} {}", name(*np), name(*nm), wave_text(wave))
                }
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Programmatic circuit construction (used by the parser and by tests).
#[derive(Debug, Default)]
pub struct CircuitBuilder {
    node_names: Vec<String>,
    devices: Vec<Device>,
    n_branches: usize,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Intern a node name; `"0"` is ground.
    pub fn node(&mut self, name: &str) -> Node {
        if name == "0" {
            return None;
        }
        if let Some(i) = self.node_names.iter().position(|n| n == name) {
            return Some(i);
        }
        self.node_names.push(name.to_string());
        Some(self.node_names.len() - 1)
    }

    pub fn resistor(&mut self, name: &str, np: Node, nm: Node, value: f64) -> &mut Self {
        self.devices.push(Device::Resistor {
            name: name.into(),
            np,
            nm,
            value,
        });
        self
    }

    pub fn capacitor(&mut self, name: &str, np: Node, nm: Node, value: f64) -> &mut Self {
        self.devices.push(Device::Capacitor {
            name: name.into(),
            np,
            nm,
            value,
        });
        self
    }

    pub fn inductor(&mut self, name: &str, np: Node, nm: Node, value: f64) -> &mut Self {
        let branch = self.n_branches;
        self.n_branches += 1;
        self.devices.push(Device::Inductor {
            name: name.into(),
            np,
            nm,
            value,
            branch,
        });
        self
    }

    pub fn diode(&mut self, name: &str, np: Node, nm: Node, i_sat: f64, v_thermal: f64) -> &mut Self {
        self.devices.push(Device::Diode {
            name: name.into(),
            np,
            nm,
            i_sat,
            v_thermal,
        });
        self
    }

    pub fn mosfet(&mut self, name: &str, nd: Node, ng: Node, ns: Node, k: f64, vt0: f64) -> &mut Self {
        self.devices.push(Device::Mosfet {
            name: name.into(),
            nd,
            ng,
            ns,
            k,
            vt0,
        });
        self
    }

    pub fn vsource(&mut self, name: &str, np: Node, nm: Node, wave: Waveform) -> &mut Self {
        let branch = self.n_branches;
        self.n_branches += 1;
        self.devices.push(Device::VSource {
            name: name.into(),
            np,
            nm,
            branch,
            wave,
        });
        self
    }

    pub fn isource(&mut self, name: &str, np: Node, nm: Node, wave: Waveform) -> &mut Self {
        self.devices.push(Device::ISource {
            name: name.into(),
            np,
            nm,
            wave,
        });
        self
    }

    pub fn build(self) -> Result<Circuit> {
        if self.devices.is_empty() {
            return Err(Error::EmptyCircuit);
        }
        Ok(Circuit {
            node_names: self.node_names,
            devices: self.devices,
            n_branches: self.n_branches,
            gmin: 1e-12,
        })
    }
}
