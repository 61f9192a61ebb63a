//! Multi-controlled gate expansions over explicit wires.

use std::f64::consts::FRAC_PI_4;

use super::LowerError;
use crate::circuit::{Circuit, Gate, GateKind};

/// The 15-gate Toffoli: 6 CNOT, 2 H, 7 T/Tdg.
pub fn toffoli(c0: usize, c1: usize, t: usize) -> Vec<Gate> {
    vec![
        Gate::h(t),
        Gate::cnot(c1, t),
        Gate::tdg(t),
        Gate::cnot(c0, t),
        Gate::t(t),
        Gate::cnot(c1, t),
        Gate::tdg(t),
        Gate::cnot(c0, t),
        Gate::t(c1),
        Gate::t(t),
        Gate::h(t),
        Gate::cnot(c0, c1),
        Gate::t(c0),
        Gate::tdg(c1),
        Gate::cnot(c0, c1),
    ]
}

fn cx(controls: Vec<usize>, target: usize) -> Gate {
    if controls.len() == 1 {
        Gate::cnot(controls[0], target)
    } else {
        Gate::cx_multi(controls, target).expect("distinct wires")
    }
}

/// One level of the `C^cX` expansion, leaving `C^{c-1}X` sub-gates in place.
///
/// `c = 2` gives [`toffoli`]. For `c >= 3`, with `a = controls[0]`, `k` the
/// last control and `B` the ones in between, the network is
///
/// ```text
/// H t; T a; T t; C^B T(k); CX(B,k; a); Tdg a; CX(B,k; t); Tdg t; CX(B,t; a);
/// Tdg a; CX(B,k; a); T a; CX(B,t; a); CX(B,k; t); H t
/// ```
///
/// For three controls that is 6 Toffolis, 1 CT, 2 H and 6 T/Tdg.
pub fn cnx_network(controls: &[usize], target: usize) -> Result<Vec<Gate>, LowerError> {
    let c = controls.len();
    if c < 2 {
        return Err(LowerError::TooFewControls { needed: 2, got: c });
    }
    if c == 2 {
        return Ok(toffoli(controls[0], controls[1], target));
    }
    let (a, k, t) = (controls[0], controls[c - 1], target);
    let mid = &controls[1..c - 1];
    let with = |extra: usize| -> Vec<usize> { mid.iter().copied().chain([extra]).collect() };
    let ct = if mid.len() == 1 {
        Gate::cps(FRAC_PI_4, mid[0], k)
    } else {
        Gate::cps_multi(FRAC_PI_4, mid.to_vec(), k).expect("distinct wires")
    };
    Ok(vec![
        Gate::h(t),
        Gate::t(a),
        Gate::t(t),
        ct,
        cx(with(k), a),
        Gate::tdg(a),
        cx(with(k), t),
        Gate::tdg(t),
        cx(with(t), a),
        Gate::tdg(a),
        cx(with(k), a),
        Gate::t(a),
        cx(with(t), a),
        cx(with(k), t),
        Gate::h(t),
    ])
}

/// `C^c PS(theta)` as `2^c - 1` controlled `PS(+-theta / 2^{c-1})` gates and
/// `2^c - 2` CNOTs.
///
/// Walks the reflected Gray code over the controls. The wire of the highest
/// set bit accumulates the parity of the current subset; each subset adds a
/// controlled phase onto the target, positive for odd size and negative for
/// even. Every control is restored at the end.
pub fn vchain(controls: &[usize], target: usize, theta: f64) -> Vec<Gate> {
    let c = controls.len();
    assert!(c >= 1, "vchain needs at least one control");
    let unit = theta / (1u64 << (c - 1)) as f64;
    let mut out = Vec::with_capacity((1 << (c + 1)) - 3);
    let mut prev = 0usize;
    for i in 1..(1usize << c) {
        let g = i ^ (i >> 1);
        let h = usize::BITS as usize - 1 - g.leading_zeros() as usize;
        let changed = (g ^ prev).trailing_zeros() as usize;
        if changed != h {
            out.push(Gate::cnot(controls[changed], controls[h]));
        } else {
            for b in (0..h).filter(|b| g >> b & 1 == 1) {
                out.push(Gate::cnot(controls[b], controls[h]));
            }
        }
        let sign = if g.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        out.push(Gate::cps(sign * unit, controls[h], target));
        prev = g;
    }
    out
}

/// Full expansion of `C^cX` to the 1- and 2-qubit basis.
pub fn expand_cnx(controls: &[usize], target: usize) -> Vec<Gate> {
    match controls.len() {
        0 => vec![Gate::x(target)],
        1 => vec![Gate::cnot(controls[0], target)],
        _ => cnx_network(controls, target)
            .expect("two or more controls")
            .into_iter()
            .flat_map(expand_gate)
            .collect(),
    }
}

/// Expands one gate to the basis; basis gates pass through.
pub fn expand_gate(g: Gate) -> Vec<Gate> {
    match g.kind() {
        GateKind::CxMulti => expand_cnx(g.controls(), g.target()),
        GateKind::CpsMulti(theta) => vchain(g.controls(), g.target(), theta),
        _ => vec![g],
    }
}

/// `C^cX` on `c + 1` wires (controls `0..c`, target `c`), fully expanded.
pub fn decompose_cnx(n_controls: usize) -> Result<Circuit, LowerError> {
    if n_controls < 2 {
        return Err(LowerError::TooFewControls {
            needed: 2,
            got: n_controls,
        });
    }
    let controls: Vec<usize> = (0..n_controls).collect();
    let mut c = Circuit::new(n_controls + 1);
    c.extend(expand_cnx(&controls, n_controls))?;
    Ok(c)
}

/// `C^c PS(theta)` on `c + 1` wires (controls `0..c`, target `c`).
pub fn decompose_cnu_vchain(n_controls: usize, theta: f64) -> Result<Circuit, LowerError> {
    if n_controls < 1 {
        return Err(LowerError::TooFewControls {
            needed: 1,
            got: n_controls,
        });
    }
    let controls: Vec<usize> = (0..n_controls).collect();
    let mut c = Circuit::new(n_controls + 1);
    c.extend(vchain(&controls, n_controls, theta))?;
    Ok(c)
}
