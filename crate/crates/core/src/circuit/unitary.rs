//! Dense unitaries for small registers, and equivalence modulo global phase.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{Circuit, CircuitError, Gate};

pub type Unitary = DMatrix<Complex64>;

/// Largest register for which a dense unitary is built.
pub const MAX_UNITARY_QUBITS: usize = 10;

fn check_width(n: usize) -> Result<(), CircuitError> {
    if n > MAX_UNITARY_QUBITS {
        Err(CircuitError::TooWide(n))
    } else {
        Ok(())
    }
}

/// Full `2^n x 2^n` matrix of one gate. Row `r` couples to the two basis
/// states that agree with `r` off the target bit, and only when every control
/// bit of `r` is set.
pub fn gate_matrix(gate: &Gate, num_qubits: usize) -> Result<Unitary, CircuitError> {
    check_width(num_qubits)?;
    gate.validate(num_qubits)?;
    let dim = 1usize << num_qubits;
    let m = gate.kind().target_matrix();
    let cmask = gate.control_mask();
    let tbit = 1usize << gate.target();
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        if r & cmask != cmask {
            return if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        if (r ^ c) & !tbit != 0 {
            return Complex64::new(0.0, 0.0);
        }
        m[usize::from(r & tbit != 0)][usize::from(c & tbit != 0)]
    }))
}

/// Product of gate matrices in time order: `U = G_k ... G_1`.
pub fn unitary_of(circuit: &Circuit) -> Result<Unitary, CircuitError> {
    let n = circuit.num_qubits();
    check_width(n)?;
    let dim = 1usize << n;
    let mut u = Unitary::identity(dim, dim);
    let mut scratch = u.clone();
    for gate in circuit.gates() {
        // Left-multiply by the gate matrix row by row; each row of G has at
        // most two non-zeros, so this is O(dim^2) per gate.
        let m = gate.kind().target_matrix();
        let cmask = gate.control_mask();
        let tbit = 1usize << gate.target();
        for r in 0..dim {
            if r & cmask != cmask {
                scratch.row_mut(r).copy_from(&u.row(r));
                continue;
            }
            let b = usize::from(r & tbit != 0);
            let (r0, r1) = (r & !tbit, r | tbit);
            for c in 0..dim {
                scratch[(r, c)] = m[b][0] * u[(r0, c)] + m[b][1] * u[(r1, c)];
            }
        }
        std::mem::swap(&mut u, &mut scratch);
    }
    Ok(u)
}

fn check_dims(u: &Unitary, v: &Unitary) -> Result<(), CircuitError> {
    if u.shape() != v.shape() || u.nrows() != u.ncols() {
        return Err(CircuitError::DimensionMismatch(
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols(),
        ));
    }
    Ok(())
}

/// `|tr(U^dagger V)| / dim`, which is 1 exactly when `V = e^{ia} U` for unitaries.
pub fn trace_overlap(u: &Unitary, v: &Unitary) -> Result<f64, CircuitError> {
    check_dims(u, v)?;
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok(tr.norm() / u.nrows() as f64)
}

pub fn equivalent_up_to_phase(u: &Unitary, v: &Unitary, tol: f64) -> Result<bool, CircuitError> {
    Ok(trace_overlap(u, v)? >= 1.0 - tol)
}

/// Largest entry-wise deviation `max |e^{ia} U - V|` after aligning the
/// global phase `a` through the trace. Stricter than the trace overlap, which
/// is only second-order in small entry errors.
pub fn phase_aligned_distance(u: &Unitary, v: &Unitary) -> Result<f64, CircuitError> {
    check_dims(u, v)?;
    let tr: Complex64 = u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if tr.norm() > 0.0 {
        tr / tr.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(u.iter()
        .zip(v.iter())
        .map(|(a, b)| (a * phase - b).norm())
        .fold(0.0, f64::max))
}

/// `max |U^dagger U - I|` over entries.
pub fn unitarity_deviation(u: &Unitary) -> f64 {
    let prod = u.adjoint() * u;
    let id = Unitary::identity(u.nrows(), u.ncols());
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
