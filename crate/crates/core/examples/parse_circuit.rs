//! Parsing the circuit text format, including a custom gate, and reporting
//! line-numbered errors.

use qlocal::circuit::{parse_circuit, render_circuit};

const SOURCE: &str = "# three-qubit example
qubits 3
gate SQRTX matrix {\"rows\":2,\"cols\":2,\"data\":[[0.5,0.5],[0.5,-0.5],[0.5,-0.5],[0.5,0.5]]}
H 1
RZ(pi/4) 2
SQRTX 3
CCNOT 1 2 3
";

fn main() {
    let c = parse_circuit(SOURCE).expect("valid circuit");
    println!("{} qubits, {} gates", c.n(), c.len());
    print!("{}", render_circuit(&c));
    for bad in ["H 1", "qubits 2\nCNOT 1 1", "qubits 1\nRX(two) 1", "qubits 2\nX 3"] {
        println!("{:?} -> {}", bad, parse_circuit(bad).unwrap_err());
    }
}
