//! The two worked examples, on the exact Gaussian-integer path.
//!
//!     cargo run --example exact_golden

use qik::linalg::ExactMatrix;
use qik::ComplexMatrix;

fn show(label: &str, m: &ExactMatrix) {
    let c = m.to_complex();
    let rows: Vec<String> = (0..c.rows())
        .map(|i| {
            let row: Vec<String> = (0..c.cols()).map(|j| format!("{:>4}", c.get(i, j).re)).collect();
            format!("[{} ]", row.join(""))
        })
        .collect();
    println!("{label:<28} {}", rows.join(" "));
}

fn main() {
    let flip2 = ExactMatrix::from_complex(&ComplexMatrix::flip(2)).unwrap();
    let t = ExactMatrix::from_i64_rows(&[&[-1, -1], &[3, 2]]);
    println!("T = [[-1,-1],[3,2]] under flip2");
    show("T^3", &t.pow(3).unwrap());
    show("Lambda_1(T)", &t.lambda(&flip2, 1).unwrap());
    show("T* Lambda_1 T", &t.quasi_lambda(&flip2, 1, 1).unwrap());
    // T^3 = -I, so the 3-quasi defect is Lambda_1 itself.
    show("T*^3 Lambda_1 T^3", &t.quasi_lambda(&flip2, 1, 3).unwrap());
    let t3 = t.pow(3).unwrap();
    show("Lambda_1(T^3)", &t3.lambda(&flip2, 1).unwrap());

    println!();
    let flip3 = ExactMatrix::from_complex(&ComplexMatrix::flip(3)).unwrap();
    let id3 = ExactMatrix::identity(3);
    let u = ExactMatrix::from_i64_rows(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
    println!("T = I + E13");
    for m in 1..=3 {
        show(&format!("flip3: Lambda_{m}(T)"), &u.lambda(&flip3, m).unwrap());
    }
    for m in 1..=3 {
        show(&format!("entrywise: Lambda_{m}(T)"), &u.lambda(&id3, m).unwrap());
    }
}
