//! GF(8), its projective line and the elements of order 7 in PGL(2, 8).
//!
//!     cargo run --example projective_line

use spectacular::finite_geometry::{classes_of_order, cycle_structure, epsilon_for, make_field, pgl_order, proj_line};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let field = make_field(2, 3)?;
    println!("GF({}) with modulus {:?}", field.order(), field.modulus());

    let line = proj_line(&field);
    println!("projective line: {} points", line.len());
    for pt in line.iter().take(4) {
        let (x, y) = pt.coords();
        println!(
            "  id {} = ({:?} : {:?})",
            field.vertex_id(pt),
            field.coefficients(x),
            field.coefficients(y)
        );
    }

    println!(
        "|PGL(2,8)| = {}, epsilon for d = 7: {:?}",
        pgl_order(8),
        epsilon_for(8, 7)
    );
    for (i, class) in classes_of_order(&field, 7)?.iter().enumerate() {
        let rep = class.iter().next().expect("classes are non-empty");
        println!(
            "class {i}: {} elements, representative cycles {:?}",
            class.len(),
            cycle_structure(&field, rep)?
        );
    }
    Ok(())
}
