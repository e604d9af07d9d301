// The constant c below which N = 2, τ = c σ breaks the upper bound on σd.

use hyperg_gauss::kolmo::{solve_exception_constant, solve_exception_constant_to};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c = solve_exception_constant();
    println!("c    in {}", c.format_bounds());
    println!("c/2  in {}", c.mul_pow2(-1).format_bounds());
    let tight = solve_exception_constant_to(120);
    println!("c    ~ {:.30}  (width {:.1e})", tight.mid_f64(), tight.width_f64());
    Ok(())
}

fn main() {
    run_example().unwrap();
}
