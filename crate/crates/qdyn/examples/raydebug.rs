use qdyn::geom::ClosedPolyline;
use qdyn::modulus::*;
use qdyn::cx;

fn square(half: f64) -> ClosedPolyline {
    ClosedPolyline::new(vec![cx(-half,-half), cx(half,-half), cx(half,half), cx(-half,half)])
}

fn main() {
    let outer = square(2.0);
    let inner = square(1.0);
    for res in [128usize, 256, 512] {
        let est = annulus_modulus_at(&outer, &inner, res).unwrap();
        println!("res {res}: coarse {:.6} fine {:.6} extrap {:.6}", est.coarse, est.fine, est.mod_value);
    }
    for r in [0.9, 0.5, 0.1] {
        let est = round_annulus(r, 256).unwrap();
        println!("round r={r}: coarse {:.6} fine {:.6} extrap {:.6} exact {:.6}", est.coarse, est.fine, est.mod_value, -f64::ln(r));
    }
}
