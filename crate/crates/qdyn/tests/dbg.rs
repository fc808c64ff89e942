#[test]
fn dbg_interval() {
    use qdyn::interval::*;
    for c in [-1.75f64, -0.5, -2.0] {
        let r = real_renorm_detect(c, 8).unwrap();
        match r {
            Some(rec) => eprintln!("c={c}: period {} interval {:?} images {:?}", rec.period, rec.interval, rec.images),
            None => eprintln!("c={c}: none"),
        }
    }
    // look at the fold for -1.75 directly
    let fold = FoldingMap::new(-1.75).unwrap();
    for m in [2u32, 3] {
        let roots = fold.fixed_points_of_power(m, -0.99, 0.99);
        eprintln!("m={m} roots {roots:?}");
    }
}
