use mirrork::catalog;
use mirrork::eqcell::{build_complex, BuildOptions};
use mirrork::exactalg::sparse::sparse_smith;
use std::time::Instant;

fn main() {
    let entry = catalog::get("regular_s3").unwrap();
    let t0 = Instant::now();
    let x = build_complex(&entry.lattice, &BuildOptions::default()).unwrap();
    println!(
        "build+verify: {:?}  cells {}",
        t0.elapsed(),
        x.num_cells()
    );
    for p in 1..=x.dimension() {
        let t = Instant::now();
        let m = x.boundary_sparse_public(p);
        let nnz = m.nnz();
        let s = sparse_smith(m);
        println!(
            "∂_{p}: {}x{} nnz {} -> rank {} torsion {:?} in {:?}",
            x.cells(p - 1).len(),
            x.cells(p).len(),
            nnz,
            s.rank,
            s.torsion,
            t.elapsed()
        );
    }
}
