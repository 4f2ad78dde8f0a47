use affine_wehrl::basis::{BasisSpec, LaguerreBasis};
use affine_wehrl::cst::{transform_field_direct, transform_rows};
use affine_wehrl::grids::{build_k_grid, KGridSpec, PhaseGrid, PhaseGridSpec};
use affine_wehrl::special::pairwise_sum_by;
use num_complex::Complex64;

fn main() {
    let pspec = PhaseGridSpec { n_a: 48, n_b: 256, a_min: 1e-3, a_max: 300.0, b_max: 8.0 };
    let kspec = KGridSpec::gauss_legendre(200, 1e-12, 40.0, 8.0);
    let grid = build_k_grid(&kspec).unwrap();
    println!("k-grid nodes: {}", grid.len());
    let basis = LaguerreBasis::build(BasisSpec::new(0.5, 6).unwrap(), &grid);
    let phase = PhaseGrid::new(pspec).unwrap();
    let f0 = basis.function(0);
    let rows0 = transform_rows(f0, 0.5, &phase).unwrap();
    // cross term Σ |H0|² conj(H0) H1 w for each basis direction
    for d in 1..6 {
        let rows_d = transform_rows(basis.function(d), 0.5, &phase).unwrap();
        let re = pairwise_sum_by(rows0.len(), &|idx| {
            let w = phase.cell_haar(idx / phase.n_b());
            (rows0[idx].norm_sqr() * (rows0[idx].conj() * rows_d[idx])).re * w
        });
        let im = pairwise_sum_by(rows0.len(), &|idx| {
            let w = phase.cell_haar(idx / phase.n_b());
            (rows0[idx].norm_sqr() * (rows0[idx].conj() * rows_d[idx])).im * w
        });
        println!("cross d={d}: {re:+.6e} {im:+.6e}i");
    }
    // same with direct row evaluation for d=1
    let dir0 = transform_field_direct(f0, 0.5, &phase).unwrap();
    let mass0 = dir0.mass();
    println!("f0 probe-window mass: {mass0:.9}");

    // finer phase window: does the cross term shrink?
    let pspec2 = PhaseGridSpec { n_a: 96, n_b: 512, a_min: 1e-4, a_max: 600.0, b_max: 8.0 };
    let phase2 = PhaseGrid::new(pspec2).unwrap();
    let rows0b = transform_rows(f0, 0.5, &phase2).unwrap();
    let rows1b = transform_rows(basis.function(1), 0.5, &phase2).unwrap();
    let re = pairwise_sum_by(rows0b.len(), &|idx| {
        let w = phase2.cell_haar(idx / phase2.n_b());
        (rows0b[idx].norm_sqr() * (rows0b[idx].conj() * rows1b[idx])).re * w
    });
    let im = pairwise_sum_by(rows0b.len(), &|idx| {
        let w = phase2.cell_haar(idx / phase2.n_b());
        (rows0b[idx].norm_sqr() * (rows0b[idx].conj() * rows1b[idx])).im * w
    });
    println!("cross d=1 finer window: {re:+.6e} {im:+.6e}i");

    // wider b window
    let pspec3 = PhaseGridSpec { n_a: 96, n_b: 2048, a_min: 1e-4, a_max: 600.0, b_max: 32.0 };
    let kspec3 = KGridSpec::gauss_legendre(200, 1e-12, 40.0, 32.0);
    let grid3 = build_k_grid(&kspec3).unwrap();
    let basis3 = LaguerreBasis::build(BasisSpec::new(0.5, 6).unwrap(), &grid3);
    let phase3 = PhaseGrid::new(pspec3).unwrap();
    let rows0c = transform_rows(basis3.function(0), 0.5, &phase3).unwrap();
    let rows1c = transform_rows(basis3.function(1), 0.5, &phase3).unwrap();
    let re = pairwise_sum_by(rows0c.len(), &|idx| {
        let w = phase3.cell_haar(idx / phase3.n_b());
        (rows0c[idx].norm_sqr() * (rows0c[idx].conj() * rows1c[idx])).re * w
    });
    println!("cross d=1 wide b window: {re:+.6e}");

    // Laguerre tail sizes: phi_j at large k relative to f0
    for &k in &[8.0, 10.0, 12.0, 14.0] {
        let i = grid
            .nodes()
            .iter()
            .position(|&x| x >= k)
            .unwrap();
        let phi5 = basis.function(5).values()[i];
        let phi0 = basis.function(0).values()[i];
        println!("k≈{:.2}: |phi5| = {:.3e}, |phi0| = {:.3e}", grid.nodes()[i], phi5.norm(), phi0.norm());
    }
    let _ = Complex64::new(0.0, 0.0);
}
