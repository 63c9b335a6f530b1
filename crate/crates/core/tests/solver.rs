use anisoflow::field::{Domain, Grid};
use anisoflow::manifold::{q_from_director, TargetPoint};
use anisoflow::solver::{
    discrete_energy, el_residual, epsilon_sweep, minimize, Anchoring, MinimizeConfig,
    SweepConfig,
};
use anisoflow::{ElasticModel, Field, Potential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(grid: &Grid, k: usize, amp: f64, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = (0..grid.len() * k)
        .map(|_| amp * rng.random_range(-1.0..1.0))
        .collect();
    Field::from_values(grid.clone(), k, v).unwrap()
}

fn unit(x: [f64; 3]) -> [f64; 3] {
    let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    [x[0] / n, x[1] / n, x[2] / n]
}

/// Compares the residual with Richardson-extrapolated central differences of
/// the discrete energy; the extrapolation is exact for quartic energies, so the
/// step can be large enough to keep round-off out of the comparison.
fn check_residual_against_energy(field: &Field, eps: f64, el: &ElasticModel, pot: &Potential, anch: &Anchoring) {
    let r = el_residual(field, eps, el, pot, anch).unwrap();
    let grid = field.grid();
    let k = field.k();
    let t = 1e-3;
    let mut fd = vec![0.0; field.values().len()];
    for i in 0..fd.len() {
        let p = i / k;
        if field.boundary_mask()[p] && matches!(anch, Anchoring::Dirichlet { .. }) {
            continue;
        }
        let central = |t: f64| {
            let mut f = field.clone();
            f.values_mut()[i] += t;
            let ep = discrete_energy(&f, eps, el, pot, anch).unwrap().total;
            f.values_mut()[i] -= 2.0 * t;
            let em = discrete_energy(&f, eps, el, pot, anch).unwrap().total;
            (ep - em) / (2.0 * t)
        };
        fd[i] = (4.0 * central(t) - central(2.0 * t)) / 3.0 / grid.node_weight(p);
    }
    let scale = fd.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (i, (a, b)) in r.values().iter().zip(&fd).enumerate() {
        let tol = 1e-6 * a.abs().max(b.abs()).max(1e-3 * scale);
        assert!((a - b).abs() <= tol, "component {i}: residual {a} vs fd {b}");
    }
}

#[test]
fn residual_matches_energy_differences() {
    let grid = Grid::centered_cube(9, 1.0, Domain::Box).unwrap();
    let pot = Potential::landau_de_gennes(1.0, 10.0, 1.0).unwrap();
    let el = ElasticModel::landau_de_gennes(1.0, 0.5, 0.5).unwrap();
    let u = random_field(&grid, 5, pot.s_star(), 11);
    check_residual_against_energy(&u, 0.3, &el, &pot, &Anchoring::Free);

    let z = q_from_director([0.0, 0.0, 1.0], pot.s_star()).unwrap();
    let qb = Field::from_fn(grid.clone(), 5, |_| z).unwrap();
    let weak = Anchoring::weak(2.5, qb, &pot).unwrap();
    check_residual_against_energy(&u, 0.3, &el, &pot, &weak);

    let gl = Potential::ginzburg_landau();
    let iso = ElasticModel::isotropic(3, 1.0).unwrap();
    let data = Field::from_fn(grid.clone(), 3, |x| TargetPoint::new(&unit([x[0] + 0.1, x[1], x[2]]))).unwrap();
    let anch = Anchoring::dirichlet(data, &gl).unwrap();
    let mut v = random_field(&grid, 3, 1.0, 12);
    anch.impose(&mut v).unwrap();
    check_residual_against_energy(&v, 0.2, &iso, &gl, &anch);
}

#[test]
fn dirichlet_nodes_report_zero() {
    let grid = Grid::centered_cube(9, 1.0, Domain::Box).unwrap();
    let gl = Potential::ginzburg_landau();
    let iso = ElasticModel::isotropic(3, 1.0).unwrap();
    let data = Field::from_fn(grid.clone(), 3, |_| TargetPoint::new(&[0.0, 0.0, 1.0])).unwrap();
    let anch = Anchoring::dirichlet(data, &gl).unwrap();
    let mut v = random_field(&grid, 3, 1.0, 3);
    anch.impose(&mut v).unwrap();
    let r = el_residual(&v, 0.2, &iso, &gl, &anch).unwrap();
    for p in 0..grid.len() {
        if v.boundary_mask()[p] {
            assert!(r.at(p).iter().all(|&x| x == 0.0));
        }
    }
}

#[test]
fn constant_vacuum_state_is_stationary() {
    let grid = Grid::centered_cube(7, 1.0, Domain::Box).unwrap();
    let pot = Potential::landau_de_gennes(1.0, 10.0, 1.0).unwrap();
    let el = ElasticModel::landau_de_gennes(1.0, 0.5, 0.5).unwrap();
    let z = q_from_director([0.6, 0.0, 0.8], pot.s_star()).unwrap();
    let u = Field::from_fn(grid, 5, |_| z).unwrap();
    let r = el_residual(&u, 0.1, &el, &pot, &Anchoring::Free).unwrap();
    assert!(r.values().iter().all(|x| x.abs() < 1e-10));
    let out = minimize(&u, &MinimizeConfig::new(0.1), &el, &pot, &Anchoring::Free).unwrap();
    assert_eq!(out.log.len(), 1);
    assert!(out.energy.total.abs() < 1e-10);
}

struct Hedgehog {
    init: Field,
    anchoring: Anchoring,
    pot: Potential,
    el: ElasticModel,
}

fn hedgehog(nodes: usize, radius: f64) -> Hedgehog {
    let grid = Grid::centered_cube(nodes, 1.0, Domain::Ball { center: [0.0; 3], radius }).unwrap();
    let pot = Potential::ginzburg_landau();
    let data = Field::from_fn(grid.clone(), 3, |x| TargetPoint::new(&unit(x))).unwrap();
    let mut init = Field::from_fn(grid, 3, |x| {
        let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        TargetPoint::new(&unit(x)).scale_by((n / radius).min(1.0))
    })
    .unwrap();
    let anchoring = Anchoring::dirichlet(data, &pot).unwrap();
    anchoring.impose(&mut init).unwrap();
    Hedgehog {
        init,
        anchoring,
        pot,
        el: ElasticModel::isotropic(3, 1.0).unwrap(),
    }
}

trait Scale {
    fn scale_by(self, s: f64) -> Self;
}
impl Scale for TargetPoint {
    fn scale_by(self, s: f64) -> Self {
        s * self
    }
}

#[test]
fn hedgehog_descent_is_monotone_and_converges() {
    let h = hedgehog(24, 0.9);
    let cfg = MinimizeConfig::new(0.9 / 8.0);
    let out = minimize(&h.init, &cfg, &h.el, &h.pot, &h.anchoring).unwrap();
    assert!(out.converged);
    assert!(out.log.last().unwrap().max_residual < out.grad_tol);
    for w in out.log.windows(2) {
        assert!(w[1].energy_total < w[0].energy_total);
    }
    assert!(out.energy.total < out.log[0].energy_total);
    let Anchoring::Dirichlet { data } = &h.anchoring else { unreachable!() };
    for p in 0..data.grid().len() {
        if data.boundary_mask()[p] {
            assert_eq!(out.field.at(p), data.at(p));
        }
    }
}

#[test]
fn steepest_descent_reaches_the_same_state() {
    let h = hedgehog(16, 0.9);
    let mut cfg = MinimizeConfig::new(0.9 / 4.0);
    let a = minimize(&h.init, &cfg, &h.el, &h.pot, &h.anchoring).unwrap();
    cfg.method = anisoflow::solver::Method::SteepestDescent;
    let b = minimize(&h.init, &cfg, &h.el, &h.pot, &h.anchoring).unwrap();
    assert!(a.converged && b.converged);
    assert!((a.energy.total - b.energy.total).abs() < 1e-6 * a.energy.total);
}

#[test]
fn rotated_data_gives_rotated_minimizer() {
    let grid = Grid::centered_cube(9, 1.0, Domain::Box).unwrap();
    let pot = Potential::landau_de_gennes(1.0, 10.0, 1.0).unwrap();
    let el = ElasticModel::landau_de_gennes(1.0, 0.0, 0.0).unwrap();
    let s = pot.s_star();
    let director = |x: [f64; 3]| unit([1.0 + 0.3 * x[2], 0.4 * x[0], 1.0 + 0.2 * x[1]]);
    let rot = nalgebra::Rotation3::from_euler_angles(0.4, -0.3, 1.2).into_inner();
    let run = |rotated: bool| {
        let data = Field::from_fn(grid.clone(), 5, |x| {
            let q = q_from_director(director(x), s).unwrap();
            if rotated { q.rotate(&rot) } else { q }
        })
        .unwrap();
        let anch = Anchoring::dirichlet(data.clone(), &pot).unwrap();
        let mut cfg = MinimizeConfig::new(0.5);
        cfg.grad_tol = Some(1e-8);
        minimize(&data, &cfg, &el, &pot, &anch).unwrap().field
    };
    let (plain, rotated) = (run(false), run(true));
    for p in 0..grid.len() {
        let want = plain.point(p).rotate(&rot);
        assert!(want.distance(&rotated.point(p)) < 1e-6, "node {p}");
    }
}

#[test]
fn constant_data_sweep_has_zero_increments() {
    let grid = Grid::centered_cube(9, 1.0, Domain::Ball { center: [0.0; 3], radius: 0.9 }).unwrap();
    let pot = Potential::ginzburg_landau();
    let el = ElasticModel::isotropic(3, 1.0).unwrap();
    let u = Field::from_fn(grid, 3, |_| TargetPoint::new(&[0.0, 1.0, 0.0])).unwrap();
    let anch = Anchoring::dirichlet(u.clone(), &pot).unwrap();
    let sweep = SweepConfig { epsilon0: 0.5, ratio: 0.5, count: 3, warm_start: true };
    let stages = epsilon_sweep(&u, &sweep, &MinimizeConfig::new(0.5), &el, &pot, &anch).unwrap();
    assert_eq!(stages.len(), 3);
    for st in &stages[1..] {
        assert_eq!(st.h1_increment.unwrap().total, 0.0);
        assert_eq!(st.field.values(), u.values());
    }
}

#[test]
fn invalid_configurations_rejected() {
    let bad = SweepConfig { epsilon0: 0.5, ratio: 1.5, count: 3, warm_start: true };
    assert!(bad.schedule().is_err());
    let grid = Grid::centered_cube(5, 1.0, Domain::Box).unwrap();
    let pot = Potential::ginzburg_landau();
    let off = Field::from_fn(grid.clone(), 3, |_| TargetPoint::new(&[0.0, 0.0, 2.0])).unwrap();
    assert!(Anchoring::dirichlet(off.clone(), &pot).is_err());
    assert!(Anchoring::weak(-1.0, off, &pot).is_err());
    let u = Field::zeros(grid, 3).unwrap();
    let el = ElasticModel::isotropic(3, 1.0).unwrap();
    assert!(minimize(&u, &MinimizeConfig::new(-1.0), &el, &pot, &Anchoring::Free).is_err());
}
