use liouville4::sphere::Rule;
use liouville4::pde;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lm_solve(rule: &Rule<f64>, init: &[f64], l1: f64, l2: f64, kappa: f64, tol: f64, max_iter: usize) -> (Vec<f64>, bool, usize) {
    let m = rule.degree() + 1;
    let mut c = init.to_vec();
    let basis: Vec<_> = (0..m).map(|l| rule.basis_field(kappa, l).unwrap()).collect();
    let mut nu = 1e-3f64;
    for iter in 0..max_iter {
        let u = rule.field_from_coeffs(kappa, c.clone());
        let res = pde::residual(rule, &u, l1, l2);
        if res.max_abs() <= tol { return (c, true, iter); }
        let r = DVector::from_vec(res.coeffs().to_vec());
        let e4u: Vec<f64> = u.values().iter().map(|&v| (4.0*v).exp()).collect();
        let mut jac = DMatrix::<f64>::zeros(m, m);
        for l in 0..m {
            let e = (l*(l+3)) as f64;
            jac[(l,l)] = kappa*kappa*e*(e+l1);
        }
        for l in 0..m { for q in 0..m {
            let mut acc = 0.0;
            for i in 0..rule.len() { acc += rule.weights()[i]*basis[l].values()[i]*e4u[i]*basis[q].values()[i]; }
            jac[(l,q)] -= 4.0*l2*kappa*kappa*acc;
        }}
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let jtr = &jt * &r;
        let scale = jtj.diagonal().iter().cloned().fold(0.0f64, f64::max);
        let mut improved = false;
        for _ in 0..25 {
            let mut a = jtj.clone();
            for k in 0..m { a[(k,k)] += nu * scale; }
            let Some(chol) = a.cholesky() else { nu *= 4.0; continue };
            let step = chol.solve(&(-&jtr));
            let trial: Vec<f64> = c.iter().zip(step.iter()).map(|(a,b)| a+b).collect();
            let ut = rule.field_from_coeffs(kappa, trial.clone());
            let rt = pde::residual(rule, &ut, l1, l2);
            let rt_norm: f64 = rt.coeffs().iter().map(|x| x*x).sum::<f64>();
            let r_norm: f64 = r.iter().map(|x| x*x).sum::<f64>();
            if rt_norm < r_norm {
                c = trial; nu = (nu*0.3).max(1e-14); improved = true; break;
            } else { nu *= 4.0; }
        }
        if !improved { return (c, false, iter); }
    }
    let u = rule.field_from_coeffs(kappa, c.clone());
    let ok = pde::residual(rule, &u, l1, l2).max_abs() <= tol;
    (c, ok, max_iter)
}

#[test]
fn sweep() {
    let rule = Rule::<f64>::new(64, 32).unwrap();
    let l1s = [-1.5, -0.5, 0.5, 1.25, 1.9];
    let mut fails = 0; let mut nonzero = 0; let mut total = 0;
    for (i, &l1) in l1s.iter().enumerate() {
        for j in 0..5 {
            let top = liouville4::region::eval_l1(l1).unwrap();
            let l2 = top * (j as f64 + 1.0) / 6.0;
            for seed in 0..20u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 * (i as u64 * 5 + j) + seed);
                let init = pde::random_field(&rule, 1.0, 8, 0.3, &mut rng);
                let (c, ok, iters) = lm_solve(&rule, init.coeffs(), l1, l2, 1.0, 1e-8, 200);
                total += 1;
                let sup = rule.field_from_coeffs(1.0, c).max_abs();
                if !ok { fails += 1; println!("FAIL ({l1},{l2:.3}) seed {seed} iters {iters} sup {sup:.2e}"); }
                else if sup > 1e-8 { nonzero += 1; println!("NONZERO ({l1},{l2:.3}) seed {seed}: sup {sup:.2e}"); }
            }
        }
    }
    println!("total {total} fails {fails} nonzero {nonzero}");
    // critical point: perturbed family
    let (n, l) = pde::resolution_for_boost(1.0);
    let rule = Rule::<f64>::new(n, l).unwrap();
    let u = pde::family(&rule, pde::FamilyParams::new(1.0, 1.0).unwrap());
    let mut coeffs = u.coeffs().to_vec();
    coeffs[2] += 1e-3;
    let (c, ok, iters) = lm_solve(&rule, &coeffs, 2.0, 6.0, 1.0, 1e-9, 100);
    let sol = rule.field_from_coeffs(1.0, c);
    let (t, err) = pde::fit_family(&rule, &sol);
    println!("critical: ok {ok} iters {iters} fit t {t:.6} err {err:.2e}");
    panic!("show");
}
