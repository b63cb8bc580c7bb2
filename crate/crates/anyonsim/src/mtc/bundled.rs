use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::model::{AnyonModel, ModelBuilder};
use crate::error::{Error, Result};

fn phase(turns_of_pi: f64) -> C64 {
    C64::from_polar(1.0, turns_of_pi * PI)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Names accepted by [`bundled`].
pub fn bundled_names() -> Vec<String> {
    let mut names = vec!["trivial".to_string(), "ising".into(), "su2_2".into(), "fibonacci".into()];
    names.extend((0..8).map(|n| format!("ising_nu{}", 2 * n + 1)));
    names.push("z<N>".into());
    names.push("z<N>_p<P>".into());
    names
}

/// Looks up a bundled model by name: `trivial`, `ising`, `ising_nu<1..15 odd>`,
/// `su2_2`, `fibonacci`, `z<N>` or `z<N>_p<P>`.
pub fn bundled(name: &str) -> Result<AnyonModel> {
    match name {
        "trivial" => trivial(),
        "ising" => ising(),
        "su2_2" => su2_2(),
        "fibonacci" => fibonacci(),
        _ => {
            if let Some(nu) = name.strip_prefix("ising_nu") {
                let nu: u32 = nu.parse().map_err(|_| Error::InvalidParameter(format!("unknown model `{name}`")))?;
                return ising_conjugate(nu);
            }
            if let Some(rest) = name.strip_prefix('z') {
                let (n, p) = match rest.split_once("_p") {
                    Some((n, p)) => (n, Some(p)),
                    None => (rest, None),
                };
                let n: usize = n
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("unknown model `{name}`")))?;
                let p = match p {
                    Some(p) => Some(
                        p.parse()
                            .map_err(|_| Error::InvalidParameter(format!("unknown model `{name}`")))?,
                    ),
                    None => None,
                };
                return cyclic(n, p);
            }
            Err(Error::InvalidParameter(format!("unknown model `{name}`")))
        }
    }
}

/// The vacuum-only theory.
pub fn trivial() -> Result<AnyonModel> {
    ModelBuilder::new("trivial", &["I"]).build()
}

/// Ising anyons with `theta_sigma = e^{i pi/8}`.
pub fn ising() -> Result<AnyonModel> {
    ising_family("ising", &["I", "sigma", "psi"], 1)
}

/// The Ising Galois conjugate with `theta_sigma = e^{i nu pi/8}` for odd `nu` in 1..=15.
pub fn ising_conjugate(nu: u32) -> Result<AnyonModel> {
    if nu.is_multiple_of(2) || nu > 15 {
        return Err(Error::InvalidParameter(format!("Ising conjugate index {nu} must be odd and at most 15")));
    }
    ising_family(&format!("ising_nu{nu}"), &["I", "sigma", "psi"], nu)
}

/// SU(2) level 2, the `nu = 3` conjugate with spin labels.
pub fn su2_2() -> Result<AnyonModel> {
    ising_family("su2_2", &["0", "1/2", "1"], 3)
}

fn ising_family(name: &str, labels: &[&str], nu: u32) -> Result<AnyonModel> {
    let (i, s, p) = (0, 1, 2);
    let nu_f = f64::from(nu);
    let kappa = if ((nu * nu - 1) / 8).is_multiple_of(2) { 1.0 } else { -1.0 };
    let h = kappa / 2f64.sqrt();
    ModelBuilder::new(name, labels)
        .fuse(s, s, &[i, p])
        .fuse(s, p, &[s])
        .fuse(p, p, &[i])
        .f([s, s, s, s, i, i], real(h))
        .f([s, s, s, s, i, p], real(h))
        .f([s, s, s, s, p, i], real(h))
        .f([s, s, s, s, p, p], real(-h))
        .f([s, p, s, p, s, s], real(-1.0))
        .f([p, s, p, s, s, s], real(-1.0))
        .r([s, s, i], phase(-nu_f / 8.0) * kappa)
        .r([s, s, p], phase(3.0 * nu_f / 8.0) * kappa)
        .r([s, p, s], phase(-nu_f / 2.0))
        .r([p, s, s], phase(-nu_f / 2.0))
        .r([p, p, i], real(-1.0))
        .build()
}

/// Fibonacci anyons with `theta_tau = e^{4 pi i/5}`.
pub fn fibonacci() -> Result<AnyonModel> {
    let (one, t) = (0, 1);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    ModelBuilder::new("fibonacci", &["1", "tau"])
        .fuse(t, t, &[one, t])
        .f([t, t, t, t, one, one], real(1.0 / phi))
        .f([t, t, t, t, one, t], real(phi.powf(-0.5)))
        .f([t, t, t, t, t, one], real(phi.powf(-0.5)))
        .f([t, t, t, t, t, t], real(-1.0 / phi))
        .r([t, t, one], phase(-4.0 / 5.0))
        .r([t, t, t], phase(3.0 / 5.0))
        .build()
}

/// Abelian `Z_N` anyons with spins `theta_a = e^{i pi p a^2 / N}`.
///
/// `p` defaults to 1 for even `N` and 2 for odd `N`; it must be coprime to `N`
/// and `p N` must be even.
pub fn cyclic(n: usize, p: Option<i64>) -> Result<AnyonModel> {
    if n == 0 {
        return Err(Error::InvalidParameter("Z_N needs N >= 1".into()));
    }
    let p = p.unwrap_or(if n.is_multiple_of(2) { 1 } else { 2 });
    let ni = n as i64;
    if gcd(p.rem_euclid(ni.max(1)), ni) != 1 && n > 1 {
        return Err(Error::InvalidParameter(format!("p = {p} is not coprime to N = {n}")));
    }
    if (p * ni) % 2 != 0 {
        return Err(Error::InvalidParameter(format!("p N must be even, got p = {p}, N = {n}")));
    }
    let labels: Vec<String> = (0..n).map(|a| a.to_string()).collect();
    let mut builder = ModelBuilder::with_labels(if n > 1 { format!("z{n}_p{p}") } else { "z1".into() }, labels);
    let nf = n as f64;
    let pf = p as f64;
    for a in 0..n {
        for b in 0..n {
            builder = builder.fuse(a, b, &[(a + b) % n]);
            builder = builder.r([a, b, (a + b) % n], phase(pf * (a * b) as f64 / nf));
            for c in 0..n {
                let carry = (b + c) - (b + c) % n;
                let value = phase(pf * (a * carry) as f64 / nf);
                builder = builder.f([a, b, c, (a + b + c) % n, (a + b) % n, (b + c) % n], value);
            }
        }
    }
    builder.build()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
