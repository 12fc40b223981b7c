use rug::float::Constant;
use rug::{Complex, Float};

use super::branch::{principal_pow_ratio, Side};
use crate::error::{Error, Result};
use crate::numerics::{cabs, PrecisionContext};

/// Radius beyond which the optimally truncated asymptotic series reaches the working precision.
pub fn airy_switch_radius(bits: u32) -> f64 {
    // 2·(2/3)·r^{3/2} > (bits + 10)·ln 2
    let zeta = (bits as f64 + 10.0) * std::f64::consts::LN_2 / 2.0;
    (1.5 * zeta).powf(2.0 / 3.0).ceil()
}

const BAND: f64 = 1.0;

/// `(Ai(ξ), Ai′(ξ))`: Maclaurin series inside the switch radius, asymptotic expansion outside,
/// with both evaluated and compared in a band of half-width 1 around the switch radius.
pub fn airy_ai(xi: &Complex, prec: &PrecisionContext) -> Result<(Complex, Complex)> {
    let r0 = airy_switch_radius(prec.bits);
    let r = cabs(xi).to_f64();
    if (r - r0).abs() <= BAND {
        let (a1, d1) = maclaurin(xi, prec);
        let (a2, d2) = asymptotic_any_arg(xi, prec)?;
        let tol = 1e3 * prec.tol_rel();
        let rel = |x: &Complex, y: &Complex| {
            let diff = cabs(&Complex::with_val(prec.bits, x - y));
            (diff / cabs(x).max(&cabs(y))).to_f64()
        };
        if rel(&a1, &a2) > tol || rel(&d1, &d2) > tol {
            return Err(Error::AccuracyLoss(format!("Airy cross-validation failed at |ξ| = {r:.3}")));
        }
        Ok((a1, d1))
    } else if r < r0 {
        Ok(maclaurin(xi, prec))
    } else {
        asymptotic_any_arg(xi, prec)
    }
}

/// Maclaurin series for `(Ai, Ai′)`.
pub fn maclaurin(z: &Complex, prec: &PrecisionContext) -> (Complex, Complex) {
    let r = cabs(z).to_f64();
    let zeta = 2.0 / 3.0 * r.powf(1.5);
    let w = prec.bits + 32 + (2.0 * zeta / std::f64::consts::LN_2).ceil() as u32;
    let z = Complex::with_val(w, z);
    let z3 = Complex::with_val(w, z.square_ref()) * &z;
    let two_thirds = Float::with_val(w, 2) / 3u32;
    let one_third = Float::with_val(w, 1) / 3u32;
    let three = Float::with_val(w, 3);
    let c1 = (-Float::with_val(w, &two_thirds * three.clone().ln())).exp() / two_thirds.gamma();
    let c2 = (-Float::with_val(w, &one_third * three.ln())).exp() / one_third.clone().gamma();

    let mut t = Complex::with_val(w, 1);
    let mut u = z.clone();
    let mut p = Complex::with_val(w, z.square_ref()) / 2u32;
    let mut q = Complex::with_val(w, 1);
    let mut f = t.clone();
    let mut g = u.clone();
    let mut fp = p.clone();
    let mut gp = q.clone();
    let tiny = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let mut k: u32 = 0;
    loop {
        let kf = k as f64;
        t *= &z3;
        t /= (3 * k + 2) * (3 * k + 3);
        u *= &z3;
        u /= (3 * k + 3) * (3 * k + 4);
        q *= &z3;
        q /= (3 * k + 1) * (3 * k + 3);
        if k >= 1 {
            p *= &z3;
            p /= (3 * k) * (3 * k + 2);
        }
        f += &t;
        g += &u;
        gp += &q;
        if k >= 1 {
            fp += &p;
        }
        let decreasing = 9.0 * kf * kf > r * r * r;
        let small = [&t, &u, &p, &q].iter().all(|x| cabs(x) <= tiny);
        if decreasing && small && k >= 1 {
            break;
        }
        k += 1;
    }
    let ai = Complex::with_val(w, &f * &c1) - Complex::with_val(w, &g * &c2);
    let aip = Complex::with_val(w, &fp * &c1) - Complex::with_val(w, &gp * &c2);
    (Complex::with_val(prec.bits, ai), Complex::with_val(prec.bits, aip))
}

/// `ω^k` with `ω = e^{2πi/3}`.
pub fn omega(w: u32, k: i32) -> Complex {
    let angle: Float = Float::with_val(w, Constant::Pi) * 2 * k / 3;
    let (s, c) = angle.sin_cos(Float::new(w));
    Complex::with_val(w, (c, s))
}

/// Asymptotic expansion for `(Ai, Ai′)`, with the connection formula away from the decay sector.
pub fn asymptotic_any_arg(xi: &Complex, prec: &PrecisionContext) -> Result<(Complex, Complex)> {
    let w = prec.bits + 16;
    let z = Complex::with_val(w, xi);
    let arg = Float::with_val(w, z.arg_ref()).to_f64();
    if arg.abs() <= 2.0 * std::f64::consts::PI / 3.0 {
        let (a, d) = asymptotic(&z, w)?;
        return Ok((Complex::with_val(prec.bits, a), Complex::with_val(prec.bits, d)));
    }
    let om = omega(w, 1);
    let om2 = omega(w, 2);
    let (a1, d1) = asymptotic(&Complex::with_val(w, &z * &om), w)?;
    let (a2, d2) = asymptotic(&Complex::with_val(w, &z * &om2), w)?;
    // Ai(z) = −ωAi(ωz) − ω²Ai(ω²z), Ai′(z) = −ω²Ai′(ωz) − ωAi′(ω²z)
    let ai = -(Complex::with_val(w, &om * &a1) + Complex::with_val(w, &om2 * &a2));
    let aip = -(Complex::with_val(w, &om2 * &d1) + Complex::with_val(w, &om * &d2));
    Ok((Complex::with_val(prec.bits, ai), Complex::with_val(prec.bits, aip)))
}

fn asymptotic(z: &Complex, w: u32) -> Result<(Complex, Complex)> {
    let z32 = principal_pow_ratio(z, 3, 2, Side::Principal)?;
    let zeta = z32 * 2u32 / 3u32;
    let z14 = principal_pow_ratio(z, 1, 4, Side::Principal)?;
    let inv_zeta = Complex::with_val(w, zeta.recip_ref());
    let tiny = Float::with_val(w, Float::i_exp(1, -(w as i32)));
    let max_k = (2.0 * cabs(&zeta).to_f64()).floor() as u32;

    let mut uk = Float::with_val(w, 1);
    let mut pw = Complex::with_val(w, 1);
    let mut su = Complex::with_val(w, 1);
    let mut sv = Complex::with_val(w, 1);
    let mut converged = false;
    for k in 1..=max_k.max(1) {
        let kk = k as u64;
        uk *= Float::with_val(w, (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1));
        uk /= Float::with_val(w, (2 * kk - 1) * 216 * kk);
        let vk = -Float::with_val(w, &uk * (6 * kk + 1) as u32) / (6 * kk - 1) as u32;
        pw *= &inv_zeta;
        pw = -pw;
        let tu = Complex::with_val(w, &pw * &uk);
        let tv = Complex::with_val(w, &pw * &vk);
        let small = cabs(&tu) <= tiny && cabs(&tv) <= tiny;
        su += tu;
        sv += tv;
        if small {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::AccuracyLoss(format!(
            "asymptotic Airy series did not reach precision at |ξ| = {:.3}",
            cabs(z).to_f64()
        )));
    }
    let two_sqrt_pi = Float::with_val(w, Constant::Pi).sqrt() * 2u32;
    let e = Complex::with_val(w, -&zeta).exp();
    let ai = Complex::with_val(w, &e * &su) / Complex::with_val(w, &z14 * &two_sqrt_pi);
    let aip = -(Complex::with_val(w, &e * &sv) * &z14) / &two_sqrt_pi;
    Ok((ai, aip))
}
