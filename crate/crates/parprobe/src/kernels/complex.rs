//! Minimal complex arithmetic for the branch-cut integrands.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

pub const fn c(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

impl C64 {
    pub fn real(re: f64) -> C64 {
        c(re, 0.0)
    }

    pub fn imag(im: f64) -> C64 {
        c(0.0, im)
    }

    pub fn exp(self) -> C64 {
        let r = self.re.exp();
        c(r * self.im.cos(), r * self.im.sin())
    }

    pub fn scale(self, s: f64) -> C64 {
        c(self.re * s, self.im * s)
    }
}

impl Add for C64 {
    type Output = C64;
    fn add(self, o: C64) -> C64 {
        c(self.re + o.re, self.im + o.im)
    }
}

impl Sub for C64 {
    type Output = C64;
    fn sub(self, o: C64) -> C64 {
        c(self.re - o.re, self.im - o.im)
    }
}

impl Neg for C64 {
    type Output = C64;
    fn neg(self) -> C64 {
        c(-self.re, -self.im)
    }
}

impl Mul for C64 {
    type Output = C64;
    fn mul(self, o: C64) -> C64 {
        c(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Div for C64 {
    type Output = C64;
    fn div(self, o: C64) -> C64 {
        // Smith's algorithm for stability
        if o.re.abs() >= o.im.abs() {
            let r = o.im / o.re;
            let d = o.re + o.im * r;
            c((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = o.re / o.im;
            let d = o.re * r + o.im;
            c((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_matches_multiplication() {
        let a = c(3.0, -2.0);
        let b = c(-1.5, 4.0);
        let q = a / b;
        let back = q * b;
        assert!((back.re - a.re).abs() < 1e-14);
        assert!((back.im - a.im).abs() < 1e-14);
    }

    #[test]
    fn exp_of_imaginary_is_on_unit_circle() {
        let z = C64::imag(1.2).exp();
        assert!((z.re.hypot(z.im) - 1.0).abs() < 1e-15);
        assert!((z.re - 1.2_f64.cos()).abs() < 1e-15);
    }
}
