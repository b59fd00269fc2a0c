//! Plain-text coefficient and pole-figure files.
//!
//! ```text
//! so3coef v1 L=<L>            then  l m n re im     (nonzero entries)
//! dualsym v1 L=<L>            then  l 0 0 kappa 0
//! polefig v1 h=<x,y,z> n=<N>  then  theta phi value
//! ```
//!
//! Floats are written with 17 significant digits, so files round-trip exactly.
//! Lines starting with `#` and blank lines are ignored on input.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::goniometry::PoleFigureGrid;
use crate::harmonics::HarmonicCoeffsSO3;
use crate::inversion::DualSymbol;
use crate::limits::check_bandlimit;
use crate::rotations::UnitVector;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Numbered, non-comment lines.
fn content_lines(r: impl BufRead) -> Result<Vec<(usize, String)>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if !t.is_empty() && !t.starts_with('#') {
            out.push((i + 1, t.to_string()));
        }
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

fn header<'a>(lines: &'a [(usize, String)], magic: &str) -> Result<(usize, Vec<&'a str>)> {
    let (no, text) = lines
        .first()
        .ok_or_else(|| parse_err(1, format!("empty file, expected {magic} header")))?;
    let mut toks = text.split_whitespace();
    if toks.next() != Some(magic) {
        return Err(parse_err(*no, format!("expected {magic:?} header")));
    }
    if toks.next() != Some("v1") {
        return Err(parse_err(*no, "unsupported version, expected v1"));
    }
    Ok((*no, toks.collect()))
}

fn key<'a>(line: usize, toks: &[&'a str], name: &str) -> Result<&'a str> {
    toks.iter()
        .find_map(|t| t.strip_prefix(name).and_then(|r| r.strip_prefix('=')))
        .ok_or_else(|| parse_err(line, format!("header lacks {name}=")))
}

fn finite(line: usize, v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("{what} is not finite")))
    }
}

pub fn write_so3coef(mut w: impl Write, c: &HarmonicCoeffsSO3) -> Result<()> {
    writeln!(w, "so3coef v1 L={}", c.bandlimit())?;
    for (l, m, n, v) in c.iter() {
        if v != Complex64::new(0.0, 0.0) {
            writeln!(w, "{l} {m} {n} {:.16e} {:.16e}", v.re, v.im)?;
        }
    }
    Ok(())
}

pub fn read_so3coef(r: impl BufRead) -> Result<HarmonicCoeffsSO3> {
    let lines = content_lines(r)?;
    let (no, toks) = header(&lines, "so3coef")?;
    let bandlimit: usize = field(no, Some(key(no, &toks, "L")?), "band limit")?;
    check_bandlimit(bandlimit)?;
    let mut c = HarmonicCoeffsSO3::zeros(bandlimit)?;
    for (no, text) in &lines[1..] {
        let mut t = text.split_whitespace();
        let l: usize = field(*no, t.next(), "l")?;
        let m: i64 = field(*no, t.next(), "m")?;
        let n: i64 = field(*no, t.next(), "n")?;
        let re = finite(*no, field(*no, t.next(), "real part")?, "real part")?;
        let im = finite(
            *no,
            field(*no, t.next(), "imaginary part")?,
            "imaginary part",
        )?;
        if t.next().is_some() {
            return Err(parse_err(*no, "trailing fields"));
        }
        c.set(l, m, n, Complex64::new(re, im))
            .map_err(|e| parse_err(*no, e.to_string()))?;
    }
    Ok(c)
}

pub fn write_dualsym(mut w: impl Write, s: &DualSymbol) -> Result<()> {
    writeln!(w, "dualsym v1 L={}", s.bandlimit())?;
    for (l, k) in s.values().iter().enumerate() {
        writeln!(w, "{l} 0 0 {k:.16e} {:.16e}", 0.0)?;
    }
    Ok(())
}

pub fn read_dualsym(r: impl BufRead) -> Result<DualSymbol> {
    let lines = content_lines(r)?;
    let (no, toks) = header(&lines, "dualsym")?;
    let bandlimit: usize = field(no, Some(key(no, &toks, "L")?), "band limit")?;
    check_bandlimit(bandlimit)?;
    let mut kappa = vec![f64::NAN; bandlimit + 1];
    for (no, text) in &lines[1..] {
        let mut t = text.split_whitespace();
        let l: usize = field(*no, t.next(), "l")?;
        let m: i64 = field(*no, t.next(), "m")?;
        let n: i64 = field(*no, t.next(), "n")?;
        let k = finite(*no, field(*no, t.next(), "symbol")?, "symbol")?;
        let im: f64 = field(*no, t.next(), "imaginary part")?;
        if l > bandlimit || m != 0 || n != 0 || im != 0.0 {
            return Err(parse_err(*no, "expected `l 0 0 kappa 0` with l <= L"));
        }
        kappa[l] = k;
    }
    if let Some(l) = kappa.iter().position(|k| k.is_nan()) {
        return Err(parse_err(
            lines.last().map_or(1, |x| x.0),
            format!("missing degree {l}"),
        ));
    }
    Ok(DualSymbol::new(kappa))
}

pub fn write_polefig(mut w: impl Write, pf: &PoleFigureGrid) -> Result<()> {
    let [x, y, z] = pf.h.to_array();
    writeln!(w, "polefig v1 h={x:.16e},{y:.16e},{z:.16e} n={}", pf.len())?;
    for (p, v) in pf.points.iter().zip(&pf.values) {
        let (theta, phi) = p.to_spherical();
        writeln!(w, "{theta:.16e} {phi:.16e} {v:.16e}")?;
    }
    Ok(())
}

pub fn read_polefig(r: impl BufRead) -> Result<PoleFigureGrid> {
    let lines = content_lines(r)?;
    let (no, toks) = header(&lines, "polefig")?;
    let hs: Vec<f64> = key(no, &toks, "h")?
        .split(',')
        .map(|s| field(no, Some(s), "h component"))
        .collect::<Result<_>>()?;
    if hs.len() != 3 {
        return Err(parse_err(no, "h needs three components"));
    }
    let h = UnitVector::new(hs[0], hs[1], hs[2]).map_err(|e| parse_err(no, e.to_string()))?;
    let count: usize = field(no, Some(key(no, &toks, "n")?), "point count")?;
    if lines.len() - 1 != count {
        return Err(parse_err(
            no,
            format!(
                "header announces {count} points, file has {}",
                lines.len() - 1
            ),
        ));
    }
    let mut points = Vec::with_capacity(count);
    let mut values = Vec::with_capacity(count);
    for (no, text) in &lines[1..] {
        let mut t = text.split_whitespace();
        let theta = finite(*no, field(*no, t.next(), "theta")?, "theta")?;
        let phi = finite(*no, field(*no, t.next(), "phi")?, "phi")?;
        let v = finite(*no, field(*no, t.next(), "value")?, "value")?;
        if t.next().is_some() {
            return Err(parse_err(*no, "trailing fields"));
        }
        points.push(UnitVector::from_spherical(theta, phi));
        values.push(v);
    }
    Ok(PoleFigureGrid {
        h,
        points,
        values,
        weights: None,
        bandlimit: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goniometry::equal_angle_grid;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn so3coef_round_trip(c: &HarmonicCoeffsSO3) -> HarmonicCoeffsSO3 {
        let mut buf = Vec::new();
        write_so3coef(&mut buf, c).unwrap();
        read_so3coef(buf.as_slice()).unwrap()
    }

    #[test]
    fn uniform_file_has_one_line() {
        let c = HarmonicCoeffsSO3::unit(4, 0, 0, 0).unwrap();
        let mut buf = Vec::new();
        write_so3coef(&mut buf, &c).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "so3coef v1 L=4\n0 0 0 1.0000000000000000e0 0.0000000000000000e0\n"
        );
    }

    #[test]
    fn random_coefficients_round_trip_exactly() {
        let c = HarmonicCoeffsSO3::random(6, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(so3coef_round_trip(&c), c);
    }

    proptest! {
        #[test]
        fn any_value_round_trips(re in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL,
                                 im in -1e300f64..1e300, l in 0usize..5, dm in 0i64..9, dn in 0i64..9) {
            let m = dm.min(2 * l as i64) - l as i64;
            let n = dn.min(2 * l as i64) - l as i64;
            let mut c = HarmonicCoeffsSO3::zeros(4).unwrap();
            c.set(l, m, n, Complex64::new(re, im)).unwrap();
            prop_assert_eq!(so3coef_round_trip(&c), c);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases: [(&str, usize); 6] = [
            ("", 1),
            ("so3coef v2 L=2\n", 1),
            ("so3coef v1 L=2\n0 0 0 1 0\n3 0 0 1 0\n", 3),
            ("so3coef v1 L=2\n# note\n\n1 2 0 1 0\n", 4),
            ("so3coef v1 L=2\n1 0 0 x 0\n", 2),
            ("so3coef v1 L=2\n1 0 0 1 0 9\n", 2),
        ];
        for (text, line) in cases {
            match read_so3coef(text.as_bytes()) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(matches!(
            read_so3coef("so3coef v1 L=100000\n".as_bytes()),
            Err(Error::BandLimit { .. })
        ));
    }

    #[test]
    fn dualsym_round_trip() {
        let s = DualSymbol::frozen(5);
        let mut buf = Vec::new();
        write_dualsym(&mut buf, &s).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(
            text.starts_with("dualsym v1 L=5\n0 0 0 1.0000000000000000e0 0.0000000000000000e0\n")
        );
        assert_eq!(read_dualsym(buf.as_slice()).unwrap(), s);
        assert!(read_dualsym("dualsym v1 L=1\n0 0 0 1 0\n".as_bytes()).is_err());
        assert!(read_dualsym("dualsym v1 L=0\n0 1 0 1 0\n".as_bytes()).is_err());
    }

    #[test]
    fn polefig_round_trip() {
        let h = UnitVector::new(1.0, -2.0, 0.5).unwrap();
        let points = equal_angle_grid(3, 4);
        let values: Vec<f64> = (0..points.len()).map(|i| (i as f64).sqrt() / 3.0).collect();
        let pf = PoleFigureGrid {
            h,
            points,
            values,
            weights: None,
            bandlimit: Some(2),
        };
        let mut buf = Vec::new();
        write_polefig(&mut buf, &pf).unwrap();
        let back = read_polefig(buf.as_slice()).unwrap();
        assert_eq!(back.h, pf.h);
        assert_eq!(back.values, pf.values);
        for (a, b) in back.points.iter().zip(&pf.points) {
            assert!(a.distance(b) < 1e-15);
        }
        let mut again = Vec::new();
        write_polefig(&mut again, &back).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn polefig_count_mismatch_is_rejected() {
        let text = "polefig v1 h=0,0,1 n=2\n0 0 1\n";
        assert!(matches!(
            read_polefig(text.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        let text = "polefig v1 h=0,0 n=0\n";
        assert!(read_polefig(text.as_bytes()).is_err());
    }
}
