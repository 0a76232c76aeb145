//! Rendering of results as JSON, CSV, or one human-readable line per record.

use std::io::{self, Write};

use birkhoff::oracle::SuiteReport;
use birkhoff::{AngleReport, Comparison, SweepRow};
use serde::Serialize;

/// Seventeen significant digits: always enough to recover the exact `f64`.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// serde_json formatter that writes every float with [`sig17`].
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }
}

pub fn json<T: Serialize, W: Write + ?Sized>(out: &mut W, value: &T) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *out, Sig17);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    out.write_all(b"\n")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row<W: Write + ?Sized>(out: &mut W, fields: &[String]) -> io::Result<()> {
    let line: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    out.write_all(line.join(",").as_bytes())?;
    out.write_all(b"\n")
}

fn csv_header<W: Write + ?Sized>(out: &mut W, names: &[&str]) -> io::Result<()> {
    csv_row(out, &names.iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

fn word<T: std::fmt::Debug>(v: T) -> String {
    format!("{v:?}")
}

/// A pair report restricted to the fields a command asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportView {
    Full,
    Gamma,
    Cosine,
}

#[derive(Serialize)]
struct GammaView {
    class: birkhoff::AngleClass,
    gamma: f64,
    gamma_star: f64,
    method: birkhoff::SolveMethod,
}

#[derive(Serialize)]
struct CosineView {
    class: birkhoff::AngleClass,
    k: f64,
    gamma_hat: f64,
}

pub fn report_json<W: Write + ?Sized>(out: &mut W, r: &AngleReport, view: ReportView) -> io::Result<()> {
    match view {
        ReportView::Full => json(out, r),
        ReportView::Gamma => json(
            out,
            &GammaView { class: r.class, gamma: r.gamma, gamma_star: r.gamma_star, method: r.method },
        ),
        ReportView::Cosine => json(out, &CosineView { class: r.class, k: r.k, gamma_hat: r.gamma_hat }),
    }
}

pub fn report_csv<W: Write + ?Sized>(out: &mut W, r: &AngleReport, view: ReportView) -> io::Result<()> {
    match view {
        ReportView::Full => {
            csv_header(out, &["class", "gamma", "gamma_star", "k", "gamma_hat", "method", "norm_x", "norm_y"])?;
            csv_row(
                out,
                &[
                    word(r.class),
                    sig17(r.gamma),
                    sig17(r.gamma_star),
                    sig17(r.k),
                    sig17(r.gamma_hat),
                    word(r.method),
                    sig17(r.norm_x),
                    sig17(r.norm_y),
                ],
            )
        }
        ReportView::Gamma => {
            csv_header(out, &["class", "gamma", "gamma_star", "method"])?;
            csv_row(out, &[word(r.class), sig17(r.gamma), sig17(r.gamma_star), word(r.method)])
        }
        ReportView::Cosine => {
            csv_header(out, &["class", "k", "gamma_hat"])?;
            csv_row(out, &[word(r.class), sig17(r.k), sig17(r.gamma_hat)])
        }
    }
}

pub fn report_human<W: Write + ?Sized>(out: &mut W, r: &AngleReport, view: ReportView) -> io::Result<()> {
    match view {
        ReportView::Full => writeln!(out, "{:?} γ={} γ*={} k={}", r.class, r.gamma, r.gamma_star, r.k),
        ReportView::Gamma => writeln!(out, "{:?} γ={} γ*={}", r.class, r.gamma, r.gamma_star),
        ReportView::Cosine => writeln!(out, "{:?} k={} γ̂={}", r.class, r.k, r.gamma_hat),
    }
}

pub fn comparison_csv<W: Write + ?Sized>(out: &mut W, c: &Comparison) -> io::Result<()> {
    csv_header(
        out,
        &["verdict", "basis", "class_first", "class_second", "gamma_hat_first", "gamma_hat_second", "tie_tolerance"],
    )?;
    csv_row(
        out,
        &[
            word(c.verdict),
            word(c.basis),
            word(c.classes.0),
            word(c.classes.1),
            sig17(c.gamma_hat_first),
            sig17(c.gamma_hat_second),
            sig17(c.tie_tolerance),
        ],
    )
}

pub fn comparison_human<W: Write + ?Sized>(out: &mut W, c: &Comparison) -> io::Result<()> {
    writeln!(
        out,
        "{:?} ({:?} γ̂={} vs {:?} γ̂={}; {:?})",
        c.verdict, c.classes.0, c.gamma_hat_first, c.classes.1, c.gamma_hat_second, c.basis
    )
}

pub fn sweep_csv<W: Write + ?Sized>(out: &mut W, rows: &[SweepRow]) -> io::Result<()> {
    csv_header(out, &["theta", "k", "class", "gamma_hat"])?;
    for r in rows {
        csv_row(out, &[sig17(r.theta), sig17(r.k), word(r.class), sig17(r.gamma_hat)])?;
    }
    Ok(())
}

pub fn sweep_human<W: Write + ?Sized>(out: &mut W, rows: &[SweepRow]) -> io::Result<()> {
    for r in rows {
        writeln!(out, "θ={} k={} {:?} γ̂={}", r.theta, r.k, r.class, r.gamma_hat)?;
    }
    Ok(())
}

#[derive(Serialize)]
pub struct Angles {
    pub pythagorean: f64,
    pub isosceles: f64,
}

pub fn angles_csv<W: Write + ?Sized>(out: &mut W, a: &Angles) -> io::Result<()> {
    csv_header(out, &["pythagorean", "isosceles"])?;
    csv_row(out, &[sig17(a.pythagorean), sig17(a.isosceles)])
}

pub fn suite_csv<W: Write + ?Sized>(out: &mut W, s: &SuiteReport) -> io::Result<()> {
    csv_header(out, &["property", "norm", "passed", "total", "first_failure"])?;
    for t in &s.tallies {
        csv_row(
            out,
            &[
                t.property.clone(),
                t.norm.clone(),
                t.passed.to_string(),
                t.total.to_string(),
                t.first_failure.clone().unwrap_or_default(),
            ],
        )?;
    }
    Ok(())
}

pub fn suite_human<W: Write + ?Sized>(out: &mut W, s: &SuiteReport) -> io::Result<()> {
    for t in &s.tallies {
        let mark = if t.all_passed() { "ok  " } else { "FAIL" };
        write!(out, "{mark} {:<22} {:<12} {}/{}", t.property, t.norm, t.passed, t.total)?;
        match &t.first_failure {
            Some(f) => writeln!(out, "  first failure: {f}")?,
            None => writeln!(out)?,
        }
    }
    let failed = s.failures().count();
    writeln!(
        out,
        "seed {} trials {}: {} of {} checks pass",
        s.seed,
        s.trials,
        s.tallies.len() - failed,
        s.tallies.len()
    )
}
