use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use picard_core::curves::{self, IncidenceReport};
use picard_core::intersect::{self, ChernReport, IntersectionReport};
use picard_core::lfunc::{self, SurfaceInvariants};
use picard_core::{Check, Exact};

use crate::config::{self, big, Format, IndexSource, RunConfig};
use crate::output::{self, CliError, Envelope, Outcome, Status};

/// Truncated-series value of c2 compared with the exact one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesCheck {
    pub terms: u64,
    pub value: f64,
    pub exact: f64,
    pub error: f64,
    /// Rounding allowance plus the bound on the omitted tail.
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantsResults {
    pub disc: i64,
    pub level: u64,
    pub index_source: IndexSource,
    pub surface: SurfaceInvariants,
    pub c2_series: SeriesCheck,
    pub intersection: Option<IntersectionReport>,
    pub chern: Option<ChernReport>,
    pub incidence: Option<IncidenceReport>,
    pub notes: Vec<String>,
}

pub type InvariantsDocument = Envelope<RunConfig, InvariantsResults>;

fn series_check(disc: i64, index: &Exact, c2: &Exact, terms: u64) -> Result<SeriesCheck, CliError> {
    let ix = index.to_f64();
    let value = lfunc::chern_c2_analytic(disc, ix, terms)?;
    let exact = c2.to_f64();
    let factor = 3.0 * (disc.unsigned_abs() as f64).powf(2.5) / (32.0 * std::f64::consts::PI.powi(3));
    let tail = factor * ix.abs() * (terms.max(1) as f64).powi(-2) / 2.0;
    let tolerance = 1e-8 * exact.abs().max(1.0) + tail;
    let error = (value - exact).abs();
    Ok(SeriesCheck {
        terms,
        value,
        exact,
        error,
        tolerance,
        pass: error <= tolerance,
    })
}

/// Runs the L-value, intersection and incidence computations for one (d, p).
pub fn compute(cfg: &RunConfig) -> Result<(InvariantsResults, Vec<Check>), CliError> {
    let disc = config::discriminant(cfg.d)?;
    let level = config::level_of(cfg, disc)?;
    lfunc::check_inert_prime(disc, cfg.p, level)?;
    let (index, index_source) = config::index_of(cfg, level, disc)?;
    let surface = lfunc::component_count(disc, index.value(), cfg.p, level)?;
    let c2_series = series_check(disc, &surface.index, &surface.c2, cfg.series_terms)?;

    let mut checks = Vec::new();
    let n = surface.n.value().clone();
    checks.push(Check::new(
        "n is an integer",
        surface.n.clone(),
        Exact(n.floor()),
    ));
    let mut notes = Vec::new();
    let (mut intersection, mut chern, mut incidence) = (None, None, None);
    if n.is_integer() && !n.is_negative() {
        let nb = n.to_integer();
        let p = cfg.p;
        let ir = intersect::intersection_report(p, &nb, false).map_err(identity_error)?;
        let cr = intersect::chern_consistency(p, &nb, Some(&surface.c2)).map_err(identity_error)?;
        let inc = curves::incidence_consistency(p, &nb).map_err(|e| CliError::guard("curve size", e.to_string()))?;
        for c in &ir.identities {
            checks.push(prefixed("intersect", c));
        }
        for c in &cr.checks {
            checks.push(prefixed("chern", c));
        }
        checks.extend(incidence_checks(p, &nb, &inc, &surface));
        checks.push(Check::new(
            "g_a (adjunction) = g_a (L-value)",
            ir.g_a.clone(),
            surface.g_a.clone(),
        ));
        if !ir.large_level {
            notes.push(
                "component numbers are valid after etale descent; smoothness of the \
                 components is only known for large N"
                    .to_string(),
            );
        }
        intersection = Some(ir);
        chern = Some(cr);
        incidence = Some(inc);
    }
    Ok((
        InvariantsResults {
            disc,
            level,
            index_source,
            surface,
            c2_series,
            intersection,
            chern,
            incidence,
            notes,
        },
        checks,
    ))
}

fn identity_error(e: intersect::IError) -> CliError {
    CliError::hypothesis("intersection input", e.to_string())
}

fn prefixed(prefix: &str, c: &Check) -> Check {
    Check {
        name: format!("{prefix}: {}", c.name),
        ..c.clone()
    }
}

fn incidence_checks(p: u64, n: &BigInt, inc: &IncidenceReport, s: &SurfaceInvariants) -> Vec<Check> {
    let pb = big(p);
    let count = &inc.points_per_component.count;
    let genus = big(curves::genus(p));
    vec![
        Check::new(
            "curves: points per component = p^3+1",
            Exact::big(count.clone()),
            Exact::big(pb.pow(3) + 1),
        ),
        Check::new(
            "curves: points per component = p^2+1+2gp",
            Exact::big(count.clone()),
            Exact::big(&pb * &pb + 1 + 2 * genus * &pb),
        ),
        Check::new(
            "curves: n_ssp (p+1) = n (p^3+1)",
            Exact::big(&inc.n_ssp * (&pb + 1)),
            Exact::big(n * count),
        ),
        Check::new(
            "curves: n_ssp (incidence) = n_ssp (L-value)",
            Exact::big(inc.n_ssp.clone()),
            s.n_ssp.clone(),
        ),
    ]
}

/// One line of the CSV and Markdown tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub d: String,
    pub disc: String,
    pub p: String,
    pub level: String,
    pub index: String,
    pub c2: String,
    pub n: String,
    pub n_ssp: String,
    pub g_a: String,
    pub z_z: String,
    pub zi_zi: String,
    pub deg_l_on_z: String,
    pub status: String,
}

pub const ROW_HEADERS: [&str; 13] = [
    "d", "D", "p", "N", "index", "c2", "n", "n_ssp", "g_a", "Z.Z", "Zi.Zi", "deg L|Z", "status",
];

impl Row {
    pub fn blank(d: i64, p: u64, status: String) -> Row {
        Row {
            d: d.to_string(),
            disc: String::new(),
            p: p.to_string(),
            level: String::new(),
            index: String::new(),
            c2: String::new(),
            n: String::new(),
            n_ssp: String::new(),
            g_a: String::new(),
            z_z: String::new(),
            zi_zi: String::new(),
            deg_l_on_z: String::new(),
            status,
        }
    }

    pub fn from_results(d: i64, r: &InvariantsResults, checks: &[Check]) -> Row {
        let s = &r.surface;
        let ix = r.intersection.as_ref();
        let show = |f: fn(&IntersectionReport) -> &Exact| ix.map(|i| f(i).to_string()).unwrap_or_default();
        let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        let status = if !failed.is_empty() {
            format!("failed: {}", failed.join("; "))
        } else if !r.c2_series.pass {
            "failed: c2 series".to_string()
        } else {
            "ok".to_string()
        };
        Row {
            d: d.to_string(),
            disc: r.disc.to_string(),
            p: s.p.to_string(),
            level: r.level.to_string(),
            index: s.index.to_string(),
            c2: s.c2.to_string(),
            n: s.n.to_string(),
            n_ssp: s.n_ssp.to_string(),
            g_a: s.g_a.to_string(),
            z_z: show(|i| &i.z_z),
            zi_zi: show(|i| &i.zi_zi),
            deg_l_on_z: show(|i| &i.deg_l_on_z),
            status,
        }
    }

    pub fn cells(&self) -> [&str; 13] {
        [
            &self.d,
            &self.disc,
            &self.p,
            &self.level,
            &self.index,
            &self.c2,
            &self.n,
            &self.n_ssp,
            &self.g_a,
            &self.z_z,
            &self.zi_zi,
            &self.deg_l_on_z,
            &self.status,
        ]
    }
}

pub fn status_of(r: &InvariantsResults, checks: &[Check]) -> Status {
    if r.c2_series.pass {
        Status::from_checks(checks)
    } else {
        Status::IdentityFailed
    }
}

fn render_plain(cfg: &RunConfig, r: &InvariantsResults, checks: &[Check]) -> String {
    let s = &r.surface;
    let mut out = output::header("invariants", cfg.reproducible);
    let source = match r.index_source {
        IndexSource::Given => "given",
        IndexSource::LevelFormula => "from level",
    };
    let _ = writeln!(out, "D = {}, p = {}, N = {}, index = {} ({source})", r.disc, s.p, r.level, s.index);
    let _ = writeln!(out, "c2      = {}", s.c2);
    let _ = writeln!(out, "n       = {}", s.n);
    let _ = writeln!(out, "n_ssp   = {}", s.n_ssp);
    let _ = writeln!(out, "g_a     = {}", s.g_a);
    if let Some(i) = &r.intersection {
        let _ = writeln!(out, "Z.Z     = {}", i.z_z);
        let _ = writeln!(out, "Zi.Zi   = {}", i.zi_zi);
        let _ = writeln!(out, "deg L|Z = {}", i.deg_l_on_z);
    }
    let c = &r.c2_series;
    let _ = writeln!(
        out,
        "c2 from {} series terms = {:.12} (error {:.3e}, tolerance {:.3e}) {}",
        c.terms,
        c.value,
        c.error,
        c.tolerance,
        if c.pass { "pass" } else { "FAIL" }
    );
    for w in &s.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    output::write_checks(&mut out, checks);
    out
}

pub fn render(cfg: &RunConfig, r: InvariantsResults, checks: Vec<Check>) -> String {
    match cfg.format {
        Format::Plain => render_plain(cfg, &r, &checks),
        Format::Csv => output::to_csv(&[Row::from_results(cfg.d, &r, &checks)], &ROW_HEADERS),
        Format::Json => output::to_json(&Envelope {
            config: cfg.clone(),
            results: r,
            checks,
        }),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (r, checks) = compute(cfg)?;
    let status = status_of(&r, &checks);
    Ok(Outcome {
        status,
        text: render(cfg, r, checks),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: i64, p: u64, index: Option<i64>) -> RunConfig {
        let mut c = RunConfig::new(d, p);
        c.index = index.map(Exact::int);
        c.series_terms = 100_000;
        c
    }

    #[test]
    fn minus_seven_at_three() {
        let (r, checks) = compute(&cfg(-7, 3, Some(7))).unwrap();
        assert_eq!(r.surface.n, Exact::int(1));
        assert_eq!(r.surface.n_ssp, Exact::int(7));
        assert_eq!(r.surface.g_a, Exact::int(45));
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert!(r.c2_series.pass);
        assert_eq!(status_of(&r, &checks), Status::Pass);
    }

    #[test]
    fn gates() {
        let e = compute(&cfg(-1, 2, None)).unwrap_err();
        assert_eq!((e.status, e.hypothesis.as_str()), (Status::Hypothesis, "p prime to 2N"));
        let e = compute(&cfg(-1, 5, None)).unwrap_err();
        assert_eq!(e.hypothesis, "p inert in K");
        assert!(e.message.contains("splits"));
    }

    #[test]
    fn non_integral_count_fails_an_identity() {
        let (r, checks) = compute(&cfg(-7, 3, Some(1))).unwrap();
        assert!(r.intersection.is_none());
        assert_eq!(status_of(&r, &checks), Status::IdentityFailed);
    }

    #[test]
    fn default_index() {
        let (r, checks) = compute(&cfg(-1, 3, None)).unwrap();
        assert_eq!(r.level, 5);
        assert_eq!(r.index_source, IndexSource::LevelFormula);
        assert_eq!(status_of(&r, &checks), Status::Pass);
    }
}
