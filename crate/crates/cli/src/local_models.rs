use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use picard_core::dieudonne::{
    braid3, branch_table, classify_stratum, filtration_ranks, gluing_obstruction,
    gss_deformation, sigma_block_nilpotent, ssp_covariant, ssp_display, DError, FiltrationRanks,
    GluingReport, Matrix, StratumLabel, SSP_LIE,
};
use picard_core::ffield::{
    order_at_origin, quotient_dimension, vanishing_scheme_ideal, Fp2Field, Ideal, Order, Series,
};
use picard_core::numtheory::{self, Splitting};
use picard_core::{Check, Exact};

use crate::config::{self, Format, RunConfig};
use crate::output::{self, CliError, Envelope, Outcome, Status};

/// Largest p accepted by local-models.
pub const MAX_P: u64 = 13;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchRow {
    pub zeta: String,
    pub line: [String; 3],
    pub htilde: String,
    pub hssp: String,
    pub hssp_order: Order,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalModelsResults {
    pub disc: i64,
    pub p: u64,
    pub truncation: u32,
    pub braid_stratum: StratumLabel,
    pub braid_ranks: FiltrationRanks,
    pub gss_hasse: String,
    pub gss_hasse_order: Order,
    pub ssp_hasse: String,
    pub hasse_weight: u64,
    /// F^2 on Lie coordinates (f3, e1, e2) of the superspecial display.
    pub f_squared: Vec<Vec<String>>,
    pub sigma_block_nilpotent: bool,
    pub branches: Vec<BranchRow>,
    pub vanishing_dimension: u64,
    pub gluing: GluingReport,
}

pub type LocalModelsDocument = Envelope<RunConfig, LocalModelsResults>;

/// Smallest |d| with p inert in Q(sqrt d).
pub fn default_d(p: u64) -> Option<i64> {
    (1..1000i64)
        .map(|k| -k)
        .filter(|d| numtheory::is_squarefree(d.unsigned_abs()))
        .find(|&d| numtheory::splitting(numtheory::discriminant_of(d), p) == Splitting::Inert)
}

pub fn check_guard(p: u64) -> Result<(), CliError> {
    if p > MAX_P {
        return Err(CliError::guard(
            "p <= 13",
            format!("p = {p} exceeds the local-model limit {MAX_P}"),
        ));
    }
    Ok(())
}

fn order_value(o: Order) -> Exact {
    match o {
        Order::Unit => Exact::int(0),
        Order::Finite(k) => Exact::int(k as i64),
        // no finite order below the truncation
        Order::ZeroToTruncation => Exact::int(-1),
    }
}

fn flag(b: bool) -> Exact {
    Exact::int(b as i64)
}

fn count(n: usize) -> Exact {
    Exact::int(n as i64)
}

fn from_d(e: DError) -> CliError {
    match e {
        DError::TruncationTooSmall { needed, got } => CliError::hypothesis(
            "truncation",
            format!("truncation {got} is below the required {needed}"),
        ),
        other => CliError::hypothesis("module data", other.to_string()),
    }
}

/// The F^2 matrix read off the display: diag block u^(p+1) + v^(p+1) and
/// the Sigma block (u^(p+1), u v^p; v u^p, v^(p+1)).
pub fn expected_f_squared(field: Fp2Field, p: u64, trunc: u32) -> Matrix<Series> {
    let mono = |i: u32, j: u32| Series::monomial(field.one(), i, j, trunc);
    let q = p as u32;
    let zero = Series::zero(field, trunc);
    Matrix::from_rows(vec![
        vec![&mono(q + 1, 0) + &mono(0, q + 1), zero.clone(), zero.clone()],
        vec![zero.clone(), mono(q + 1, 0), mono(1, q)],
        vec![zero, mono(q, 1), mono(0, q + 1)],
    ])
    .expect("3x3")
}

pub fn compute(cfg: &RunConfig) -> Result<(LocalModelsResults, Vec<Check>), CliError> {
    let p = cfg.p;
    check_guard(p)?;
    if !numtheory::is_prime(p) {
        return Err(CliError::hypothesis("p prime", format!("{p} is not a prime")));
    }
    let disc = config::discriminant(cfg.d)?;
    match numtheory::splitting(disc, p) {
        Splitting::Inert => {}
        s => {
            let how = if s == Splitting::Split { "splits" } else { "ramifies" };
            return Err(CliError::hypothesis(
                "p inert in K",
                format!("p = {p} {how} in the field of discriminant {disc}; p must be inert"),
            ));
        }
    }
    let trunc = cfg.truncation.unwrap_or((p * p * p + 4) as u32);
    let field = Fp2Field::from_discriminant(p, disc).map_err(|e| from_d(e.into()))?;
    let mut checks = Vec::new();

    let braid = braid3(p, disc).map_err(from_d)?;
    let braid_stratum = classify_stratum(&braid).map_err(from_d)?;
    let braid_ranks = filtration_ranks(&braid).map_err(from_d)?;
    checks.push(Check::new("braid module is gss", flag(braid_stratum == StratumLabel::Gss), flag(true)));

    let gss = gss_deformation(p, disc).map_err(from_d)?.hasse_invariant().map_err(from_d)?;
    let gss_order = order_at_origin(&gss.coefficient, &Ideal::zero(field, gss.coefficient.truncation()));
    checks.push(Check::new("order of the gss Hasse invariant", order_value(gss_order), Exact::int(1)));
    checks.push(Check::new(
        "gss Hasse invariant = -u",
        flag(gss.coefficient == -Series::u(field, gss.coefficient.truncation())),
        flag(true),
    ));

    let display = ssp_display(p, disc, trunc).map_err(from_d)?;
    let hasse = display.hasse_invariant().map_err(from_d)?;
    let pe = p as u32 + 1;
    let expected = Series::from_terms(field, trunc, [((pe, 0), field.one()), ((0, pe), field.one())]);
    checks.push(Check::new(
        "terms of Hasse(ssp) - (u^(p+1) + v^(p+1))",
        count((&hasse.coefficient - &expected).num_terms()),
        Exact::int(0),
    ));
    checks.push(Check::new("Hasse weight = p^2 - 1", Exact::int(hasse.weight as i64), Exact::int((p * p - 1) as i64)));

    let f2 = ssp_covariant(p, disc, trunc).map_err(from_d)?.frobenius_square_on(&SSP_LIE).map_err(from_d)?;
    let f2_expected = expected_f_squared(field, p, trunc);
    let differing = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| f2.get(i, j) != f2_expected.get(i, j))
        .count();
    checks.push(Check::new("entries where F^2 differs from the display matrix", count(differing), Exact::int(0)));
    let nilpotent = sigma_block_nilpotent(p, disc).map_err(from_d)?;
    checks.push(Check::new("Sigma block of F^2 semilinearly nilpotent", flag(nilpotent), flag(true)));

    let table = branch_table(p, disc, trunc).map_err(from_d)?;
    let q = (p * p - 1) as i64;
    checks.push(Check::new("number of branches = p+1", count(table.len()), Exact::int(p as i64 + 1)));
    let lines: BTreeSet<String> = table.iter().map(|b| format!("{:?}", b.line)).collect();
    checks.push(Check::new("distinct limit lines", count(lines.len()), Exact::int(p as i64 + 1)));
    let htildes: BTreeSet<String> = table.iter().map(|b| b.htilde.to_string()).collect();
    checks.push(Check::new("distinct branch coefficients htilde", count(htildes.len()), Exact::int(p as i64 + 1)));
    let hssps: BTreeSet<String> = table.iter().map(|b| b.hssp.to_string()).collect();
    checks.push(Check::new("distinct h_ssp across branches", count(hssps.len()), Exact::int(1)));
    let branches: Vec<BranchRow> = table
        .iter()
        .map(|b| {
            checks.push(Check::new(
                format!("order of h_ssp on branch zeta = {}", b.zeta),
                order_value(b.hssp_order),
                Exact::int(q),
            ));
            BranchRow {
                zeta: b.zeta.to_string(),
                line: b.line.map(|x| x.to_string()),
                htilde: b.htilde.to_string(),
                hssp: b.hssp.to_string(),
                hssp_order: b.hssp_order,
            }
        })
        .collect();

    let ideal = vanishing_scheme_ideal(field, trunc).map_err(|e| from_d(e.into()))?;
    let vanishing_dimension = quotient_dimension(&ideal).map_err(|e| from_d(e.into()))?;
    checks.push(Check::new(
        "vanishing-scheme dimension = (p+1)(p^2-1)",
        Exact::int(vanishing_dimension as i64),
        Exact::int(((p + 1) * (p * p - 1)) as i64),
    ));

    let gluing = gluing_obstruction(p, disc, trunc).map_err(from_d)?;
    checks.push(Check::new("no G with vG = u^p", flag(gluing.obstructed), flag(true)));

    let f_squared = (0..3)
        .map(|i| (0..3).map(|j| f2.get(i, j).to_string()).collect())
        .collect();
    Ok((
        LocalModelsResults {
            disc,
            p,
            truncation: trunc,
            braid_stratum,
            braid_ranks,
            gss_hasse: gss.coefficient.to_string(),
            gss_hasse_order: gss_order,
            ssp_hasse: hasse.coefficient.to_string(),
            hasse_weight: hasse.weight,
            f_squared,
            sigma_block_nilpotent: nilpotent,
            branches,
            vanishing_dimension,
            gluing,
        },
        checks,
    ))
}

fn order_text(o: Order) -> String {
    match o {
        Order::Unit => "0".into(),
        Order::Finite(k) => k.to_string(),
        Order::ZeroToTruncation => "zero to truncation".into(),
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    zeta: &'a str,
    line: String,
    htilde: &'a str,
    hssp: &'a str,
    hssp_order: String,
}

fn render_plain(cfg: &RunConfig, r: &LocalModelsResults, checks: &[Check]) -> String {
    let mut out = output::header("local-models", cfg.reproducible);
    let _ = writeln!(out, "D = {}, p = {}, truncation = {}", r.disc, r.p, r.truncation);
    let b = &r.braid_ranks;
    let _ = writeln!(
        out,
        "braid module: {} (rank P0 = {}, rank P_mu = {})",
        r.braid_stratum, b.p0, b.p_mu
    );
    let _ = writeln!(out, "gss Hasse invariant: {} (order {})", r.gss_hasse, order_text(r.gss_hasse_order));
    let _ = writeln!(out, "ssp Hasse invariant: {} (weight {})", r.ssp_hasse, r.hasse_weight);
    let _ = writeln!(out, "F^2 on (f3, e1, e2):");
    for row in &r.f_squared {
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
    let _ = writeln!(
        out,
        "Sigma block nilpotent mod u^{0}+v^{0}: {1}",
        r.p + 1,
        if r.sigma_block_nilpotent { "yes" } else { "no" }
    );
    let _ = writeln!(out, "branches u = zeta v ({}):", r.branches.len());
    for br in &r.branches {
        let _ = writeln!(
            out,
            "  zeta = {}: line ({}), htilde = {}, h_ssp = {} (order {})",
            br.zeta,
            br.line.join(", "),
            br.htilde,
            br.hssp,
            order_text(br.hssp_order)
        );
    }
    let _ = writeln!(out, "vanishing-scheme dimension: {}", r.vanishing_dimension);
    let _ = writeln!(
        out,
        "gluing obstruction: {}",
        if r.gluing.obstructed { "obstructed" } else { "not obstructed" }
    );
    output::write_checks(&mut out, checks);
    out
}

pub fn render(cfg: &RunConfig, r: LocalModelsResults, checks: Vec<Check>) -> String {
    match cfg.format {
        Format::Plain => render_plain(cfg, &r, &checks),
        Format::Csv => {
            let rows: Vec<CsvRow> = r
                .branches
                .iter()
                .map(|b| CsvRow {
                    zeta: &b.zeta,
                    line: b.line.join(" "),
                    htilde: &b.htilde,
                    hssp: &b.hssp,
                    hssp_order: order_text(b.hssp_order),
                })
                .collect();
            output::to_csv(&rows, &["zeta", "line", "htilde", "h_ssp", "h_ssp order"])
        }
        Format::Json => output::to_json(&Envelope {
            config: cfg.clone(),
            results: r,
            checks,
        }),
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (r, checks) = compute(cfg)?;
    Ok(Outcome {
        status: Status::from_checks(&checks),
        text: render(cfg, r, checks),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_at_three() {
        let (r, checks) = compute(&RunConfig::new(-1, 3)).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:?}");
        assert_eq!(r.ssp_hasse, "u^4 + v^4");
        assert_eq!(r.gss_hasse_order, Order::Finite(1));
        assert_eq!(r.branches.len(), 4);
        assert!(r.branches.iter().all(|b| b.hssp_order == Order::Finite(8)));
        assert_eq!(r.vanishing_dimension, 32);
    }

    #[test]
    fn guards_and_gates() {
        assert_eq!(compute(&RunConfig::new(-1, 17)).unwrap_err().status, Status::ResourceGuard);
        assert_eq!(compute(&RunConfig::new(-7, 2)).unwrap_err().hypothesis, "p inert in K");
        let mut cfg = RunConfig::new(-1, 3);
        cfg.truncation = Some(28);
        assert_eq!(compute(&cfg).unwrap_err().hypothesis, "truncation");
    }

    #[test]
    fn default_fields() {
        assert_eq!(default_d(2), Some(-3));
        assert_eq!(default_d(3), Some(-1));
        assert_eq!(default_d(5), Some(-2));
    }
}
