//! Randomised and fixture-based checks of the torsion identities.
//!
//! Every check compares two independently computed sides and reports the
//! verdict under the pinned conventions, together with the verdicts under
//! the documented alternatives.

mod checks;
pub mod generate;
mod report;

use rand::Rng;

pub use checks::{describe, fixed_euler_characteristic, is_signed_permutation, NUMERIC_BITS, NUMERIC_TOLERANCE};
pub use report::{CheckReport, CheckValue, Comparison, Relation, Residual, Variant, Verdict};

use crate::complex::ChainComplex;
use crate::constructions::cw::fixtures as cw_fixtures;
use crate::constructions::order::{eisenstein_modulus, gaussian_modulus};
use crate::constructions::{CwData, OrderComplex};
use crate::error::{Error, Result};
use generate::Params;

/// Version of the conventions ledger that every report is stamped with.
pub const CONVENTIONS_VERSION: &str = "2";

/// Stable check identifiers, sorted.
pub const CHECKS: [&str; 12] = [
    "norm-compatibility",
    "nrt-additivity",
    "nrt-homotopy",
    "nrt-tensor-power",
    "product-zeta",
    "quotient-geometric",
    "rt-nrt-relation",
    "rt-sigma-decomposition",
    "spectral-bound",
    "twisted-guess-volume-variants",
    "twisted-split-p2",
    "untwisted-cm-finite",
];

/// What a check is evaluated on.
#[derive(Clone, Debug)]
pub enum CheckInput {
    /// Draw a check-specific random instance.
    Seed(u64),
    Complex(ChainComplex),
    /// A complex and the exponent `n` of its cyclic tensor power.
    TensorBase { base: ChainComplex, power: u32 },
    /// Two complexes; `power` is used by the additivity check.
    Pair { first: ChainComplex, second: ChainComplex, power: u32 },
    Cw { name: String, data: CwData },
    Order(OrderComplex),
}

fn unknown(name: &str) -> Error {
    Error::UnknownCheck(name.into())
}

fn mismatch(name: &str, input: &CheckInput) -> Error {
    let kind = match input {
        CheckInput::Seed(_) => "seed",
        CheckInput::Complex(_) => "complex",
        CheckInput::TensorBase { .. } => "tensor base",
        CheckInput::Pair { .. } => "pair of complexes",
        CheckInput::Cw { .. } => "cell complex",
        CheckInput::Order(_) => "order complex",
    };
    Error::Shape(format!("check `{name}` does not accept a {kind} input"))
}

fn describe_order(o: &OrderComplex) -> String {
    format!(
        "modulus [{}], degrees {}.., ranks {:?}",
        o.modulus().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
        o.min_degree(),
        o.ranks()
    )
}

/// Evaluates one check on one input.
pub fn run_identity_check(name: &str, input: &CheckInput) -> Result<CheckReport> {
    if !CHECKS.contains(&name) {
        return Err(unknown(name));
    }
    if let CheckInput::Seed(seed) = input {
        let (concrete, label) = seeded_input(name, *seed);
        let mut report = run_identity_check(name, &concrete)?;
        report.input = format!("seed {seed}; {label}");
        return Ok(report);
    }
    use CheckInput::*;
    match (name, input) {
        ("untwisted-cm-finite", Complex(c)) => checks::untwisted_cm_finite(c, describe(c)),
        ("twisted-split-p2", Complex(c)) => checks::twisted_split_p2(c, describe(c)),
        ("twisted-guess-volume-variants", Complex(c)) => checks::twisted_guess_volume_variants(c, describe(c)),
        ("spectral-bound", Complex(c)) => checks::spectral_bound(c, describe(c)),
        ("rt-sigma-decomposition", Complex(c)) => checks::rt_sigma_decomposition(c, describe(c)),
        ("rt-nrt-relation", Complex(c)) => checks::rt_nrt_relation(c, describe(c)),
        ("product-zeta", TensorBase { base, power }) => {
            checks::product_zeta(base, *power, format!("{}; n = {power}", describe(base)))
        }
        ("nrt-tensor-power", TensorBase { base, power }) => {
            checks::nrt_tensor_power(base, *power, format!("{}; p = {power}", describe(base)))
        }
        ("nrt-homotopy", Pair { first, second, .. }) => checks::nrt_homotopy(
            first,
            second,
            format!("C: {}; B: {}", describe(first), describe(second)),
        ),
        ("nrt-additivity", Pair { first, second, power }) => checks::nrt_additivity(
            first,
            second,
            *power,
            format!("A: {}; B: {}; p = {power}", describe(first), describe(second)),
        ),
        ("quotient-geometric", Cw { name: n, data }) => {
            checks::quotient_geometric(data, format!("cell complex `{n}`, cells {:?}", data.cell_counts()))
        }
        ("norm-compatibility", Order(o)) => checks::norm_compatibility(o, describe_order(o)),
        _ => Err(mismatch(name, input)),
    }
}

/// The random instance drawn for `name` from `seed`, with a short label.
pub fn seeded_input(name: &str, seed: u64) -> (CheckInput, String) {
    let mut rng = generate::rng(seed);
    let r = &mut rng;
    let input = match name {
        "untwisted-cm-finite" => CheckInput::Complex(generate::random_complex(
            r,
            &Params { max_len: 4, max_rank: 6, max_entry: 5, ..Params::default() },
        )),
        "twisted-split-p2" => {
            let acyclic = r.gen_bool(0.5);
            let random_metric = r.gen_bool(0.5);
            CheckInput::Complex(generate::random_complex(
                r,
                &Params { order: 2, max_rank: 4, acyclic, random_metric, ..Params::default() },
            ))
        }
        "twisted-guess-volume-variants" | "spectral-bound" => CheckInput::Complex(generate::random_complex(
            r,
            &Params { order: 2, max_rank: 5, unimodular: true, ..Params::default() },
        )),
        "rt-sigma-decomposition" => {
            let order = *[2, 3, 5].get(r.gen_range(0..3)).unwrap();
            let random_metric = r.gen_bool(0.5);
            CheckInput::Complex(generate::random_complex(
                r,
                &Params { order, max_rank: 5, random_metric, ..Params::default() },
            ))
        }
        "rt-nrt-relation" => {
            let order = r.gen_range(2..=3);
            CheckInput::Complex(generate::random_complex(
                r,
                &Params { order, max_rank: 6, unimodular: true, balanced_fixed: true, ..Params::default() },
            ))
        }
        "nrt-homotopy" => {
            let order = r.gen_range(2..=3);
            let first = generate::random_complex(
                r,
                &Params { order, max_rank: 3, max_entry: 3, metric: false, ..Params::default() },
            );
            let second = generate::random_complex(
                r,
                &Params { order, max_rank: 3, max_entry: 3, acyclic: false, metric: false, ..Params::default() },
            );
            CheckInput::Pair { first, second, power: order }
        }
        "nrt-additivity" => {
            let power = if r.gen_bool(0.3) { 3 } else { 2 };
            let total = if power == 3 { 2 } else { 4 };
            let first = generate::random_small(r, total, 3);
            let second = generate::random_small(r, total, 3);
            CheckInput::Pair { first, second, power }
        }
        "product-zeta" => {
            let power = r.gen_range(2..=3);
            let base = generate::random_tensor_base(r, if power == 2 { 4 } else { 3 });
            CheckInput::TensorBase { base, power }
        }
        "nrt-tensor-power" => {
            let power = if r.gen_bool(0.3) { 3 } else { 2 };
            let base = generate::random_small(r, if power == 2 { 5 } else { 3 }, 4);
            CheckInput::TensorBase { base, power }
        }
        "quotient-geometric" => {
            let fixtures = cw_fixtures::all();
            let pick = r.gen_range(0..fixtures.len() + 2);
            match fixtures.into_iter().nth(pick) {
                Some((n, data)) => CheckInput::Cw { name: n.into(), data },
                None => {
                    let p = r.gen_range(2..=3);
                    CheckInput::Cw { name: format!("random graph, p = {p}"), data: generate::random_graph(r, p) }
                }
            }
        }
        "norm-compatibility" => {
            let modulus = if r.gen_bool(0.5) { gaussian_modulus() } else { eisenstein_modulus() };
            CheckInput::Order(generate::random_order_complex(r, &modulus))
        }
        _ => CheckInput::Seed(seed),
    };
    let label = match &input {
        CheckInput::Complex(c) => describe(c),
        CheckInput::TensorBase { base, power } => format!("{}; power {power}", describe(base)),
        CheckInput::Pair { first, second, power } => {
            format!("{}; {}; power {power}", describe(first), describe(second))
        }
        CheckInput::Cw { name, .. } => format!("cell complex `{name}`"),
        CheckInput::Order(o) => describe_order(o),
        CheckInput::Seed(_) => String::new(),
    };
    (input, label)
}

/// Runs `suite` (a check name or `all`) on seeds `seed .. seed + count`.
/// Reports are ordered by check name, then seed.
pub fn run_suite(suite: &str, seed: u64, count: u64) -> Result<Vec<CheckReport>> {
    let names: Vec<&str> = if suite == "all" {
        CHECKS.to_vec()
    } else if CHECKS.contains(&suite) {
        vec![suite]
    } else {
        return Err(unknown(suite));
    };
    let mut out = Vec::new();
    for name in names {
        for s in seed..seed.saturating_add(count) {
            out.push(run_identity_check(name, &CheckInput::Seed(s))?);
        }
    }
    Ok(out)
}
