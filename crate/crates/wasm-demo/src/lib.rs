//! WebAssembly bindings behind `www/index.html`.
//!
//! Each exported function is a thin wrapper over a plain Rust function of
//! the same name with an `_impl` suffix, so the logic is testable natively.
//! Only serial library paths are used: no threads, no clocks.

use wasm_bindgen::prelude::*;

use rkit::engine::{coeff_closed, lcm_partial_sums, CoefficientFamily, FamilyKind, UnitarySupport};
use rkit::ramanujan::{RamanujanTable, SumKind};

/// Largest `Q_max` the page may request; keeps a trajectory under a second.
pub const MAX_Q: u32 = 200_000;

fn kind(name: &str) -> rkit::Result<SumKind> {
    name.parse()
}

fn family(
    name: &str,
    s: Option<f64>,
    m: Option<u32>,
    kind_name: &str,
    k: usize,
) -> rkit::Result<CoefficientFamily> {
    CoefficientFamily::new(FamilyKind::from_name(name, s, m)?, kind(kind_name)?, k)
}

fn widen(xs: &[u32]) -> Vec<u64> {
    xs.iter().map(|&x| x as u64).collect()
}

fn check_q_max(q_max: u32) -> rkit::Result<()> {
    if q_max == 0 || q_max > MAX_Q {
        return Err(rkit::Error::Domain(format!("Q_max must be in 1..={MAX_Q}")));
    }
    Ok(())
}

pub fn ramanujan_row_impl(kind_name: &str, n: u32, q_max: u32) -> rkit::Result<Vec<f64>> {
    check_q_max(q_max)?;
    let table = RamanujanTable::new(kind(kind_name)?, n as u64, q_max as u64)?;
    Ok(table.values().iter().map(|&v| v as f64).collect())
}

/// Partial sums for `Q = 1..=Q_max` followed by the exact left-hand side.
pub fn expansion_trajectory_impl(
    name: &str,
    s: Option<f64>,
    m: Option<u32>,
    kind_name: &str,
    ns: &[u32],
    q_max: u32,
) -> rkit::Result<Vec<f64>> {
    check_q_max(q_max)?;
    let f = family(name, s, m, kind_name, ns.len())?;
    let ns = widen(ns);
    let mut out = lcm_partial_sums(&f, &ns, q_max as u64, UnitarySupport::Compatible)?;
    out.push(f.lhs(&ns)?.to_f64());
    Ok(out)
}

pub fn coefficient_text_impl(
    name: &str,
    s: Option<f64>,
    m: Option<u32>,
    kind_name: &str,
    q: &[u32],
) -> rkit::Result<String> {
    let f = family(name, s, m, kind_name, q.len())?;
    let c = coeff_closed(&f, &widen(q))?;
    Ok(match c.symbolic {
        Some(sym) => format!("{sym} = {:.15}", c.value),
        None => format!("{:.15}", c.value),
    })
}

fn js<T>(r: rkit::Result<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// `c_q(n)` or `c*_q(n)` for `q = 1..=q_max`.
#[wasm_bindgen]
pub fn ramanujan_row(kind: &str, n: u32, q_max: u32) -> Result<Vec<f64>, JsError> {
    js(ramanujan_row_impl(kind, n, q_max))
}

/// Lcm-truncated partial sums of the expansion of `g(gcd(n))`; the last
/// entry is the exact value being approached.
#[wasm_bindgen]
pub fn expansion_trajectory(
    family: &str,
    s: Option<f64>,
    m: Option<u32>,
    kind: &str,
    n: Vec<u32>,
    q_max: u32,
) -> Result<Vec<f64>, JsError> {
    js(expansion_trajectory_impl(family, s, m, kind, &n, q_max))
}

/// Closed-form coefficient at the tuple `q`, symbolic form first.
#[wasm_bindgen]
pub fn coefficient_text(
    family: &str,
    s: Option<f64>,
    m: Option<u32>,
    kind: &str,
    q: Vec<u32>,
) -> Result<String, JsError> {
    js(coefficient_text_impl(family, s, m, kind, &q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_matches_prime_power_values() {
        let row = ramanujan_row_impl("unitary", 2, 8).unwrap();
        assert_eq!(row.len(), 8);
        // c*_4(2) = -1, c*_2(2) = 1, c*_8(2) = -1
        assert_eq!((row[1], row[3], row[7]), (1.0, -1.0, -1.0));
        let row = ramanujan_row_impl("classical", 1, 6).unwrap();
        assert_eq!(row, vec![1.0, -1.0, -1.0, 0.0, -1.0, 1.0]);
    }

    #[test]
    fn trajectory_ends_with_lhs() {
        let t =
            expansion_trajectory_impl("sigma", Some(1.0), None, "classical", &[4, 6], 512).unwrap();
        assert_eq!(t.len(), 513);
        assert_eq!(t[512], 1.5);
        assert!((t[511] - 1.5).abs() < 1e-6);
    }

    #[test]
    fn coefficient_text_has_symbolic_form() {
        let text = coefficient_text_impl("sigma", None, None, "unitary", &[2, 2]).unwrap();
        assert!(text.starts_with("7/64 * zeta(3) = 0.131474"), "{text}");
        let text = coefficient_text_impl("piltz", None, Some(3), "unitary", &[1, 2]).unwrap();
        assert!(text.starts_with("9/32 * zeta(2)^2"));
    }

    #[test]
    fn bad_input_is_a_domain_error() {
        assert!(ramanujan_row_impl("weird", 1, 5).is_err());
        assert!(ramanujan_row_impl("classical", 1, MAX_Q + 1).is_err());
        assert!(expansion_trajectory_impl("piltz", None, None, "classical", &[1, 1], 10).is_err());
        assert!(coefficient_text_impl("sigma", None, None, "classical", &[0]).is_err());
    }
}
