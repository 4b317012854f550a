//! Replays the worked example `12X_1 + 4X_2 + 2X_3 + 3X_4 = 0` and compares
//! each computed display against the stored goldens.

use anyhow::{anyhow, Result};
use dioph::basis::{build_basis, verify_basis};
use dioph::matrix::{solve_integral, IntMatrix};
use dioph::presentation::{build_presentation, verify_presentation};
use dioph::quotients::{d_chain, quotient_s_mod_si, quotient_s_mod_ui, quotient_w_mod_s};
use dioph::ring::{gcd, gcd_prefixes};
use dioph::solution::{
    choose_m, from_w_coords, spanning_set, u_vector, v_vector, Coefficients, IndexSet, MStrategy,
};
use dioph::{det_exact, snf, Int, QuotientStructure};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::strings;

const GOLDENS: &str = include_str!("../goldens/worked_example.json");

#[derive(Debug, Serialize)]
pub struct Display {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub matches: bool,
}

fn rows(m: &IntMatrix) -> Value {
    json!(m.to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>())
}

fn fraction(num: &Int, den: &Int) -> String {
    let g = gcd(num, den);
    let (mut p, mut q) = (num / &g, den / &g);
    if q < Int::from(0) {
        p = -p;
        q = -q;
    }
    if q == Int::from(1) {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

/// Reduces each entry above the diagonal of an upper triangular matrix with
/// positive diagonal into `(−d/2, d/2]`, `d` the diagonal entry of its row,
/// using column operations. The result depends only on the column span.
fn centered_reduction(a: &IntMatrix) -> IntMatrix {
    let mut a = a.clone();
    let k = a.cols();
    for j in 1..k {
        for i in (0..j).rev() {
            let d = a[(i, i)].clone();
            let mut r = a[(i, j)].mod_floor(&d);
            if &r * 2 > d {
                r -= &d;
            }
            let q = (&a[(i, j)] - &r) / &d;
            a.add_col_multiple(j, i, &-q);
        }
    }
    a
}

fn invariant_factors(q: &QuotientStructure) -> Value {
    json!(strings(&q.invariant_factors))
}

fn compute() -> Result<Vec<(&'static str, Value)>> {
    let c = Coefficients::from_i64(&[12, 4, 2, 3])?;
    let a = c.as_slice();
    let a1 = &a[0];
    let mut out = vec![("equation", json!(strings(a)))];

    let w: Vec<Vec<String>> = (1..4)
        .map(|j| {
            let mut v = vec!["0".to_string(); 4];
            v[0] = fraction(&-&a[j], a1);
            v[j] = "1".into();
            v
        })
        .collect();
    out.push(("w_vectors", json!(w)));
    out.push(("W_mod_S", invariant_factors(&quotient_w_mod_s(&c, 1)?)));
    out.push((
        "congruence",
        json!({"coefficients": strings(&a[1..]), "modulus": a1.to_string()}),
    ));
    let pairwise: Vec<Int> = a[1..].iter().map(|x| gcd(a1, x)).collect();
    out.push((
        "gcds",
        json!({"pairwise": strings(&pairwise), "prefix": strings(gcd_prefixes(a).as_slice())}),
    ));

    let built = build_basis(&c, &IndexSet::all(&c))?;
    out.push(("diagonal", json!(strings(&built.x.diagonal_entries()))));
    let reduced = centered_reduction(&built.a);
    out.push(("A", rows(&reduced)));
    out.push(("A_det", json!(det_exact(&reduced)?.to_string())));

    let z = reduced
        .columns()
        .iter()
        .map(|col| from_w_coords(&c, col, 1))
        .collect::<dioph::Result<Vec<_>>>()?;
    verify_basis(&c, &z, 1).map_err(|r| anyhow!("reduced basis rejected: {r}"))?;
    out.push((
        "basis",
        json!(z.iter().map(|v| strings(v.as_slice())).collect::<Vec<_>>()),
    ));

    let ratios: Vec<String> = (2..=4)
        .map(|j| {
            let v = v_vector(&c, 1, j).expect("valid pair");
            // v(1,j) has a_1 in slot j, where w(1,j) has 1
            v.as_slice()[j - 1].to_string()
        })
        .collect();
    out.push(("v_over_w", json!(ratios)));
    out.push(("S_mod_S1", invariant_factors(&quotient_s_mod_si(&c, 1)?)));

    let zm = IntMatrix::from_columns(
        4,
        &z.iter().map(|v| v.as_slice().to_vec()).collect::<Vec<_>>(),
    )?;
    let coords = |vs: Vec<Vec<Int>>| -> Result<IntMatrix> {
        Ok(solve_integral(&zm, &IntMatrix::from_columns(4, &vs)?)?)
    };
    let vb = coords(
        (2..=4)
            .map(|j| v_vector(&c, 1, j).unwrap().into_vec())
            .collect(),
    )?;
    out.push(("v_coordinates", rows(&vb)));
    out.push((
        "v_coordinates_snf",
        json!(strings(&snf(&vb).invariant_factors)),
    ));

    let su1 = quotient_s_mod_ui(&c, 1)?;
    let chain = d_chain(&c)?;
    if su1 != QuotientStructure::from_cyclic_orders(0, chain.values())? {
        return Err(anyhow!("S/U_1 = {su1} does not match the d-chain"));
    }
    out.push(("S_mod_U1", json!(strings(chain.values()))));
    let ub = coords(
        (2..=4)
            .map(|j| u_vector(&c, 1, j).unwrap().into_vec())
            .collect(),
    )?;
    out.push(("u_coordinates", rows(&ub)));
    out.push((
        "u_coordinates_snf",
        json!(strings(&snf(&ub).invariant_factors)),
    ));

    let m = choose_m(&c, MStrategy::GreedyMinimal);
    out.push(("M", json!(m.as_slice())));
    out.push((
        "spanning_set",
        json!(spanning_set(&c, &m)
            .iter()
            .map(|v| strings(v.as_slice()))
            .collect::<Vec<_>>()),
    ));
    let p = build_presentation(&c, &m);
    let relations: Vec<Vec<String>> = p
        .rel
        .columns()
        .iter()
        .map(|col| {
            col.iter()
                .filter(|x| **x != BigInt::from(0))
                .map(ToString::to_string)
                .collect()
        })
        .collect();
    out.push(("relations", json!(relations)));
    let report = verify_presentation(&c, &p)?;
    out.push((
        "sizes",
        json!({"n": c.n(), "m": m.len(), "d": report.d, "e": report.e, "r": report.rank}),
    ));
    out.push(("relation_matrix", rows(&p.rel)));
    out.push(("relation_snf", json!(strings(&report.snf_diagonal))));
    Ok(out)
}

/// Every display, with the golden value next to the computed one.
pub fn replay() -> Result<Vec<Display>> {
    let goldens: serde_json::Map<String, Value> = serde_json::from_str(GOLDENS)?;
    let computed = compute()?;
    let mut out = Vec::new();
    for (name, value) in computed {
        let expected = goldens.get(name).cloned().unwrap_or(Value::Null);
        out.push(Display {
            name: name.to_string(),
            matches: expected == value,
            expected,
            computed: value,
        });
    }
    for name in goldens.keys() {
        if !out.iter().any(|d| &d.name == name) {
            out.push(Display {
                name: name.clone(),
                expected: goldens[name].clone(),
                computed: Value::Null,
                matches: false,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_recovers_golden_matrix() {
        let ours = IntMatrix::from_i64(&[&[3, 2, 0], &[0, 2, 3], &[0, 0, 2]]);
        let theirs = IntMatrix::from_i64(&[&[3, -1, 1], &[0, 2, 1], &[0, 0, 2]]);
        assert_eq!(centered_reduction(&ours), theirs);
        assert_eq!(centered_reduction(&theirs), theirs);
    }

    #[test]
    fn fractions() {
        assert_eq!(fraction(&Int::from(-4), &Int::from(12)), "-1/3");
        assert_eq!(fraction(&Int::from(3), &Int::from(-12)), "-1/4");
        assert_eq!(fraction(&Int::from(0), &Int::from(5)), "0");
    }

    #[test]
    fn every_display_matches() {
        for d in replay().unwrap() {
            assert!(
                d.matches,
                "{}: expected {} computed {}",
                d.name, d.expected, d.computed
            );
        }
    }
}
