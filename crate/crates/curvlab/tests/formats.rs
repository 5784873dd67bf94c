use std::sync::Arc;

use proptest::prelude::*;

use curvlab::config::{builtin_profile, ConfigFile, RunConfig, BUILTIN_PROFILES};
use curvlab::expr::Expr;
use curvlab::formats::{field_table, parse_field_table, parse_theta_kind, DomainRecord, ProfileRecord};
use curvlab_core::domain::builtin_domains;
use curvlab_core::pde::{PolarGrid, ScalarField};

#[test]
fn builtin_domains_survive_a_record_round_trip() {
    for d in builtin_domains() {
        let rec = DomainRecord::from_domain(&d);
        let back = DomainRecord::parse(&rec.to_toml()).unwrap();
        assert_eq!(back, rec);
        let d2 = back.to_domain().unwrap();
        for k in 0..16 {
            let t = 0.4 * k as f64;
            assert_eq!(d2.rho(t), d.rho(t), "{}", d.label);
        }
    }
}

#[test]
fn builtin_profiles_survive_a_record_round_trip() {
    for dim in [2, 3] {
        for name in BUILTIN_PROFILES {
            let p = builtin_profile(name, dim).unwrap();
            let rec = ProfileRecord::from_profile(&p);
            let q = ProfileRecord::parse(&rec.to_toml()).unwrap().to_profile().unwrap();
            assert_eq!((q.n, q.d, q.closed, q.theta.name()), (p.n, p.d, p.closed, p.theta.name()));
        }
    }
}

#[test]
fn theta_kinds_parse() {
    for s in ["sin", "id", "sinh", "oblate(0.2)", "fourier_perturbed(0, 0.05)", "fourier_perturbed()"] {
        assert!(parse_theta_kind(s).is_ok(), "{s}");
    }
    for s in ["cos", "oblate", "oblate(0.1, 0.2)", "fourier_perturbed(x)", "sin(", "oblate(1"] {
        assert!(parse_theta_kind(s).is_err(), "{s}");
    }
}

#[test]
fn field_tables_round_trip() {
    let d = builtin_domains().into_iter().find(|d| d.label == "sphere_egg").unwrap();
    let g = Arc::new(PolarGrid::new(d, 16, 32).unwrap());
    let f = ScalarField::from_polar(g.clone(), |r, t| r * t.cos() + 0.1);
    let (header, rows) = parse_field_table(&field_table(&f, 1e-9)).unwrap();
    assert_eq!(header["domain"], "sphere_egg");
    assert_eq!(header["surface"], "sphere");
    assert_eq!(rows.len(), g.n_nodes());
    for (k, row) in rows.iter().enumerate() {
        assert_eq!(row[5], f.values[k]);
    }
    assert!(parse_field_table("s,t\n1,2\n").is_err());
}

#[test]
fn overlay_replaces_domain_forms() {
    let file = ConfigFile::parse("command = \"audit\"\ndomain = \"euclid_oval\"\nseed = 5\n").unwrap();
    let flags = ConfigFile { domain_file: Some("x.toml".into()), ..Default::default() };
    let c = file.overlay(flags);
    assert_eq!(c.domain, None);
    assert_eq!(c.seed, Some(5));
    assert!(ConfigFile::parse("nope = 1").is_err());
    assert!(RunConfig::resolve(ConfigFile::default()).is_err());
}

fn poly_source(c: &[i32]) -> String {
    c.iter().enumerate().map(|(k, a)| format!("({a})*s^{k}")).collect::<Vec<_>>().join(" + ")
}

proptest! {
    #[test]
    fn polynomials_evaluate_and_differentiate(c in prop::collection::vec(-5i32..=5, 1..5), s in -2.0f64..2.0) {
        let e = Expr::parse(&poly_source(&c)).unwrap();
        let (mut v, mut dv) = (0.0, 0.0);
        for (k, &a) in c.iter().enumerate() {
            v += a as f64 * s.powi(k as i32);
            if k > 0 {
                dv += (k as i32 * a) as f64 * s.powi(k as i32 - 1);
            }
        }
        prop_assert!((e.eval(s) - v).abs() <= 1e-12 * (1.0 + v.abs()));
        prop_assert!((e.diff().eval(s) - dv).abs() <= 1e-12 * (1.0 + dv.abs()));
    }

    #[test]
    fn display_reparses_to_the_same_function(c in prop::collection::vec(-5i32..=5, 1..4), s in 0.1f64..2.0) {
        let src = format!("exp({}) - sqrt(s) / (1 + s^2)", poly_source(&c));
        let e = Expr::parse(&src).unwrap();
        let again = Expr::parse(&e.to_string()).unwrap();
        prop_assert!((again.eval(s) - e.eval(s)).abs() <= 1e-12 * (1.0 + e.eval(s).abs()));
    }
}
