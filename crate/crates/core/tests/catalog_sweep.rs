use lierealise::catalog::{self, CatalogParams};
use lierealise::realise::{
    lift_polynomial, nilpotent_complement, realise, verify_realisation, CertificationStatus,
};

#[test]
fn every_sweep_instance_verifies() {
    for e in catalog::entries() {
        for p in catalog::sweep(e) {
            let rep = catalog::verify_entry_def(e, &p, 6);
            assert!(rep.passed(), "{rep:?}");
        }
    }
}

#[test]
fn type_five_round_trip() {
    let inst = catalog::instantiate("T1.(5)", &CatalogParams::default(), 6).unwrap();
    let r = realise(&inst.pair, 6).unwrap();
    assert!(verify_realisation(&r).passed());
}

#[test]
fn nilpotent_complements_lift_to_polynomials() {
    let d = 8;
    let mut lifted = 0;
    for e in catalog::entries() {
        for p in catalog::sweep(e) {
            let inst = catalog::instantiate_entry(e, &p, d).unwrap();
            if !inst.is_polynomial() || !nilpotent_complement(&inst.pair) {
                continue;
            }
            let r = realise(&inst.pair, d).unwrap();
            for per in lift_polynomial(&r) {
                for c in per {
                    assert_eq!(
                        c.status,
                        CertificationStatus::CertifiedPolynomial,
                        "{} {}",
                        e.id,
                        p.render(e)
                    );
                }
            }
            lifted += 1;
        }
    }
    assert!(lifted > 0);
}
