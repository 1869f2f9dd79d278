//! Closed-form heuristic totals on the adversarial families.

use incflow::heur::{quickest_increment_all, quickest_increment_poly, quickest_to_target, quickest_to_ultimate};
use incflow::instgen::{gen_family, gen_matching, Family, Matching};
use incflow::{certified_lower_bound, exact_subset_dp};

fn check(which: Family, k: usize) {
    let fi = gen_family(which, k).unwrap();
    let inst = &fi.instance;
    let p = fi.predicted;
    assert_eq!(quickest_increment_all(inst).unwrap().total, p.qi_total, "{which} k={k} qi");
    assert_eq!(quickest_to_ultimate(inst).unwrap().total, p.qtu_total, "{which} k={k} qtu");
    if let (Some(t), Some(v)) = (&fi.targets, p.qtt_total) {
        assert_eq!(quickest_to_target(inst, t).unwrap().total, v, "{which} k={k} qtt");
    }
    if let Some(v) = p.poly_total {
        assert_eq!(quickest_increment_poly(inst).unwrap().total, v, "{which} k={k} poly");
    }
    assert_eq!(certified_lower_bound(inst, &fi.certified).unwrap(), p.best, "{which} k={k} certified");
    let opt = exact_subset_dp(inst).unwrap().optimum;
    assert!(opt >= p.best, "{which} k={k}");
    if p.best_is_optimal {
        assert_eq!(opt, p.best, "{which} k={k} optimum");
    }
}

#[test]
fn small_k() {
    for which in Family::ALL {
        for k in which.k_min()..which.k_min() + 4 {
            check(which, k);
        }
    }
}

#[test]
fn matching_instances() {
    let m1 = gen_matching(Matching::M1).unwrap();
    assert_eq!(quickest_to_ultimate(&m1.instance).unwrap().total, 68);
    assert_eq!(quickest_increment_all(&m1.instance).unwrap().total, 69);
    assert_eq!(certified_lower_bound(&m1.instance, &m1.certified).unwrap(), 69);
    assert_eq!(exact_subset_dp(&m1.instance).unwrap().optimum, 69);
    let m2 = gen_matching(Matching::M2).unwrap();
    assert_eq!(quickest_increment_all(&m2.instance).unwrap().total, 53);
    assert_eq!(certified_lower_bound(&m2.instance, &m2.certified).unwrap(), 54);
    assert_eq!(exact_subset_dp(&m2.instance).unwrap().optimum, 54);
}
