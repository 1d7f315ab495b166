use super::field::{self, lift};
use super::*;

const PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

fn ctx(p: u64) -> RepContext {
    RepContext::new(p).unwrap()
}

fn gl_table(c: &RepContext) -> Vec<ClassFunction> {
    c.gl_irreps().iter().map(|r| c.irrep_character(r).unwrap()).collect()
}

/// `sum_chi chi(x) chi(y^{-1}) = delta_{xy} |C_G(x)|` in both fields.
fn column_orthogonality(c: &RepContext, group: Group, chars: &[ClassFunction]) {
    let table = c.table(group);
    for i in 0..2 {
        let m = c.modulus(i).ell;
        for (x, cx) in table.classes.iter().enumerate() {
            for (y, cy) in table.classes.iter().enumerate() {
                let s = chars.iter().fold(0, |acc, ch| {
                    field::add(acc, field::mul(ch.values(i)[x], ch.values(i)[cy.inverse], m), m)
                });
                let expected = if x == y { table.order() / cx.size } else { 0 };
                assert_eq!(s, expected % m, "{group:?} p={} classes {x},{y}", table.p);
            }
        }
    }
}

#[test]
fn gl2_orthogonality() {
    for p in PRIMES {
        let c = ctx(p);
        let chars = gl_table(&c);
        column_orthogonality(&c, Group::GL2, &chars);
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                assert_eq!(c.inner_product(a, b).unwrap(), i64::from(i == j));
            }
        }
    }
}

#[test]
fn sl2_table() {
    for p in PRIMES {
        let c = ctx(p);
        let chars = c.sl_irreps().to_vec();
        assert_eq!(chars.len() as u64, p + 4, "p = {p}");
        column_orthogonality(&c, Group::SL2, &chars);
        let degrees: u64 = chars.iter().map(|x| (x.degree().unwrap() as u64).pow(2)).sum();
        assert_eq!(degrees, p * (p * p - 1));
    }
}

#[test]
fn gauss_sum_squares_to_signed_p() {
    for p in PRIMES {
        let c = ctx(p);
        let eps: i64 = if p % 4 == 1 { 1 } else { -1 };
        for i in 0..2 {
            let m = c.modulus(i).ell;
            let g = c.gauss_sum()[i];
            assert_eq!(lift(field::mul(g, g, m), m), eps * p as i64);
        }
    }
}

#[test]
fn simple_modules_are_fixed_points() {
    for p in PRIMES {
        let c = ctx(p);
        for s in c.gl_weights().to_vec() {
            let chi = c.brauer_char_simple(s.a(), s.b(), Group::GL2).unwrap();
            assert_eq!(c.decompose_gl(&chi).unwrap(), GrothendieckElt::basis(s.clone()));
            assert_eq!(chi.degree().unwrap() as u64, s.a() + 1);
            // restriction is the SL_2 simple of the same a
            let res = c.restrict_to_sl2(&chi).unwrap();
            let sl = c.brauer_char_simple(s.a(), 0, Group::SL2).unwrap();
            assert_eq!(res, sl);
        }
        for sigma in c.sl_weights().to_vec() {
            let chi = c.brauer_char_simple(sigma.a(), 0, Group::SL2).unwrap();
            assert_eq!(c.decompose_sl(&chi).unwrap(), GrothendieckElt::basis(sigma.clone()));
        }
        assert!(c.brauer_char_simple(p, 0, Group::GL2).is_err());
        assert!(c.brauer_char_simple(0, p - 1, Group::GL2).is_err());
        assert!(c.brauer_char_simple(0, p - 1, Group::SL2).is_ok());
    }
}

#[test]
fn brauer_examples() {
    let c = ctx(5);
    let triv = c.brauer_char_simple(0, 0, Group::GL2).unwrap();
    let regular = c.table(Group::GL2).regular_indices();
    assert!(regular.iter().all(|&i| triv.integer_value(i).unwrap() == 1));
    assert_eq!(c.brauer_char_simple(1, 0, Group::GL2).unwrap().degree().unwrap(), 2);
    assert_eq!(c.brauer_char_simple(4, 0, Group::GL2).unwrap().degree().unwrap(), 5);
    assert_eq!(c.tensor_ss_gl(&GrothendieckElt::basis(SerreWeightGL::pair(0, 0)), &GrothendieckElt::basis(SerreWeightGL::pair(0, 0))).unwrap(),
        GrothendieckElt::basis(SerreWeightGL::pair(0, 0)));
}

#[test]
fn clebsch_gordan_mod_5() {
    let c = ctx(5);
    let x = GrothendieckElt::basis(SerreWeightGL::pair(1, 0));
    let expected = GrothendieckElt::from_terms([(SerreWeightGL::pair(2, 0), 1), (SerreWeightGL::pair(0, 1), 1)]);
    assert_eq!(c.tensor_ss_gl(&x, &x).unwrap(), expected);
    let y = GrothendieckElt::basis(SerreWeightSL::single(1));
    let sl = c.tensor_ss_sl(&y, &y).unwrap();
    assert_eq!(sl, expected.restrict_to_sl2());
}

#[test]
fn tensor_commutes_and_has_unit() {
    for p in [3u64, 5, 7] {
        let c = ctx(p);
        let w = c.gl_weights().to_vec();
        let unit = GrothendieckElt::basis(SerreWeightGL::pair(0, 0));
        for (i, s) in w.iter().enumerate().step_by(3) {
            let x = GrothendieckElt::basis(s.clone());
            assert_eq!(c.tensor_ss_gl(&x, &unit).unwrap(), x);
            let t = &w[(i * 7 + 3) % w.len()];
            let y = GrothendieckElt::basis(t.clone());
            let xy = c.tensor_ss_gl(&x, &y).unwrap();
            assert_eq!(xy, c.tensor_ss_gl(&y, &x).unwrap());
            assert_eq!(xy.dimension(), x.dimension() * y.dimension());
        }
    }
}

#[test]
fn restriction_of_grothendieck_elements() {
    let x = GrothendieckElt::from_terms([(SerreWeightGL::pair(3, 1), 2), (SerreWeightGL::pair(3, 2), 1)]);
    let r = x.restrict_to_sl2();
    assert_eq!(r, GrothendieckElt::basis(SerreWeightSL::single(3)).scale(3));
    assert_eq!(r.dimension(), x.dimension());
}

#[test]
fn not_a_character_is_rejected() {
    let c = ctx(5);
    let bad = c
        .brauer_char_simple(1, 0, Group::GL2)
        .unwrap()
        .sub(&c.brauer_char_simple(0, 0, Group::GL2).unwrap().scale(2))
        .unwrap();
    assert!(matches!(c.decompose_gl(&bad), Err(BmtError::ArithmeticFault { .. })));
    let big = c.constant(Group::GL2, (c.capacity() + 1) as i64);
    assert!(c.decompose_gl(&big).is_err());
}

#[test]
fn hodge_characters() {
    let c = ctx(7);
    let triv = c.sigma_gl_of_hodge(&GLWeight::pair(1, 0)).unwrap();
    assert_eq!(c.decompose_gl(&triv).unwrap(), GrothendieckElt::basis(SerreWeightGL::pair(0, 0)));
    for a in 0..7 {
        for b in 0..6 {
            let ell = GLWeight::pair(a + b + 1, b);
            let chi = c.sigma_gl_of_hodge(&ell).unwrap();
            assert_eq!(chi.degree().unwrap(), a + 1);
            assert_eq!(c.decompose_gl(&chi).unwrap(), GrothendieckElt::basis(SerreWeightGL::pair(a as u64, b as u64)));
        }
    }
    assert!(c.sigma_gl_of_hodge(&GLWeight::pair(2, 2)).is_err());
    let wide = c.sigma_gl_of_hodge(&GLWeight::pair(20, -3)).unwrap();
    assert_eq!(wide.degree().unwrap(), 23);
}

#[test]
fn clifford_counts() {
    for p in PRIMES {
        let c = ctx(p);
        let h = ((p - 1) / 2) as i64;
        for r in c.gl_irreps() {
            let chi = c.irrep_character(&r).unwrap();
            let twisted = c.irrep_character(&r.twist(p, h)).unwrap();
            let stab = 1 + u64::from(chi == twisted);
            let parts = c.constituents_over_sl2(&chi).unwrap();
            assert_eq!(parts.big_m * parts.m * parts.m, stab, "{r:?}");
            assert_eq!(parts.m, 1);
            let degs: Vec<i64> = parts.pieces.iter().map(|x| x.degree().unwrap()).collect();
            assert!(degs.iter().all(|&d| d * parts.big_m as i64 == chi.degree().unwrap()));
            if parts.big_m == 2 {
                let a = c.decompose_sl(&parts.pieces[0]).unwrap();
                let b = c.decompose_sl(&parts.pieces[1]).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn central_exponents_from_values() {
    for p in [3u64, 5, 7] {
        let c = ctx(p);
        for r in c.gl_irreps() {
            let chi = c.irrep_character(&r).unwrap();
            assert_eq!(c.central_exponent(&chi).unwrap(), r.central_exponent(p));
        }
        for s in c.gl_weights().to_vec() {
            let chi = c.brauer_char_simple(s.a(), s.b(), Group::GL2).unwrap();
            assert_eq!(c.central_exponent(&chi).unwrap(), crate::serre_weights::central_character(&s, p));
        }
    }
}
