use proptest::prelude::*;
use rwkit::{Complex64, Shift, SymRat};

const N: usize = 3;

#[derive(Debug, Clone)]
enum Expr {
    Var(usize),
    X0,
    XInf,
    Int(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn build(&self) -> SymRat {
        match self {
            Expr::Var(j) => SymRat::x(N, *j),
            Expr::X0 => SymRat::x0(N),
            Expr::XInf => SymRat::xinf(N),
            Expr::Int(k) => SymRat::from_int(N, *k),
            Expr::Add(a, b) => a.build() + b.build(),
            Expr::Sub(a, b) => a.build() - b.build(),
            Expr::Mul(a, b) => a.build() * b.build(),
            Expr::Div(a, b) => {
                let d = b.build();
                // a zero divisor degrades to the numerator alone
                if d.is_zero() {
                    a.build()
                } else {
                    a.build().div(&d).unwrap()
                }
            }
        }
    }
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (1..=N).prop_map(Expr::Var),
        Just(Expr::X0),
        Just(Expr::XInf),
        (-3i64..=3).prop_map(Expr::Int),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
        ]
    })
}

fn sym() -> impl Strategy<Value = SymRat> {
    expr().prop_map(|e| e.build())
}

fn exponents() -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((0.05f64..0.95, -0.2f64..0.2), N + 1)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-12 * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in sym(), b in sym(), c in sym()) {
        prop_assert!(((&a + &b) + &c).equals(&(&a + &(&b + &c))));
        prop_assert!(((&a * &b) * &c).equals(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).equals(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn involution_is_an_automorphism(a in sym(), b in sym()) {
        prop_assert!((&a * &b).involution().equals(&(&a.involution() * &b.involution())));
        prop_assert!((&a + &b).involution().equals(&(&a.involution() + &b.involution())));
        prop_assert!(a.involution().involution().equals(&a));
    }

    #[test]
    fn shift_commutes_with_ring_ops(a in sym(), b in sym(), p in 1..=N, at_zero in any::<bool>()) {
        let k = if at_zero { Shift::P0(p) } else { Shift::PInf(p) };
        prop_assert!((&a * &b).shift_subst(k).equals(&(&a.shift_subst(k) * &b.shift_subst(k))));
        prop_assert!((&a + &b).shift_subst(k).equals(&(&a.shift_subst(k) + &b.shift_subst(k))));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in sym(), b in sym(), e in exponents()) {
        let (Ok(va), Ok(vb)) = (a.evaluate_exponents(&e), b.evaluate_exponents(&e)) else {
            return Ok(());
        };
        if let Ok(vab) = (&a * &b).evaluate_exponents(&e) {
            prop_assert!(close(vab, va * vb), "{vab} vs {}", va * vb);
        }
        if let Ok(vs) = (&a + &b).evaluate_exponents(&e) {
            prop_assert!(close(vs, va + vb), "{vs} vs {}", va + vb);
        }
    }

    #[test]
    fn involution_evaluates_at_negated_exponents(a in sym(), e in exponents()) {
        let neg: Vec<Complex64> = e.iter().map(|z| -z).collect();
        if let (Ok(l), Ok(r)) = (a.involution().evaluate_exponents(&e), a.evaluate_exponents(&neg)) {
            prop_assert!(close(l, r), "{l} vs {r}");
        }
    }

    #[test]
    fn display_parses_back(a in sym()) {
        let text = a.to_string();
        let back = SymRat::parse(&text, N).unwrap();
        prop_assert!(back.equals(&a), "{text}");
        prop_assert_eq!(back.to_string(), text);
    }
}
