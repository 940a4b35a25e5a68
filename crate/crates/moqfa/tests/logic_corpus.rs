//! Round trips between the decision pipeline and the logic compilers: every
//! recognizable corpus language is definable by a boolean combination of easy
//! first-order formulas (leaf-for-leaf from its decomposition), and every
//! compiled boolean combination of easy formulas is recognizable.

use moqfa::alphabet::Alphabet;
use moqfa::corpus::language_corpus;
use moqfa::decide::{decompose_liidpt, is_lmo, BasisBoolExpr, DecideConfig};
use moqfa::logic::{compile_fo, parse_formula, EasyFo, LogicExpr};

/// Leaf-for-leaf translation; constants become tautologies/contradictions
/// over the first alphabet letter.
fn to_fo_expr(expr: &BasisBoolExpr, alphabet: &Alphabet) -> LogicExpr<EasyFo> {
    let anchor = || {
        let seq = moqfa::basis::BasisSeq::new(vec![alphabet.letter(0)]).expect("single letter");
        LogicExpr::Leaf(EasyFo(seq))
    };
    match expr {
        BasisBoolExpr::Const(true) => {
            LogicExpr::Or(Box::new(anchor()), Box::new(LogicExpr::Not(Box::new(anchor()))))
        }
        BasisBoolExpr::Const(false) => {
            LogicExpr::And(Box::new(anchor()), Box::new(LogicExpr::Not(Box::new(anchor()))))
        }
        BasisBoolExpr::Leaf(seq) => LogicExpr::Leaf(EasyFo(seq.clone())),
        BasisBoolExpr::Not(e) => LogicExpr::Not(Box::new(to_fo_expr(e, alphabet))),
        BasisBoolExpr::And(l, r) => {
            LogicExpr::And(Box::new(to_fo_expr(l, alphabet)), Box::new(to_fo_expr(r, alphabet)))
        }
        BasisBoolExpr::Or(l, r) => {
            LogicExpr::Or(Box::new(to_fo_expr(l, alphabet)), Box::new(to_fo_expr(r, alphabet)))
        }
    }
}

#[test]
fn members_are_definable_by_easy_first_order_combinations() {
    let cfg = DecideConfig::default();
    for lang in language_corpus().iter().filter(|l| l.member) {
        let decomposition = decompose_liidpt(&lang.dfa, &cfg).unwrap();
        let fo = to_fo_expr(&decomposition.expr, lang.dfa.alphabet());
        let compiled = compile_fo(&fo, lang.dfa.alphabet()).unwrap();
        assert!(
            compiled.equivalent(&lang.dfa).unwrap(),
            "{}: first-order translation is not equivalent",
            lang.name
        );
    }
}

#[test]
fn compiled_boolean_combinations_are_recognizable() {
    let cfg = DecideConfig::default();
    let ab = Alphabet::from_str_letters("ab");
    let abc = Alphabet::from_str_letters("abc");
    let formulas = [
        "fo(a)",
        "!fo(a)",
        "fo(a,b) & !fo(b,a)",
        "fo(a) | fo(b,a,b)",
        "!(fo(a) & fo(b)) | fo(a,b)",
        "ltl({a})",
        "ltl({a},{b})",
        "ltl({a,b},{a}) & !ltl({b})",
        "ltl({b},{a},{b}) | ltl({a})",
    ];
    for sigma in [&ab, &abc] {
        for text in formulas {
            let compiled = parse_formula(text).unwrap().compile(sigma).unwrap();
            let verdict = is_lmo(&compiled, &cfg).unwrap();
            assert!(verdict.member, "{text} over {sigma} must be recognizable");
        }
    }
}
