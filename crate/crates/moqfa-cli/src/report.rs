//! Human- and machine-readable reports for the CLI verbs.

use serde::Serialize;

use moqfa::decide::{LmoVerdict, Synthesis};
use moqfa::monoid::{FiniteMonoid, GreenRel};
use moqfa::scalar::{ExactReal, Scalar};
use moqfa::Matrix;

fn rep_or_identity(rep: &str) -> String {
    if rep.is_empty() {
        "ε".to_string()
    } else {
        rep.to_string()
    }
}

#[derive(Serialize)]
pub struct MonoidReport {
    pub elements: usize,
    pub generators: Vec<(String, usize)>,
    pub idempotents: Vec<String>,
    pub r_classes: Vec<Vec<String>>,
    pub l_classes: Vec<Vec<String>>,
    pub j_classes: Vec<Vec<String>>,
    pub r_trivial: bool,
    pub l_trivial: bool,
    pub j_trivial: bool,
    pub block_group: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

const TABLE_LIMIT: usize = 64;

pub fn monoid_report(m: &FiniteMonoid) -> MonoidReport {
    let reps = |class: &Vec<usize>| class.iter().map(|&x| rep_or_identity(m.rep(x))).collect::<Vec<_>>();
    let table = (m.size() <= TABLE_LIMIT).then(|| {
        (0..m.size()).map(|a| (0..m.size()).map(|b| m.mul(a, b)).collect()).collect()
    });
    MonoidReport {
        elements: m.size(),
        generators: m.generators().iter().map(|&(c, g)| (c.to_string(), g)).collect(),
        idempotents: m.idempotents().iter().map(|&x| rep_or_identity(m.rep(x))).collect(),
        r_classes: m.green_partition(GreenRel::R).iter().map(reps).collect(),
        l_classes: m.green_partition(GreenRel::L).iter().map(reps).collect(),
        j_classes: m.green_partition(GreenRel::J).iter().map(reps).collect(),
        r_trivial: m.green_trivial(GreenRel::R),
        l_trivial: m.green_trivial(GreenRel::L),
        j_trivial: m.green_trivial(GreenRel::J),
        block_group: m.is_block_group(),
        table,
    }
}

pub fn print_monoid_report(r: &MonoidReport) {
    println!("elements: {}", r.elements);
    println!("generators: {}", r.generators.iter().map(|(c, g)| format!("{c} -> #{g}")).collect::<Vec<_>>().join(", "));
    println!("idempotents: {}", r.idempotents.join(", "));
    let classes = |name: &str, classes: &[Vec<String>], trivial: bool| {
        println!(
            "{name}-classes ({}): {}{}",
            if trivial { "trivial" } else { "non-trivial" },
            classes.iter().map(|c| format!("{{{}}}", c.join(", "))).collect::<Vec<_>>().join(" "),
            ""
        );
    };
    classes("R", &r.r_classes, r.r_trivial);
    classes("L", &r.l_classes, r.l_trivial);
    classes("J", &r.j_classes, r.j_trivial);
    println!("block group: {}", r.block_group);
    if let Some(table) = &r.table {
        println!("multiplication table:");
        for row in table {
            println!("  {}", row.iter().map(usize::to_string).collect::<Vec<_>>().join(" "));
        }
    }
}

#[derive(Serialize)]
pub struct LiteralWitnessDoc {
    pub state: usize,
    pub letter: String,
    pub word_once: String,
    pub word_twice: String,
}

#[derive(Serialize)]
pub struct JWitnessDoc {
    pub rep_a: String,
    pub rep_b: String,
    pub context_ab: (String, String),
    pub context_ba: (String, String),
}

#[derive(Serialize)]
pub struct VerdictDoc {
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_witness: Option<LiteralWitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_witness: Option<JWitnessDoc>,
}

pub fn verdict_doc(v: &LmoVerdict) -> VerdictDoc {
    VerdictDoc {
        member: v.member,
        literal_witness: v.literal_witness.as_ref().map(|w| LiteralWitnessDoc {
            state: w.state,
            letter: w.letter.to_string(),
            word_once: w.word_pair.0.clone(),
            word_twice: w.word_pair.1.clone(),
        }),
        j_witness: v.j_witness.as_ref().map(|w| JWitnessDoc {
            rep_a: rep_or_identity(&w.rep_a),
            rep_b: rep_or_identity(&w.rep_b),
            context_ab: w.context_ab.clone(),
            context_ba: w.context_ba.clone(),
        }),
    }
}

pub fn print_verdict(v: &LmoVerdict) {
    println!("member: {}", v.member);
    if let Some(w) = &v.literal_witness {
        println!(
            "literal idempotency fails at state {} on `{}`: {:?} vs {:?} separate the language",
            w.state, w.letter, w.word_pair.0, w.word_pair.1
        );
    }
    if let Some(w) = &v.j_witness {
        println!(
            "J relation is non-trivial: {:?} and {:?} generate the same two-sided ideal",
            rep_or_identity(&w.rep_a),
            rep_or_identity(&w.rep_b)
        );
    }
}

#[derive(Serialize)]
pub struct AtomPlanDoc {
    pub sequence: String,
    pub copies: u32,
    pub threshold: String,
    pub epsilon: f64,
}

#[derive(Serialize)]
pub struct SynthesisDoc {
    pub member: bool,
    pub profile_width: usize,
    pub expression: String,
    pub event: String,
    pub declared_cutpoint: String,
    pub declared_isolation: String,
    pub measured_isolation: f64,
    pub check_len: usize,
    pub atoms: Vec<AtomPlanDoc>,
}

pub fn synthesis_doc(s: &Synthesis) -> SynthesisDoc {
    SynthesisDoc {
        member: true,
        profile_width: s.profile_width,
        expression: format!("{}", s.expr),
        event: s.event.to_text(),
        declared_cutpoint: format!("{}", s.cutpoint),
        declared_isolation: format!("{}", s.declared_isolation),
        measured_isolation: s.measured_isolation,
        check_len: s.check_len,
        atoms: s
            .atoms
            .iter()
            .map(|a| AtomPlanDoc {
                sequence: format!("{}", a.seq),
                copies: a.copies,
                threshold: format!("{}", a.threshold),
                epsilon: a.epsilon,
            })
            .collect(),
    }
}

pub fn print_synthesis(s: &SynthesisDoc) {
    println!("member: true");
    println!("profile width: {}", s.profile_width);
    println!("expression: {}", s.expression);
    println!("event: {}", s.event);
    println!("declared cut-point: {} (isolation {})", s.declared_cutpoint, s.declared_isolation);
    println!("measured isolation over words up to length {}: {}", s.check_len, s.measured_isolation);
    for a in &s.atoms {
        println!(
            "  atom {}: {} copies at threshold {}, declared error {:.3e}",
            a.sequence, a.copies, a.threshold, a.epsilon
        );
    }
}

/// Renders a matrix with `Display`-able entries on indented lines.
pub fn format_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        out.push_str("  [");
        for j in 0..m.cols() {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&format!("{}", m.at(i, j)));
        }
        out.push_str("]\n");
    }
    out
}

/// Exact probabilities print as rationals when possible.
pub fn format_exact_prob(p: &ExactReal) -> String {
    match p.as_ratio() {
        Some(r) => format!("{r}"),
        None => format!("{p} ≈ {}", p.to_f64()),
    }
}
