use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use scg_core::dehn::{is_trivial, Decision};
use scg_core::families::{format_rational, parse_rational, DEFAULT_TOP};
use scg_core::pieces::pairwise_pieces;
use scg_core::quotients::{bowditch_quotient_check, is_trivial_in_gk};
use scg_core::related::{
    divergence_profile, length_spectrum, profile_json, profile_table, raw_spectrum, sym_diff, ProfileMode,
};
use scg_core::words::parse_word_with_budget;
use scg_core::{
    min_witness_k, related_via_k, rf_witness, verify_c_prime, Alphabet, Error, ExponentBudget, FamilyKind,
    FamilySpec, NatSet, PieceReport, Presentation, QuotientSpec, RelatorSpec, Result, SetSpec, Word,
};
use serde_json::{json, Value};

use crate::{Cli, Command, Outcome, PresentationArgs, ProfileKind, SetReading};

pub fn run(cli: &Cli) -> Result<Outcome> {
    let budget = ExponentBudget::from_env();
    match &cli.command {
        Command::Build { family, n, top } => build(family, *n, *top, budget),
        Command::Verify {
            presentation,
            max_length,
        } => verify(presentation, max_length.as_deref(), budget),
        Command::Pieces {
            presentation,
            max_length,
        } => pieces(presentation, max_length.as_deref(), budget),
        Command::Solve {
            presentation,
            word,
            step_limit,
        } => solve(presentation, word, *step_limit, budget),
        Command::Quotient {
            set,
            top,
            k,
            word,
            step_limit,
        } => quotient(set, *top, *k, word, *step_limit, budget),
        Command::RfWitness { set, top, word } => rf(set, *top, word, budget),
        Command::BowditchQuotient { n, set, m_max } => bowditch(n, set, *m_max, budget),
        Command::Relate {
            left,
            right,
            of,
            top,
            k,
            min_k,
        } => relate(left, right, *of, *top, k.as_deref(), *min_k, budget),
        Command::Spectrum { set, top, raw } => spectrum(set, *top, *raw, budget),
        Command::Profile {
            left,
            right,
            depth,
            mode,
            top,
        } => profile(left, right, *depth, *mode, *top, budget),
        Command::SymDiff { left, right, depth } => symmetric_difference(left, right, *depth),
    }
}

fn load_presentation(args: &PresentationArgs, budget: ExponentBudget) -> Result<Presentation> {
    let mut p = match (&args.presentation, &args.set) {
        (Some(path), _) => Presentation::load(path, budget)?,
        (None, Some(set)) => {
            let set = SetSpec::from_str(set)?;
            let kind = FamilyKind::from_str(&args.family)?;
            let p = Presentation::new(
                Alphabet::ab(),
                vec![RelatorSpec::Family {
                    kind,
                    set,
                    top: args.top,
                }],
            );
            p.validate(budget)?;
            p
        }
        (None, None) => return Err(Error::Schema("pass --presentation <file> or --set <set>".into())),
    };
    if let Some(lambda) = &args.lambda {
        p = p.with_lambda(parse_rational(lambda)?);
        p.validate(budget)?;
    }
    Ok(p)
}

fn parse_big(flag: &str, text: &str) -> Result<BigUint> {
    text.trim()
        .parse()
        .map_err(|_| Error::Schema(format!("--{flag} expects a nonnegative integer, got `{text}`")))
}

fn word(text: &str, alphabet: &Alphabet, budget: ExponentBudget) -> Result<Word> {
    Ok(parse_word_with_budget(text, alphabet, budget)?)
}

fn build(family: &str, n: u64, top: u64, budget: ExponentBudget) -> Result<Outcome> {
    let kind = FamilyKind::from_str(family)?;
    let spec = match kind {
        FamilyKind::WiseChong => FamilySpec::wise_chong(n, top),
        FamilyKind::BPower => FamilySpec::b_power(n),
        FamilyKind::Bowditch => FamilySpec::bowditch(n, false),
        FamilyKind::BowditchTf => FamilySpec::bowditch(n, true),
    };
    let w = spec.build(budget)?;
    let top_value = if kind == FamilyKind::WiseChong { top } else { DEFAULT_TOP };
    Ok(Outcome {
        json: json!({
            "family": kind.name(),
            "n": n,
            "top": top_value,
            "origin": spec.describe(),
            "word": w.to_string(),
            "length": w.length().to_string(),
        }),
        text: format!("{w}\nlength {}\n", w.length()),
        holds: true,
    })
}

fn piece_line(p: &PieceReport) -> String {
    format!(
        "{} (length {}) in relators {} and {}, ratio {}",
        p.piece,
        p.length(),
        p.occ1.relator_index,
        p.occ2.relator_index,
        format_rational(&p.ratio)
    )
}

fn verify(args: &PresentationArgs, max_length: Option<&str>, budget: ExponentBudget) -> Result<Outcome> {
    let p = load_presentation(args, budget)?;
    let bound = max_length.map(|m| parse_big("max-length", m)).transpose()?;
    let report = verify_c_prime(&p, bound.as_ref(), budget)?;
    let lambda = format_rational(&report.lambda);
    let mut text = format!(
        "C'({lambda}) {}\nmax ratio {}\n",
        if report.c_prime { "holds" } else { "fails" },
        format_rational(&report.max_ratio)
    );
    match &report.witness {
        Some(w) => writeln!(text, "witness {}", piece_line(w)).unwrap(),
        None => text.push_str("no pieces\n"),
    }
    writeln!(
        text,
        "{} relators up to length {} ({})",
        report.relator_count,
        report.checked_up_to_length,
        if report.complete { "complete" } else { "truncated" }
    )
    .unwrap();
    Ok(Outcome {
        json: report.to_json(),
        text,
        holds: report.c_prime,
    })
}

fn pieces(args: &PresentationArgs, max_length: Option<&str>, budget: ExponentBudget) -> Result<Outcome> {
    let p = load_presentation(args, budget)?;
    let bound = max_length.map(|m| parse_big("max-length", m)).transpose()?;
    let relators = p.enumerate_relators(bound.as_ref(), budget)?;
    let pairs = pairwise_pieces(&relators);
    let mut text = String::new();
    for r in &relators {
        writeln!(text, "relator {}: {} (length {})", r.index, r.origin, r.length()).unwrap();
    }
    for ((i, j), report) in &pairs {
        match report {
            Some(rep) => writeln!(text, "{i} {j}: {}", piece_line(rep)).unwrap(),
            None => writeln!(text, "{i} {j}: none").unwrap(),
        }
    }
    let json = json!({
        "relators": relators
            .iter()
            .map(|r| json!({"index": r.index, "origin": r.origin, "length": r.length().to_string()}))
            .collect::<Vec<_>>(),
        "pairs": pairs
            .iter()
            .map(|((i, j), rep)| json!({
                "pair": [i, j],
                "piece": rep.as_ref().map_or(Value::Null, PieceReport::to_json),
            }))
            .collect::<Vec<_>>(),
    });
    Ok(Outcome {
        json,
        text,
        holds: true,
    })
}

fn trace_text(d: &Decision) -> String {
    let mut text = String::from(if d.trivial { "trivial\n" } else { "nontrivial\n" });
    for (i, step) in d.trace.steps.iter().enumerate() {
        writeln!(
            text,
            "step {}: relator {}{} |v| = {} -> {}",
            i + 1,
            step.occurrence.relator_index,
            if step.occurrence.sign == 1 { "" } else { "^-1" },
            step.occurrence.v_len(),
            step.after
        )
        .unwrap();
    }
    if !d.trivial {
        writeln!(text, "reduced {}", d.witness()).unwrap();
    }
    text
}

fn solve(args: &PresentationArgs, text: &str, step_limit: usize, budget: ExponentBudget) -> Result<Outcome> {
    let p = load_presentation(args, budget)?;
    let u = word(text, &p.generators, budget)?;
    let d = is_trivial(&u, &p, budget, step_limit)?;
    Ok(Outcome {
        json: d.to_json(),
        text: trace_text(&d),
        holds: d.trivial,
    })
}

fn quotient(set: &str, top: u64, k: u64, text: &str, step_limit: usize, budget: ExponentBudget) -> Result<Outcome> {
    let spec = QuotientSpec::new(k, SetSpec::from_str(set)?, top);
    let u = word(text, &Alphabet::ab(), budget)?;
    let d = is_trivial_in_gk(&u, &spec, budget, step_limit)?;
    Ok(Outcome {
        json: d.to_json(),
        text: format!("projected {}\n{}", d.projected, trace_text(&d.decision)),
        holds: d.trivial(),
    })
}

fn rf(set: &str, top: u64, text: &str, budget: ExponentBudget) -> Result<Outcome> {
    let v = word(text, &Alphabet::ab(), budget)?;
    let w = rf_witness(&v, &SetSpec::from_str(set)?, top, budget)?;
    let verdict = if w.quotient_c_prime { "nontrivial in G_k" } else { "unverified: G_k is not C'(1/6)" };
    Ok(Outcome {
        json: w.to_json(),
        text: format!("k {}\nE_k {}\n{verdict}\n", w.k, w.e_k),
        holds: w.quotient_c_prime,
    })
}

fn bowditch(ns: &[u64], set: &str, m_max: u64, budget: ExponentBudget) -> Result<Outcome> {
    let rows = bowditch_quotient_check(ns, &SetSpec::from_str(set)?, m_max, budget)?;
    let mut text = String::new();
    for row in &rows {
        writeln!(text, "n {} (E_n {})", row.n, row.e_n).unwrap();
        for (plain, tf) in row.images.iter().zip(&row.tf_images) {
            writeln!(text, "  m {}: image {}, torsion-free image {}", plain.m, plain.image, tf.image).unwrap();
        }
        writeln!(
            text,
            "  quotient C'(1/6) {} (max ratio {})",
            if row.quotient.c_prime { "holds" } else { "fails" },
            format_rational(&row.quotient.max_ratio)
        )
        .unwrap();
    }
    Ok(Outcome {
        json: Value::Array(rows.iter().map(|r| r.to_json()).collect()),
        text,
        holds: rows.iter().all(|r| r.holds()),
    })
}

fn read_set(text: &str, reading: SetReading, top: u64, budget: ExponentBudget) -> Result<NatSet> {
    match reading {
        SetReading::Values => text.trim().strip_prefix("list:").unwrap_or(text).parse(),
        SetReading::Raw => raw_spectrum(&SetSpec::from_str(text)?, budget),
        SetReading::Lengths => length_spectrum(&SetSpec::from_str(text)?, top, budget),
    }
}

#[allow(clippy::too_many_arguments)]
fn relate(
    left: &str,
    right: &str,
    reading: SetReading,
    top: u64,
    k: Option<&str>,
    min_k: bool,
    budget: ExponentBudget,
) -> Result<Outcome> {
    let l = read_set(left, reading, top, budget)?;
    let r = read_set(right, reading, top, budget)?;
    if min_k {
        let k = min_witness_k(&l, &r);
        return Ok(Outcome {
            json: json!({"min_k": k.to_string()}),
            text: format!("{k}\n"),
            holds: true,
        });
    }
    let k = parse_big("k", k.unwrap_or("1"))?;
    if k == BigUint::default() {
        return Err(Error::Schema("--k must be at least 1".into()));
    }
    Ok(match related_via_k(&l, &r, &k) {
        Ok(w) => {
            let mut text = format!("related via {k}\n");
            for (label, side) in [("left", &w.forward), ("right", &w.backward)] {
                for p in side {
                    match &p.partner {
                        Some(q) => writeln!(text, "{label} {} -> {q}", p.m).unwrap(),
                        None => writeln!(text, "{label} {} below threshold", p.m).unwrap(),
                    }
                }
            }
            Outcome {
                json: w.to_json(),
                text,
                holds: true,
            }
        }
        Err(f) => Outcome {
            json: f.to_json(),
            text: format!("not related via {k}: {f}\n"),
            holds: false,
        },
    })
}

fn spectrum(set: &str, top: u64, raw: bool, budget: ExponentBudget) -> Result<Outcome> {
    let set = SetSpec::from_str(set)?;
    let s = if raw {
        raw_spectrum(&set, budget)?
    } else {
        length_spectrum(&set, top, budget)?
    };
    Ok(Outcome {
        json: s.to_json(),
        text: format!("{s}\n"),
        holds: true,
    })
}

fn profile(left: &str, right: &str, depth: u64, kind: ProfileKind, top: u64, budget: ExponentBudget) -> Result<Outcome> {
    let mode = match kind {
        ProfileKind::Raw => ProfileMode::Raw,
        ProfileKind::Spectrum => ProfileMode::Spectrum { top },
    };
    let rows = divergence_profile(&SetSpec::from_str(left)?, &SetSpec::from_str(right)?, depth, mode, budget)?;
    Ok(Outcome {
        json: profile_json(&rows),
        text: profile_table(&rows),
        holds: true,
    })
}

fn symmetric_difference(left: &str, right: &str, depth: Option<u64>) -> Result<Outcome> {
    let cut = |s: &str| -> Result<SetSpec> {
        let set = SetSpec::from_str(s)?;
        Ok(match depth {
            Some(d) => set.with_depth(d),
            None => set,
        })
    };
    let d = sym_diff(&cut(left)?, &cut(right)?)?;
    let listed: Vec<String> = d.iter().map(u64::to_string).collect();
    Ok(Outcome {
        json: json!(d),
        text: format!("{{{}}}\n", listed.join(", ")),
        holds: true,
    })
}
