use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use crystal_polytope::binfinity::{eta, star};
use crystal_polytope::demazure::{
    btilde_cut, btilde_cut_coords, enumerate_demazure, semigroup_points, string_points, PointSet,
};
use crystal_polytope::inequalities::{
    ample_check, delta_hrep, generate_xi, AffineForm, LambdaMode, XiSet,
};
use crystal_polytope::polytope::{compare_levels, lattice_points, HalfSpaceSystem, LatticeBox};
use crystal_polytope::rootdata::{parse_int_list, CartanMatrix, ReducedWord, WeightVec};
use crystal_polytope::valuation::{
    builtin_generators, chevalley_value, section_span, unipotent_product, value,
    value_set_of_span, MultiPoly, SpanClosure, ValuationOrder,
};
use crystal_polytope::zcrystal::{Crystal, SequenceSpec, ZElement};

use crate::args::{ClosureArgs, Command, Format, OrderArg, RootArgs, WordArgs};
use crate::output::{header, int_rows, Report};

fn cartan_of(root: &RootArgs) -> Result<CartanMatrix> {
    if let Some(path) = &root.gcm {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<i64>().map_err(|_| anyhow!("bad matrix entry `{s}`")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(CartanMatrix::from_rows(rows)?);
    }
    match (root.family, root.rank) {
        (Some(f), Some(n)) => Ok(CartanMatrix::builtin(f, n)?),
        _ => bail!("give either --type and --rank, or --gcm"),
    }
}

fn word_of(c: &CartanMatrix, w: &WordArgs) -> Result<ReducedWord> {
    match &w.word {
        Some(s) => {
            let letters = parse_int_list(s)?;
            if letters.iter().any(|&x| x <= 0) {
                bail!("letters must be positive, got `{s}`");
            }
            Ok(ReducedWord::new(c, letters.into_iter().map(|x| x as usize).collect())?)
        }
        None => Ok(c.complete_to_longest(&ReducedWord::empty())?),
    }
}

fn lambda_of(c: &CartanMatrix, s: &str) -> Result<WeightVec> {
    let l = WeightVec(parse_int_list(s)?);
    c.check_dominant(&l)?;
    Ok(l)
}

fn xi_of(spec: &SequenceSpec, c: &CartanMatrix, closure: &ClosureArgs) -> Result<XiSet> {
    let longest = c
        .longest_length()
        .ok_or_else(|| anyhow!("the Cartan matrix is not of finite type"))?;
    let window = closure.window.unwrap_or(2 * longest);
    Ok(generate_xi(spec, window, closure.depth)?)
}

fn points_json(points: &PointSet) -> Value {
    json!(points.iter().collect::<Vec<_>>())
}

fn points_report(points: &PointSet, r: usize) -> Report {
    let mut rows = vec![header("a", r)];
    rows.extend(int_rows(points));
    Report::new(points_json(points), rows)
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Enumerate {
            root,
            word,
            lambda,
            cut,
        } => {
            let c = cartan_of(root)?;
            let w = word_of(&c, word)?;
            let l = lambda_of(&c, lambda)?;
            let spec = SequenceSpec::for_word(&c, &w)?;
            let bodies: Vec<ZElement> = if *cut {
                btilde_cut(&c, &w, &l)?.into_iter().map(|b| b.into_inner()).collect()
            } else {
                enumerate_demazure(&c, &w, &l)?
                    .elements
                    .into_iter()
                    .map(|e| e.body)
                    .collect()
            };
            let mut entries: Vec<(Vec<i64>, Vec<i64>)> = bodies
                .iter()
                .map(|b| (b.padded(w.len()), spec.weight(b).add(&l).0))
                .collect();
            entries.sort();
            let mut rows = vec![[header("a", w.len()), header("wt", c.rank())].concat()];
            rows.extend(entries.iter().map(|(a, wt)| {
                a.iter().chain(wt).map(i64::to_string).collect::<Vec<_>>()
            }));
            let data = json!(entries
                .iter()
                .map(|(a, wt)| json!({"coords": a, "weight": wt}))
                .collect::<Vec<_>>());
            Ok(Report::new(data, rows).with_word(w.letters()).with_lambda(&l.0))
        }

        Command::DeltaPoints {
            root,
            word,
            lambda,
            via_hrep,
            k_max,
            closure,
        } => {
            let c = cartan_of(root)?;
            let w = word_of(&c, word)?;
            let l = lambda_of(&c, lambda)?;
            let spec = SequenceSpec::for_word(&c, &w)?;
            let level = |k: i64| -> Result<PointSet> {
                let lk = l.scale(k);
                if *via_hrep {
                    let xi = xi_of(&spec, &c, closure)?;
                    let forms = delta_hrep(&spec, &xi, &LambdaMode::Concrete(lk.clone()))?;
                    let sys = HalfSpaceSystem::from_forms(&forms, w.len(), &lk)?;
                    Ok(lattice_points(&sys, &LatticeBox::for_word(&c, &w, &lk)?)?)
                } else {
                    Ok(enumerate_demazure(&c, &w, &lk)?.coords)
                }
            };
            let report = match k_max {
                None => points_report(&level(1)?, w.len()),
                Some(0) => bail!("--k-max must be at least 1"),
                Some(kmax) => {
                    let levels: BTreeMap<usize, PointSet> = (1..=*kmax)
                        .map(|k| level(k as i64).map(|p| (k, p)))
                        .collect::<Result<_>>()?;
                    let mut rows = vec![[vec!["k".to_string()], header("a", w.len())].concat()];
                    for (k, pts) in &levels {
                        for p in pts {
                            let mut row = vec![k.to_string()];
                            row.extend(p.iter().map(i64::to_string));
                            rows.push(row);
                        }
                    }
                    let data = json!(levels
                        .iter()
                        .map(|(k, pts)| json!({"k": k, "points": points_json(pts)}))
                        .collect::<Vec<_>>());
                    Report::new(data, rows)
                }
            };
            Ok(report.with_word(w.letters()).with_lambda(&l.0))
        }

        Command::DeltaHrep {
            root,
            word,
            lambda,
            no_prune,
            closure,
        } => {
            let c = cartan_of(root)?;
            let w = word_of(&c, word)?;
            let spec = SequenceSpec::for_word(&c, &w)?;
            let xi = xi_of(&spec, &c, closure)?;
            let r = w.len();
            let n = c.rank();
            let (forms, symbolic, l): (Vec<AffineForm>, bool, Option<WeightVec>) = match lambda {
                None => (delta_hrep(&spec, &xi, &LambdaMode::Symbolic)?, true, None),
                Some(s) => {
                    let l = lambda_of(&c, s)?;
                    let raw = delta_hrep(&spec, &xi, &LambdaMode::Concrete(l.clone()))?;
                    let sys = HalfSpaceSystem::from_forms(&raw, r, &l)?.normalize(!no_prune);
                    (sys.to_forms(n), false, Some(l))
                }
            };
            let mut text = String::new();
            for f in &forms {
                text.push_str(&f.to_hrep_line(r, symbolic));
                text.push('\n');
            }
            let mut head = vec!["const".to_string()];
            if symbolic {
                head.extend(header("L", n));
            }
            head.extend(header("a", r));
            let mut rows = vec![head];
            for f in &forms {
                let j = f.to_json(r);
                let mut row = vec![j.const_abs];
                if symbolic {
                    row.extend(j.const_lambda);
                }
                row.extend(j.coeffs);
                rows.push(row);
            }
            let data = json!(forms.iter().map(|f| f.to_json(r)).collect::<Vec<_>>());
            let mut report = Report::new(data, rows).with_word(w.letters());
            if let Some(l) = l {
                report = report.with_lambda(&l.0);
            }
            report.text = Some(text);
            report.default_format = Format::HrepText;
            Ok(report)
        }

        Command::StringPoints { root, word, lambda } => {
            let c = cartan_of(root)?;
            let w = word_of(&c, word)?;
            let l = lambda_of(&c, lambda)?;
            let pts = string_points(&c, &w, &l)?;
            Ok(points_report(&pts, w.len()).with_word(w.letters()).with_lambda(&l.0))
        }

        Command::Eta { root, word, point } | Command::Star { root, word, point } => {
            let c = cartan_of(root)?;
            let w = word_of(&c, word)?;
            let spec = SequenceSpec::for_word(&c, &w)?;
            let x = ZElement::new(parse_int_list(point)?);
            let image = if matches!(cmd, Command::Eta { .. }) {
                eta(&spec, &x)?
            } else {
                let y = star(&spec, &x)?;
                y.padded(y.support_len().max(parse_int_list(point)?.len()))
            };
            Ok(Report::new(json!(image), int_rows([&image])).with_word(w.letters()))
        }

        Command::Ample {
            root,
            word,
            lambda,
            closure,
        } => {
            let c = cartan_of(root)?;
            let w = word_of(&c, word)?;
            let l = lambda_of(&c, lambda)?;
            let spec = SequenceSpec::for_word(&c, &w)?;
            let xi = xi_of(&spec, &c, closure)?;
            let ample = ample_check(&spec, &l, &xi)?;
            let data = json!({
                "ample": ample,
                "certified": xi.certified,
                "depth": xi.depth,
                "window": xi.window,
                "forms": xi.forms.len(),
            });
            let rows = vec![
                vec!["ample".into(), ample.to_string()],
                vec!["certified".into(), xi.certified.to_string()],
                vec!["depth".into(), xi.depth.to_string()],
                vec!["window".into(), xi.window.to_string()],
                vec!["forms".into(), xi.forms.len().to_string()],
            ];
            Ok(Report::new(data, rows).with_word(w.letters()).with_lambda(&l.0))
        }

        Command::Valuation { vars, order, poly } => {
            let f = MultiPoly::parse(poly, *vars)?;
            let v = match order {
                OrderArg::Hi => value(&f, &ValuationOrder::hi(*vars))?,
                OrderArg::Tilde => value(&f, &ValuationOrder::tilde(*vars))?,
                OrderArg::Chevalley => chevalley_value(&f)?,
            };
            Ok(Report::new(json!(v), int_rows([&v])))
        }

        Command::Matrix { family, rank, word } => {
            let c = CartanMatrix::builtin(*family, *rank)?;
            let w = word_of(&c, word)?;
            let gens = builtin_generators(*family, *rank)?;
            let m = unipotent_product(w.letters(), &gens)?;
            let rows: Vec<Vec<String>> = m
                .rows()
                .iter()
                .map(|row| row.iter().map(|e| e.to_string()).collect())
                .collect();
            Ok(Report::new(json!(rows), rows.clone()).with_word(w.letters()))
        }

        Command::TheoremCheck {
            root,
            word,
            lambda,
            max_entry,
            k_max,
            closure,
        } => theorem_check(root, word, lambda.as_deref(), *max_entry, *k_max, closure),
    }
}

struct CheckRow {
    word: ReducedWord,
    lambda: WeightVec,
    check: &'static str,
    status: &'static str,
    detail: String,
}

fn dominant_up_to(n: usize, max: i64) -> Vec<WeightVec> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (0..=max).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(WeightVec).collect()
}

fn compare(a: &PointSet, b: &PointSet) -> (&'static str, String) {
    match a.symmetric_difference(b).next() {
        None => ("pass", format!("{} points", a.len())),
        Some(p) => ("fail", format!("{} vs {} points, first difference {p:?}", a.len(), b.len())),
    }
}

fn theorem_check(
    root: &RootArgs,
    word: &WordArgs,
    lambda: Option<&str>,
    max_entry: i64,
    k_max: usize,
    closure: &ClosureArgs,
) -> Result<Report> {
    let c = cartan_of(root)?;
    let longest = c
        .longest_length()
        .ok_or_else(|| anyhow!("the Cartan matrix is not of finite type"))?;
    if k_max == 0 {
        bail!("--k-max must be at least 1");
    }
    let words = match &word.word {
        Some(_) => vec![word_of(&c, word)?],
        None if lambda.is_some() => vec![word_of(&c, word)?],
        None => c.reduced_words(longest),
    };
    let weights = match lambda {
        Some(s) => vec![lambda_of(&c, s)?],
        None => dominant_up_to(c.rank(), max_entry),
    };
    let type_a = CartanMatrix::builtin('A', c.rank()).is_ok_and(|a| a == c);
    let mut out = Vec::new();
    for w in &words {
        let spec = SequenceSpec::for_word(&c, w)?;
        let xi = xi_of(&spec, &c, closure)?;
        let symbolic = delta_hrep(&spec, &xi, &LambdaMode::Symbolic)?;
        for l in &weights {
            let mut push = |check, (status, detail): (&'static str, String)| {
                out.push(CheckRow {
                    word: w.clone(),
                    lambda: l.clone(),
                    check,
                    status,
                    detail,
                })
            };
            let crystal = enumerate_demazure(&c, w, l)?.coords;
            push("crystal-vs-cut", compare(&crystal, &btilde_cut_coords(&c, w, l)?));

            if ample_check(&spec, l, &xi)? {
                let forms = delta_hrep(&spec, &xi, &LambdaMode::Concrete(l.clone()))?;
                let sys = HalfSpaceSystem::from_forms(&forms, w.len(), l)?;
                let lat = lattice_points(&sys, &LatticeBox::for_word(&c, w, l)?)?;
                push("hrep-lattice", compare(&lat, &crystal));
            } else {
                push("hrep-lattice", ("skip", "not ample".into()));
            }

            let all_ample = (1..=k_max as i64)
                .map(|k| ample_check(&spec, &l.scale(k), &xi))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .all(|a| a);
            if all_ample {
                let graded = semigroup_points(&c, w, l, k_max)?;
                let report = compare_levels(&c, w, l, &graded, &symbolic)?;
                push(
                    "levels",
                    match report.first_failure() {
                        None => ("pass", format!("k <= {k_max}")),
                        Some(f) => ("fail", format!("level {}: {:?}", f.k, f.discrepancy)),
                    },
                );
            } else {
                push("levels", ("skip", "not ample".into()));
            }

            if w.len() == longest {
                let dim = c.weyl_dim_oracle(l)?;
                let ok = dim == crystal.len().into();
                push(
                    "weyl-dimension",
                    (
                        if ok { "pass" } else { "fail" },
                        format!("{} points, dimension {dim}", crystal.len()),
                    ),
                );
                let image: PointSet = crystal
                    .iter()
                    .map(|p| eta(&spec, &ZElement::new(p.clone())))
                    .collect::<Result<_, _>>()?;
                push("string-side", compare(&image, &string_points(&c, w, l)?));
            }

            if type_a {
                let gens = builtin_generators('A', c.rank())?;
                let m = unipotent_product(w.letters(), &gens)?;
                let span = section_span(&c, &m, l)?;
                let values =
                    value_set_of_span(&span, &ValuationOrder::hi(w.len()), SpanClosure::None);
                push("sections", compare(&values, &crystal));
            }
        }
    }
    let mismatch = out.iter().any(|r| r.status == "fail");
    let mut rows = vec![vec![
        "word".to_string(),
        "lambda".into(),
        "check".into(),
        "status".into(),
        "detail".into(),
    ]];
    rows.extend(out.iter().map(|r| {
        vec![
            r.word.to_string(),
            r.lambda.0.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
            r.check.to_string(),
            r.status.to_string(),
            r.detail.clone(),
        ]
    }));
    let data = json!(out
        .iter()
        .map(|r| json!({
            "word": r.word.letters(),
            "lambda": r.lambda.0,
            "check": r.check,
            "status": r.status,
            "detail": r.detail,
        }))
        .collect::<Vec<_>>());
    let mut report = Report::new(data, rows);
    if words.len() == 1 {
        report = report.with_word(words[0].letters());
    }
    if weights.len() == 1 {
        report = report.with_lambda(&weights[0].0);
    }
    report.mismatch = mismatch;
    Ok(report)
}
