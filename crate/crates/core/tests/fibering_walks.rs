use hypnorm::fibering::{
    self, brown_status, exponent_sums, fibered_characters, parse_word, BrownStatus, Word, X064_RELATOR,
};

/// Positions of the relator path in ℤ² over one period, from the letters
/// as text.
fn lattice_path(w: &Word) -> Vec<(i64, i64)> {
    let mut pos = (0, 0);
    let mut out = Vec::new();
    for c in w.to_string().chars() {
        out.push(pos);
        match c {
            'a' => pos.0 += 1,
            'A' => pos.0 -= 1,
            'b' => pos.1 += 1,
            'B' => pos.1 -= 1,
            _ => unreachable!(),
        }
    }
    assert_eq!(pos, (0, 0), "relator must be null-homologous here");
    out
}

fn oracle_status(w: &Word, chi: (i64, i64)) -> BrownStatus {
    let h: Vec<i64> = lattice_path(w).iter().map(|&(x, y)| chi.0 * x + chi.1 * y).collect();
    let lo = *h.iter().min().unwrap();
    let hi = *h.iter().max().unwrap();
    let count = |v| h.iter().filter(|&&x| x == v).count();
    match (count(lo), count(hi)) {
        (1, 1) => BrownStatus::BothDirections,
        (1, _) | (_, 1) => BrownStatus::OneDirection,
        _ => BrownStatus::Neither,
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

#[test]
fn x064_exponent_sums_vanish() {
    let w = parse_word(X064_RELATOR).unwrap();
    assert_eq!(exponent_sums(&w), (0, 0));
    assert_eq!(w.to_string(), "aabaBBAbbAbABB");
    assert_eq!(w.cyclically_reduced(), w);
}

#[test]
fn x064_scan_matches_lattice_path_oracle() {
    let w = parse_word(X064_RELATOR).unwrap();
    let found = fibered_characters(&w, 10).unwrap();
    let mut expected = Vec::new();
    for p in -10..=10i64 {
        for q in -10..=10i64 {
            if (p, q) != (0, 0) && gcd(p, q) == 1 && oracle_status(&w, (p, q)) == BrownStatus::BothDirections {
                expected.push((p, q));
            }
        }
    }
    let got: Vec<(i64, i64)> = found.iter().map(|c| (c.p, c.q)).collect();
    assert!(!got.is_empty());
    assert_eq!(got, expected);
    assert!(found.iter().all(|c| c.is_primitive()));
}

#[test]
fn x064_statuses_match_oracle_everywhere() {
    let w = parse_word(X064_RELATOR).unwrap();
    for p in -6..=6 {
        for q in -6..=6 {
            if (p, q) != (0, 0) {
                assert_eq!(brown_status(&w, (p, q)).unwrap(), oracle_status(&w, (p, q)), "({p}, {q})");
            }
        }
    }
}

#[test]
fn commutator_example() {
    // Cyclic walk 0, 1, 1, 0: both extremes are attained twice.
    let w = parse_word("abAB").unwrap();
    assert_eq!(fibering::walk(&w, (1, 0)), vec![0, 1, 1, 0]);
    assert_eq!(brown_status(&w, (1, 0)).unwrap(), BrownStatus::Neither);
    assert_eq!(brown_status(&w, (0, 0)).unwrap(), BrownStatus::NotApplicable);
}

#[test]
fn single_letter_relator() {
    let w = parse_word("a").unwrap();
    assert_eq!(brown_status(&w, (1, 0)).unwrap(), BrownStatus::NotApplicable);
    let got: Vec<(i64, i64)> = fibered_characters(&w, 1).unwrap().iter().map(|c| (c.p, c.q)).collect();
    assert_eq!(got, vec![(0, -1), (0, 1)]);
}

#[test]
fn cyclic_permutation_invariance_on_random_words() {
    let mut tested = 0;
    for seed in 0..400u64 {
        let w = Word::random(24, seed).cyclically_reduced();
        if w.is_empty() {
            continue;
        }
        let (sa, sb) = exponent_sums(&w);
        // A character killing the relator, if the sums allow a small one.
        let g = gcd(sa, sb);
        let chi = if g == 0 { (2, 1) } else { (sb / g, -sa / g) };
        let base = brown_status(&w, chi).unwrap();
        for k in 0..w.len() {
            assert_eq!(brown_status(&w.rotate(k), chi).unwrap(), base, "seed={seed} k={k}");
        }
        tested += 1;
        if tested == 100 {
            break;
        }
    }
    assert_eq!(tested, 100);
}

#[test]
fn fibered_scan_rejects_zero_bound() {
    let w = parse_word(X064_RELATOR).unwrap();
    assert!(fibered_characters(&w, 0).is_err());
    assert!(brown_status(&Word::new(vec![]), (1, 0)).is_err());
}
