use stancelens::textprep::stem;

#[test]
fn golden_list_agrees_with_reference() {
    let text = include_str!("data/stem_golden.tsv");
    let mut total = 0;
    let mut wrong = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let (word, want) = line.split_once('\t').unwrap();
        total += 1;
        let got = stem(word);
        if got != want {
            wrong.push(format!("{word}: {got} != {want}"));
        }
    }
    assert_eq!(total, 1000);
    assert!(wrong.is_empty(), "{} disagreements: {:?}", wrong.len(), wrong);
    assert_eq!(stem("okullarımızdan"), "okul");
}
