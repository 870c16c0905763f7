use nbparse_cli::{CliError, ConfigFile};

#[test]
fn parses_comments_and_underscores() {
    let c: ConfigFile = "# x\nunary_cap = 2  # inline\n\nseed=9\n".parse().unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(c.get("unary-cap"), Some("2"));
    assert_eq!(c.pick::<u64>(None, "seed").unwrap(), Some(9));
    assert_eq!(c.pick(Some(3u64), "seed").unwrap(), Some(3));
    assert_eq!(c.pick::<u64>(None, "epochs").unwrap(), None);
}

#[test]
fn rejects_bad_lines() {
    for text in ["seed", "seed =", "foo = 1", "seed = 1\nseed = 2"] {
        let e = text.parse::<ConfigFile>().unwrap_err();
        assert_eq!(e.exit_code(), 2, "{text}");
    }
}

#[test]
fn bad_values_surface_on_use() {
    let c: ConfigFile = "epochs = many\ntrace = yes".parse().unwrap();
    assert!(matches!(
        c.pick::<usize>(None, "epochs"),
        Err(CliError::Usage(_))
    ));
    assert!(c.switch(false, "trace").is_err());
    assert!(c.switch(true, "by-arity").unwrap());
}
