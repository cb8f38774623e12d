/// The decision tree written out independently: (cmi, sc, stat) as
/// (0|1, -1|0|1, "T"|"0"|"I") to expected class name or case.
pub fn reference(cmi: i8, sc: i8, stat: &str) -> &'static str {
    match (cmi, sc, stat) {
        (0, -1, _) => "CaseA",
        (0, 0, "0") => "Uncorrelated",
        (0, 0, _) => "CaseB",
        (0, 1, "0") => "Interdependent",
        (0, 1, _) => "CaseC",
        (1, 0, _) => "CaseD",
        (1, 1, "0") => "Complementary",
        (1, 1, "T") => "Illustration",
        (1, 1, "I") => "Anchorage",
        (1, -1, "0") => "Contrasting",
        (1, -1, "T") => "Bad Illustration",
        (1, -1, "I") => "Bad Anchorage",
        _ => unreachable!(),
    }
}
