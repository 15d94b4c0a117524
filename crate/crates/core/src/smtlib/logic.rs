use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetTheory {
    Lia,
    Nra,
}

impl TargetTheory {
    fn suffix(self) -> &'static str {
        match self {
            TargetTheory::Lia => "LIA",
            TargetTheory::Nra => "NRA",
        }
    }
}

/// Whether `logic` is QF_NIA, optionally with UF and/or DT.
pub fn is_nia_logic(logic: &str) -> bool {
    split_nia(logic).is_some()
}

fn split_nia(logic: &str) -> Option<bool> {
    let rest = logic.strip_prefix("QF_")?;
    let rest = rest.strip_prefix("UF").unwrap_or(rest);
    let (dt, rest) = match rest.strip_prefix("DT") {
        Some(r) => (true, r),
        None => (false, rest),
    };
    (rest == "NIA").then_some(dt)
}

/// Replaces NIA by the target theory and adds UF, which the transformations always need.
pub fn update_logic(logic: &str, target: TargetTheory) -> Result<String> {
    let dt = split_nia(logic).ok_or_else(|| Error::UnsupportedLogic(logic.to_string()))?;
    Ok(format!(
        "QF_UF{}{}",
        if dt { "DT" } else { "" },
        target.suffix()
    ))
}
