use serde_json::json;

/// Failure of one CLI run, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Core(permeas_core::Error),
    /// An artifact that fails re-verification.
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(permeas_core::Error::InvalidArgument(_)) => 2,
            CliError::Core(e) if e.is_internal() => 4,
            CliError::Core(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.kind(),
            CliError::Mismatch(_) => "verify-mismatch",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let message = match self {
            CliError::Config(m) | CliError::Io(m) | CliError::Mismatch(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        };
        let mut out = json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": message,
        });
        if let CliError::Core(e) = self {
            out["detail"] = core_detail(e);
        }
        out
    }
}

fn core_detail(e: &permeas_core::Error) -> serde_json::Value {
    use permeas_core::Error::*;
    match e {
        TilingFailed { achieved, required } => json!({ "achieved": achieved, "required": required }),
        CoreTooSmall { tile, deficit, gamma } => json!({ "tile": tile, "deficit": deficit, "gamma": gamma }),
        NotInvertible {
            reason,
            residual,
            min_symbol,
        } => json!({ "reason": reason, "residual": residual, "min_symbol": min_symbol }),
        Unachievable { requested, floor } => json!({ "requested": requested, "floor": floor }),
        RefineInverse { required, available } => json!({ "required": required, "available": available }),
        NotInXf { at, defect } => json!({ "at": at, "defect": defect }),
        InsufficientWindow(at) => json!({ "at": at }),
        Separation { violations, first } => json!({ "violations": violations, "first": [first.0, first.1] }),
        BudgetExhausted {
            inequality,
            consumed,
            allowance,
            total,
            eps,
        } => json!({
            "inequality": inequality,
            "consumed": consumed,
            "allowance": allowance,
            "total": total,
            "eps": eps,
        }),
        Verification {
            window,
            at,
            achieved,
            bound,
        } => json!({ "window": window, "at": at, "achieved": achieved, "bound": bound }),
        _ => serde_json::Value::Null,
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Mismatch(m) => write!(f, "artifact does not verify: {m}"),
        }
    }
}

impl From<permeas_core::Error> for CliError {
    fn from(e: permeas_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
