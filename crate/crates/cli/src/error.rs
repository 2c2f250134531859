use std::fmt;

/// Marks a failure caused by the user's inputs (missing or malformed files,
/// bad settings) rather than by the tool itself. Mapped to exit code 2.
#[derive(Debug)]
pub struct InputError(pub anyhow::Error);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

pub trait InputResult<T> {
    /// Tags an error as an input error, with a context message.
    fn input(self, context: impl fmt::Display) -> anyhow::Result<T>;
}

impl<T, E> InputResult<T> for Result<T, E>
where
    E: Into<anyhow::Error>,
{
    fn input(self, context: impl fmt::Display) -> anyhow::Result<T> {
        self.map_err(|e| InputError(e.into().context(context.to_string())).into())
    }
}

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Exit code for an error returned by a command.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    if err.chain().any(|e| e.is::<InputError>()) {
        EXIT_INPUT
    } else {
        EXIT_INTERNAL
    }
}
