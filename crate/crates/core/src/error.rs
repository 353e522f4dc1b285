use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{name} = {value} is outside its valid range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("item with guessing c = 1 carries no information")]
    DegenerateItem,
    #[error("item list is empty")]
    EmptyItems,
    #[error("test information is zero; standard error is undefined")]
    ZeroInformation,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("response pattern has no observed cells")]
    NoObservedResponses,
    #[error("student `{0}` has no observed responses")]
    EmptyStudent(String),
    #[error("item `{0}` has no observed responses")]
    EmptyItem(String),
    #[error("need at least two values to standardize")]
    TooFewValues,
    #[error("values have zero variance")]
    ZeroVariance,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("form length {length} exceeds bank size {bank}")]
    FormTooLong { length: usize, bank: usize },
    #[error("invalid fuzzy system: {0}")]
    InvalidFuzzy(String),
    #[error("input {value} for `{variable}` lies outside its domain")]
    InputOutOfDomain { variable: String, value: f64 },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("cannot split {students} students into {folds} folds")]
    FoldCount { folds: usize, students: usize },
}
