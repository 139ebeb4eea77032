use thiserror::Error;

/// Errors raised while loading datasets or evaluating benchmarks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed dataset {file}: {source}")]
    Parse {
        file: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("dataset {file} has no `units` header block")]
    MissingUnits { file: String },

    #[error("dataset {file}: unit `{unit}` is not a supported unit of {quantity}")]
    UnsupportedUnit {
        file: String,
        quantity: &'static str,
        unit: String,
    },

    #[error("dataset {file}: `units` header does not declare a unit for {quantity}")]
    UndeclaredUnit { file: String, quantity: &'static str },

    #[error("missing constant {0}")]
    MissingConstant(&'static str),

    #[error("invalid record {record}, field {field}: {reason}")]
    Validation {
        record: String,
        field: String,
        reason: String,
    },

    #[error("unknown device `{0}`")]
    UnknownDevice(String),

    #[error("unknown technology `{0}`")]
    UnknownTechnology(String),

    #[error("unknown workload `{0}`")]
    UnknownWorkload(String),

    #[error("unknown chip `{0}`")]
    UnknownChip(String),

    #[error("unknown circuit primitive family `{0}`")]
    UnknownPrimitiveFamily(String),

    #[error("{what}: {reason}")]
    Domain { what: &'static str, reason: String },

    #[error("chip {chip}: {field} required but not published")]
    Incomputable { chip: String, field: &'static str },

    #[error("chip {chip}: under-determined, unknowns {unknowns:?} cannot be solved from the throughput/power identities")]
    UnderDetermined { chip: String, unknowns: Vec<&'static str> },

    #[error("workload has no stages")]
    EmptyWorkload,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(
        record: impl Into<String>,
        field: impl Into<String>,
        reason: impl Into<String>,
    ) -> Self {
        Error::Validation {
            record: record.into(),
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
