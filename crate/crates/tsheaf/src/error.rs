use thiserror::Error;

#[derive(Debug, Error)]
pub enum ToolError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// Malformed input. `field` is a dotted path into the document, or a
    /// `line L column C` position for JSON syntax errors.
    #[error("{path}: {field}: {message}")]
    Parse {
        path: String,
        field: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Core {
        path: String,
        #[source]
        source: tsheaf_core::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl ToolError {
    pub fn parse(path: &str, field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Parse {
            path: path.to_string(),
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn core(path: &str, source: tsheaf_core::Error) -> Self {
        Self::Core {
            path: path.to_string(),
            source,
        }
    }

    /// 2 for unreadable or malformed input, 4 for size limits, 3 for any
    /// other validation failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Io { .. } | Self::Parse { .. } | Self::Usage(_) => 2,
            Self::Core {
                source: tsheaf_core::Error::SizeLimitExceeded { .. },
                ..
            } => 4,
            Self::Core { .. } => 3,
        }
    }
}

pub type ToolResult<T> = Result<T, ToolError>;

/// Attaches a source path to core errors.
pub trait WithPath<T> {
    fn at(self, path: &str) -> ToolResult<T>;
}

impl<T> WithPath<T> for tsheaf_core::Result<T> {
    fn at(self, path: &str) -> ToolResult<T> {
        self.map_err(|e| ToolError::core(path, e))
    }
}
