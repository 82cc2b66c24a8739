use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("branch {branch}: endpoint ({x}, {y}) is not on the unit circle")]
    EndpointOffCircle { branch: i64, x: f64, y: f64 },
    #[error("branch {branch}: {count} control points, at least 4 required")]
    TooFewControlPoints { branch: i64, count: usize },
    #[error("duplicate branch id {0}")]
    DuplicateId(i64),
    #[error("divide has no branches")]
    Empty,
    #[error("branch {branch}: control point ({x}, {y}) must lie strictly inside the disk")]
    NotInterior { branch: i64, x: f64, y: f64 },
    #[error("branch {branch}: consecutive control points {index} and {next} coincide")]
    DegenerateSegment { branch: i64, index: usize, next: usize },
    #[error("branch {branch}: curve leaves the open disk near parameter {param:.6}")]
    LeavesDisk { branch: i64, param: f64 },
    #[error("branch {branch}: curve is not regular near parameter {param:.6}")]
    NotRegular { branch: i64, param: f64 },
    #[error("arc endpoints of branches {a} and {b} coincide")]
    SharedEndpoint { a: i64, b: i64 },
    #[error("non-generic divide: tangency near ({x:.6}, {y:.6}), angle {angle:.3e} rad")]
    Tangency { x: f64, y: f64, angle: f64 },
    #[error("non-generic divide: crossings closer than tolerance near ({x:.6}, {y:.6})")]
    TriplePoint { x: f64, y: f64 },
    #[error("non-generic divide: crossing near the boundary circle at ({x:.6}, {y:.6})")]
    BoundaryCrossing { x: f64, y: f64 },
    #[error("divide is not connected")]
    Disconnected,
    #[error("operation does not support circle branches")]
    CircleBranch,
    #[error("divide has no arc branch")]
    NoArc,
    #[error("sigma {0} outside [0, pi/2)")]
    SigmaRange(f64),
    #[error("degenerate cutover schedule: crossings {a} and {b} share sigma {sigma:.12}")]
    DegenerateSchedule { a: usize, b: usize, sigma: f64 },
    #[error("no stereographic pole at distance {0} from the link")]
    NoPole(f64),
    #[error("no generic projection direction found; increase the sampling resolution")]
    NoGenericDirection,
    #[error("spanning family failed the embeddedness check (gap {gap:.3e})")]
    NotEmbedded { gap: f64 },
    #[error("fiber surface invariant violated: {0}")]
    Surface(String),
    #[error("planar map inconsistency: {0}")]
    PlanarMap(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
