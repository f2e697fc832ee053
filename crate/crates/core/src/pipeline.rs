//! Pipeline orchestration (to come).
