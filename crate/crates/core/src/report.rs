//! Result reports (stub).
