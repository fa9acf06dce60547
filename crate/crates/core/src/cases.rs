//! Reasoning by cases (stub).
