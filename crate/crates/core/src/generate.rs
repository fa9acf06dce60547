//! Random theory generation (stub).
