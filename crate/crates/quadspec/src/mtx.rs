//! Matrix Market export of `H0` and `H1`, 1-based coordinates.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use quadspec_core::{Complex64, CsrMatrix, Scalar};

use crate::emit::write_file;
use crate::error::AppError;
use crate::run::Assembled;

pub trait MtxEntry: Scalar {
    const FIELD: &'static str;
    fn write(&self, s: &mut String);
}

impl MtxEntry for f64 {
    const FIELD: &'static str = "real";
    fn write(&self, s: &mut String) {
        let _ = write!(s, "{self:e}");
    }
}

impl MtxEntry for Complex64 {
    const FIELD: &'static str = "complex";
    fn write(&self, s: &mut String) {
        let _ = write!(s, "{:e} {:e}", self.re, self.im);
    }
}

pub fn to_matrix_market<T: MtxEntry>(a: &CsrMatrix<T>) -> String {
    let mut s = format!("%%MatrixMarket matrix coordinate {} general\n", T::FIELD);
    let _ = writeln!(s, "{} {} {}", a.order(), a.order(), a.nnz());
    for (r, c, v) in a.triplets() {
        let _ = write!(s, "{} {} ", r + 1, c + 1);
        v.write(&mut s);
        s.push('\n');
    }
    s
}

/// Writes `<prefix>_H0.mtx` and `<prefix>_H1.mtx`, returning both paths.
pub fn export(prefix: &Path, pencil: &Assembled) -> Result<[PathBuf; 2], AppError> {
    let (h0, h1) = match pencil {
        Assembled::Real(p) => (to_matrix_market(p.h0()), to_matrix_market(p.h1())),
        Assembled::Complex(p) => (to_matrix_market(p.h0()), to_matrix_market(p.h1())),
    };
    let name = |suffix: &str| {
        let mut os = prefix.as_os_str().to_owned();
        os.push(suffix);
        PathBuf::from(os)
    };
    let paths = [name("_H0.mtx"), name("_H1.mtx")];
    write_file(&paths[0], &h0)?;
    write_file(&paths[1], &h1)?;
    Ok(paths)
}
