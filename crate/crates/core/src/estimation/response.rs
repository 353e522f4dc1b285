use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Response {
    Correct,
    Incorrect,
    Missing,
}

impl Response {
    /// `Some(1.0)` / `Some(0.0)` for observed cells.
    #[inline]
    pub fn score(self) -> Option<f64> {
        match self {
            Response::Correct => Some(1.0),
            Response::Incorrect => Some(0.0),
            Response::Missing => None,
        }
    }

    pub fn is_observed(self) -> bool {
        self != Response::Missing
    }

    pub fn symbol(self) -> char {
        match self {
            Response::Correct => '1',
            Response::Incorrect => '0',
            Response::Missing => 'N',
        }
    }

    pub fn from_symbol(symbol: &str) -> Option<Self> {
        match symbol {
            "1" => Some(Response::Correct),
            "0" => Some(Response::Incorrect),
            "N" | "n" => Some(Response::Missing),
            _ => None,
        }
    }
}

/// Students × items grid of responses, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMatrix {
    student_ids: Vec<String>,
    item_ids: Vec<String>,
    cells: Vec<Response>,
}

impl ResponseMatrix {
    /// Every row and every column must contain at least one observed cell.
    pub fn new(student_ids: Vec<String>, item_ids: Vec<String>, cells: Vec<Response>) -> Result<Self> {
        let expected = student_ids.len() * item_ids.len();
        if cells.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: cells.len(),
            });
        }
        if student_ids.is_empty() || item_ids.is_empty() {
            return Err(Error::InvalidConfig(String::from("response matrix has no rows or no columns")));
        }
        let m = Self {
            student_ids,
            item_ids,
            cells,
        };
        for s in 0..m.n_students() {
            if !m.row(s).iter().any(|r| r.is_observed()) {
                return Err(Error::EmptyStudent(m.student_ids[s].clone()));
            }
        }
        for i in 0..m.n_items() {
            if !m.column(i).any(|r| r.is_observed()) {
                return Err(Error::EmptyItem(m.item_ids[i].clone()));
            }
        }
        Ok(m)
    }

    /// Matrix with generated ids `S1..` / `I1..`.
    pub fn from_rows(n_items: usize, cells: Vec<Response>) -> Result<Self> {
        let n_students = if n_items == 0 { 0 } else { cells.len() / n_items };
        Self::new(numbered_ids("S", n_students), numbered_ids("I", n_items), cells)
    }

    pub fn n_students(&self) -> usize {
        self.student_ids.len()
    }

    pub fn n_items(&self) -> usize {
        self.item_ids.len()
    }

    pub fn student_ids(&self) -> &[String] {
        &self.student_ids
    }

    pub fn item_ids(&self) -> &[String] {
        &self.item_ids
    }

    pub fn get(&self, student: usize, item: usize) -> Response {
        self.cells[student * self.n_items() + item]
    }

    pub fn row(&self, student: usize) -> &[Response] {
        let n = self.n_items();
        &self.cells[student * n..(student + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Response]> {
        self.cells.chunks(self.n_items())
    }

    pub fn column(&self, item: usize) -> impl Iterator<Item = Response> + '_ {
        (0..self.n_students()).map(move |s| self.get(s, item))
    }

    pub fn observed_count(&self) -> usize {
        self.cells.iter().filter(|r| r.is_observed()).count()
    }

    /// Keeps the listed students (in the given order) and every item.
    pub fn select_students(&self, students: &[usize]) -> Result<Self> {
        let mut cells = Vec::with_capacity(students.len() * self.n_items());
        for &s in students {
            cells.extend_from_slice(self.row(s));
        }
        Self::new(
            students.iter().map(|&s| self.student_ids[s].clone()).collect(),
            self.item_ids.clone(),
            cells,
        )
    }
}

pub(crate) fn numbered_ids(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use Response::*;

    #[test]
    fn rejects_empty_rows_and_columns() {
        let err = ResponseMatrix::from_rows(2, vec![Correct, Missing, Missing, Missing]).unwrap_err();
        assert_eq!(err, Error::EmptyStudent("S2".into()));
        let err = ResponseMatrix::from_rows(2, vec![Correct, Missing, Incorrect, Missing]).unwrap_err();
        assert_eq!(err, Error::EmptyItem("I2".into()));
        assert!(ResponseMatrix::from_rows(2, vec![Correct, Missing, Missing, Incorrect]).is_ok());
    }

    #[test]
    fn select_students_keeps_rows() {
        let m = ResponseMatrix::from_rows(2, vec![Correct, Incorrect, Incorrect, Correct, Missing, Correct]).unwrap();
        let sub = m.select_students(&[2, 0]).unwrap();
        assert_eq!(sub.row(0), &[Missing, Correct]);
        assert_eq!(sub.student_ids(), &[String::from("S3"), String::from("S1")]);
        assert_eq!(m.observed_count(), 5);
    }
}
