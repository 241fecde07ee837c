#include "smi/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace smi {

void save_complex_matrix(const std::string& path, const CMatrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g", m(r, c).real(), m(r, c).imag());
      out << buf << (c + 1 < m.cols() ? " " : "");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

CMatrix load_complex_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw std::runtime_error("bad matrix header in " + path);
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      Real re = 0, im = 0;
      if (!(in >> re >> im)) throw std::runtime_error("truncated matrix data in " + path);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace smi
