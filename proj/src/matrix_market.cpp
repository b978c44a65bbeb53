#include "shiftsplit/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shiftsplit/errors.hpp"

namespace shiftsplit {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++line_no;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") {
    throw ParseError(line_no, "missing %%MatrixMarket banner");
  }
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate") {
    throw ParseError(line_no, "only 'matrix coordinate' is supported");
  }
  if (field != "real" && field != "integer") {
    throw ParseError(line_no, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError(line_no, "unsupported symmetry '" + symmetry + "'");
  }
  const bool symmetric = symmetry == "symmetric";

  // Skip comments up to the size line.
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '%') continue;
    if (blank(line)) continue;
    break;
  }
  std::size_t rows = 0, cols = 0, entries = 0;
  {
    std::istringstream size_line(line);
    long long r = -1, c = -1, e = -1;
    if (!(size_line >> r >> c >> e) || r < 0 || c < 0 || e < 0) {
      throw ParseError(line_no, "malformed size line");
    }
    rows = static_cast<std::size_t>(r);
    cols = static_cast<std::size_t>(c);
    entries = static_cast<std::size_t>(e);
  }
  if (symmetric && rows != cols) {
    throw ParseError(line_no, "symmetric matrix must be square");
  }

  std::vector<Triplet> triplets;
  std::vector<std::size_t> source_line;
  triplets.reserve(symmetric ? 2 * entries : entries);
  source_line.reserve(triplets.capacity());

  std::size_t read = 0;
  while (read < entries && std::getline(in, line)) {
    ++line_no;
    if (blank(line) || line[0] == '%') continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) throw ParseError(line_no, "malformed entry");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows ||
        static_cast<std::size_t>(j) > cols) {
      throw ParseError(line_no, "index (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") out of bounds");
    }
    if (symmetric && j > i) {
      throw ParseError(line_no, "symmetric storage expects lower triangle");
    }
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    triplets.push_back({r, c, v});
    source_line.push_back(line_no);
    if (symmetric && r != c) {
      triplets.push_back({c, r, v});
      source_line.push_back(line_no);
    }
    ++read;
  }
  if (read < entries) {
    throw ParseError(line_no, "expected " + std::to_string(entries) +
                                  " entries, found " + std::to_string(read));
  }

  // Duplicate detection on a sorted permutation so that the error names the
  // later of the two lines.
  std::vector<std::size_t> order(triplets.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ta = triplets[a];
    const auto& tb = triplets[b];
    if (ta.row != tb.row) return ta.row < tb.row;
    if (ta.col != tb.col) return ta.col < tb.col;
    return source_line[a] < source_line[b];
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& prev = triplets[order[k - 1]];
    const auto& cur = triplets[order[k]];
    if (prev.row == cur.row && prev.col == cur.col) {
      throw ParseError(source_line[order[k]],
                       "duplicate entry (" + std::to_string(cur.row + 1) +
                           ", " + std::to_string(cur.col + 1) + ")");
    }
  }

  return SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  char buf[64];
  for (const auto& t : a.to_triplets()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << buf << '\n';
  }
}

void write_matrix_market(const SparseMatrix& a,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_matrix_market(a, out);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace shiftsplit
