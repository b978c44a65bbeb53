#ifndef SHIFTSPLIT_MATRIX_MARKET_HPP
#define SHIFTSPLIT_MATRIX_MARKET_HPP

#include <filesystem>
#include <iosfwd>

#include "shiftsplit/sparse.hpp"

namespace shiftsplit {

/// Reads a `matrix coordinate real {general|symmetric}` file. Symmetric
/// storage is expanded to both triangles. Errors carry the offending line.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes `matrix coordinate real general` with 17 significant digits.
void write_matrix_market(const SparseMatrix& a, std::ostream& out);
void write_matrix_market(const SparseMatrix& a,
                         const std::filesystem::path& path);

}  // namespace shiftsplit

#endif  // SHIFTSPLIT_MATRIX_MARKET_HPP
